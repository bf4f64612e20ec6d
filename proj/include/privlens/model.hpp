#pragma once

// Core domain types shared by every other header. All types validate their
// invariants at construction and are treated as immutable afterwards, so they
// can be shared read-only across threads.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace privlens {

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Visibility settings, ordered loosest to strictest.

enum class VisibilitySetting : int {
    Public = 0,
    FriendsOfFriends = 1,
    Friends = 2,
    Custom = 3,
    OnlyMe = 4,
};

inline constexpr std::array<VisibilitySetting, 5> kAllVisibilitySettings = {
    VisibilitySetting::Public,           VisibilitySetting::FriendsOfFriends,
    VisibilitySetting::Friends,          VisibilitySetting::Custom,
    VisibilitySetting::OnlyMe,
};

constexpr int strictness_rank(VisibilitySetting s) { return static_cast<int>(s); }

// Photos in these albums are the only ones whose faces and tags are counted.
constexpr bool analysis_eligible(VisibilitySetting s) {
    return s == VisibilitySetting::Public || s == VisibilitySetting::FriendsOfFriends;
}

// One step toward stricter; saturates at OnlyMe.
constexpr VisibilitySetting stricter(VisibilitySetting s, int steps = 1) {
    int r = strictness_rank(s) + steps;
    if (r > strictness_rank(VisibilitySetting::OnlyMe)) r = strictness_rank(VisibilitySetting::OnlyMe);
    return static_cast<VisibilitySetting>(r);
}

constexpr std::string_view to_string(VisibilitySetting s) {
    switch (s) {
        case VisibilitySetting::Public: return "public";
        case VisibilitySetting::FriendsOfFriends: return "friends_of_friends";
        case VisibilitySetting::Friends: return "friends";
        case VisibilitySetting::Custom: return "custom";
        case VisibilitySetting::OnlyMe: return "only_me";
    }
    return "?";
}

inline std::optional<VisibilitySetting> visibility_from_string(std::string_view s) {
    for (VisibilitySetting v : kAllVisibilitySettings)
        if (to_string(v) == s) return v;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Photo geometry. Coordinates are fractions of the image dimensions in [0,1];
// pixel-unit input is converted at ingestion and never reaches these types.

struct FaceRect {
    double x;
    double y;
    double width;
    double height;

    FaceRect(double x_, double y_, double w_, double h_) : x(x_), y(y_), width(w_), height(h_) {
        if (!(x >= 0.0) || !(y >= 0.0))
            throw ValidationError("FaceRect: x and y must be >= 0");
        if (!(width > 0.0) || !(height > 0.0))
            throw ValidationError("FaceRect: width and height must be > 0");
        if (!(x + width <= 1.0) || !(y + height <= 1.0))
            throw ValidationError("FaceRect: rectangle exceeds the unit square");
    }
};

struct TagPoint {
    double x;
    double y;
    std::optional<std::string> tagged_name;
    bool links_to_profile = false;

    TagPoint(double x_, double y_, std::optional<std::string> name = std::nullopt,
             bool links = false)
        : x(x_), y(y_), tagged_name(std::move(name)), links_to_profile(links) {
        if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0))
            throw ValidationError("TagPoint: coordinates must lie in [0,1]");
        if (tagged_name && tagged_name->empty())
            throw ValidationError("TagPoint: tagged_name must be absent, not empty");
    }
};

struct PhotoAnnotation {
    std::string photo_id;
    std::vector<FaceRect> faces;
    std::vector<TagPoint> tags;
    std::optional<std::string> taken_at;  // ISO 8601 UTC; absent when unknown

    PhotoAnnotation(std::string id, std::vector<FaceRect> f = {}, std::vector<TagPoint> t = {},
                    std::optional<std::string> taken = std::nullopt)
        : photo_id(std::move(id)), faces(std::move(f)), tags(std::move(t)),
          taken_at(std::move(taken)) {
        if (photo_id.empty()) throw ValidationError("PhotoAnnotation: photo_id must be non-empty");
        if (taken_at && taken_at->empty())
            throw ValidationError("PhotoAnnotation: taken_at must be absent, not empty");
    }
};

struct Album {
    std::string album_id;
    std::string name;
    VisibilitySetting setting;
    std::vector<PhotoAnnotation> photos;

    Album(std::string id, std::string name_, VisibilitySetting s,
          std::vector<PhotoAnnotation> p = {})
        : album_id(std::move(id)), name(std::move(name_)), setting(s), photos(std::move(p)) {
        if (album_id.empty()) throw ValidationError("Album: album_id must be non-empty");
    }
};

// ---------------------------------------------------------------------------
// Profile attributes. Absent values are explicit (empty optional); an empty
// string is rejected so "missing" has exactly one representation.

inline constexpr std::array<std::string_view, 9> kProfileAttributeNames = {
    "age",      "gender",    "hometown",       "location", "relationship",
    "religion", "political_view", "education", "degree",
};

inline constexpr std::array<std::string_view, 4> kInterestKinds = {"books", "music", "tv",
                                                                   "movies"};

struct Interests {
    std::vector<std::string> books;
    std::vector<std::string> music;
    std::vector<std::string> tv;
    std::vector<std::string> movies;
};

struct UserProfile {
    std::optional<int> age;  // years, [1,130]
    std::optional<std::string> gender;
    std::optional<std::string> hometown;
    std::optional<std::string> location;
    std::optional<std::string> relationship;
    std::optional<std::string> religion;
    std::optional<std::string> political_view;
    std::optional<std::string> education;
    std::optional<std::string> degree;
    Interests interests;

    // Categorical attribute access by name; "age" is not categorical and is
    // handled separately by callers that need it as a number.
    const std::optional<std::string>* categorical(std::string_view name) const {
        if (name == "gender") return &gender;
        if (name == "hometown") return &hometown;
        if (name == "location") return &location;
        if (name == "relationship") return &relationship;
        if (name == "religion") return &religion;
        if (name == "political_view") return &political_view;
        if (name == "education") return &education;
        if (name == "degree") return &degree;
        return nullptr;
    }
    std::optional<std::string>* categorical(std::string_view name) {
        return const_cast<std::optional<std::string>*>(
            static_cast<const UserProfile&>(*this).categorical(name));
    }

    bool attribute_present(std::string_view name) const {
        if (name == "age") return age.has_value();
        const auto* v = categorical(name);
        return v != nullptr && v->has_value();
    }

    void validate() const {
        if (age && (*age < 1 || *age > 130))
            throw ValidationError("UserProfile: age must lie in [1,130]");
        for (std::string_view name : kProfileAttributeNames) {
            if (name == "age") continue;
            const auto* v = categorical(name);
            if (v && *v && (*v)->empty())
                throw ValidationError("UserProfile: " + std::string(name) +
                                      " must be absent, not an empty string");
        }
        for (const auto* list : {&interests.books, &interests.music, &interests.tv,
                                 &interests.movies})
            for (const auto& item : *list)
                if (item.empty())
                    throw ValidationError("UserProfile: interest entries must be non-empty");
    }
};

struct UserRecord {
    std::string user_id;
    UserProfile profile;
    std::vector<Album> albums;

    UserRecord(std::string id, UserProfile p = {}, std::vector<Album> a = {})
        : user_id(std::move(id)), profile(std::move(p)), albums(std::move(a)) {
        if (user_id.empty()) throw ValidationError("UserRecord: user_id must be non-empty");
        profile.validate();
        std::set<std::string_view> photo_ids;
        std::set<std::string_view> album_ids;
        for (const Album& album : albums) {
            if (!album_ids.insert(album.album_id).second)
                throw ValidationError("UserRecord " + user_id + ": duplicate album_id '" +
                                      album.album_id + "'");
            for (const PhotoAnnotation& photo : album.photos)
                if (!photo_ids.insert(photo.photo_id).second)
                    throw ValidationError("UserRecord " + user_id + ": duplicate photo_id '" +
                                          photo.photo_id + "'");
        }
    }
};

struct Dataset {
    std::vector<UserRecord> users;

    Dataset() = default;
    explicit Dataset(std::vector<UserRecord> u) : users(std::move(u)) {
        std::set<std::string_view> ids;
        for (const UserRecord& user : users)
            if (!ids.insert(user.user_id).second)
                throw ValidationError("Dataset: duplicate user_id '" + user.user_id + "'");
    }
};

// ---------------------------------------------------------------------------
// Per-photo exposure lattice, least to most revealing.

enum class PrivacyLevel : int {
    NoFaceNoTag = 0,        // L0
    FaceNoTag = 1,          // L1
    TagNoFace = 2,          // L2
    OffFaceTagsLtFaces = 3, // L3
    OffFaceTagsEqFaces = 4, // L4
    OffFaceTagsGtFaces = 5, // L5
    OnFaceTagsLtFaces = 6,  // L6
    OnFaceTagsEqFaces = 7,  // L7
    OnFaceTagsGtFaces = 8,  // L8
};

inline constexpr std::size_t kPrivacyLevelCount = 9;

constexpr int rank(PrivacyLevel level) { return static_cast<int>(level); }

constexpr std::string_view level_code(PrivacyLevel level) {
    constexpr std::array<std::string_view, kPrivacyLevelCount> codes = {
        "L0", "L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8"};
    return codes[static_cast<std::size_t>(level)];
}

constexpr std::string_view to_string(PrivacyLevel level) {
    switch (level) {
        case PrivacyLevel::NoFaceNoTag: return "no_face_no_tag";
        case PrivacyLevel::FaceNoTag: return "face_no_tag";
        case PrivacyLevel::TagNoFace: return "tag_no_face";
        case PrivacyLevel::OffFaceTagsLtFaces: return "off_face_tags_lt_faces";
        case PrivacyLevel::OffFaceTagsEqFaces: return "off_face_tags_eq_faces";
        case PrivacyLevel::OffFaceTagsGtFaces: return "off_face_tags_gt_faces";
        case PrivacyLevel::OnFaceTagsLtFaces: return "on_face_tags_lt_faces";
        case PrivacyLevel::OnFaceTagsEqFaces: return "on_face_tags_eq_faces";
        case PrivacyLevel::OnFaceTagsGtFaces: return "on_face_tags_gt_faces";
    }
    return "?";
}

inline std::optional<PrivacyLevel> level_from_code(std::string_view code) {
    for (std::size_t i = 0; i < kPrivacyLevelCount; ++i)
        if (level_code(static_cast<PrivacyLevel>(i)) == code)
            return static_cast<PrivacyLevel>(i);
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// User-level privacy categories. Ordered most to least privacy preserving:
// F < FP < P+ < P < P- < PU < U.

enum class Category : int {
    F = 0,
    FP = 1,
    Pplus = 2,
    P = 3,
    Pminus = 4,
    PU = 5,
    U = 6,
};

inline constexpr std::array<Category, 7> kAllCategories = {
    Category::F,  Category::FP, Category::Pplus, Category::P,
    Category::Pminus, Category::PU, Category::U,
};

// Higher rank = more revealing.
constexpr int revealing_rank(Category c) { return static_cast<int>(c); }

constexpr std::string_view to_string(Category c) {
    switch (c) {
        case Category::F: return "F";
        case Category::FP: return "FP";
        case Category::Pplus: return "P+";
        case Category::P: return "P";
        case Category::Pminus: return "P-";
        case Category::PU: return "PU";
        case Category::U: return "U";
    }
    return "?";
}

inline std::optional<Category> category_from_string(std::string_view s) {
    for (Category c : kAllCategories)
        if (to_string(c) == s) return c;
    return std::nullopt;
}

enum class Scheme { ThreeClass, FiveClass, SevenClass };

constexpr std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::ThreeClass: return "3";
        case Scheme::FiveClass: return "5";
        case Scheme::SevenClass: return "7";
    }
    return "?";
}

inline std::optional<Scheme> scheme_from_string(std::string_view s) {
    if (s == "3") return Scheme::ThreeClass;
    if (s == "5") return Scheme::FiveClass;
    if (s == "7") return Scheme::SevenClass;
    return std::nullopt;
}

// Categories a scheme may use, in revealing order.
inline const std::vector<Category>& scheme_categories(Scheme s) {
    static const std::vector<Category> three = {Category::F, Category::P, Category::U};
    static const std::vector<Category> five = {Category::F, Category::FP, Category::P,
                                               Category::PU, Category::U};
    static const std::vector<Category> seven(kAllCategories.begin(), kAllCategories.end());
    switch (s) {
        case Scheme::ThreeClass: return three;
        case Scheme::FiveClass: return five;
        case Scheme::SevenClass: return seven;
    }
    return seven;
}

inline bool scheme_allows(Scheme s, Category c) {
    const auto& cats = scheme_categories(s);
    for (Category allowed : cats)
        if (allowed == c) return true;
    return false;
}

struct PrivacyCategory {
    Category value;
    Scheme scheme;

    PrivacyCategory(Category v, Scheme s) : value(v), scheme(s) {
        if (!scheme_allows(scheme, value))
            throw ValidationError(std::string("PrivacyCategory: category ") +
                                  std::string(to_string(value)) + " is not part of the " +
                                  std::string(to_string(scheme)) + "-class scheme");
    }

    bool operator==(const PrivacyCategory&) const = default;
};

}  // namespace privlens
