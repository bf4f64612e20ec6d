#pragma once

// Dataset file I/O. The on-disk form is a versioned JSON document; face
// rectangles may arrive in pixel units (with the photo's dimensions) or as
// fractions, tag points are always fractions. Ingestion converts everything
// to fractions, canonicalizes profile values, and applies recency caps, so
// the in-memory Dataset never sees pixels. Serialization is canonical(sorted
// keys, two-space indent, fraction units), making round-trips byte-stable.

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "privlens/model.hpp"
#include "privlens/prep.hpp"

namespace privlens {

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct IngestOptions {
    std::size_t max_albums = 5;            // most recent albums kept
    std::size_t max_photos_per_album = 10; // most recent photos kept per album
    std::optional<std::string> since;      // drop photos taken before this ISO timestamp
    const CanonTable* canon = nullptr;     // canonicalize profile values when set
};

namespace io_detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
    throw ParseError(path + ": " + what);
}

inline const nlohmann::json& field(const nlohmann::json& j, const char* key,
                                   const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
    return *it;
}

template <typename T>
T as(const nlohmann::json& j, const std::string& path) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception& e) {
        fail(path, e.what());
    }
}

template <typename T>
std::optional<T> opt(const nlohmann::json& j, const char* key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return as<T>(*it, path + "." + key);
}

// Keeps the `keep` most recent entries: newest timestamp first, timestamped
// entries ahead of untimestamped ones, file order otherwise; survivors stay
// in file order.
template <typename T, typename GetTs>
void cap_most_recent(std::vector<T>& items, std::size_t keep, GetTs timestamp_of) {
    if (items.size() <= keep) return;
    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const std::optional<std::string> ta = timestamp_of(items[a]);
        const std::optional<std::string> tb = timestamp_of(items[b]);
        if (ta && tb) return *ta > *tb;
        return ta.has_value() && !tb.has_value();
    });
    order.resize(keep);
    std::sort(order.begin(), order.end());
    std::vector<T> kept;
    kept.reserve(keep);
    for (std::size_t i : order) kept.push_back(std::move(items[i]));
    items = std::move(kept);
}

inline std::optional<std::string> newest_timestamp(const Album& album) {
    std::optional<std::string> newest;
    for (const PhotoAnnotation& photo : album.photos)
        if (photo.taken_at && (!newest || *photo.taken_at > *newest)) newest = photo.taken_at;
    return newest;
}

inline PhotoAnnotation parse_photo(const nlohmann::json& j, const std::string& path,
                                   const IngestOptions& options) {
    (void)options;
    const std::string photo_id = as<std::string>(field(j, "photo_id", path), path + ".photo_id");
    const std::string units = opt<std::string>(j, "units", path).value_or("fraction");
    double sx = 1.0;
    double sy = 1.0;
    if (units == "pixels") {
        sx = as<double>(field(j, "width", path), path + ".width");
        sy = as<double>(field(j, "height", path), path + ".height");
        if (!(sx > 0.0) || !(sy > 0.0))
            fail(path, "pixel-unit geometry requires positive width and height");
    } else if (units != "fraction") {
        fail(path, "units must be 'fraction' or 'pixels', got '" + units + "'");
    }
    std::vector<FaceRect> faces;
    if (auto it = j.find("faces"); it != j.end()) {
        if (!it->is_array()) fail(path + ".faces", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string fp = path + ".faces[" + std::to_string(i) + "]";
            const nlohmann::json& f = (*it)[i];
            try {
                faces.emplace_back(as<double>(field(f, "x", fp), fp + ".x") / sx,
                                   as<double>(field(f, "y", fp), fp + ".y") / sy,
                                   as<double>(field(f, "w", fp), fp + ".w") / sx,
                                   as<double>(field(f, "h", fp), fp + ".h") / sy);
            } catch (const ValidationError& e) {
                throw ValidationError(fp + ": " + e.what());
            }
        }
    }
    std::vector<TagPoint> tags;
    if (auto it = j.find("tags"); it != j.end()) {
        if (!it->is_array()) fail(path + ".tags", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string tp = path + ".tags[" + std::to_string(i) + "]";
            const nlohmann::json& t = (*it)[i];
            try {
                tags.emplace_back(as<double>(field(t, "x", tp), tp + ".x"),
                                  as<double>(field(t, "y", tp), tp + ".y"),
                                  opt<std::string>(t, "name", tp),
                                  opt<bool>(t, "links_to_profile", tp).value_or(false));
            } catch (const ValidationError& e) {
                throw ValidationError(tp + ": " + e.what());
            }
        }
    }
    try {
        return PhotoAnnotation(photo_id, std::move(faces), std::move(tags),
                               opt<std::string>(j, "taken_at", path));
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

inline UserProfile parse_profile(const nlohmann::json& j, const std::string& path,
                                 const IngestOptions& options) {
    UserProfile profile;
    profile.age = opt<int>(j, "age", path);
    for (std::string_view name : kProfileAttributeNames) {
        if (name == "age") continue;
        auto value = opt<std::string>(j, std::string(name).c_str(), path);
        if (value && options.canon != nullptr)
            value = options.canon->canonicalize(name, *value).value;
        *profile.categorical(name) = std::move(value);
    }
    if (auto it = j.find("interests"); it != j.end()) {
        const std::string ip = path + ".interests";
        if (!it->is_object()) fail(ip, "expected an object");
        auto list = [&](const char* kind) {
            auto entry = it->find(kind);
            return entry == it->end()
                       ? std::vector<std::string>{}
                       : as<std::vector<std::string>>(*entry, ip + "." + kind);
        };
        profile.interests = {list("books"), list("music"), list("tv"), list("movies")};
    }
    return profile;
}

}  // namespace io_detail

inline Dataset ingest_text(const std::string& text, const IngestOptions& options = {}) {
    using namespace io_detail;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("dataset: ") + e.what());
    }
    const int version = as<int>(field(doc, "schema_version", "dataset"), "dataset.schema_version");
    if (version != 1)
        fail("dataset.schema_version", "unknown version " + std::to_string(version));
    std::vector<UserRecord> users;
    const nlohmann::json& user_list = field(doc, "users", "dataset");
    if (!user_list.is_array()) fail("dataset.users", "expected an array");
    for (std::size_t u = 0; u < user_list.size(); ++u) {
        const std::string up = "users[" + std::to_string(u) + "]";
        const nlohmann::json& uj = user_list[u];
        const std::string user_id =
            as<std::string>(field(uj, "user_id", up), up + ".user_id");
        UserProfile profile;
        if (auto it = uj.find("profile"); it != uj.end())
            profile = parse_profile(*it, up + ".profile", options);
        std::vector<Album> albums;
        if (auto it = uj.find("albums"); it != uj.end()) {
            if (!it->is_array()) fail(up + ".albums", "expected an array");
            for (std::size_t a = 0; a < it->size(); ++a) {
                const std::string ap = up + ".albums[" + std::to_string(a) + "]";
                const nlohmann::json& aj = (*it)[a];
                const std::string setting_text =
                    as<std::string>(field(aj, "setting", ap), ap + ".setting");
                const auto setting = visibility_from_string(setting_text);
                if (!setting) fail(ap + ".setting", "unknown setting '" + setting_text + "'");
                std::vector<PhotoAnnotation> photos;
                if (auto pit = aj.find("photos"); pit != aj.end()) {
                    if (!pit->is_array()) fail(ap + ".photos", "expected an array");
                    for (std::size_t p = 0; p < pit->size(); ++p)
                        photos.push_back(parse_photo(
                            (*pit)[p], ap + ".photos[" + std::to_string(p) + "]", options));
                }
                if (options.since)
                    std::erase_if(photos, [&](const PhotoAnnotation& photo) {
                        return photo.taken_at && *photo.taken_at < *options.since;
                    });
                cap_most_recent(photos, options.max_photos_per_album,
                                [](const PhotoAnnotation& photo) { return photo.taken_at; });
                try {
                    albums.emplace_back(
                        as<std::string>(field(aj, "album_id", ap), ap + ".album_id"),
                        opt<std::string>(aj, "name", ap).value_or(""), *setting,
                        std::move(photos));
                } catch (const ValidationError& e) {
                    throw ValidationError(ap + ": " + e.what());
                }
            }
        }
        cap_most_recent(albums, options.max_albums, io_detail::newest_timestamp);
        try {
            users.emplace_back(user_id, std::move(profile), std::move(albums));
        } catch (const ValidationError& e) {
            throw ValidationError(up + ": " + e.what());
        }
    }
    try {
        return Dataset(std::move(users));
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("dataset: ") + e.what());
    }
}

inline Dataset ingest(const std::string& path, const IngestOptions& options = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open dataset: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return ingest_text(buf.str(), options);
}

// Reload of an already-normalized dataset: no caps, no canonicalization.
inline Dataset load_dataset_text(const std::string& text) {
    IngestOptions options;
    options.max_albums = static_cast<std::size_t>(-1);
    options.max_photos_per_album = static_cast<std::size_t>(-1);
    return ingest_text(text, options);
}

inline Dataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open dataset: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_dataset_text(buf.str());
}

inline nlohmann::json to_json(const Dataset& dataset) {
    nlohmann::json users = nlohmann::json::array();
    for (const UserRecord& user : dataset.users) {
        nlohmann::json profile = nlohmann::json::object();
        if (user.profile.age) profile["age"] = *user.profile.age;
        for (std::string_view name : kProfileAttributeNames) {
            if (name == "age") continue;
            const auto* value = user.profile.categorical(name);
            if (value && *value) profile[std::string(name)] = **value;
        }
        nlohmann::json interests = nlohmann::json::object();
        if (!user.profile.interests.books.empty())
            interests["books"] = user.profile.interests.books;
        if (!user.profile.interests.music.empty())
            interests["music"] = user.profile.interests.music;
        if (!user.profile.interests.tv.empty()) interests["tv"] = user.profile.interests.tv;
        if (!user.profile.interests.movies.empty())
            interests["movies"] = user.profile.interests.movies;
        if (!interests.empty()) profile["interests"] = std::move(interests);

        nlohmann::json albums = nlohmann::json::array();
        for (const Album& album : user.albums) {
            nlohmann::json photos = nlohmann::json::array();
            for (const PhotoAnnotation& photo : album.photos) {
                nlohmann::json pj{{"photo_id", photo.photo_id}, {"units", "fraction"}};
                if (!photo.faces.empty()) {
                    nlohmann::json faces = nlohmann::json::array();
                    for (const FaceRect& face : photo.faces)
                        faces.push_back({{"x", face.x},
                                         {"y", face.y},
                                         {"w", face.width},
                                         {"h", face.height}});
                    pj["faces"] = std::move(faces);
                }
                if (!photo.tags.empty()) {
                    nlohmann::json tags = nlohmann::json::array();
                    for (const TagPoint& tag : photo.tags) {
                        nlohmann::json tj{{"x", tag.x}, {"y", tag.y}};
                        if (tag.tagged_name) tj["name"] = *tag.tagged_name;
                        if (tag.links_to_profile) tj["links_to_profile"] = true;
                        tags.push_back(std::move(tj));
                    }
                    pj["tags"] = std::move(tags);
                }
                if (photo.taken_at) pj["taken_at"] = *photo.taken_at;
                photos.push_back(std::move(pj));
            }
            nlohmann::json aj{{"album_id", album.album_id},
                              {"setting", std::string(to_string(album.setting))},
                              {"photos", std::move(photos)}};
            if (!album.name.empty()) aj["name"] = album.name;
            albums.push_back(std::move(aj));
        }
        nlohmann::json uj{{"user_id", user.user_id}, {"albums", std::move(albums)}};
        if (!profile.empty()) uj["profile"] = std::move(profile);
        users.push_back(std::move(uj));
    }
    return nlohmann::json{{"schema_version", 1}, {"users", std::move(users)}};
}

inline std::string serialize(const Dataset& dataset) { return to_json(dataset).dump(2) + "\n"; }

inline void save_dataset(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write dataset: " + path);
    out << serialize(dataset);
}

}  // namespace privlens
