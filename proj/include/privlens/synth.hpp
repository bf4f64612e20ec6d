#pragma once

// Seeded synthetic dataset generator. Users are built constructively from the
// seven-way rule preconditions, so every generated user carries a known
// intended category; a requested mix is honoured exactly via largest-remainder
// rounding.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "privlens/geometry.hpp"
#include "privlens/model.hpp"
#include "privlens/rng.hpp"

namespace privlens {

struct CountRange {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

struct SynthConfig {
    std::uint64_t seed = 0;
    std::size_t n_users = 100;
    // Partial mixes are allowed: unlisted categories share the leftover weight
    // equally. The default mirrors commonly reported survey proportions.
    std::map<Category, double> mix = {{Category::Pplus, 0.32},
                                      {Category::FP, 0.24},
                                      {Category::F, 0.15},
                                      {Category::U, 0.04}};
    CountRange albums_per_user{1, 5};
    CountRange photos_per_album{1, 10};
    CountRange faces_per_photo{0, 4};
    double on_face_probability = 0.5;
    std::map<std::string, double> missing_probability = {
        {"degree", 0.94},       {"political_view", 0.77}, {"religion", 0.65},
        {"relationship", 0.41}, {"hometown", 0.23},       {"education", 0.21},
        {"location", 0.20},     {"gender", 0.0},          {"age", 0.0}};
    int age_min = 14;
    int age_max = 73;
};

struct SynthResult {
    Dataset dataset;
    std::vector<std::pair<std::string, Category>> intended;  // user_id -> category
};

namespace synth_detail {

// Value pools; every entry is a canonical form in the default mapping table so
// a generated dataset survives ingest unchanged.
inline const std::vector<std::string> kGenderPool = {"Male", "Female"};
inline const std::vector<std::string> kCountryPool = {"USA",     "Canada", "Egypt",
                                                      "Germany", "India",  "Brazil"};
inline const std::vector<std::string> kRelationshipPool = {"Single", "Married", "Engaged",
                                                           "In a relationship"};
inline const std::vector<std::string> kReligionPool = {"Muslim", "Christianity", "Judaism",
                                                       "Buddhism", "Hinduism"};
inline const std::vector<std::string> kPoliticalPool = {"Liberal", "Conservative", "Moderate",
                                                        "Apolitical"};
inline const std::vector<std::string> kEducationPool = {"High School", "Undergraduate",
                                                        "Graduate"};
inline const std::vector<std::string> kDegreePool = {"BSc", "MSc", "PhD", "MBA"};
inline const std::vector<std::string> kBookPool = {"science fiction", "history", "poetry",
                                                   "biographies"};
inline const std::vector<std::string> kMusicPool = {"jazz", "rock", "classical", "pop"};
inline const std::vector<std::string> kTvPool = {"documentaries", "comedy", "drama"};
inline const std::vector<std::string> kMoviePool = {"thrillers", "animation", "westerns"};
inline const std::vector<std::string> kAlbumNamePool = {"Vacation", "Campus", "Birthday",
                                                        "Weekend", "Hiking", "Mobile uploads"};

inline const std::string& pick(Rng& rng, const std::vector<std::string>& pool) {
    return pool[draw_below(rng, pool.size())];
}

inline std::map<Category, double> resolve_mix(const std::map<Category, double>& given) {
    double listed = 0.0;
    for (const auto& [category, weight] : given) {
        (void)category;
        if (weight < 0.0) throw ValidationError("synth: mix weights must be non-negative");
        listed += weight;
    }
    if (listed > 1.0 + 1e-9) throw ValidationError("synth: mix weights must sum to at most 1");
    const std::size_t unlisted = kAllCategories.size() - given.size();
    if (unlisted == 0 && std::abs(listed - 1.0) > 1e-6)
        throw ValidationError("synth: a full mix must sum to 1");
    const double share = unlisted > 0 ? (1.0 - listed) / static_cast<double>(unlisted) : 0.0;
    std::map<Category, double> mix;
    for (Category category : kAllCategories) {
        auto it = given.find(category);
        mix[category] = it != given.end() ? it->second : share;
    }
    return mix;
}

// Exact integer counts per category summing to n, largest fractional
// remainder first; remainder ties go to the more privacy-preserving category.
inline std::map<Category, std::size_t> apportion(const std::map<Category, double>& mix,
                                                 std::size_t n) {
    std::map<Category, std::size_t> counts;
    std::vector<std::pair<double, Category>> remainders;
    std::size_t assigned = 0;
    for (Category category : kAllCategories) {
        const double exact = mix.at(category) * static_cast<double>(n);
        const auto base = static_cast<std::size_t>(std::floor(exact + 1e-9));
        counts[category] = base;
        assigned += base;
        remainders.emplace_back(exact - static_cast<double>(base), category);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned)
        ++counts[remainders[i % remainders.size()].second];
    return counts;
}

inline std::string timestamp(Rng& rng) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "2024-%02d-%02dT%02d:00:00Z",
                  static_cast<int>(draw_between(rng, 1, 12)),
                  static_cast<int>(draw_between(rng, 1, 28)),
                  static_cast<int>(draw_between(rng, 0, 23)));
    return buf;
}

inline FaceRect random_face(Rng& rng) {
    const double x = draw_unit(rng) * 0.8;
    const double y = draw_unit(rng) * 0.8;
    const double w = 0.05 + draw_unit(rng) * std::min(0.15, 1.0 - 0.05 - x);
    const double h = 0.05 + draw_unit(rng) * std::min(0.15, 1.0 - 0.05 - y);
    return FaceRect(x, y, w, h);
}

inline TagPoint off_face_point(Rng& rng, const std::vector<FaceRect>& faces,
                               const GeometryConfig& geometry) {
    auto clear = [&](const TagPoint& p) {
        for (const FaceRect& face : faces)
            if (tag_on_face(p, face, geometry)) return false;
        return true;
    };
    for (int attempt = 0; attempt < 32; ++attempt) {
        TagPoint p(draw_unit(rng), draw_unit(rng));
        if (clear(p)) return p;
    }
    for (int gx = 0; gx <= 20; ++gx)
        for (int gy = 0; gy <= 20; ++gy) {
            TagPoint p(gx / 20.0, gy / 20.0);
            if (clear(p)) return p;
        }
    return TagPoint(0.5, 0.5);  // faces cover the frame; placement is moot
}

inline UserProfile random_profile(Rng& rng, const SynthConfig& config) {
    UserProfile profile;
    auto missing = [&](const char* name) {
        auto it = config.missing_probability.find(name);
        const double p = it != config.missing_probability.end() ? it->second : 0.0;
        return draw_coin(rng, p);
    };
    if (!missing("age")) profile.age = static_cast<int>(draw_between(rng, config.age_min, config.age_max));
    if (!missing("gender")) profile.gender = pick(rng, kGenderPool);
    if (!missing("hometown")) profile.hometown = pick(rng, kCountryPool);
    if (!missing("location")) profile.location = pick(rng, kCountryPool);
    if (!missing("relationship")) profile.relationship = pick(rng, kRelationshipPool);
    if (!missing("religion")) profile.religion = pick(rng, kReligionPool);
    if (!missing("political_view")) profile.political_view = pick(rng, kPoliticalPool);
    if (!missing("education")) profile.education = pick(rng, kEducationPool);
    if (!missing("degree")) profile.degree = pick(rng, kDegreePool);
    auto sample = [&](const std::vector<std::string>& pool, std::vector<std::string>& out) {
        const std::size_t n = draw_below(rng, 3);
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& v = pick(rng, pool);
            if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
        }
    };
    sample(kBookPool, profile.interests.books);
    sample(kMusicPool, profile.interests.music);
    sample(kTvPool, profile.interests.tv);
    sample(kMoviePool, profile.interests.movies);
    return profile;
}

struct ExposureTarget {
    std::size_t photos = 0;  // analysis-eligible photos
    std::size_t faces = 0;   // total faces across them
    std::size_t tags = 0;    // total tags across them
};

// Photos an engineered user may spread across eligible albums (at most two,
// album size capped by the configured range; 6 keeps users small).
inline std::size_t photo_capacity(const SynthConfig& config) {
    const std::size_t albums = std::min<std::size_t>(config.albums_per_user.hi, 2);
    return std::min<std::size_t>(albums * config.photos_per_album.hi, 6);
}

inline ExposureTarget target_for(Rng& rng, Category category, const SynthConfig& config) {
    ExposureTarget t;
    if (category == Category::F) return t;
    const std::size_t cap = photo_capacity(config);
    std::size_t photos_lo = 1;
    if (category == Category::Pminus && config.faces_per_photo.hi > 0)
        photos_lo = std::max<std::size_t>(
            photos_lo, (2 + config.faces_per_photo.hi - 1) / config.faces_per_photo.hi);
    t.photos = static_cast<std::size_t>(draw_between(rng, static_cast<std::int64_t>(photos_lo),
                                                     static_cast<std::int64_t>(std::max(photos_lo, cap))));
    const std::size_t face_cap = t.photos * config.faces_per_photo.hi;
    auto faces_between = [&](std::size_t lo, std::size_t hi) {
        hi = std::min(hi, face_cap);
        lo = std::min(lo, hi);
        return static_cast<std::size_t>(draw_between(rng, static_cast<std::int64_t>(lo),
                                                     static_cast<std::int64_t>(hi)));
    };
    switch (category) {
        case Category::FP:
            break;  // photos without faces or tags
        case Category::Pplus:
            t.faces = faces_between(1, 5);
            break;
        case Category::P:
            t.tags = static_cast<std::size_t>(draw_between(rng, 1, 5));
            break;
        case Category::Pminus:
            t.faces = faces_between(2, 6);
            t.tags = static_cast<std::size_t>(
                draw_between(rng, 1, static_cast<std::int64_t>(t.faces - 1)));
            break;
        case Category::PU:
            t.faces = faces_between(1, 4);
            t.tags = t.faces;
            break;
        case Category::U:
            t.faces = faces_between(1, 3);
            t.tags = t.faces + static_cast<std::size_t>(draw_between(rng, 1, 3));
            break;
        case Category::F:
            break;
    }
    return t;
}

inline void check_feasible(const SynthConfig& config,
                           const std::map<Category, std::size_t>& counts) {
    for (Category category : kAllCategories) {
        if (counts.at(category) == 0 || category == Category::F) continue;
        if (config.photos_per_album.hi == 0)
            throw ValidationError("synth: mix needs photos but photos_per_album allows none");
        const bool needs_faces = category == Category::Pplus || category == Category::Pminus ||
                                 category == Category::PU || category == Category::U;
        if (needs_faces && config.faces_per_photo.hi == 0)
            throw ValidationError("synth: mix needs faces but faces_per_photo allows none");
        // P- needs room for at least two faces among the eligible photos.
        if (category == Category::Pminus &&
            config.faces_per_photo.hi * photo_capacity(config) < 2)
            throw ValidationError("synth: mix is infeasible under the configured count ranges");
    }
}

// Per-photo annotation content before ids and timestamps are attached.
struct PhotoDraft {
    std::vector<FaceRect> faces;
    std::vector<TagPoint> tags;
};

}  // namespace synth_detail

inline SynthResult generate(const SynthConfig& config) {
    using namespace synth_detail;
    if (config.n_users == 0) throw ValidationError("synth: n_users must be positive");
    if (config.albums_per_user.lo > config.albums_per_user.hi ||
        config.photos_per_album.lo > config.photos_per_album.hi ||
        config.faces_per_photo.lo > config.faces_per_photo.hi)
        throw ValidationError("synth: count ranges must satisfy lo <= hi");
    if (config.albums_per_user.hi == 0)
        throw ValidationError("synth: albums_per_user must allow at least one album");
    if (config.on_face_probability < 0.0 || config.on_face_probability > 1.0)
        throw ValidationError("synth: on_face_probability must lie in [0, 1]");
    if (config.age_min < 1 || config.age_max > 130 || config.age_min > config.age_max)
        throw ValidationError("synth: age range must lie within [1, 130]");
    for (const auto& [name, p] : config.missing_probability) {
        if (std::find(kProfileAttributeNames.begin(), kProfileAttributeNames.end(), name) ==
            kProfileAttributeNames.end())
            throw ValidationError("synth: unknown attribute '" + name + "'");
        if (p < 0.0 || p > 1.0)
            throw ValidationError("synth: missing probability must lie in [0, 1]");
    }

    const auto mix = resolve_mix(config.mix);
    const auto counts = apportion(mix, config.n_users);
    check_feasible(config, counts);

    // Deterministic category sequence: blocks in category order, then shuffled.
    std::vector<Category> sequence;
    sequence.reserve(config.n_users);
    for (Category category : kAllCategories)
        sequence.insert(sequence.end(), counts.at(category), category);
    Rng rng(config.seed);
    draw_shuffle(rng, sequence);

    const GeometryConfig geometry;
    SynthResult result;
    for (std::size_t u = 0; u < sequence.size(); ++u) {
        const Category category = sequence[u];
        char id[32];
        std::snprintf(id, sizeof(id), "user_%04zu", u + 1);
        const std::string user_id = id;

        std::vector<Album> albums;
        std::size_t album_seq = 0;
        auto next_album_id = [&] {
            char aid[48];
            std::snprintf(aid, sizeof(aid), "%s_album_%zu", user_id.c_str(), ++album_seq);
            return std::string(aid);
        };
        auto photo_id_in = [&](const std::string& aid, std::size_t p) {
            char pid[80];
            std::snprintf(pid, sizeof(pid), "%s_photo_%zu", aid.c_str(), p + 1);
            return std::string(pid);
        };

        const ExposureTarget target = target_for(rng, category, config);
        if (category != Category::F) {
            std::vector<PhotoDraft> drafts(target.photos);
            // Faces land on photos uniformly, respecting the per-photo cap.
            for (std::size_t f = 0; f < target.faces;) {
                const std::size_t s = draw_below(rng, drafts.size());
                if (drafts[s].faces.size() >= config.faces_per_photo.hi) continue;
                drafts[s].faces.push_back(random_face(rng));
                ++f;
            }
            // Tags land on photos with faces when any exist, keeping face/tag
            // co-occurrence plausible; otherwise anywhere.
            for (std::size_t t = 0; t < target.tags; ++t) {
                std::size_t s = draw_below(rng, drafts.size());
                if (target.faces > 0)
                    while (drafts[s].faces.empty()) s = (s + 1) % drafts.size();
                PhotoDraft& draft = drafts[s];
                if (!draft.faces.empty() && draw_coin(rng, config.on_face_probability)) {
                    const FaceRect& face = draft.faces[draw_below(rng, draft.faces.size())];
                    draft.tags.emplace_back(face.x + face.width / 2.0,
                                            face.y + face.height / 2.0);
                } else {
                    draft.tags.push_back(off_face_point(rng, draft.faces, geometry));
                }
            }
            std::size_t n_eligible_albums =
                (target.photos + config.photos_per_album.hi - 1) / config.photos_per_album.hi;
            if (n_eligible_albums == 1 && target.photos > 3 && config.albums_per_user.hi > 1)
                n_eligible_albums = 2;
            std::size_t draft_index = 0;
            for (std::size_t a = 0; a < n_eligible_albums; ++a) {
                const std::string aid = next_album_id();
                std::vector<PhotoAnnotation> photos;
                const std::size_t share =
                    a + 1 == n_eligible_albums
                        ? drafts.size() - draft_index
                        : (drafts.size() + n_eligible_albums - 1) / n_eligible_albums;
                for (std::size_t p = 0; p < share && draft_index < drafts.size(); ++p) {
                    PhotoDraft& draft = drafts[draft_index++];
                    std::optional<std::string> taken;
                    if (draw_coin(rng, 0.7)) taken = timestamp(rng);
                    photos.emplace_back(photo_id_in(aid, p), std::move(draft.faces),
                                        std::move(draft.tags), std::move(taken));
                }
                albums.emplace_back(aid, pick(rng, kAlbumNamePool),
                                    draw_coin(rng, 0.5) ? VisibilitySetting::Public
                                                        : VisibilitySetting::FriendsOfFriends,
                                    std::move(photos));
            }
        }

        // Noise albums behind stricter settings; they never affect the
        // engineered category but do exercise eligibility filtering.
        const std::size_t n_noise =
            category == Category::F
                ? static_cast<std::size_t>(draw_between(rng, 1, 2))
                : (albums.size() < config.albums_per_user.hi && draw_coin(rng, 0.3) ? 1 : 0);
        for (std::size_t a = 0; a < n_noise; ++a) {
            const std::string aid = next_album_id();
            static const VisibilitySetting kPrivate[] = {VisibilitySetting::Friends,
                                                         VisibilitySetting::Custom,
                                                         VisibilitySetting::OnlyMe};
            std::vector<PhotoAnnotation> photos;
            const std::size_t n_photos =
                draw_below(rng, std::min<std::size_t>(config.photos_per_album.hi, 3) + 1);
            for (std::size_t p = 0; p < n_photos; ++p) {
                std::vector<FaceRect> faces;
                const std::size_t n_faces =
                    config.faces_per_photo.hi > 0
                        ? draw_below(rng, std::min<std::size_t>(config.faces_per_photo.hi, 3) + 1)
                        : 0;
                for (std::size_t f = 0; f < n_faces; ++f) faces.push_back(random_face(rng));
                std::vector<TagPoint> tags;
                const std::size_t n_tags = draw_below(rng, 3);
                for (std::size_t t = 0; t < n_tags; ++t)
                    tags.push_back(off_face_point(rng, faces, geometry));
                std::optional<std::string> taken;
                if (draw_coin(rng, 0.7)) taken = timestamp(rng);
                photos.emplace_back(photo_id_in(aid, p), std::move(faces), std::move(tags),
                                    std::move(taken));
            }
            albums.emplace_back(aid, pick(rng, kAlbumNamePool), kPrivate[draw_below(rng, 3)],
                                std::move(photos));
        }

        result.dataset.users.emplace_back(user_id, random_profile(rng, config),
                                          std::move(albums));
        result.intended.emplace_back(user_id, category);
    }
    return result;
}

}  // namespace privlens
