#pragma once

// Per-user exposure aggregation and the 3-, 5-, and 7-class privacy category
// rules. Faces and tags are only observable in analysis-eligible albums
// (public / friends-of-friends), so the 5- and 7-class rules count those
// photos; the 3-class rule's ratio runs over the total photo count.

#include <array>
#include <cstddef>

#include "privlens/geometry.hpp"
#include "privlens/model.hpp"

namespace privlens {

struct UserExposure {
    std::size_t n_photos = 0;                // photos in analysis-eligible albums
    std::size_t n_public_or_fof_photos = 0;  // photos in Public / FoF albums
    std::size_t n_total_photos = 0;          // photos across all albums
    std::size_t n_faces = 0;                 // faces across eligible photos
    std::size_t n_tags = 0;                  // tags across eligible photos
    std::size_t n_photos_with_faces = 0;     // eligible photos with >= 1 face
    PrivacyLevel max_level = PrivacyLevel::NoFaceNoTag;
    std::array<std::size_t, kPrivacyLevelCount> level_histogram{};
};

// Analysis-eligible albums are exactly the Public/FoF ones, so n_photos and
// n_public_or_fof_photos coincide; both are kept because they serve different
// rules.
inline UserExposure compute_exposure(const UserRecord& user, const GeometryConfig& cfg) {
    UserExposure e;
    for (const Album& album : user.albums) {
        e.n_total_photos += album.photos.size();
        if (!analysis_eligible(album.setting)) continue;
        e.n_public_or_fof_photos += album.photos.size();
        for (const PhotoAnnotation& photo : album.photos) {
            ++e.n_photos;
            e.n_faces += photo.faces.size();
            e.n_tags += photo.tags.size();
            if (!photo.faces.empty()) ++e.n_photos_with_faces;
            const PrivacyLevel level = classify_photo(photo, cfg);
            ++e.level_histogram[static_cast<std::size_t>(level)];
            if (rank(level) > rank(e.max_level)) e.max_level = level;
        }
    }
    return e;
}

// 3-class: no photos at all -> F; otherwise the fraction of photos visible to
// Public/FoF decides Pragmatic vs Unconcerned.
inline PrivacyCategory label_3class(const UserExposure& e) {
    if (e.n_total_photos == 0) return {Category::F, Scheme::ThreeClass};
    const double ratio =
        static_cast<double>(e.n_public_or_fof_photos) / static_cast<double>(e.n_total_photos);
    if (ratio < 0.5) return {Category::P, Scheme::ThreeClass};
    return {Category::U, Scheme::ThreeClass};
}

// The 5-class rule's "# faces < %50 of photos" clause is ambiguous between
// the fraction of photos containing a face and the raw face count; both
// readings are implemented.
enum class FiveClassRule { PhotoFraction, RawRatio };

struct LabelingConfig {
    FiveClassRule five_class_rule = FiveClassRule::PhotoFraction;
};

inline PrivacyCategory label_5class(const UserExposure& e, const LabelingConfig& cfg = {}) {
    if (e.n_photos == 0) return {Category::F, Scheme::FiveClass};
    if (e.n_photos_with_faces == e.n_photos) return {Category::U, Scheme::FiveClass};
    if (e.n_faces == 0) return {Category::FP, Scheme::FiveClass};
    const double numerator = cfg.five_class_rule == FiveClassRule::PhotoFraction
                                 ? static_cast<double>(e.n_photos_with_faces)
                                 : static_cast<double>(e.n_faces);
    if (numerator / static_cast<double>(e.n_photos) < 0.5)
        return {Category::P, Scheme::FiveClass};
    return {Category::PU, Scheme::FiveClass};
}

// 7-class: faces and tags jointly decide; tag-on-face placement is deliberately
// ignored here and feeds only the per-photo levels.
inline PrivacyCategory label_7class(const UserExposure& e) {
    if (e.n_photos == 0) return {Category::F, Scheme::SevenClass};
    if (e.n_faces == 0 && e.n_tags == 0) return {Category::FP, Scheme::SevenClass};
    if (e.n_faces != 0 && e.n_tags == 0) return {Category::Pplus, Scheme::SevenClass};
    if (e.n_faces == 0 && e.n_tags != 0) return {Category::P, Scheme::SevenClass};
    if (e.n_tags < e.n_faces) return {Category::Pminus, Scheme::SevenClass};
    if (e.n_tags == e.n_faces) return {Category::PU, Scheme::SevenClass};
    return {Category::U, Scheme::SevenClass};
}

struct UserLabels {
    PrivacyCategory three;
    PrivacyCategory five;
    PrivacyCategory seven;
};

inline UserLabels label_user(const UserExposure& e, const LabelingConfig& cfg = {}) {
    return {label_3class(e), label_5class(e, cfg), label_7class(e)};
}

inline PrivacyCategory label_scheme(const UserExposure& e, Scheme scheme,
                                    const LabelingConfig& cfg = {}) {
    switch (scheme) {
        case Scheme::ThreeClass: return label_3class(e);
        case Scheme::FiveClass: return label_5class(e, cfg);
        case Scheme::SevenClass: return label_7class(e);
    }
    return label_7class(e);
}

}  // namespace privlens
