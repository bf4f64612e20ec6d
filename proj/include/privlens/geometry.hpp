#pragma once

// Tag-on-face decisions and the per-photo privacy level. A tag counts as "on"
// a face when its point lies inside the face rectangle expanded by a relative
// tolerance, closed at the boundary.

#include <algorithm>

#include "privlens/model.hpp"

namespace privlens {

struct GeometryConfig {
    double epsilon = 0.10;  // relative expansion of each face rectangle side

    GeometryConfig() = default;
    explicit GeometryConfig(double eps) : epsilon(eps) {
        if (!(epsilon >= 0.0 && epsilon <= 0.5))
            throw ValidationError("GeometryConfig: epsilon must lie in [0, 0.5]");
    }
};

// True iff the tag point lies inside the face rectangle expanded by
// epsilon*width horizontally and epsilon*height vertically on each side,
// clipped to the unit square. Boundaries are closed.
inline bool tag_on_face(const TagPoint& tag, const FaceRect& face, const GeometryConfig& cfg) {
    const double x0 = std::max(0.0, face.x - cfg.epsilon * face.width);
    const double x1 = std::min(1.0, face.x + face.width + cfg.epsilon * face.width);
    const double y0 = std::max(0.0, face.y - cfg.epsilon * face.height);
    const double y1 = std::min(1.0, face.y + face.height + cfg.epsilon * face.height);
    return tag.x >= x0 && tag.x <= x1 && tag.y >= y0 && tag.y <= y1;
}

// True iff at least one (tag, face) pair matches. Callers branch on the face
// and tag counts first; both lists must be non-empty here.
inline bool photo_on_face(const PhotoAnnotation& photo, const GeometryConfig& cfg) {
    if (photo.faces.empty() || photo.tags.empty())
        throw std::invalid_argument("photo_on_face: photo must have at least one face and one tag");
    for (const TagPoint& tag : photo.tags)
        for (const FaceRect& face : photo.faces)
            if (tag_on_face(tag, face, cfg)) return true;
    return false;
}

// Case analysis over face/tag presence, on/off-face placement, and the
// tag-vs-face count comparison. A photo with both on- and off-face tags takes
// the on-face branch: worst-case exposure governs.
inline PrivacyLevel classify_photo(const PhotoAnnotation& photo, const GeometryConfig& cfg) {
    const std::size_t n_faces = photo.faces.size();
    const std::size_t n_tags = photo.tags.size();
    if (n_faces == 0 && n_tags == 0) return PrivacyLevel::NoFaceNoTag;
    if (n_faces > 0 && n_tags == 0) return PrivacyLevel::FaceNoTag;
    if (n_faces == 0 && n_tags > 0) return PrivacyLevel::TagNoFace;
    if (photo_on_face(photo, cfg)) {
        if (n_tags < n_faces) return PrivacyLevel::OnFaceTagsLtFaces;
        if (n_tags == n_faces) return PrivacyLevel::OnFaceTagsEqFaces;
        return PrivacyLevel::OnFaceTagsGtFaces;
    }
    if (n_tags < n_faces) return PrivacyLevel::OffFaceTagsLtFaces;
    if (n_tags == n_faces) return PrivacyLevel::OffFaceTagsEqFaces;
    return PrivacyLevel::OffFaceTagsGtFaces;
}

}  // namespace privlens
