#pragma once

// Tighter-setting recommendations and the per-user privacy report. A
// recommendation fires when the observed category is more revealing than the
// category predicted from profile similarity; affected albums move one step
// stricter. Threshold and step size are configurable.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "privlens/geometry.hpp"
#include "privlens/labeling.hpp"
#include "privlens/model.hpp"
#include "privlens/prep.hpp"

namespace privlens {

struct RecommendConfig {
    PrivacyLevel threshold = PrivacyLevel::OnFaceTagsLtFaces;  // L6: first on-face level
    int steps = 1;
    GeometryConfig geometry;
};

struct AlbumSuggestion {
    std::string album_id;
    VisibilitySetting current;
    VisibilitySetting suggested;
    PrivacyLevel worst_level;  // highest photo level in the album
};

struct Recommendation {
    std::string user_id;
    PrivacyCategory observed;
    PrivacyCategory predicted;
    bool tighten = false;
    std::vector<AlbumSuggestion> suggestions;
    std::vector<std::string> rationale;
};

// A tightening recommendation targets every analysis-eligible album holding at
// least one photo at or above the threshold level. Suggestions are one step
// stricter (configurable), never looser, and album order follows the user.
inline Recommendation recommend(const UserRecord& user, const UserExposure& exposure,
                                const PrivacyCategory& observed,
                                const PrivacyCategory& predicted,
                                const RecommendConfig& cfg = {}) {
    if (observed.scheme != predicted.scheme)
        throw std::invalid_argument("recommend: observed and predicted use different schemes");
    if (cfg.steps < 1) throw std::invalid_argument("recommend: steps must be >= 1");
    Recommendation rec{user.user_id, observed, predicted, false, {}, {}};
    rec.tighten = revealing_rank(observed.value) > revealing_rank(predicted.value);
    std::ostringstream line;
    if (!rec.tighten) {
        line << "observed category " << to_string(observed.value)
             << " does not exceed predicted " << to_string(predicted.value)
             << "; no change suggested";
        rec.rationale.push_back(line.str());
        return rec;
    }
    line << "observed category " << to_string(observed.value)
         << " is more revealing than predicted " << to_string(predicted.value);
    rec.rationale.push_back(line.str());
    (void)exposure;
    for (const Album& album : user.albums) {
        if (!analysis_eligible(album.setting) || album.photos.empty()) continue;
        PrivacyLevel worst = PrivacyLevel::NoFaceNoTag;
        for (const PhotoAnnotation& photo : album.photos) {
            const PrivacyLevel level = classify_photo(photo, cfg.geometry);
            if (rank(level) > rank(worst)) worst = level;
        }
        if (rank(worst) < rank(cfg.threshold)) continue;
        const VisibilitySetting suggested = stricter(album.setting, cfg.steps);
        rec.suggestions.push_back({album.album_id, album.setting, suggested, worst});
        std::ostringstream why;
        why << "album " << album.album_id << " (" << to_string(album.setting)
            << ") holds a photo at " << level_code(worst) << "; suggest "
            << to_string(suggested);
        rec.rationale.push_back(why.str());
    }
    if (rec.suggestions.empty())
        rec.rationale.push_back("no eligible album reaches level " +
                                std::string(level_code(cfg.threshold)));
    return rec;
}

// ---------------------------------------------------------------------------
// Per-user report.

// Attributes the platform always exposes regardless of settings; disclosing
// them carries no extra choice, but the report flags their presence.
inline constexpr std::array<std::string_view, 2> kAlwaysPublicAttributes = {"age", "gender"};

inline constexpr std::string_view kFlagAlwaysPublic = "always-public attribute disclosed";
inline constexpr std::string_view kFlagOnFaceTag = "tag placed on face";
inline constexpr std::string_view kFlagTagsExceedFaces = "more tags than faces";

struct DisclosedAttribute {
    std::string name;
    std::string value;
    bool always_public = false;
};

struct PhotoReportRow {
    std::string photo_id;
    std::size_t n_faces = 0;
    std::size_t n_tags = 0;
    PrivacyLevel level = PrivacyLevel::NoFaceNoTag;
};

struct AlbumReportRow {
    std::string album_id;
    std::string name;
    VisibilitySetting setting = VisibilitySetting::Public;
    bool eligible = false;
    std::size_t photo_count = 0;
    std::vector<PhotoReportRow> photos;  // filled for eligible albums only
};

struct PrivacyReport {
    std::string user_id;
    std::vector<DisclosedAttribute> disclosed;       // attribute order, present only
    std::map<std::string, std::size_t> interests;    // kind -> entry count
    std::vector<AlbumReportRow> albums;
    UserLabels labels;
    std::vector<std::string> risk_flags;
    Recommendation recommendation;
    // Dataset-wide context: attribute -> percent of users not disclosing it.
    std::map<std::string, int> dataset_missing_percent;
};

inline PrivacyReport build_report(const UserRecord& user, const UserExposure& exposure,
                                  const UserLabels& labels, Recommendation recommendation,
                                  const DisclosureStats* stats = nullptr,
                                  const GeometryConfig& geometry = {}) {
    PrivacyReport report{user.user_id, {}, {}, {}, labels, {}, std::move(recommendation), {}};
    for (std::string_view name : kProfileAttributeNames) {
        if (!user.profile.attribute_present(name)) continue;
        const bool always_public =
            std::find(kAlwaysPublicAttributes.begin(), kAlwaysPublicAttributes.end(), name) !=
            kAlwaysPublicAttributes.end();
        std::string value;
        if (name == "age")
            value = std::to_string(*user.profile.age);
        else
            value = **user.profile.categorical(name);
        report.disclosed.push_back({std::string(name), std::move(value), always_public});
    }
    report.interests = {{"books", user.profile.interests.books.size()},
                        {"movies", user.profile.interests.movies.size()},
                        {"music", user.profile.interests.music.size()},
                        {"tv", user.profile.interests.tv.size()}};
    for (const Album& album : user.albums) {
        AlbumReportRow row{album.album_id, album.name,       album.setting,
                           analysis_eligible(album.setting), album.photos.size(),
                           {}};
        if (row.eligible)
            for (const PhotoAnnotation& photo : album.photos)
                row.photos.push_back({photo.photo_id, photo.faces.size(), photo.tags.size(),
                                      classify_photo(photo, geometry)});
        report.albums.push_back(std::move(row));
    }
    bool any_always_public = false;
    for (const DisclosedAttribute& d : report.disclosed) any_always_public |= d.always_public;
    if (any_always_public) report.risk_flags.emplace_back(kFlagAlwaysPublic);
    const auto& hist = exposure.level_histogram;
    const auto at = [&](PrivacyLevel level) { return hist[static_cast<std::size_t>(level)]; };
    if (at(PrivacyLevel::OnFaceTagsLtFaces) + at(PrivacyLevel::OnFaceTagsEqFaces) +
            at(PrivacyLevel::OnFaceTagsGtFaces) >
        0)
        report.risk_flags.emplace_back(kFlagOnFaceTag);
    if (at(PrivacyLevel::OffFaceTagsGtFaces) + at(PrivacyLevel::OnFaceTagsGtFaces) > 0)
        report.risk_flags.emplace_back(kFlagTagsExceedFaces);
    if (stats != nullptr)
        for (const auto& [name, stat] : stats->attributes)
            if (stat.percent) report.dataset_missing_percent[name] = *stat.percent;
    return report;
}

// ---------------------------------------------------------------------------
// Report serialization: canonical JSON (sorted keys, two-space indent) and a
// structured text rendering. serialize(parse(serialize(r))) is byte-identical.

inline nlohmann::json to_json(const Recommendation& rec) {
    nlohmann::json suggestions = nlohmann::json::array();
    for (const AlbumSuggestion& s : rec.suggestions)
        suggestions.push_back({{"album_id", s.album_id},
                               {"current", std::string(to_string(s.current))},
                               {"suggested", std::string(to_string(s.suggested))},
                               {"worst_level", std::string(level_code(s.worst_level))}});
    return nlohmann::json{{"user_id", rec.user_id},
                          {"scheme", std::string(to_string(rec.observed.scheme))},
                          {"observed", std::string(to_string(rec.observed.value))},
                          {"predicted", std::string(to_string(rec.predicted.value))},
                          {"tighten", rec.tighten},
                          {"suggestions", std::move(suggestions)},
                          {"rationale", rec.rationale}};
}

inline Recommendation recommendation_from_json(const nlohmann::json& j) {
    const auto scheme = scheme_from_string(j.at("scheme").get<std::string>());
    if (!scheme) throw ValidationError("recommendation: unknown scheme");
    const auto observed = category_from_string(j.at("observed").get<std::string>());
    const auto predicted = category_from_string(j.at("predicted").get<std::string>());
    if (!observed || !predicted) throw ValidationError("recommendation: unknown category");
    Recommendation rec{j.at("user_id").get<std::string>(),
                       PrivacyCategory(*observed, *scheme),
                       PrivacyCategory(*predicted, *scheme),
                       j.at("tighten").get<bool>(),
                       {},
                       j.at("rationale").get<std::vector<std::string>>()};
    for (const auto& s : j.at("suggestions")) {
        const auto current = visibility_from_string(s.at("current").get<std::string>());
        const auto suggested = visibility_from_string(s.at("suggested").get<std::string>());
        const auto level = level_from_code(s.at("worst_level").get<std::string>());
        if (!current || !suggested || !level)
            throw ValidationError("recommendation: bad suggestion entry");
        rec.suggestions.push_back({s.at("album_id").get<std::string>(), *current, *suggested,
                                   *level});
    }
    return rec;
}

inline nlohmann::json to_json(const PrivacyReport& report) {
    nlohmann::json disclosed = nlohmann::json::array();
    for (const DisclosedAttribute& d : report.disclosed)
        disclosed.push_back({{"name", d.name},
                             {"value", d.value},
                             {"always_public", d.always_public}});
    nlohmann::json albums = nlohmann::json::array();
    for (const AlbumReportRow& row : report.albums) {
        nlohmann::json album{{"album_id", row.album_id},
                             {"name", row.name},
                             {"setting", std::string(to_string(row.setting))},
                             {"eligible", row.eligible},
                             {"photo_count", row.photo_count}};
        if (row.eligible) {
            nlohmann::json photos = nlohmann::json::array();
            for (const PhotoReportRow& photo : row.photos)
                photos.push_back({{"photo_id", photo.photo_id},
                                  {"n_faces", photo.n_faces},
                                  {"n_tags", photo.n_tags},
                                  {"level", std::string(level_code(photo.level))}});
            album["photos"] = std::move(photos);
        }
        albums.push_back(std::move(album));
    }
    nlohmann::json j{{"user_id", report.user_id},
                     {"disclosed", std::move(disclosed)},
                     {"interests", report.interests},
                     {"albums", std::move(albums)},
                     {"labels",
                      {{"3", std::string(to_string(report.labels.three.value))},
                       {"5", std::string(to_string(report.labels.five.value))},
                       {"7", std::string(to_string(report.labels.seven.value))}}},
                     {"risk_flags", report.risk_flags},
                     {"recommendation", to_json(report.recommendation)}};
    if (!report.dataset_missing_percent.empty())
        j["dataset_missing_percent"] = report.dataset_missing_percent;
    return j;
}

inline std::string serialize_report(const PrivacyReport& report) {
    return to_json(report).dump(2) + "\n";
}

inline PrivacyReport parse_report(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    auto category = [&](const char* scheme_key, Scheme scheme) {
        const auto c = category_from_string(j.at("labels").at(scheme_key).get<std::string>());
        if (!c) throw ValidationError("report: unknown category");
        return PrivacyCategory(*c, scheme);
    };
    PrivacyReport report{j.at("user_id").get<std::string>(),
                         {},
                         {},
                         {},
                         UserLabels{category("3", Scheme::ThreeClass),
                                    category("5", Scheme::FiveClass),
                                    category("7", Scheme::SevenClass)},
                         j.at("risk_flags").get<std::vector<std::string>>(),
                         recommendation_from_json(j.at("recommendation")),
                         {}};
    for (const auto& d : j.at("disclosed"))
        report.disclosed.push_back({d.at("name").get<std::string>(),
                                    d.at("value").get<std::string>(),
                                    d.at("always_public").get<bool>()});
    report.interests = j.at("interests").get<std::map<std::string, std::size_t>>();
    for (const auto& a : j.at("albums")) {
        const auto setting = visibility_from_string(a.at("setting").get<std::string>());
        if (!setting) throw ValidationError("report: unknown visibility setting");
        AlbumReportRow row{a.at("album_id").get<std::string>(),
                           a.at("name").get<std::string>(),
                           *setting,
                           a.at("eligible").get<bool>(),
                           a.at("photo_count").get<std::size_t>(),
                           {}};
        if (a.contains("photos"))
            for (const auto& p : a.at("photos")) {
                const auto level = level_from_code(p.at("level").get<std::string>());
                if (!level) throw ValidationError("report: unknown privacy level");
                row.photos.push_back({p.at("photo_id").get<std::string>(),
                                      p.at("n_faces").get<std::size_t>(),
                                      p.at("n_tags").get<std::size_t>(), *level});
            }
        report.albums.push_back(std::move(row));
    }
    if (j.contains("dataset_missing_percent"))
        report.dataset_missing_percent =
            j.at("dataset_missing_percent").get<std::map<std::string, int>>();
    return report;
}

inline std::string report_to_text(const PrivacyReport& report) {
    std::ostringstream out;
    out << "user " << report.user_id << "\n";
    out << "labels: 3-class " << to_string(report.labels.three.value) << ", 5-class "
        << to_string(report.labels.five.value) << ", 7-class "
        << to_string(report.labels.seven.value) << "\n";
    out << "disclosed attributes:\n";
    if (report.disclosed.empty()) out << "  (none)\n";
    for (const DisclosedAttribute& d : report.disclosed) {
        out << "  " << d.name << " = " << d.value;
        if (d.always_public) out << " [always public]";
        out << "\n";
    }
    out << "interests:";
    for (const auto& [kind, count] : report.interests) out << " " << kind << "=" << count;
    out << "\n";
    out << "albums:\n";
    if (report.albums.empty()) out << "  (none)\n";
    for (const AlbumReportRow& row : report.albums) {
        out << "  " << row.album_id << " [" << to_string(row.setting) << "] "
            << row.photo_count << " photo(s)";
        if (!row.eligible) out << " (not analyzed)";
        out << "\n";
        for (const PhotoReportRow& photo : row.photos)
            out << "    " << photo.photo_id << ": faces=" << photo.n_faces
                << " tags=" << photo.n_tags << " level=" << level_code(photo.level) << "\n";
    }
    out << "risk flags:";
    if (report.risk_flags.empty()) out << " (none)";
    for (const std::string& flag : report.risk_flags) out << " [" << flag << "]";
    out << "\n";
    out << "recommendation:\n";
    for (const std::string& line : report.recommendation.rationale) out << "  " << line << "\n";
    for (const AlbumSuggestion& s : report.recommendation.suggestions)
        out << "  " << s.album_id << ": " << to_string(s.current) << " -> "
            << to_string(s.suggested) << "\n";
    return out.str();
}

}  // namespace privlens
