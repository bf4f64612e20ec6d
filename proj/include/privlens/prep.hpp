#pragma once

// Canonicalization of raw categorical profile values and dataset disclosure
// statistics. Mappings live in editable data files, not in code; the paper's
// cleanup step is reproduced as a lookup table.
//
// Table file format: UTF-8, line oriented, `attribute<TAB>raw<TAB>canonical`,
// `#` starts a comment. The reserved attribute name `location_map` feeds the
// city/region -> country map used to resolve "City, Region" forms of the
// location and hometown attributes.

#include <cctype>
#include <cstddef>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "privlens/model.hpp"

namespace privlens {

class TableFormatError : public std::runtime_error {
public:
    explicit TableFormatError(const std::string& what) : std::runtime_error(what) {}
};

// Lookup keys are trimmed and ASCII case-folded; non-ASCII bytes pass through
// untouched (UTF-8 opaque), so entries in any script work as plain keys.
inline std::string normalize_key(std::string_view raw) {
    std::size_t begin = 0;
    std::size_t end = raw.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(raw[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
    std::string out;
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        unsigned char c = static_cast<unsigned char>(raw[i]);
        out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
    }
    return out;
}

struct CanonResult {
    std::string value;
    bool mapped = false;  // false: passthrough of the normalized key
};

inline constexpr std::string_view kLocationMapAttribute = "location_map";

class CanonTable {
public:
    CanonTable() = default;

    // Registers raw -> canonical for an attribute. The canonical value is made
    // a fixed point of the table by also registering its own normalized key;
    // a conflicting registration is an error.
    void add(std::string_view attribute, std::string_view raw, std::string_view canonical) {
        if (attribute == kLocationMapAttribute) {
            add_entry(location_map_, std::string(attribute), raw, canonical);
            add_entry(location_map_, std::string(attribute), canonical, canonical);
            return;
        }
        auto& table = tables_[std::string(attribute)];
        add_entry(table, std::string(attribute), raw, canonical);
        add_entry(table, std::string(attribute), canonical, canonical);
    }

    // Normalized lookup. For location-like attributes a "City, Region" form
    // falls back to the location map (region first, then city). Unmatched
    // values pass through key-normalized.
    CanonResult canonicalize(std::string_view attribute, std::string_view raw) const {
        const std::string key = normalize_key(raw);
        if (auto it = tables_.find(std::string(attribute)); it != tables_.end())
            if (auto hit = it->second.find(key); hit != it->second.end())
                return {hit->second, true};
        if (attribute == "location" || attribute == "hometown") {
            if (auto hit = location_map_.find(key); hit != location_map_.end())
                return {hit->second, true};
            if (auto comma = key.find(','); comma != std::string::npos) {
                const std::string city = normalize_key(key.substr(0, comma));
                const std::string region = normalize_key(key.substr(comma + 1));
                if (auto hit = location_map_.find(region); hit != location_map_.end())
                    return {hit->second, true};
                if (auto hit = location_map_.find(city); hit != location_map_.end())
                    return {hit->second, true};
            }
        }
        return {key, false};
    }

    static CanonTable parse(std::string_view text) {
        CanonTable table;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t eol = text.find('\n', pos);
            std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                          ? std::string_view::npos
                                                          : eol - pos);
            pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (line.empty() || line.front() == '#') continue;
            const std::size_t tab1 = line.find('\t');
            const std::size_t tab2 = tab1 == std::string_view::npos
                                         ? std::string_view::npos
                                         : line.find('\t', tab1 + 1);
            if (tab1 == std::string_view::npos || tab2 == std::string_view::npos)
                throw TableFormatError("canon table line " + std::to_string(line_no) +
                                       ": expected attribute<TAB>raw<TAB>canonical");
            const std::string_view attribute = line.substr(0, tab1);
            const std::string_view raw = line.substr(tab1 + 1, tab2 - tab1 - 1);
            const std::string_view canonical = line.substr(tab2 + 1);
            if (attribute.empty() || raw.empty() || canonical.empty())
                throw TableFormatError("canon table line " + std::to_string(line_no) +
                                       ": empty field");
            table.add(attribute, raw, canonical);
        }
        return table;
    }

    static CanonTable load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw TableFormatError("cannot open canon table: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse(buf.str());
    }

    bool empty() const { return tables_.empty() && location_map_.empty(); }
    std::size_t entry_count() const {
        std::size_t n = location_map_.size();
        for (const auto& [_, t] : tables_) n += t.size();
        return n;
    }

private:
    static void add_entry(std::map<std::string, std::string>& table,
                          const std::string& attribute, std::string_view raw,
                          std::string_view canonical) {
        const std::string key = normalize_key(raw);
        if (key.empty()) throw TableFormatError("canon table: empty key for " + attribute);
        auto [it, inserted] = table.emplace(key, std::string(canonical));
        if (!inserted && it->second != canonical)
            throw TableFormatError("canon table: conflicting entries for " + attribute + "/" +
                                   key + ": '" + it->second + "' vs '" +
                                   std::string(canonical) + "'");
    }

    std::map<std::string, std::map<std::string, std::string>> tables_;
    std::map<std::string, std::string> location_map_;
};

// ---------------------------------------------------------------------------
// Disclosure statistics.

// Integer percent, half-up. Absent when nothing was counted: an attribute with
// no observations is "not applicable", never 0%.
inline std::optional<int> missing_percent(std::size_t missing, std::size_t total) {
    if (total == 0) return std::nullopt;
    return static_cast<int>(
        std::llround(100.0 * static_cast<double>(missing) / static_cast<double>(total)));
}

struct AttributeStat {
    std::size_t missing_count = 0;
    std::size_t total_count = 0;
    std::optional<int> percent;  // missing_percent(missing_count, total_count)
};

struct GenderTotals {
    std::size_t faces = 0;
    std::size_t tags = 0;
    std::size_t albums = 0;
    std::size_t public_albums = 0;
};

inline constexpr std::string_view kGenderMissingBucket = "(not disclosed)";

struct DisclosureStats {
    std::map<std::string, AttributeStat> attributes;
    std::map<std::string, GenderTotals> by_gender;
};

// Missing percentages per profile attribute plus per-gender exposure totals.
// Faces and tags are counted over analysis-eligible albums; public_albums
// counts albums whose setting is exactly Public.
inline DisclosureStats compute_stats(const std::vector<UserRecord>& users) {
    if (users.empty()) throw std::invalid_argument("compute_stats: dataset must be non-empty");
    DisclosureStats stats;
    for (std::string_view name : kProfileAttributeNames)
        stats.attributes[std::string(name)] = {};
    for (const UserRecord& user : users) {
        for (std::string_view name : kProfileAttributeNames) {
            AttributeStat& s = stats.attributes[std::string(name)];
            ++s.total_count;
            if (!user.profile.attribute_present(name)) ++s.missing_count;
        }
        const std::string gender_key = user.profile.gender.value_or(std::string(kGenderMissingBucket));
        GenderTotals& totals = stats.by_gender[gender_key];
        for (const Album& album : user.albums) {
            ++totals.albums;
            if (album.setting == VisibilitySetting::Public) ++totals.public_albums;
            if (!analysis_eligible(album.setting)) continue;
            for (const PhotoAnnotation& photo : album.photos) {
                totals.faces += photo.faces.size();
                totals.tags += photo.tags.size();
            }
        }
    }
    for (auto& [_, s] : stats.attributes) s.percent = missing_percent(s.missing_count, s.total_count);
    return stats;
}

}  // namespace privlens
