#include <gtest/gtest.h>

#include <string>

#include "privlens/prep.hpp"
#include "privlens/rng.hpp"

using namespace privlens;

#ifndef PRIVLENS_DATA_DIR
#error "PRIVLENS_DATA_DIR must point at the repo data/ directory"
#endif

namespace {

const CanonTable& default_table() {
    static const CanonTable table =
        CanonTable::load(std::string(PRIVLENS_DATA_DIR) + "/canon_default.tsv");
    return table;
}

}  // namespace

TEST(NormalizeKey, TrimsAndFoldsAscii) {
    EXPECT_EQ(normalize_key("  Muslim "), "muslim");
    EXPECT_EQ(normalize_key("HIGH School"), "high school");
    EXPECT_EQ(normalize_key("\t x \n"), "x");
    EXPECT_EQ(normalize_key(""), "");
    // Non-ASCII bytes pass through untouched.
    EXPECT_EQ(normalize_key(" مسلم "), "مسلم");
}

TEST(CanonTable, DefaultTableGoldens) {
    const CanonTable& t = default_table();
    EXPECT_EQ(t.canonicalize("religion", "islam").value, "Muslim");
    EXPECT_TRUE(t.canonicalize("religion", "islam").mapped);
    EXPECT_EQ(t.canonicalize("religion", " MUSLIM ").value, "Muslim");
    EXPECT_EQ(t.canonicalize("religion", "مسلمة").value, "Muslim");
    EXPECT_EQ(t.canonicalize("religion", "Christian-Catholic").value, "Christianity");
    EXPECT_EQ(t.canonicalize("education", "Grad").value, "Graduate");
    EXPECT_EQ(t.canonicalize("education", "undergrad").value, "Undergraduate");
    EXPECT_EQ(t.canonicalize("degree", "bachelor").value, "BSc");
    EXPECT_EQ(t.canonicalize("gender", "f").value, "Female");
    // "City, Region" resolves through the location map (region wins).
    EXPECT_EQ(t.canonicalize("location", "Boston, MA").value, "USA");
    EXPECT_EQ(t.canonicalize("hometown", "Kent, Ohio").value, "USA");
    EXPECT_EQ(t.canonicalize("location", "toronto").value, "Canada");
    EXPECT_EQ(t.canonicalize("hometown", "Cairo").value, "Egypt");
    // Unmapped values pass through normalized, flagged as unmapped.
    const CanonResult miss = t.canonicalize("religion", "Pastafarian");
    EXPECT_EQ(miss.value, "pastafarian");
    EXPECT_FALSE(miss.mapped);
}

TEST(CanonTable, CanonicalValuesAreFixedPoints) {
    const CanonTable& t = default_table();
    for (const char* v : {"Muslim", "Christianity", "Judaism", "Buddhism", "Hinduism"})
        EXPECT_EQ(t.canonicalize("religion", v).value, v);
    for (const char* v : {"USA", "Canada", "Egypt", "Germany", "India", "Brazil"}) {
        EXPECT_EQ(t.canonicalize("location", v).value, v);
        EXPECT_EQ(t.canonicalize("hometown", v).value, v);
    }
    EXPECT_EQ(t.canonicalize("education", "High School").value, "High School");
}

TEST(CanonTable, CanonicalizeIsIdempotentOnRandomInput) {
    const CanonTable& t = default_table();
    const char* attributes[] = {"religion", "education", "gender", "location", "hometown"};
    Rng rng(20240822u);
    for (int i = 0; i < 1000; ++i) {
        const char* attribute = attributes[draw_below(rng, 5)];
        std::string raw;
        const std::uint64_t len = draw_below(rng, 12);
        for (std::uint64_t j = 0; j < len; ++j) {
            switch (draw_below(rng, 6)) {
                case 0: raw.push_back(' '); break;
                case 1: raw.push_back(','); break;
                case 2: raw.push_back(static_cast<char>(0xd9));  // Arabic lead byte
                        raw.push_back(static_cast<char>(0x85));
                        break;
                default:
                    raw.push_back(static_cast<char>('A' + draw_below(rng, 26)));
            }
        }
        const std::string once = t.canonicalize(attribute, raw).value;
        const std::string twice = t.canonicalize(attribute, once).value;
        ASSERT_EQ(once, twice) << attribute << " '" << raw << "'";
    }
}

TEST(CanonTable, ParseRejectsMalformedLines) {
    try {
        CanonTable::parse("religion\tislam\n");
        FAIL() << "expected TableFormatError";
    } catch (const TableFormatError& e) {
        EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
    }
    try {
        CanonTable::parse("# header\nreligion\tislam\tMuslim\nno tabs here\n");
        FAIL() << "expected TableFormatError";
    } catch (const TableFormatError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    EXPECT_THROW(CanonTable::parse("religion\t\tMuslim\n"), TableFormatError);
    EXPECT_THROW(CanonTable::parse("\tislam\tMuslim\n"), TableFormatError);
}

TEST(CanonTable, ParseRejectsConflicts) {
    EXPECT_THROW(CanonTable::parse("religion\tislam\tMuslim\nreligion\tislam\tIslam\n"),
                 TableFormatError);
    // The canonical side is auto-registered, so remapping it also conflicts.
    EXPECT_THROW(CanonTable::parse("a\tx\tY\na\ty\tZ\n"), TableFormatError);
    // Re-stating the same mapping is fine.
    const CanonTable t =
        CanonTable::parse("religion\tislam\tMuslim\nreligion\tislam\tMuslim\n");
    EXPECT_EQ(t.canonicalize("religion", "islam").value, "Muslim");
}

TEST(CanonTable, ParseAcceptsCommentsBlanksAndCrlf) {
    const CanonTable t = CanonTable::parse("# c\n\nreligion\tislam\tMuslim\r\n");
    EXPECT_EQ(t.entry_count(), 2u);  // raw + canonical fixed point
    EXPECT_FALSE(t.empty());
    EXPECT_TRUE(CanonTable::parse("").empty());
}

TEST(MissingPercent, HalfUpAndNotApplicable) {
    EXPECT_EQ(missing_percent(0, 0), std::nullopt);
    EXPECT_EQ(missing_percent(0, 7), 0);
    EXPECT_EQ(missing_percent(1, 2), 50);
    EXPECT_EQ(missing_percent(1, 3), 33);
    EXPECT_EQ(missing_percent(2, 3), 67);
    EXPECT_EQ(missing_percent(1, 8), 13);  // 12.5 rounds up
    EXPECT_EQ(missing_percent(94, 100), 94);
    EXPECT_EQ(missing_percent(5, 5), 100);
}

TEST(ComputeStats, ReproducesConstructedMissingPercentages) {
    const std::map<std::string, int> expected = {
        {"age", 0},       {"gender", 0},         {"hometown", 23},
        {"location", 20}, {"relationship", 41},  {"religion", 65},
        {"political_view", 77}, {"education", 21}, {"degree", 94},
    };
    std::vector<UserRecord> users;
    for (int i = 0; i < 100; ++i) {
        UserProfile p;
        p.age = 30;
        p.gender = "Female";
        if (i >= expected.at("hometown")) p.hometown = "USA";
        if (i >= expected.at("location")) p.location = "USA";
        if (i >= expected.at("relationship")) p.relationship = "Single";
        if (i >= expected.at("religion")) p.religion = "Muslim";
        if (i >= expected.at("political_view")) p.political_view = "Liberal";
        if (i >= expected.at("education")) p.education = "Graduate";
        if (i >= expected.at("degree")) p.degree = "MSc";
        users.emplace_back("user_" + std::to_string(i), std::move(p), std::vector<Album>{});
    }
    const DisclosureStats stats = compute_stats(users);
    ASSERT_EQ(stats.attributes.size(), kProfileAttributeNames.size());
    for (const auto& [name, want] : expected) {
        const AttributeStat& s = stats.attributes.at(name);
        EXPECT_EQ(s.total_count, 100u) << name;
        EXPECT_EQ(s.missing_count, static_cast<std::size_t>(want)) << name;
        ASSERT_TRUE(s.percent.has_value()) << name;
        EXPECT_EQ(*s.percent, want) << name;
    }
}

TEST(ComputeStats, GenderTotalsSplitEligibleExposure) {
    auto make_user = [](std::string id, std::optional<std::string> gender,
                        VisibilitySetting setting, std::size_t faces, std::size_t tags) {
        UserProfile p;
        p.gender = std::move(gender);
        std::vector<FaceRect> f;
        for (std::size_t i = 0; i < faces; ++i) f.emplace_back(0.01 + 0.1 * i, 0.1, 0.05, 0.05);
        std::vector<TagPoint> t;
        for (std::size_t i = 0; i < tags; ++i) t.emplace_back(0.01 + 0.1 * i, 0.9);
        std::vector<Album> albums;
        albums.emplace_back("a1", "", setting,
                            std::vector<PhotoAnnotation>{
                                PhotoAnnotation("p1", std::move(f), std::move(t))});
        return UserRecord(std::move(id), std::move(p), std::move(albums));
    };
    std::vector<UserRecord> users;
    users.push_back(make_user("u1", "Female", VisibilitySetting::Public, 2, 1));
    users.push_back(make_user("u2", "Female", VisibilitySetting::FriendsOfFriends, 1, 4));
    users.push_back(make_user("u3", "Male", VisibilitySetting::Public, 3, 0));
    users.push_back(make_user("u4", "Male", VisibilitySetting::Friends, 9, 9));  // ineligible
    users.push_back(make_user("u5", std::nullopt, VisibilitySetting::Public, 1, 1));

    const DisclosureStats stats = compute_stats(users);
    ASSERT_EQ(stats.by_gender.size(), 3u);
    const GenderTotals& female = stats.by_gender.at("Female");
    EXPECT_EQ(female.faces, 3u);
    EXPECT_EQ(female.tags, 5u);
    EXPECT_EQ(female.albums, 2u);
    EXPECT_EQ(female.public_albums, 1u);
    const GenderTotals& male = stats.by_gender.at("Male");
    EXPECT_EQ(male.faces, 3u);  // u4's photos are behind Friends
    EXPECT_EQ(male.tags, 0u);
    EXPECT_EQ(male.albums, 2u);
    EXPECT_EQ(male.public_albums, 1u);
    const GenderTotals& missing = stats.by_gender.at(std::string(kGenderMissingBucket));
    EXPECT_EQ(missing.faces, 1u);
    EXPECT_EQ(missing.tags, 1u);

    EXPECT_THROW(compute_stats({}), std::invalid_argument);
}
