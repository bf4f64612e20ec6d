#include <gtest/gtest.h>

#include "privlens/labeling.hpp"
#include "privlens/synth.hpp"

#include "support/naive_ref.hpp"

using namespace privlens;

namespace {

const GeometryConfig kGeometry;

PhotoAnnotation photo(std::string id, std::size_t n_faces, std::size_t n_tags) {
    std::vector<FaceRect> faces;
    for (std::size_t f = 0; f < n_faces; ++f)
        faces.emplace_back(0.02 + 0.1 * static_cast<double>(f), 0.1, 0.05, 0.05);
    std::vector<TagPoint> tags;
    for (std::size_t t = 0; t < n_tags; ++t)
        tags.emplace_back(0.02 + 0.1 * static_cast<double>(t), 0.9);
    return PhotoAnnotation(std::move(id), std::move(faces), std::move(tags));
}

UserRecord user_with(std::vector<Album> albums) {
    return UserRecord("u", {}, std::move(albums));
}

}  // namespace

TEST(Exposure, CountsOnlyEligibleAlbums) {
    std::vector<Album> albums;
    albums.emplace_back("pub", "", VisibilitySetting::Public,
                        std::vector<PhotoAnnotation>{photo("p1", 2, 1), photo("p2", 0, 0)});
    albums.emplace_back("fof", "", VisibilitySetting::FriendsOfFriends,
                        std::vector<PhotoAnnotation>{photo("p3", 1, 3)});
    albums.emplace_back("priv", "", VisibilitySetting::Friends,
                        std::vector<PhotoAnnotation>{photo("p4", 5, 5), photo("p5", 1, 0)});
    const UserExposure e = compute_exposure(user_with(std::move(albums)), kGeometry);
    EXPECT_EQ(e.n_photos, 3u);
    EXPECT_EQ(e.n_public_or_fof_photos, 3u);
    EXPECT_EQ(e.n_total_photos, 5u);
    EXPECT_EQ(e.n_faces, 3u);
    EXPECT_EQ(e.n_tags, 4u);
    EXPECT_EQ(e.n_photos_with_faces, 2u);
    EXPECT_EQ(e.max_level, PrivacyLevel::OffFaceTagsGtFaces);  // p3: 3 tags > 1 face, off
    EXPECT_EQ(e.level_histogram[static_cast<std::size_t>(PrivacyLevel::NoFaceNoTag)], 1u);
    EXPECT_EQ(e.level_histogram[static_cast<std::size_t>(PrivacyLevel::OffFaceTagsLtFaces)],
              1u);
    EXPECT_EQ(e.level_histogram[static_cast<std::size_t>(PrivacyLevel::OffFaceTagsGtFaces)],
              1u);
}

TEST(ThreeClass, RatioOverAllAlbums) {
    // No photos anywhere -> F, even with empty albums.
    std::vector<Album> none;
    none.emplace_back("a", "", VisibilitySetting::Public);
    EXPECT_EQ(label_3class(compute_exposure(user_with(std::move(none)), kGeometry)).value,
              Category::F);

    // 1 of 3 photos open: ratio 1/3 < 0.5 -> P.
    std::vector<Album> mostly_private;
    mostly_private.emplace_back("a", "", VisibilitySetting::Public,
                                std::vector<PhotoAnnotation>{photo("p1", 0, 0)});
    mostly_private.emplace_back("b", "", VisibilitySetting::OnlyMe,
                                std::vector<PhotoAnnotation>{photo("p2", 0, 0),
                                                             photo("p3", 0, 0)});
    EXPECT_EQ(
        label_3class(compute_exposure(user_with(std::move(mostly_private)), kGeometry)).value,
        Category::P);

    // Exactly half open -> U (boundary is inclusive for the revealing side).
    std::vector<Album> half;
    half.emplace_back("a", "", VisibilitySetting::FriendsOfFriends,
                      std::vector<PhotoAnnotation>{photo("p1", 0, 0)});
    half.emplace_back("b", "", VisibilitySetting::Custom,
                      std::vector<PhotoAnnotation>{photo("p2", 0, 0)});
    EXPECT_EQ(label_3class(compute_exposure(user_with(std::move(half)), kGeometry)).value,
              Category::U);
}

TEST(FiveClass, RuleBranches) {
    auto label = [](std::vector<Album> albums, FiveClassRule rule = FiveClassRule::PhotoFraction) {
        LabelingConfig cfg;
        cfg.five_class_rule = rule;
        return label_5class(compute_exposure(user_with(std::move(albums)), kGeometry), cfg)
            .value;
    };

    // No eligible photos -> F even when private albums hold photos.
    std::vector<Album> private_only;
    private_only.emplace_back("a", "", VisibilitySetting::Friends,
                              std::vector<PhotoAnnotation>{photo("p1", 3, 3)});
    EXPECT_EQ(label(std::move(private_only)), Category::F);

    // Every eligible photo has a face -> U.
    std::vector<Album> all_faces;
    all_faces.emplace_back("a", "", VisibilitySetting::Public,
                           std::vector<PhotoAnnotation>{photo("p1", 1, 0), photo("p2", 2, 0)});
    EXPECT_EQ(label(std::move(all_faces)), Category::U);

    // No faces at all -> FP.
    std::vector<Album> no_faces;
    no_faces.emplace_back("a", "", VisibilitySetting::Public,
                          std::vector<PhotoAnnotation>{photo("p1", 0, 1), photo("p2", 0, 0)});
    EXPECT_EQ(label(std::move(no_faces)), Category::FP);

    // 1 of 3 photos has a face: fraction 1/3 < 0.5 -> P.
    std::vector<Album> sparse;
    sparse.emplace_back("a", "", VisibilitySetting::Public,
                        std::vector<PhotoAnnotation>{photo("p1", 2, 0), photo("p2", 0, 0),
                                                     photo("p3", 0, 0)});
    EXPECT_EQ(label(std::move(sparse)), Category::P);

    // 1 of 2 photos has a face: fraction exactly 0.5 -> PU.
    std::vector<Album> half;
    half.emplace_back("a", "", VisibilitySetting::Public,
                      std::vector<PhotoAnnotation>{photo("p1", 1, 0), photo("p2", 0, 0)});
    EXPECT_EQ(label(std::move(half)), Category::PU);

    // Raw-ratio reading counts faces, not photos: 2 faces on 1 of 5 photos is
    // a 0.4 ratio -> P under raw_ratio but also P under photo_fraction (1/5).
    // 3 faces on 1 of 5 photos: photo_fraction 1/5 -> P, raw_ratio 3/5 -> PU.
    std::vector<Album> heavy;
    heavy.emplace_back("a", "", VisibilitySetting::Public,
                       std::vector<PhotoAnnotation>{photo("p1", 3, 0), photo("p2", 0, 0),
                                                    photo("p3", 0, 0), photo("p4", 0, 0),
                                                    photo("p5", 0, 0)});
    std::vector<Album> heavy_copy = heavy;
    EXPECT_EQ(label(std::move(heavy)), Category::P);
    EXPECT_EQ(label(std::move(heavy_copy), FiveClassRule::RawRatio), Category::PU);
}

TEST(SevenClass, AllBranches) {
    auto label = [](std::size_t faces, std::size_t tags, bool any_photos = true) {
        std::vector<Album> albums;
        std::vector<PhotoAnnotation> photos;
        if (any_photos) photos.push_back(photo("p1", faces, tags));
        albums.emplace_back("a", "", VisibilitySetting::Public, std::move(photos));
        return label_7class(compute_exposure(user_with(std::move(albums)), kGeometry)).value;
    };
    EXPECT_EQ(label(0, 0, false), Category::F);
    EXPECT_EQ(label(0, 0), Category::FP);
    EXPECT_EQ(label(2, 0), Category::Pplus);
    EXPECT_EQ(label(0, 2), Category::P);
    EXPECT_EQ(label(3, 1), Category::Pminus);
    EXPECT_EQ(label(2, 2), Category::PU);
    EXPECT_EQ(label(1, 2), Category::U);
}

TEST(LabelUser, BundlesAllThreeSchemes) {
    std::vector<Album> albums;
    albums.emplace_back("a", "", VisibilitySetting::Public,
                        std::vector<PhotoAnnotation>{photo("p1", 1, 2)});
    const UserLabels labels =
        label_user(compute_exposure(user_with(std::move(albums)), kGeometry));
    EXPECT_EQ(labels.three.scheme, Scheme::ThreeClass);
    EXPECT_EQ(labels.five.scheme, Scheme::FiveClass);
    EXPECT_EQ(labels.seven.scheme, Scheme::SevenClass);
    EXPECT_EQ(labels.three.value, Category::U);
    EXPECT_EQ(labels.five.value, Category::U);
    EXPECT_EQ(labels.seven.value, Category::U);
}

TEST(LabelScheme, MatchesPerSchemeFunctions) {
    std::vector<Album> albums;
    albums.emplace_back("a", "", VisibilitySetting::Public,
                        std::vector<PhotoAnnotation>{photo("p1", 2, 1)});
    const UserExposure e = compute_exposure(user_with(std::move(albums)), kGeometry);
    EXPECT_EQ(label_scheme(e, Scheme::ThreeClass), label_3class(e));
    EXPECT_EQ(label_scheme(e, Scheme::FiveClass), label_5class(e));
    EXPECT_EQ(label_scheme(e, Scheme::SevenClass), label_7class(e));
}

// Differential: library rules vs. the naive transcriptions on generated data.
TEST(LabelingDifferential, AgreesWithNaiveReferenceOnSynth) {
    SynthConfig config;
    config.seed = 99;
    config.n_users = 500;
    const SynthResult result = generate(config);
    for (const UserRecord& user : result.dataset.users) {
        const UserExposure e = compute_exposure(user, kGeometry);
        ASSERT_EQ(label_3class(e).value, naive::label3(user)) << user.user_id;
        ASSERT_EQ(label_5class(e).value, naive::label5(user)) << user.user_id;
        ASSERT_EQ(label_7class(e).value, naive::label7(user)) << user.user_id;
    }
}
