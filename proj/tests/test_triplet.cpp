#include <doctest.h>

#include <filesystem>
#include <set>

#include "alphaseq/rng.hpp"
#include "alphaseq/triplet.hpp"

using namespace alphaseq;

namespace {

RgbaImage random_image(int w, int h, Rng& rng, bool opaque = false) {
    RgbaImage img(w, h);
    for (double& v : img.data) v = rng.uniform();
    if (opaque) {
        for (size_t i = 0; i < img.pixel_count(); ++i) img.data[i * 4 + 3] = 1.0;
    }
    return img;
}

}  // namespace

TEST_CASE("score_triplet: perfectly consistent triplet scores zero") {
    Rng rng(21);
    RgbaImage fg = random_image(6, 6, rng, /*opaque=*/true);
    RgbaImage bg = random_image(6, 6, rng);
    RgbaImage comp = fg;  // opaque fg over anything composites to fg
    const TripletScore s = score_triplet(fg, bg, comp, 0.6);
    CHECK(s.mse_fg_comp == doctest::Approx(0.0));
    CHECK(s.mse_recomp_comp == doctest::Approx(0.0));
    CHECK(s.s == doctest::Approx(0.0));
}

TEST_CASE("score_triplet: 1x1 hand-computed example") {
    RgbaImage fg(1, 1, 0.8, 0.8, 0.8, 1.0);
    RgbaImage comp(1, 1, 0.6, 0.6, 0.6, 1.0);
    RgbaImage bg(1, 1, 0.3, 0.9, 0.1, 1.0);
    const TripletScore s = score_triplet(fg, bg, comp, 0.6);
    CHECK(s.mse_fg_comp == doctest::Approx(0.12).epsilon(1e-12));
    CHECK(s.mse_recomp_comp == doctest::Approx(0.12).epsilon(1e-12));
    CHECK(s.s == doctest::Approx(0.12).epsilon(1e-12));
}

TEST_CASE("score_triplet: lambda 1 ignores the recomposite term") {
    Rng rng(22);
    const RgbaImage fg = random_image(4, 4, rng, true);
    const RgbaImage bg = random_image(4, 4, rng);
    const RgbaImage comp = random_image(4, 4, rng);
    const TripletScore s = score_triplet(fg, bg, comp, 1.0);
    CHECK(s.s == s.mse_fg_comp);
}

TEST_CASE("score_triplet: recomposite of its own composite is exactly zero") {
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const RgbaImage fg = random_image(5, 5, rng);
        const RgbaImage bg = random_image(5, 5, rng);
        const RgbaImage comp = composite_over(fg, bg);
        // random alphas make an empty support region vanishingly unlikely
        const TripletScore s = score_triplet(fg, bg, comp, 0.6);
        CHECK(s.mse_recomp_comp == 0.0);
        CHECK(s.s == doctest::Approx(0.6 * s.mse_fg_comp));
    }
}

TEST_CASE("score_triplet: score invariant on the lambda mix") {
    Rng rng(24);
    const RgbaImage fg = random_image(4, 4, rng, true);
    const RgbaImage bg = random_image(4, 4, rng);
    const RgbaImage comp = random_image(4, 4, rng);
    const TripletScore a = score_triplet(fg, bg, comp, 0.6);
    CHECK(a.s == doctest::Approx(0.6 * a.mse_fg_comp + 0.4 * a.mse_recomp_comp).epsilon(1e-15));
    // monotone in each component: raising lambda moves s toward mse_fg_comp
    const TripletScore b = score_triplet(fg, bg, comp, 0.9);
    if (a.mse_fg_comp > a.mse_recomp_comp) {
        CHECK(b.s >= a.s);
    } else {
        CHECK(b.s <= a.s);
    }
}

TEST_CASE("score_triplet: empty support region throws") {
    RgbaImage fg(2, 2, 0.5, 0.5, 0.5, 0.0);  // alpha below the 0.05 floor
    RgbaImage bg(2, 2);
    RgbaImage comp(2, 2);
    CHECK_THROWS_AS(score_triplet(fg, bg, comp, 0.6), EmptyForeground);
}

TEST_CASE("score_triplet: dimension mismatch throws") {
    CHECK_THROWS_AS(score_triplet(RgbaImage(2, 2), RgbaImage(2, 3), RgbaImage(2, 2), 0.6),
                    DimensionMismatch);
}

TEST_CASE("rank_and_filter: sorts ascending and keeps K") {
    std::vector<std::pair<std::string, double>> scored{{"a", 3.0}, {"b", 1.0}, {"c", 2.0}};
    CHECK(rank_and_filter(scored, 2) == std::vector<std::string>{"b", "c"});
    CHECK(rank_and_filter(scored, 10) == std::vector<std::string>{"b", "c", "a"});
    CHECK(rank_and_filter(scored, 0).empty());
}

TEST_CASE("rank_and_filter: ties break by ascending id, kept set is a prefix") {
    std::vector<std::pair<std::string, double>> scored{
        {"z", 1.0}, {"m", 1.0}, {"a", 1.0}, {"q", 0.5}};
    const auto full = rank_and_filter(scored, 4);
    CHECK(full == std::vector<std::string>{"q", "a", "m", "z"});
    for (size_t k = 0; k <= 4; ++k) {
        const auto kept = rank_and_filter(scored, k);
        CHECK(std::equal(kept.begin(), kept.end(), full.begin()));
    }
}

TEST_CASE("split_manifest: 1000 records split 900/100") {
    Manifest m;
    for (int i = 0; i < 1000; ++i) {
        m.records.push_back({"id" + std::to_string(i), "", "", "", "", "", "", {}, {}});
    }
    split_manifest(m, 100, 7);
    size_t train = 0, test = 0;
    for (const auto& r : m.records) {
        REQUIRE(r.split.has_value());
        (*r.split == "train" ? train : test) += 1;
    }
    CHECK(train == 900);
    CHECK(test == 100);
}

TEST_CASE("split_manifest: n_test 0 means all train, same seed same split") {
    Manifest m;
    for (int i = 0; i < 37; ++i) {
        m.records.push_back({"r" + std::to_string(i), "", "", "", "", "", "", {}, {}});
    }
    Manifest a = m, b = m;
    split_manifest(a, 0, 3);
    for (const auto& r : a.records) CHECK(*r.split == "train");

    split_manifest(a, 10, 99);
    split_manifest(b, 10, 99);
    for (size_t i = 0; i < a.records.size(); ++i) {
        CHECK(*a.records[i].split == *b.records[i].split);
    }
    CHECK_THROWS_AS(split_manifest(b, 38, 1), TooFewRecords);
}

TEST_CASE("manifest: json round trip with scores and splits") {
    const auto dir = std::filesystem::temp_directory_path() / "alphaseq-test-manifest";
    std::filesystem::create_directories(dir);

    Manifest m;
    TripletRecord r;
    r.id         = "t0001";
    r.fg_path    = "fg.png";
    r.bg_path    = "bg.png";
    r.comp_path  = "comp.png";
    r.caption_fg = "a glass cup";
    r.caption_bg = "a wooden table";
    r.caption_comp = "a glass cup on a wooden table";
    r.score = TripletScore{0.01, 0.002, 0.6, 0.6 * 0.01 + 0.4 * 0.002};
    r.split = "train";
    m.records.push_back(r);
    m.records.push_back({"t0002", "f.png", "b.png", "c.png", "", "", "", {}, {}});

    const auto path = (dir / "manifest.json").string();
    save_manifest(m, path);
    const Manifest back = load_manifest(path);
    REQUIRE(back.records.size() == 2);
    CHECK(back.records[0].id == "t0001");
    CHECK(back.records[0].caption_comp == "a glass cup on a wooden table");
    REQUIRE(back.records[0].score.has_value());
    CHECK(back.records[0].score->s == doctest::Approx(r.score->s).epsilon(1e-15));
    CHECK(back.records[0].split == "train");
    CHECK_FALSE(back.records[1].score.has_value());

    write_score_table(back, (dir / "scores.tsv").string());
    CHECK(std::filesystem::file_size(dir / "scores.tsv") > 0);
}

TEST_CASE("manifest: duplicate ids are rejected") {
    const auto dir = std::filesystem::temp_directory_path() / "alphaseq-test-manifest";
    std::filesystem::create_directories(dir);
    Manifest m;
    m.records.push_back({"dup", "", "", "", "", "", "", {}, {}});
    m.records.push_back({"dup", "", "", "", "", "", "", {}, {}});
    const auto path = (dir / "dup.json").string();
    save_manifest(m, path);
    CHECK_THROWS_AS(load_manifest(path), DecodeError);
}
