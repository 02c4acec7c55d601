#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "alphaseq/error.hpp"
#include "alphaseq/image.hpp"

namespace alphaseq {

// Consistency score of one (foreground, background, composite) triplet.
// s == lambda * mse_fg_comp + (1 - lambda) * mse_recomp_comp by construction.
struct TripletScore {
    double mse_fg_comp     = 0.0;
    double mse_recomp_comp = 0.0;
    double lambda          = 0.0;
    double s               = 0.0;
};

struct TripletRecord {
    std::string id;
    std::string fg_path;
    std::string bg_path;
    std::string comp_path;
    std::string caption_fg;
    std::string caption_bg;
    std::string caption_comp;
    std::optional<TripletScore> score;
    std::optional<std::string> split;  // "train" or "test"
};

struct Manifest {
    std::vector<TripletRecord> records;
};

inline constexpr double kDefaultScoreLambda = 0.6;
inline constexpr double kAlphaSupportFloor  = 0.05;  // membership threshold for the fg region

// Foreground consistency is measured against the alpha-scaled composite over
// the region where fg alpha exceeds the support floor; recomposite
// consistency compares composite_over(fg, bg) with comp over all pixels.
TripletScore score_triplet(const RgbaImage& fg, const RgbaImage& bg, const RgbaImage& comp,
                           double lambda, double alpha_floor = kAlphaSupportFloor);

// Sort ascending by score (lower = more consistent), ties broken by ascending
// id, and keep the first min(keep, N).
std::vector<std::string> rank_and_filter(std::vector<std::pair<std::string, double>> scored,
                                         size_t keep);

// Seeded deterministic shuffle; the last n_test records are tagged "test",
// the rest "train".
void split_manifest(Manifest& manifest, size_t n_test, uint64_t seed);

// manifest persistence (JSON document, one object per record)
Manifest load_manifest(const std::string& path);
void save_manifest(const Manifest& manifest, const std::string& path);

// flat delimited score table: id <TAB> mse_fg_comp <TAB> mse_recomp_comp <TAB> s
void write_score_table(const Manifest& manifest, const std::string& path);

}  // namespace alphaseq
