#include "alphaseq/triplet.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "alphaseq/rng.hpp"

namespace alphaseq {

TripletScore score_triplet(const RgbaImage& fg, const RgbaImage& bg, const RgbaImage& comp,
                           double lambda, double alpha_floor) {
    if (!fg.same_size(bg) || !fg.same_size(comp)) {
        throw DimensionMismatch("score_triplet: triplet images must share dimensions");
    }

    double fg_sum  = 0.0;
    size_t fg_n    = 0;
    double rec_sum = 0.0;
    const RgbaImage recomp = composite_over(fg, bg);
    for (size_t i = 0; i < fg.pixel_count(); ++i) {
        const double a = fg.data[i * 4 + 3];
        if (a > alpha_floor) {
            double d2 = 0.0;
            for (int c = 0; c < 3; ++c) {
                const double d = fg.data[i * 4 + c] - comp.data[i * 4 + c] * a;
                d2 += d * d;
            }
            fg_sum += d2;
            ++fg_n;
        }
        double r2 = 0.0;
        for (int c = 0; c < 3; ++c) {
            const double d = recomp.data[i * 4 + c] - comp.data[i * 4 + c];
            r2 += d * d;
        }
        rec_sum += r2;
    }
    if (fg_n == 0) {
        throw EmptyForeground("score_triplet: no pixel with fg alpha above the support floor");
    }

    TripletScore score;
    score.mse_fg_comp     = fg_sum / static_cast<double>(fg_n);
    score.mse_recomp_comp = rec_sum / static_cast<double>(fg.pixel_count());
    score.lambda          = lambda;
    score.s = lambda * score.mse_fg_comp + (1.0 - lambda) * score.mse_recomp_comp;
    return score;
}

std::vector<std::string> rank_and_filter(std::vector<std::pair<std::string, double>> scored,
                                         size_t keep) {
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });
    std::vector<std::string> kept;
    kept.reserve(std::min(keep, scored.size()));
    for (size_t i = 0; i < scored.size() && i < keep; ++i) {
        kept.push_back(std::move(scored[i].first));
    }
    return kept;
}

void split_manifest(Manifest& manifest, size_t n_test, uint64_t seed) {
    const size_t n = manifest.records.size();
    if (n_test > n) {
        throw TooFewRecords("split_manifest: n_test exceeds record count");
    }
    // Fisher-Yates over record indices; explicit so the assignment only
    // depends on the seed, not on the standard library.
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    for (size_t i = n; i > 1; --i) {
        const size_t j = static_cast<size_t>(rng.uniform_int(i));
        std::swap(order[i - 1], order[j]);
    }
    for (size_t pos = 0; pos < n; ++pos) {
        manifest.records[order[pos]].split = pos + n_test >= n ? "test" : "train";
    }
}

namespace {

nlohmann::json record_to_json(const TripletRecord& r) {
    nlohmann::json j{
        {"id", r.id},
        {"fg_path", r.fg_path},
        {"bg_path", r.bg_path},
        {"comp_path", r.comp_path},
        {"caption_fg", r.caption_fg},
        {"caption_bg", r.caption_bg},
        {"caption_comp", r.caption_comp},
    };
    if (r.score) {
        j["score"] = {
            {"mse_fg_comp", r.score->mse_fg_comp},
            {"mse_recomp_comp", r.score->mse_recomp_comp},
            {"lambda", r.score->lambda},
            {"s", r.score->s},
        };
    }
    if (r.split) j["split"] = *r.split;
    return j;
}

TripletRecord record_from_json(const nlohmann::json& j) {
    TripletRecord r;
    r.id           = j.at("id").get<std::string>();
    r.fg_path      = j.at("fg_path").get<std::string>();
    r.bg_path      = j.at("bg_path").get<std::string>();
    r.comp_path    = j.at("comp_path").get<std::string>();
    r.caption_fg   = j.value("caption_fg", "");
    r.caption_bg   = j.value("caption_bg", "");
    r.caption_comp = j.value("caption_comp", "");
    if (j.contains("score")) {
        const auto& s = j.at("score");
        TripletScore score;
        score.mse_fg_comp     = s.at("mse_fg_comp").get<double>();
        score.mse_recomp_comp = s.at("mse_recomp_comp").get<double>();
        score.lambda          = s.at("lambda").get<double>();
        score.s               = s.at("s").get<double>();
        r.score = score;
    }
    if (j.contains("split")) r.split = j.at("split").get<std::string>();
    return r;
}

}  // namespace

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("load_manifest: cannot open " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("load_manifest: ") + e.what());
    }
    Manifest m;
    try {
        for (const auto& j : doc.at("records")) {
            m.records.push_back(record_from_json(j));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("load_manifest: ") + e.what());
    }
    // ids must be unique
    std::vector<std::string> ids;
    for (const auto& r : m.records) ids.push_back(r.id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw DecodeError("load_manifest: duplicate record id in " + path);
    }
    return m;
}

void save_manifest(const Manifest& manifest, const std::string& path) {
    nlohmann::json doc;
    doc["records"] = nlohmann::json::array();
    for (const auto& r : manifest.records) {
        doc["records"].push_back(record_to_json(r));
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("save_manifest: cannot open " + path + " for writing");
    }
    out << doc.dump(2) << "\n";
}

void write_score_table(const Manifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("write_score_table: cannot open " + path + " for writing");
    }
    out << "id\tmse_fg_comp\tmse_recomp_comp\ts\n";
    char buf[128];
    for (const auto& r : manifest.records) {
        if (!r.score) continue;
        std::snprintf(buf, sizeof(buf), "%s\t%.17g\t%.17g\t%.17g\n", r.id.c_str(),
                      r.score->mse_fg_comp, r.score->mse_recomp_comp, r.score->s);
        out << buf;
    }
}

}  // namespace alphaseq
