#include "alphaseq/eval.hpp"

#include <cmath>

#include <json.hpp>

namespace alphaseq {

namespace {

double pow10i(int e) { return std::pow(10.0, e); }

double mse_of(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

double psnr_of_mse(double mse, double cap_db) {
    if (mse == 0.0) return cap_db;
    return -10.0 * std::log10(mse);
}

}  // namespace

double MatteMetrics::reported_sad() const { return sad * pow10i(report_exp_sad); }
double MatteMetrics::reported_mse() const { return mse * pow10i(report_exp_mse); }
double MatteMetrics::reported_mad() const { return mad * pow10i(report_exp_mad); }

MatteMetrics matte_metrics(const AlphaMap& pred, const AlphaMap& gt) {
    if (pred.width != gt.width || pred.height != gt.height) {
        throw DimensionMismatch("matte_metrics: prediction and ground truth dimensions differ");
    }
    MatteMetrics m;
    for (size_t i = 0; i < pred.values.size(); ++i) {
        const double d = pred.values[i] - gt.values[i];
        m.sad += std::abs(d);
        m.mse += d * d;
    }
    const double n = static_cast<double>(pred.values.size());
    m.mse /= n;
    m.mad = m.sad / n;
    return m;
}

double psnr(const AlphaMap& a, const AlphaMap& b, double cap_db) {
    if (a.width != b.width || a.height != b.height) {
        throw DimensionMismatch("psnr: image dimensions differ");
    }
    return psnr_of_mse(mse_of(a.values, b.values), cap_db);
}

double psnr(const RgbaImage& a, const RgbaImage& b, double cap_db) {
    if (!a.same_size(b)) {
        throw DimensionMismatch("psnr: image dimensions differ");
    }
    return psnr_of_mse(mse_of(a.data, b.data), cap_db);
}

namespace {

const std::string kScorePrompt =
    R"(You are an expert in image quality assessment.
You are given a blended image and its associated text prompt.
Please carefully analyze this blended image according to the following three aspects:
1. Visual quality and clarity
2. Alignment with the input text prompt
3. Overall composition and coherence

Respond ONLY with a JSON object in this exact format:
{"better": "<A|B|tie>", "reasoning": "<brief explanation based on the three aspects>"})";

const std::string kFg2FullPairwise =
    R"(You are an expert in image quality assessment.
You are given four items:
1. A foreground object (input condition)
2. A text prompt describing the desired scene (ground-truth text prompt)
3. A blended image generated by Method A conditioned on this foreground and prompt
4. A blended image generated by Method B conditioned on this foreground and prompt

Your goal is to compare Method A and Method B and decide which generated image is overall better.

Compare the two generated images according to the following three aspects:
1. Visual quality and clarity
2. Alignment with the input text prompt
3. How well the given foreground is preserved and incorporated

Then, decide which method is overall better (you may also choose a tie if they are comparable).

Respond ONLY with a JSON object in this exact format:
{"better": "<A|B|tie>", "reasoning": "<brief explanation based on the three aspects>"})";

const std::string kBg2FullPairwise =
    R"(You are an expert in image quality assessment.
You are given four items:
1. A background image (input condition)
2. A text prompt describing the desired scene (ground-truth text prompt)
3. A blended image generated by Method A conditioned on this background and prompt
4. A blended image generated by Method B conditioned on this background and prompt

Your goal is to compare Method A and Method B and decide which generated image is overall better.

Compare the two generated images according to the following three aspects:
1. Visual quality and clarity
2. Alignment with the input text prompt
3. How well the given background is preserved and incorporated

Then, decide which method is overall better (you may also choose a tie if they are comparable).

Respond ONLY with a JSON object in this exact format:
{"better": "<A|B|tie>", "reasoning": "<brief explanation based on the three aspects>"})";

}  // namespace

const std::string& build_judge_prompt(JudgeTask task, JudgeRole role) {
    if (role == JudgeRole::GroundTruthScoring) {
        return kScorePrompt;  // shared by both tasks
    }
    return task == JudgeTask::Fg2Full ? kFg2FullPairwise : kBg2FullPairwise;
}

const std::string& build_judge_prompt(const std::string& task, const std::string& role) {
    JudgeTask t;
    if (task == "fg2full") {
        t = JudgeTask::Fg2Full;
    } else if (task == "bg2full") {
        t = JudgeTask::Bg2Full;
    } else {
        throw UnknownTemplate("build_judge_prompt: unknown task '" + task + "'");
    }
    JudgeRole r;
    if (role == "pairwise") {
        r = JudgeRole::Pairwise;
    } else if (role == "score") {
        r = JudgeRole::GroundTruthScoring;
    } else {
        throw UnknownTemplate("build_judge_prompt: unknown role '" + role + "'");
    }
    return build_judge_prompt(t, r);
}

Verdict parse_verdict(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError(std::string("parse_verdict: not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("better") || !doc.contains("reasoning") ||
        !doc["better"].is_string() || !doc["reasoning"].is_string()) {
        throw DecodeError("parse_verdict: response does not match the required schema");
    }
    Verdict v;
    const std::string better = doc["better"].get<std::string>();
    if (better == "A") {
        v.choice = Choice::A;
    } else if (better == "B") {
        v.choice = Choice::B;
    } else if (better == "tie") {
        v.choice = Choice::Tie;
    } else {
        throw DecodeError("parse_verdict: 'better' must be A, B or tie, got '" + better + "'");
    }
    v.reasoning = doc["reasoning"].get<std::string>();
    return v;
}

Verdict combine_swapped(const Verdict& v_original, const Verdict& v_swapped) {
    Verdict remapped = v_swapped;
    if (v_swapped.choice == Choice::A) {
        remapped.choice = Choice::B;
    } else if (v_swapped.choice == Choice::B) {
        remapped.choice = Choice::A;
    }
    if (remapped.choice == v_original.choice) {
        return v_original;
    }
    return Verdict{Choice::Tie, ""};
}

Verdict majority_vote(const std::vector<Verdict>& verdicts) {
    if (verdicts.empty()) {
        throw EmptyList("majority_vote: empty verdict list");
    }
    size_t counts[3] = {0, 0, 0};
    for (const Verdict& v : verdicts) {
        counts[static_cast<int>(v.choice)] += 1;
    }
    const size_t best = std::max(counts[0], std::max(counts[1], counts[2]));
    int winners = 0;
    Choice winner = Choice::Tie;
    for (int c = 0; c < 3; ++c) {
        if (counts[c] == best) {
            ++winners;
            winner = static_cast<Choice>(c);
        }
    }
    return Verdict{winners == 1 ? winner : Choice::Tie, ""};
}

WinRateTable win_rates(const std::vector<Verdict>& combined) {
    if (combined.empty()) {
        throw EmptyList("win_rates: empty verdict list");
    }
    WinRateTable t;
    for (const Verdict& v : combined) {
        switch (v.choice) {
            case Choice::A: t.percent_a += 1.0; break;
            case Choice::B: t.percent_b += 1.0; break;
            case Choice::Tie: t.percent_tie += 1.0; break;
        }
    }
    const double n = static_cast<double>(combined.size());
    t.percent_a   = 100.0 * t.percent_a / n;
    t.percent_b   = 100.0 * t.percent_b / n;
    t.percent_tie = 100.0 * t.percent_tie / n;
    return t;
}

JudgeRunResult run_pairwise(JudgeTransport& transport, const std::vector<JudgeItem>& items) {
    if (items.empty()) {
        throw EmptyList("run_pairwise: no items");
    }
    JudgeRunResult result;
    result.combined.reserve(items.size());
    for (const JudgeItem& item : items) {
        if (item.refs.size() < 2) {
            throw Error("run_pairwise: item '" + item.id + "' needs at least two candidate refs");
        }
        const std::string& prompt = build_judge_prompt(item.task, JudgeRole::Pairwise);
        std::vector<std::string> swapped = item.refs;
        std::swap(swapped[swapped.size() - 1], swapped[swapped.size() - 2]);
        const Verdict original = parse_verdict(transport.ask(prompt, item.refs));
        const Verdict reversed = parse_verdict(transport.ask(prompt, swapped));
        result.combined.push_back(combine_swapped(original, reversed));
    }
    result.rates = win_rates(result.combined);
    return result;
}

const char* choice_name(Choice c) {
    switch (c) {
        case Choice::A: return "A";
        case Choice::B: return "B";
        case Choice::Tie: return "tie";
    }
    return "tie";
}

}  // namespace alphaseq
