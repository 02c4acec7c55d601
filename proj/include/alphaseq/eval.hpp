#pragma once

#include <string>
#include <vector>

#include "alphaseq/error.hpp"
#include "alphaseq/image.hpp"

namespace alphaseq {

// Raw matting errors; report views rescale by the per-metric power of ten.
struct MatteMetrics {
    double sad = 0.0;  // sum of absolute differences
    double mse = 0.0;  // mean squared difference
    double mad = 0.0;  // mean absolute difference
    int report_exp_sad = 3;
    int report_exp_mse = 3;
    int report_exp_mad = 3;

    double reported_sad() const;
    double reported_mse() const;
    double reported_mad() const;
};

MatteMetrics matte_metrics(const AlphaMap& pred, const AlphaMap& gt);

// -10 * log10(mse) in decibels over unit-interval values; the cap applies
// when mse is exactly zero.
double psnr(const AlphaMap& a, const AlphaMap& b, double cap_db = 99.0);
double psnr(const RgbaImage& a, const RgbaImage& b, double cap_db = 99.0);

enum class JudgeTask { Fg2Full, Bg2Full };
enum class JudgeRole { GroundTruthScoring, Pairwise };

// Exact shipped template text for (task, role); throws UnknownTemplate.
const std::string& build_judge_prompt(JudgeTask task, JudgeRole role);
const std::string& build_judge_prompt(const std::string& task, const std::string& role);

enum class Choice { A, B, Tie };

struct Verdict {
    Choice choice = Choice::Tie;
    std::string reasoning;
};

// Parses the literal response schema {"better": "<A|B|tie>", "reasoning":
// "..."}; anything else is rejected with DecodeError.
Verdict parse_verdict(const std::string& json_text);

// Combine the original-order and swapped-order judgments: the swapped verdict
// is remapped (A and B exchanged, tie fixed); agreement returns the shared
// verdict, disagreement collapses to tie.
Verdict combine_swapped(const Verdict& v_original, const Verdict& v_swapped);

Verdict majority_vote(const std::vector<Verdict>& verdicts);  // tied plurality -> tie

struct WinRateTable {
    double percent_a   = 0.0;
    double percent_b   = 0.0;
    double percent_tie = 0.0;
};

WinRateTable win_rates(const std::vector<Verdict>& combined);

// Judge transport: prompt plus image references in, raw response text out.
// By convention the last two references are the Method A and Method B
// candidates; the swapped query exchanges them.
struct JudgeTransport {
    virtual ~JudgeTransport() = default;
    virtual std::string ask(const std::string& prompt, const std::vector<std::string>& image_refs) = 0;
};

struct JudgeItem {
    std::string id;
    JudgeTask task = JudgeTask::Fg2Full;
    std::vector<std::string> refs;  // condition refs first, then candidate A, candidate B
};

struct JudgeRunResult {
    std::vector<Verdict> combined;  // one per item, order preserved
    WinRateTable rates;
};

JudgeRunResult run_pairwise(JudgeTransport& transport, const std::vector<JudgeItem>& items);

// Scripted transport for tests and the CLI mock mode: returns queued
// responses in order.
class ScriptedTransport : public JudgeTransport {
public:
    explicit ScriptedTransport(std::vector<std::string> responses)
        : responses_(std::move(responses)) {}

    std::string ask(const std::string&, const std::vector<std::string>&) override {
        if (next_ >= responses_.size()) {
            throw Error("ScriptedTransport: ran out of scripted responses");
        }
        return responses_[next_++];
    }

    size_t consumed() const { return next_; }

private:
    std::vector<std::string> responses_;
    size_t next_ = 0;
};

const char* choice_name(Choice c);

}  // namespace alphaseq
