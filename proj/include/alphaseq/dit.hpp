#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "alphaseq/autodiff.hpp"
#include "alphaseq/checkpoint.hpp"
#include "alphaseq/latent.hpp"
#include "alphaseq/rope.hpp"

namespace alphaseq {

struct ModelConfig {
    int token_width = 4;   // 4C
    int embed_dim   = 64;
    int heads       = 2;
    AxisDims axis_dims;    // must sum to embed_dim / heads
    int depth       = 2;
    int text_dim    = 8;
    double rope_base = 10000.0;

    int head_dim() const { return heads > 0 ? embed_dim / heads : 0; }
    void validate() const;
};

struct Parameter {
    std::string name;
    int rows = 0;
    int cols = 0;
    std::vector<double> value;
    std::vector<double> grad;
};

struct ParameterSet {
    std::vector<Parameter> items;

    Parameter& find(const std::string& name);
    const Parameter& find(const std::string& name) const;
    void zero_grads();
    size_t scalar_count() const;
};

struct TextEmbeddings {
    int len = 0;
    int dim = 0;
    std::vector<double> values;  // len * dim

    static TextEmbeddings random(int len, int dim, uint64_t seed);
};

// Toy full-sequence denoiser: image/text token embeddings, a sinusoidal
// timestep embedding added to every token, pre-norm attention/MLP blocks with
// rotary positions from the grid, and a linear head whose output is sliced to
// the target segment.
struct DitModel {
    ModelConfig cfg;
    ParameterSet params;

    static DitModel create(const ModelConfig& cfg, uint64_t seed);
};

struct TrainBatch {
    PackedTokens inputs;    // n conditioning images (may be empty: l == 0)
    PackedTokens targets;   // m clean target images (z0)
    TextEmbeddings text;
    PositionGrid grid;      // targets, then inputs, then text
    int target_count = 0;   // m_D

    void validate(const ModelConfig& cfg) const;
};

// Predictions for the target segment, shaped like noisy_targets.
PackedTokens dit_forward(const DitModel& model, const PackedTokens& noisy_targets,
                         const PackedTokens& inputs, const TextEmbeddings& text,
                         const PositionGrid& grid, double t);

// Eq-style sequence loss: (1/m) * sum_k ||target_k - pred_k||^2 with the
// per-image norm summing squared elements. Image extents come from the token
// shapes. Duplicating the whole target set leaves the value bitwise unchanged.
double seq_loss(const PackedTokens& pred, const PackedTokens& target_velocities, int target_count);

struct SigmaSchedule {
    std::vector<double> sigmas;  // strictly decreasing, sigmas[0] == 1
    double mu = 0.0;
};

struct ShiftParams {
    int base_len     = 256;
    int max_len      = 4096;
    double base_shift = 0.5;
    double max_shift  = 1.15;
};

// Resolution-dependent sigma shift: mu is interpolated linearly in the
// sequence length, raw sigmas run from 1 to 1/steps, and each sigma maps to
// exp(mu)*s / (exp(mu)*s + 1 - s).
SigmaSchedule shift_schedule(int seq_len, int steps, const ShiftParams& params = {});

struct OptimizerConfig {
    double lr    = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps   = 1e-8;
    double clip_norm = 1.0;  // global gradient-norm clip, 0 disables
    bool plain_sgd = false;  // skip the moment estimates
};

struct OptimizerState {
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;
    int64_t step = 0;
};

// Forward + loss with parameter gradients left in model.params. The seed
// fixes the (t, eps) draw: z_t = (1-t) z0 + t eps, velocity target eps - z0.
double loss_and_grads(DitModel& model, const TrainBatch& batch, uint64_t seed);

// Same draw, no gradients (finite-difference oracle path).
double eval_loss(const DitModel& model, const TrainBatch& batch, uint64_t seed);

// One optimizer update; returns the step loss.
double train_step(DitModel& model, const TrainBatch& batch, uint64_t seed, OptimizerState& opt,
                  const OptimizerConfig& cfg);

// gaussian token noise used for both training and sampler initialization
PackedTokens gaussian_tokens(const std::vector<TokenShape>& shapes, int token_width, uint64_t seed);

using VelocityFn = std::function<PackedTokens(const PackedTokens& noisy, double sigma)>;

// Euler flow sampler: z <- z + (sigma_next - sigma_cur) * v, terminal sigma 0.
PackedTokens sample(const VelocityFn& velocity, const std::vector<TokenShape>& target_shapes,
                    int token_width, int steps, uint64_t seed, const ShiftParams& shift = {});

// Convenience wrapper driving the toy model with s_offset = m.
PackedTokens sample_with_model(const DitModel& model, const PackedTokens& inputs,
                               const TextEmbeddings& text,
                               const std::vector<TokenShape>& target_shapes, int steps,
                               uint64_t seed, const ShiftParams& shift = {});

// checkpoint round trip (float32 container)
std::vector<NamedArray> model_to_arrays(const DitModel& model);
DitModel model_from_arrays(const ModelConfig& cfg, const std::vector<NamedArray>& arrays);

}  // namespace alphaseq
