#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "alphaseq/checkpoint.hpp"
#include "alphaseq/error.hpp"
#include "alphaseq/image.hpp"

namespace alphaseq {

// Planar feature tensor [channels][h][w].
struct FeatureMap {
    int channels = 0;
    int height   = 0;
    int width    = 0;
    std::vector<double> values;

    FeatureMap() = default;
    FeatureMap(int c, int h, int w)
        : channels(c), height(h), width(w), values(static_cast<size_t>(c) * h * w) {}

    size_t index(int c, int y, int x) const {
        return (static_cast<size_t>(c) * height + y) * width + x;
    }
    double& at(int c, int y, int x) { return values[index(c, y, x)]; }
    double at(int c, int y, int x) const { return values[index(c, y, x)]; }
};

// 2-D convolution, zero "same" padding, stride 1. Weights are stored
// [ky][kx][in][out] so the input-channel loop is innermost and channel
// accumulation order matches between a 3-channel layer and its 4-channel
// derivative.
struct ConvLayer {
    int kernel       = 0;
    int in_channels  = 0;
    int out_channels = 0;
    std::vector<double> weights;  // kernel*kernel*in*out
    std::vector<double> bias;     // out

    ConvLayer() = default;
    ConvLayer(int k, int in_c, int out_c)
        : kernel(k), in_channels(in_c), out_channels(out_c),
          weights(static_cast<size_t>(k) * k * in_c * out_c, 0.0), bias(out_c, 0.0) {}

    size_t windex(int ky, int kx, int ci, int co) const {
        return ((static_cast<size_t>(ky) * kernel + kx) * in_channels + ci) * out_channels + co;
    }
    double& w(int ky, int kx, int ci, int co) { return weights[windex(ky, kx, ci, co)]; }
    double w(int ky, int kx, int ci, int co) const { return weights[windex(ky, kx, ci, co)]; }
};

FeatureMap conv_forward(const ConvLayer& layer, const FeatureMap& in);

struct GaussianLatent {
    int channels = 0;
    int height   = 0;
    int width    = 0;
    std::vector<double> mu;
    std::vector<double> log_var;
};

// Toy convolutional VAE. The encoder/decoder bodies and latent heads are held
// through shared_ptr so a surgically derived 4-channel model aliases the
// reference parameters instead of copying them.
struct ToyAutoencoder {
    ConvLayer conv_in;                        // 3 or 4 -> hidden
    std::shared_ptr<ConvLayer> enc_mix;       // hidden -> hidden, 1x1
    std::shared_ptr<ConvLayer> head_mu;       // hidden -> latent, 1x1
    std::shared_ptr<ConvLayer> head_log_var;  // hidden -> latent, 1x1
    std::shared_ptr<ConvLayer> dec_mix;       // latent -> hidden, 1x1
    ConvLayer conv_out;                       // hidden -> 3 or 4; no trailing nonlinearity

    int in_channels() const { return conv_in.in_channels; }
    int out_channels() const { return conv_out.out_channels; }
    int latent_channels() const { return head_mu ? head_mu->out_channels : 0; }
};

struct ToyVaeConfig {
    int hidden_channels = 8;
    int latent_channels = 4;
    int kernel          = 3;
};

// random 3-channel reference model
ToyAutoencoder make_reference_vae(const ToyVaeConfig& cfg, uint64_t seed);

// Lift a 3->D encoder layer and a D->3 decoder layer to 4 channels: RGB
// weights and biases are copied, alpha weights zeroed, and the decoder alpha
// bias set to opaque_value so the alpha output is constant.
std::pair<ConvLayer, ConvLayer> opaque_init(const ConvLayer& enc_in_ref,
                                            const ConvLayer& dec_out_ref, double opaque_value);

// full-model surgery: shared bodies, opaque-initialized boundary convs
ToyAutoencoder derive_rgba_vae(const ToyAutoencoder& ref, double opaque_value = 1.0);

GaussianLatent encode(const ToyAutoencoder& ae, const FeatureMap& input);
FeatureMap decode(const ToyAutoencoder& ae, const FeatureMap& latent);

enum class LatentMode { Deterministic, Sampled };

struct AutoencodeResult {
    GaussianLatent latent;
    FeatureMap recon;  // raw conv output in the model's [-1, 1] range
};

// Image channels are mapped to [-1, 1] before the encoder; a 3-channel model
// consumes the RGB planes, a 4-channel model all of RGBA.
AutoencodeResult autoencode(const ToyAutoencoder& ae, const RgbaImage& img, LatentMode mode,
                            uint64_t seed = 0);

struct LossWeights {
    double rec  = 1.0;
    double perc = 1.0;
    double kl   = 1.0;
    double ref  = 1.0;
    double gan  = 1.0;
};

// optional evaluators; absent terms contribute zero
struct LossPlugins {
    std::function<double(const FeatureMap& recon, const FeatureMap& target)> perceptual;
    std::function<double(const FeatureMap& recon)> adversarial;
};

struct LossBreakdown {
    double total       = 0.0;
    double rec         = 0.0;
    double perc        = 0.0;
    double kl_pairwise = 0.0;  // KL(q || q_ref)
    double kl_std      = 0.0;  // KL(q || N(0, I))
    double gan         = 0.0;
};

LossBreakdown vae_loss(const FeatureMap& recon, const FeatureMap& target, const GaussianLatent& q,
                       const GaussianLatent& q_ref, const LossWeights& weights,
                       const LossPlugins& plugins = {});

// analytic per-element KLs, averaged over elements
double kl_standard_normal(const GaussianLatent& q);
double kl_pairwise(const GaussianLatent& q, const GaussianLatent& q_ref);

// parameter container round trip
std::vector<NamedArray> vae_to_arrays(const ToyAutoencoder& ae);
ToyAutoencoder vae_from_arrays(const std::vector<NamedArray>& arrays);

}  // namespace alphaseq
