#include "alphaseq/vae.hpp"

#include <cmath>

#include "alphaseq/rng.hpp"

namespace alphaseq {

FeatureMap conv_forward(const ConvLayer& layer, const FeatureMap& in) {
    if (in.channels != layer.in_channels) {
        throw ShapeError("conv_forward: input channel count mismatch");
    }
    const int pad = layer.kernel / 2;
    FeatureMap out(layer.out_channels, in.height, in.width);
    for (int co = 0; co < layer.out_channels; ++co) {
        for (int y = 0; y < in.height; ++y) {
            for (int x = 0; x < in.width; ++x) {
                double acc = 0.0;
                for (int ky = 0; ky < layer.kernel; ++ky) {
                    const int sy = y + ky - pad;
                    if (sy < 0 || sy >= in.height) continue;
                    for (int kx = 0; kx < layer.kernel; ++kx) {
                        const int sx = x + kx - pad;
                        if (sx < 0 || sx >= in.width) continue;
                        for (int ci = 0; ci < layer.in_channels; ++ci) {
                            acc += layer.w(ky, kx, ci, co) * in.at(ci, sy, sx);
                        }
                    }
                }
                out.at(co, y, x) = acc + layer.bias[co];
            }
        }
    }
    return out;
}

namespace {

void randomize(ConvLayer& layer, Rng& rng, double scale) {
    for (double& w : layer.weights) w = rng.normal() * scale;
    for (double& b : layer.bias) b = rng.normal() * 0.1;
}

FeatureMap tanh_map(FeatureMap m) {
    for (double& v : m.values) v = std::tanh(v);
    return m;
}

}  // namespace

ToyAutoencoder make_reference_vae(const ToyVaeConfig& cfg, uint64_t seed) {
    Rng rng(seed);
    ToyAutoencoder ae;
    ae.conv_in = ConvLayer(cfg.kernel, 3, cfg.hidden_channels);
    ae.enc_mix = std::make_shared<ConvLayer>(1, cfg.hidden_channels, cfg.hidden_channels);
    ae.head_mu = std::make_shared<ConvLayer>(1, cfg.hidden_channels, cfg.latent_channels);
    ae.head_log_var = std::make_shared<ConvLayer>(1, cfg.hidden_channels, cfg.latent_channels);
    ae.dec_mix = std::make_shared<ConvLayer>(1, cfg.latent_channels, cfg.hidden_channels);
    ae.conv_out = ConvLayer(cfg.kernel, cfg.hidden_channels, 3);

    const double scale = 0.4;
    randomize(ae.conv_in, rng, scale);
    randomize(*ae.enc_mix, rng, scale);
    randomize(*ae.head_mu, rng, scale);
    randomize(*ae.head_log_var, rng, scale);
    randomize(*ae.dec_mix, rng, scale);
    randomize(ae.conv_out, rng, scale);
    return ae;
}

std::pair<ConvLayer, ConvLayer> opaque_init(const ConvLayer& enc_in_ref,
                                            const ConvLayer& dec_out_ref, double opaque_value) {
    if (enc_in_ref.in_channels != 3) {
        throw BadChannelCount("opaque_init: reference encoder layer must take 3 channels");
    }
    if (dec_out_ref.out_channels != 3) {
        throw BadChannelCount("opaque_init: reference decoder layer must emit 3 channels");
    }

    ConvLayer enc(enc_in_ref.kernel, 4, enc_in_ref.out_channels);
    for (int ky = 0; ky < enc.kernel; ++ky) {
        for (int kx = 0; kx < enc.kernel; ++kx) {
            for (int ci = 0; ci < 3; ++ci) {
                for (int co = 0; co < enc.out_channels; ++co) {
                    enc.w(ky, kx, ci, co) = enc_in_ref.w(ky, kx, ci, co);
                }
            }
            // alpha input weights stay zero
        }
    }
    enc.bias = enc_in_ref.bias;

    ConvLayer dec(dec_out_ref.kernel, dec_out_ref.in_channels, 4);
    for (int ky = 0; ky < dec.kernel; ++ky) {
        for (int kx = 0; kx < dec.kernel; ++kx) {
            for (int ci = 0; ci < dec.in_channels; ++ci) {
                for (int co = 0; co < 3; ++co) {
                    dec.w(ky, kx, ci, co) = dec_out_ref.w(ky, kx, ci, co);
                }
                // alpha output weights stay zero
            }
        }
    }
    for (int co = 0; co < 3; ++co) dec.bias[co] = dec_out_ref.bias[co];
    dec.bias[3] = opaque_value;

    return {std::move(enc), std::move(dec)};
}

ToyAutoencoder derive_rgba_vae(const ToyAutoencoder& ref, double opaque_value) {
    ToyAutoencoder ae;
    auto [enc_in, dec_out] = opaque_init(ref.conv_in, ref.conv_out, opaque_value);
    ae.conv_in      = std::move(enc_in);
    ae.conv_out     = std::move(dec_out);
    ae.enc_mix      = ref.enc_mix;  // bodies are the same objects, not copies
    ae.head_mu      = ref.head_mu;
    ae.head_log_var = ref.head_log_var;
    ae.dec_mix      = ref.dec_mix;
    return ae;
}

GaussianLatent encode(const ToyAutoencoder& ae, const FeatureMap& input) {
    const FeatureMap body = tanh_map(conv_forward(*ae.enc_mix, tanh_map(conv_forward(ae.conv_in, input))));
    const FeatureMap mu      = conv_forward(*ae.head_mu, body);
    const FeatureMap log_var = conv_forward(*ae.head_log_var, body);
    GaussianLatent z;
    z.channels = mu.channels;
    z.height   = mu.height;
    z.width    = mu.width;
    z.mu       = mu.values;
    z.log_var  = log_var.values;
    return z;
}

FeatureMap decode(const ToyAutoencoder& ae, const FeatureMap& latent) {
    return conv_forward(ae.conv_out, tanh_map(conv_forward(*ae.dec_mix, latent)));
}

AutoencodeResult autoencode(const ToyAutoencoder& ae, const RgbaImage& img, LatentMode mode,
                            uint64_t seed) {
    const int in_c = ae.in_channels();
    if (in_c != 3 && in_c != 4) {
        throw BadChannelCount("autoencode: model must take 3 or 4 channels");
    }
    FeatureMap input(in_c, img.height, img.width);
    for (int c = 0; c < in_c; ++c) {
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                input.at(c, y, x) = 2.0 * img.at(x, y, c) - 1.0;
            }
        }
    }

    AutoencodeResult result;
    result.latent = encode(ae, input);

    FeatureMap z(result.latent.channels, result.latent.height, result.latent.width);
    z.values = result.latent.mu;
    if (mode == LatentMode::Sampled) {
        Rng rng(seed);
        for (size_t i = 0; i < z.values.size(); ++i) {
            z.values[i] += std::exp(0.5 * result.latent.log_var[i]) * rng.normal();
        }
    }
    result.recon = decode(ae, z);
    return result;
}

double kl_standard_normal(const GaussianLatent& q) {
    if (q.mu.size() != q.log_var.size() || q.mu.empty()) {
        throw ShapeError("kl_standard_normal: mu/log_var shape mismatch");
    }
    double acc = 0.0;
    for (size_t i = 0; i < q.mu.size(); ++i) {
        acc += q.mu[i] * q.mu[i] + std::exp(q.log_var[i]) - q.log_var[i] - 1.0;
    }
    return 0.5 * acc / static_cast<double>(q.mu.size());
}

double kl_pairwise(const GaussianLatent& q, const GaussianLatent& q_ref) {
    if (q.mu.size() != q.log_var.size() || q.mu.size() != q_ref.mu.size() ||
        q_ref.mu.size() != q_ref.log_var.size() || q.mu.empty()) {
        throw ShapeError("kl_pairwise: latent shape mismatch");
    }
    double acc = 0.0;
    for (size_t i = 0; i < q.mu.size(); ++i) {
        const double dmu = q.mu[i] - q_ref.mu[i];
        acc += q_ref.log_var[i] - q.log_var[i] +
               (std::exp(q.log_var[i]) + dmu * dmu) * std::exp(-q_ref.log_var[i]) - 1.0;
    }
    return 0.5 * acc / static_cast<double>(q.mu.size());
}

LossBreakdown vae_loss(const FeatureMap& recon, const FeatureMap& target, const GaussianLatent& q,
                       const GaussianLatent& q_ref, const LossWeights& weights,
                       const LossPlugins& plugins) {
    if (recon.channels != target.channels || recon.height != target.height ||
        recon.width != target.width) {
        throw ShapeError("vae_loss: recon/target shape mismatch");
    }
    LossBreakdown out;
    double se = 0.0;
    for (size_t i = 0; i < recon.values.size(); ++i) {
        const double d = recon.values[i] - target.values[i];
        se += d * d;
    }
    out.rec         = se / static_cast<double>(recon.values.size());
    out.perc        = plugins.perceptual ? plugins.perceptual(recon, target) : 0.0;
    out.kl_pairwise = kl_pairwise(q, q_ref);
    out.kl_std      = kl_standard_normal(q);
    out.gan         = plugins.adversarial ? plugins.adversarial(recon) : 0.0;
    out.total = weights.rec * out.rec + weights.perc * out.perc + weights.kl * out.kl_pairwise +
                weights.ref * out.kl_std + weights.gan * out.gan;
    return out;
}

namespace {

NamedArray conv_to_array(const ConvLayer& layer, const std::string& name) {
    NamedArray a;
    a.name  = name;
    a.shape = {layer.kernel, layer.kernel, layer.in_channels, layer.out_channels};
    a.data.assign(layer.weights.begin(), layer.weights.end());
    return a;
}

NamedArray bias_to_array(const ConvLayer& layer, const std::string& name) {
    NamedArray a;
    a.name  = name;
    a.shape = {layer.out_channels};
    a.data.assign(layer.bias.begin(), layer.bias.end());
    return a;
}

ConvLayer conv_from_arrays(const std::vector<NamedArray>& arrays, const std::string& name) {
    const NamedArray* w = nullptr;
    const NamedArray* b = nullptr;
    for (const NamedArray& a : arrays) {
        if (a.name == name + ".weight") w = &a;
        if (a.name == name + ".bias") b = &a;
    }
    if (!w || !b || w->shape.size() != 4) {
        throw DecodeError("vae_from_arrays: missing or malformed layer " + name);
    }
    ConvLayer layer(static_cast<int>(w->shape[0]), static_cast<int>(w->shape[2]),
                    static_cast<int>(w->shape[3]));
    layer.weights.assign(w->data.begin(), w->data.end());
    layer.bias.assign(b->data.begin(), b->data.end());
    return layer;
}

}  // namespace

std::vector<NamedArray> vae_to_arrays(const ToyAutoencoder& ae) {
    std::vector<NamedArray> arrays;
    auto push = [&arrays](const ConvLayer& l, const std::string& name) {
        arrays.push_back(conv_to_array(l, name + ".weight"));
        arrays.push_back(bias_to_array(l, name + ".bias"));
    };
    push(ae.conv_in, "conv_in");
    push(*ae.enc_mix, "enc_mix");
    push(*ae.head_mu, "head_mu");
    push(*ae.head_log_var, "head_log_var");
    push(*ae.dec_mix, "dec_mix");
    push(ae.conv_out, "conv_out");
    return arrays;
}

ToyAutoencoder vae_from_arrays(const std::vector<NamedArray>& arrays) {
    ToyAutoencoder ae;
    ae.conv_in      = conv_from_arrays(arrays, "conv_in");
    ae.enc_mix      = std::make_shared<ConvLayer>(conv_from_arrays(arrays, "enc_mix"));
    ae.head_mu      = std::make_shared<ConvLayer>(conv_from_arrays(arrays, "head_mu"));
    ae.head_log_var = std::make_shared<ConvLayer>(conv_from_arrays(arrays, "head_log_var"));
    ae.dec_mix      = std::make_shared<ConvLayer>(conv_from_arrays(arrays, "dec_mix"));
    ae.conv_out     = conv_from_arrays(arrays, "conv_out");
    return ae;
}

}  // namespace alphaseq
