#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "alphaseq/rng.hpp"
#include "alphaseq/vae.hpp"

using namespace alphaseq;

namespace {

RgbaImage random_image(int w, int h, Rng& rng) {
    RgbaImage img(w, h);
    for (double& v : img.data) v = rng.uniform();
    return img;
}

}  // namespace

TEST_CASE("opaque_init: zero references produce constant-alpha layers") {
    const ConvLayer enc_ref(3, 3, 5);
    const ConvLayer dec_ref(3, 5, 3);
    auto [enc, dec] = opaque_init(enc_ref, dec_ref, 1.0);
    for (double w : enc.weights) CHECK(w == 0.0);
    for (double b : enc.bias) CHECK(b == 0.0);
    for (double w : dec.weights) CHECK(w == 0.0);
    CHECK(dec.bias[0] == 0.0);
    CHECK(dec.bias[1] == 0.0);
    CHECK(dec.bias[2] == 0.0);
    CHECK(dec.bias[3] == 1.0);
}

TEST_CASE("opaque_init: 1x1 encoder ignores alpha exactly") {
    Rng rng(51);
    ConvLayer enc_ref(1, 3, 6);
    for (double& w : enc_ref.weights) w = rng.normal();
    for (double& b : enc_ref.bias) b = rng.normal();
    ConvLayer dec_ref(1, 6, 3);
    auto [enc, dec] = opaque_init(enc_ref, dec_ref, 1.0);

    for (int trial = 0; trial < 100; ++trial) {
        FeatureMap rgb(3, 1, 1);
        for (double& v : rgb.values) v = rng.normal();
        FeatureMap rgba(4, 1, 1);
        rgba.values = {rgb.values[0], rgb.values[1], rgb.values[2], rng.normal()};
        const FeatureMap ref_out  = conv_forward(enc_ref, rgb);
        const FeatureMap rgba_out = conv_forward(enc, rgba);
        for (size_t i = 0; i < ref_out.values.size(); ++i) {
            CHECK(rgba_out.values[i] == ref_out.values[i]);
        }
    }
}

TEST_CASE("opaque_init: wrong reference channel counts throw") {
    CHECK_THROWS_AS(opaque_init(ConvLayer(3, 4, 8), ConvLayer(3, 8, 3), 1.0), BadChannelCount);
    CHECK_THROWS_AS(opaque_init(ConvLayer(3, 3, 8), ConvLayer(3, 8, 4), 1.0), BadChannelCount);
}

TEST_CASE("derived model: latents match the reference exactly, alpha varied") {
    const ToyAutoencoder ref = make_reference_vae({}, 101);
    const ToyAutoencoder rgba = derive_rgba_vae(ref, 1.0);
    CHECK(rgba.enc_mix.get() == ref.enc_mix.get());  // identical objects, not copies
    CHECK(rgba.dec_mix.get() == ref.dec_mix.get());

    Rng rng(52);
    for (int trial = 0; trial < 100; ++trial) {
        RgbaImage img = random_image(6, 5, rng);
        const AutoencodeResult full = autoencode(rgba, img, LatentMode::Deterministic);
        const AutoencodeResult base = autoencode(ref, img, LatentMode::Deterministic);
        REQUIRE(full.latent.mu.size() == base.latent.mu.size());
        for (size_t i = 0; i < full.latent.mu.size(); ++i) {
            CHECK(full.latent.mu[i] == base.latent.mu[i]);
            CHECK(full.latent.log_var[i] == base.latent.log_var[i]);
        }
        // alpha perturbation leaves the latent untouched
        RgbaImage other = img;
        for (size_t i = 0; i < other.pixel_count(); ++i) other.data[i * 4 + 3] = rng.uniform();
        const AutoencodeResult varied = autoencode(rgba, other, LatentMode::Deterministic);
        CHECK(varied.latent.mu == full.latent.mu);
        CHECK(varied.latent.log_var == full.latent.log_var);
    }
}

TEST_CASE("derived model: recon rgb equals reference, alpha is the opaque constant") {
    const ToyAutoencoder ref = make_reference_vae({}, 102);
    const double opaque = 1.0;
    const ToyAutoencoder rgba = derive_rgba_vae(ref, opaque);

    Rng rng(53);
    const RgbaImage img = random_image(4, 4, rng);
    const AutoencodeResult full = autoencode(rgba, img, LatentMode::Deterministic);
    const AutoencodeResult base = autoencode(ref, img, LatentMode::Deterministic);
    REQUIRE(full.recon.channels == 4);
    REQUIRE(base.recon.channels == 3);
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < 4; ++y) {
            for (int x = 0; x < 4; ++x) {
                CHECK(full.recon.at(c, y, x) == base.recon.at(c, y, x));
            }
        }
    }
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) {
            CHECK(full.recon.at(3, y, x) == opaque);
        }
    }
}

TEST_CASE("derived decoder: alpha output constant for arbitrary latents") {
    const ToyAutoencoder ref = make_reference_vae({}, 103);
    const ToyAutoencoder rgba = derive_rgba_vae(ref, 0.75);
    Rng rng(54);
    for (int trial = 0; trial < 50; ++trial) {
        FeatureMap z(rgba.latent_channels(), 3, 3);
        for (double& v : z.values) v = rng.normal() * 3.0;
        const FeatureMap out = decode(rgba, z);
        for (int y = 0; y < 3; ++y) {
            for (int x = 0; x < 3; ++x) {
                CHECK(out.at(3, y, x) == 0.75);
            }
        }
    }
}

TEST_CASE("autoencode: deterministic and seeded-sampled modes repeat exactly") {
    const ToyAutoencoder ref = make_reference_vae({}, 104);
    Rng rng(55);
    const RgbaImage img = random_image(5, 5, rng);
    const AutoencodeResult a = autoencode(ref, img, LatentMode::Deterministic);
    const AutoencodeResult b = autoencode(ref, img, LatentMode::Deterministic);
    CHECK(a.recon.values == b.recon.values);
    const AutoencodeResult c = autoencode(ref, img, LatentMode::Sampled, 9);
    const AutoencodeResult d = autoencode(ref, img, LatentMode::Sampled, 9);
    CHECK(c.recon.values == d.recon.values);
    const AutoencodeResult e = autoencode(ref, img, LatentMode::Sampled, 10);
    CHECK(e.recon.values != c.recon.values);
}

TEST_CASE("kl: unit-mean unit-variance element against standard normal is 0.5") {
    GaussianLatent q;
    q.channels = 1;
    q.height   = 1;
    q.width    = 1;
    q.mu       = {1.0};
    q.log_var  = {0.0};
    CHECK(kl_standard_normal(q) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("kl: nonnegative, zero only at the standard normal") {
    Rng rng(56);
    GaussianLatent std_q;
    std_q.mu.assign(8, 0.0);
    std_q.log_var.assign(8, 0.0);
    CHECK(kl_standard_normal(std_q) == 0.0);
    for (int trial = 0; trial < 100; ++trial) {
        GaussianLatent q;
        q.mu.resize(8);
        q.log_var.resize(8);
        for (double& v : q.mu) v = rng.normal();
        for (double& v : q.log_var) v = rng.normal();
        CHECK(kl_standard_normal(q) >= 0.0);
        CHECK(kl_pairwise(q, q) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(kl_pairwise(q, std_q) == doctest::Approx(kl_standard_normal(q)).epsilon(1e-12));
    }
}

TEST_CASE("vae_loss: all-zero case and weight linearity") {
    FeatureMap recon(4, 2, 2);
    FeatureMap target = recon;
    GaussianLatent q;
    q.mu.assign(4, 0.0);
    q.log_var.assign(4, 0.0);
    const LossBreakdown zero = vae_loss(recon, target, q, q, LossWeights{});
    CHECK(zero.total == 0.0);
    CHECK(zero.rec == 0.0);
    CHECK(zero.kl_pairwise == 0.0);
    CHECK(zero.kl_std == 0.0);

    Rng rng(57);
    for (double& v : recon.values) v = rng.normal();
    for (double& v : target.values) v = rng.normal();
    GaussianLatent q2 = q;
    for (double& v : q2.mu) v = rng.normal();
    const LossBreakdown all = vae_loss(recon, target, q2, q, LossWeights{});
    const LossBreakdown none = vae_loss(recon, target, q2, q, LossWeights{0, 0, 0, 0, 0});
    CHECK(none.total == 0.0);
    // doubling one weight shifts the total by exactly that component
    LossWeights w;
    w.rec = 2.0;
    const LossBreakdown stretched = vae_loss(recon, target, q2, q, w);
    CHECK(stretched.total == doctest::Approx(all.total + all.rec).epsilon(1e-12));
}

TEST_CASE("vae_loss: plugin terms feed the weighted total") {
    FeatureMap recon(4, 1, 1);
    FeatureMap target = recon;
    GaussianLatent q;
    q.mu.assign(4, 0.0);
    q.log_var.assign(4, 0.0);
    LossPlugins plugins;
    plugins.perceptual  = [](const FeatureMap&, const FeatureMap&) { return 0.25; };
    plugins.adversarial = [](const FeatureMap&) { return 0.5; };
    LossWeights w{1.0, 2.0, 1.0, 1.0, 4.0};
    const LossBreakdown out = vae_loss(recon, target, q, q, w, plugins);
    CHECK(out.perc == 0.25);
    CHECK(out.gan == 0.5);
    CHECK(out.total == doctest::Approx(2.0 * 0.25 + 4.0 * 0.5).epsilon(1e-15));
}

TEST_CASE("vae parameters: container round trip") {
    const ToyAutoencoder ref = make_reference_vae({}, 105);
    const auto dir = std::filesystem::temp_directory_path() / "alphaseq-test-vae";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "vae.bin").string();
    save_arrays(vae_to_arrays(ref), path);
    const ToyAutoencoder back = vae_from_arrays(load_arrays(path));
    // float32 container: compare after the same narrowing
    REQUIRE(back.conv_in.weights.size() == ref.conv_in.weights.size());
    for (size_t i = 0; i < ref.conv_in.weights.size(); ++i) {
        CHECK(back.conv_in.weights[i] == static_cast<double>(static_cast<float>(ref.conv_in.weights[i])));
    }
    CHECK(back.conv_out.bias.size() == 3);
}
