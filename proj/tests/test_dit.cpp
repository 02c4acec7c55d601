#include <doctest.h>

#include <cmath>

#include "alphaseq/dit.hpp"
#include "alphaseq/rng.hpp"

using namespace alphaseq;

namespace {

ModelConfig tiny_config() {
    ModelConfig cfg;
    cfg.token_width = 4;
    cfg.embed_dim   = 8;
    cfg.heads       = 1;
    cfg.axis_dims   = AxisDims::split_evenly(8);
    cfg.depth       = 1;
    cfg.text_dim    = 4;
    return cfg;
}

PackedTokens random_tokens(const std::vector<TokenShape>& shapes, int width, uint64_t seed) {
    return gaussian_tokens(shapes, width, seed);
}

TrainBatch tiny_batch(const ModelConfig& cfg, uint64_t seed) {
    TrainBatch batch;
    batch.targets = random_tokens({{1, 1, 2}, {1, 1, 1}}, cfg.token_width, seed);
    batch.inputs  = random_tokens({{1, 1, 2}}, cfg.token_width, seed + 1);
    batch.text    = TextEmbeddings::random(2, cfg.text_dim, seed + 2);
    batch.grid    = build_position_grid({{1, 2}}, {{1, 2}, {1, 1}}, 2, 2);
    batch.target_count = 2;
    return batch;
}

}  // namespace

TEST_CASE("forward: output shape matches the noisy targets") {
    Rng rng(61);
    for (int trial = 0; trial < 5; ++trial) {
        ModelConfig cfg;
        cfg.token_width = 4 * (1 + static_cast<int>(rng.uniform_int(3)));
        cfg.embed_dim   = 16;
        cfg.heads       = 2;
        cfg.axis_dims   = AxisDims::split_evenly(8);
        cfg.depth       = 1 + static_cast<int>(rng.uniform_int(2));
        cfg.text_dim    = 4;
        const DitModel model = DitModel::create(cfg, 7 + trial);

        const int h2 = 1 + static_cast<int>(rng.uniform_int(3));
        const int w2 = 1 + static_cast<int>(rng.uniform_int(3));
        const PackedTokens noisy = random_tokens({{1, h2, w2}}, cfg.token_width, 100 + trial);
        const PackedTokens inputs = random_tokens({{1, 2, 2}}, cfg.token_width, 200 + trial);
        const TextEmbeddings text = TextEmbeddings::random(3, cfg.text_dim, 300 + trial);
        const PositionGrid grid = build_position_grid({{2, 2}}, {{h2, w2}}, 3, 1);
        const PackedTokens out = dit_forward(model, noisy, inputs, text, grid, 0.5);
        CHECK(out.l == noisy.l);
        CHECK(out.d == noisy.d);
        CHECK(out.shapes == noisy.shapes);
    }
}

TEST_CASE("forward: permuting input images with their positions is neutral") {
    ModelConfig cfg = tiny_config();
    cfg.embed_dim = 16;
    cfg.heads     = 2;
    const DitModel model = DitModel::create(cfg, 11);

    const PackedTokens noisy = random_tokens({{1, 2, 2}}, cfg.token_width, 1);
    const PackedTokens in_a  = random_tokens({{1, 1, 2}}, cfg.token_width, 2);
    const PackedTokens in_b  = random_tokens({{1, 2, 1}}, cfg.token_width, 3);
    const TextEmbeddings text = TextEmbeddings::random(2, cfg.text_dim, 4);

    auto concat = [&](const PackedTokens& first, const PackedTokens& second) {
        PackedTokens out(1, first.l + second.l, first.d);
        std::copy(second.values.begin(), second.values.end(),
                  std::copy(first.values.begin(), first.values.end(), out.values.begin()));
        out.shapes = first.shapes;
        out.shapes.insert(out.shapes.end(), second.shapes.begin(), second.shapes.end());
        return out;
    };

    // grids follow the image order: z = 0 for the first input, z = 1 for the second
    const PositionGrid g_ab = build_position_grid({{1, 2}, {2, 1}}, {{2, 2}}, 2, 1);
    PositionGrid g_ba = build_position_grid({{2, 1}, {1, 2}}, {{2, 2}}, 2, 1);
    // swap the z assignment so each image keeps its own layer index
    for (size_t i = 0; i < g_ba.size(); ++i) {
        if (g_ba.segments[i] == Segment::Input) {
            g_ba.positions[i].z = g_ba.positions[i].z == 0 ? 1 : 0;
        }
    }

    const PackedTokens out_ab = dit_forward(model, noisy, concat(in_a, in_b), text, g_ab, 0.3);
    const PackedTokens out_ba = dit_forward(model, noisy, concat(in_b, in_a), text, g_ba, 0.3);
    REQUIRE(out_ab.values.size() == out_ba.values.size());
    for (size_t i = 0; i < out_ab.values.size(); ++i) {
        CHECK(std::abs(out_ab.values[i] - out_ba.values[i]) < 1e-9);
    }
}

TEST_CASE("forward: global z shift leaves predictions unchanged") {
    ModelConfig cfg = tiny_config();
    const DitModel model = DitModel::create(cfg, 13);
    const TrainBatch batch = tiny_batch(cfg, 50);

    PositionGrid shifted = batch.grid;
    shifted.s_offset += 7;

    PackedTokens noisy = batch.targets;
    const PackedTokens a = dit_forward(model, noisy, batch.inputs, batch.text, batch.grid, 0.7);
    const PackedTokens b = dit_forward(model, noisy, batch.inputs, batch.text, shifted, 0.7);
    for (size_t i = 0; i < a.values.size(); ++i) {
        CHECK(std::abs(a.values[i] - b.values[i]) < 1e-9);
    }
}

TEST_CASE("forward: grid mismatch throws") {
    ModelConfig cfg = tiny_config();
    const DitModel model = DitModel::create(cfg, 17);
    const TrainBatch batch = tiny_batch(cfg, 51);
    const PositionGrid wrong = build_position_grid({{1, 2}}, {{1, 2}, {1, 1}}, 3, 2);
    CHECK_THROWS_AS(dit_forward(model, batch.targets, batch.inputs, batch.text, wrong, 0.5),
                    GridMismatch);
}

TEST_CASE("seq_loss: exact prediction gives zero, hand example gives 0.3") {
    PackedTokens pred(1, 2, 4);
    pred.shapes = {{1, 1, 1}, {1, 1, 1}};
    PackedTokens target = pred;
    CHECK(seq_loss(pred, target, 2) == 0.0);

    // per-image squared errors 0.2 and 0.4
    target.values = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    pred.values   = {std::sqrt(0.2), 0.0, 0.0, 0.0, std::sqrt(0.4), 0.0, 0.0, 0.0};
    CHECK(seq_loss(pred, target, 2) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("seq_loss: duplicating the target set is bitwise neutral") {
    Rng rng(62);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 1 + static_cast<int>(rng.uniform_int(4));
        std::vector<TokenShape> shapes;
        for (int k = 0; k < m; ++k) {
            shapes.push_back({1, 1 + static_cast<int>(rng.uniform_int(3)),
                              1 + static_cast<int>(rng.uniform_int(3))});
        }
        const PackedTokens pred   = random_tokens(shapes, 4, 70 + trial);
        const PackedTokens target = random_tokens(shapes, 4, 90 + trial);
        const double base = seq_loss(pred, target, m);

        auto duplicate = [](const PackedTokens& p) {
            PackedTokens out(1, p.l * 2, p.d);
            std::copy(p.values.begin(), p.values.end(), out.values.begin());
            std::copy(p.values.begin(), p.values.end(), out.values.begin() + p.values.size());
            out.shapes = p.shapes;
            out.shapes.insert(out.shapes.end(), p.shapes.begin(), p.shapes.end());
            return out;
        };
        const double doubled = seq_loss(duplicate(pred), duplicate(target), 2 * m);
        CHECK(doubled == base);  // bitwise
    }
}

TEST_CASE("seq_loss: shape errors") {
    PackedTokens pred(1, 2, 4);
    pred.shapes = {{1, 1, 1}, {1, 1, 1}};
    PackedTokens bad(1, 3, 4);
    bad.shapes = {{1, 1, 3}};
    CHECK_THROWS_AS(seq_loss(pred, bad, 2), ShapeError);
    PackedTokens target = pred;
    CHECK_THROWS_AS(seq_loss(pred, target, 1), ShapeError);
}

TEST_CASE("gradients: every parameter matches central finite differences") {
    ModelConfig cfg = tiny_config();
    DitModel model = DitModel::create(cfg, 19);
    // head starts at zero; nudge it so its gradients are generic
    Rng hr(20);
    for (double& v : model.params.find("head.w").value) v = hr.normal() * 0.3;
    for (double& v : model.params.find("head.b").value) v = hr.normal() * 0.1;

    const TrainBatch batch = tiny_batch(cfg, 77);
    const uint64_t draw_seed = 5;
    (void)loss_and_grads(model, batch, draw_seed);

    const double h = 1e-5;
    double worst = 0.0;
    for (Parameter& p : model.params.items) {
        for (size_t j = 0; j < p.value.size(); ++j) {
            const double keep = p.value[j];
            p.value[j] = keep + h;
            const double up = eval_loss(model, batch, draw_seed);
            p.value[j] = keep - h;
            const double dn = eval_loss(model, batch, draw_seed);
            p.value[j] = keep;
            const double fd  = (up - dn) / (2.0 * h);
            const double an  = p.grad[j];
            const double rel = std::abs(fd - an) / std::max(1e-6, std::abs(fd) + std::abs(an));
            worst = std::max(worst, rel);
        }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("train_step: zero learning rate leaves parameters unchanged") {
    ModelConfig cfg = tiny_config();
    DitModel model = DitModel::create(cfg, 23);
    const TrainBatch batch = tiny_batch(cfg, 88);
    std::vector<std::vector<double>> before;
    for (const Parameter& p : model.params.items) before.push_back(p.value);
    OptimizerState opt;
    OptimizerConfig ocfg;
    ocfg.lr = 0.0;
    const double loss = train_step(model, batch, 1, opt, ocfg);
    CHECK(std::isfinite(loss));
    CHECK(loss > 0.0);
    for (size_t i = 0; i < model.params.items.size(); ++i) {
        CHECK(model.params.items[i].value == before[i]);
    }
}

TEST_CASE("train_step: loss decreases over a short run") {
    ModelConfig cfg = tiny_config();
    cfg.embed_dim = 16;
    cfg.heads     = 2;
    DitModel model = DitModel::create(cfg, 29);
    const TrainBatch batch = tiny_batch(cfg, 99);
    OptimizerState opt;
    OptimizerConfig ocfg;
    ocfg.lr = 5e-3;
    const double first = train_step(model, batch, 1000, opt, ocfg);
    double last = first;
    for (int step = 1; step < 200; ++step) {
        last = train_step(model, batch, 1000 + step, opt, ocfg);
    }
    CHECK(last < first);
}

TEST_CASE("shift_schedule: pinned mu values and the sigma fixed point") {
    CHECK(shift_schedule(256, 10).mu == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(shift_schedule(4096, 10).mu == doctest::Approx(1.15).epsilon(1e-12));
    const SigmaSchedule s = shift_schedule(1024, 25);
    CHECK(s.sigmas.front() == doctest::Approx(1.0).epsilon(1e-12));  // sigma = 1 is a fixed point
    for (size_t i = 1; i < s.sigmas.size(); ++i) {
        CHECK(s.sigmas[i] < s.sigmas[i - 1]);
    }
    CHECK(s.sigmas.back() > 0.0);
}

TEST_CASE("sampler: oracle velocity recovers z0 in one step from sigma 1") {
    Rng rng(63);
    const std::vector<TokenShape> shapes{{1, 2, 2}};
    PackedTokens z0(1, 4, 4);
    z0.shapes = shapes;
    for (double& v : z0.values) v = rng.normal();
    const uint64_t seed = 31;
    const PackedTokens eps = gaussian_tokens(shapes, 4, seed);

    const VelocityFn oracle = [&](const PackedTokens&, double) {
        PackedTokens v = eps;
        for (size_t i = 0; i < v.values.size(); ++i) v.values[i] -= z0.values[i];
        return v;
    };
    const PackedTokens out = sample(oracle, shapes, 4, 1, seed);
    for (size_t i = 0; i < out.values.size(); ++i) {
        CHECK(out.values[i] == doctest::Approx(z0.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("sampler: constant velocity field makes the result step-count free") {
    Rng rng(64);
    const std::vector<TokenShape> shapes{{1, 2, 3}};
    PackedTokens z0(1, 6, 4);
    z0.shapes = shapes;
    for (double& v : z0.values) v = rng.normal();
    const uint64_t seed = 77;
    const PackedTokens eps = gaussian_tokens(shapes, 4, seed);
    const VelocityFn oracle = [&](const PackedTokens&, double) {
        PackedTokens v = eps;
        for (size_t i = 0; i < v.values.size(); ++i) v.values[i] -= z0.values[i];
        return v;
    };
    const PackedTokens one   = sample(oracle, shapes, 4, 1, seed);
    const PackedTokens many  = sample(oracle, shapes, 4, 37, seed);
    for (size_t i = 0; i < one.values.size(); ++i) {
        CHECK(one.values[i] == doctest::Approx(many.values[i]).epsilon(1e-9));
    }
}

TEST_CASE("sampler: same seed, same output") {
    ModelConfig cfg = tiny_config();
    const DitModel model = DitModel::create(cfg, 37);
    const PackedTokens inputs = random_tokens({{1, 1, 2}}, cfg.token_width, 5);
    const TextEmbeddings text = TextEmbeddings::random(2, cfg.text_dim, 6);
    const std::vector<TokenShape> shapes{{1, 1, 2}, {1, 1, 1}};
    const PackedTokens a = sample_with_model(model, inputs, text, shapes, 8, 123);
    const PackedTokens b = sample_with_model(model, inputs, text, shapes, 8, 123);
    CHECK(a.values == b.values);
    const PackedTokens c = sample_with_model(model, inputs, text, shapes, 8, 124);
    CHECK(a.values != c.values);
}

TEST_CASE("checkpoint: model round trip through the container") {
    ModelConfig cfg = tiny_config();
    const DitModel model = DitModel::create(cfg, 41);
    const std::vector<NamedArray> arrays = model_to_arrays(model);
    const DitModel back = model_from_arrays(cfg, arrays);
    for (size_t i = 0; i < model.params.items.size(); ++i) {
        const Parameter& a = model.params.items[i];
        const Parameter& b = back.params.find(a.name);
        for (size_t j = 0; j < a.value.size(); ++j) {
            CHECK(b.value[j] == static_cast<double>(static_cast<float>(a.value[j])));
        }
    }
}
