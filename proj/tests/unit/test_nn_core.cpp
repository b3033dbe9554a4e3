#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "reference_cell.hpp"
#include "ltccp/errors.hpp"
#include "ltccp/nn/activations.hpp"
#include "ltccp/nn/adam.hpp"
#include "ltccp/nn/batch_gradient.hpp"
#include "ltccp/nn/checkpoint.hpp"
#include "ltccp/nn/grad_check.hpp"
#include "ltccp/nn/lstm_cell.hpp"
#include "ltccp/nn/stacked_model.hpp"

using namespace ltccp;
using namespace ltccp::nn;
using ltccp::testing::random_cell;
using ltccp::testing::random_example;
using ltccp::testing::random_model;
using ltccp::testing::random_sequence;
using ltccp::testing::reference_cell;


TEST(Sigmoid, SymmetryPointAndIdentity) {
    EXPECT_EQ(sigmoid(0.0), 0.5);
    for (double x : {-30.0, -3.2, -0.1, 0.7, 4.0, 25.0}) EXPECT_NEAR(sigmoid(x) + sigmoid(-x), 1.0, 1e-15);
}

TEST(Sigmoid, MatchesHighPrecisionValue) {
    // 1 / (1 + e^-2) to 40 digits: 0.8807970779778824440597291413023967952064
    EXPECT_NEAR(sigmoid(2.0), 0.88079707797788244406, 2.5e-16);  // within 1 ulp
}

TEST(Sigmoid, SaturatesWithoutOverflow) {
    EXPECT_EQ(sigmoid(-1000.0), 0.0);
    EXPECT_EQ(sigmoid(1000.0), 1.0);
    EXPECT_GT(sigmoid(-700.0), 0.0);
    double prev = 0.0;
    for (double x = -50; x <= 50; x += 0.5) {
        EXPECT_GE(sigmoid(x), prev);
        prev = sigmoid(x);
    }
}

TEST(LstmCell, ZeroWeightsHalveMemory) {
    auto p = LstmCellParams::zeros(3, 4);
    LstmState prev{Vector(4, 0.0), {0.4, -1.0, 2.0, 0.0}};
    const auto step = lstm_cell_forward(p, std::vector<double>{1.0, 2.0, 3.0}, prev);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(step.cache.forget[i], 0.5);
        EXPECT_EQ(step.cache.candidate[i], 0.0);
        EXPECT_DOUBLE_EQ(step.next.c[i], 0.5 * prev.c[i]);
        EXPECT_DOUBLE_EQ(step.next.h[i], 0.5 * std::tanh(0.5 * prev.c[i]));
    }
}

TEST(LstmCell, SaturatedForgetGateKeepsMemory) {
    auto p = LstmCellParams::zeros(2, 3);
    std::fill(p.b_forget.begin(), p.b_forget.end(), 20.0);
    LstmState prev{Vector(3, 0.0), {0.3, -0.7, 1.9}};
    const auto step = lstm_cell_forward(p, std::vector<double>{0.5, -0.5}, prev);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(step.next.c[i], prev.c[i], 1e-8);
}

TEST(LstmCell, ForcedGatesPreserveLongTermMemoryOverManySteps) {
    std::mt19937_64 rng(7);
    auto p = random_cell(3, 5, rng);
    std::fill(p.b_forget.begin(), p.b_forget.end(), 60.0);
    std::fill(p.b_update.begin(), p.b_update.end(), -60.0);
    LstmState state{Vector(5, 0.0), {0.9, -0.4, 0.0, 1.3, -2.2}};
    const Vector c0 = state.c;
    for (const auto& x : random_sequence(25, 3, rng)) {
        state = lstm_cell_forward(p, x, state).next;
        for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(state.c[i], c0[i], 1e-12);
    }
}

TEST(LstmCell, MatchesStraightLineEvaluation) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        const auto p = random_cell(4, 6, rng);
        const auto xs = random_sequence(1, 4, rng);
        const auto hs = random_sequence(2, 6, rng);
        std::vector<double> h_prev(6), c_prev = hs[1];
        for (std::size_t i = 0; i < 6; ++i) h_prev[i] = std::tanh(hs[0][i]);
        const auto got = lstm_cell_forward(p, xs[0], LstmState{h_prev, c_prev});
        const auto want = reference_cell(p, xs[0], h_prev, c_prev);
        for (std::size_t i = 0; i < 6; ++i) {
            EXPECT_NEAR(got.next.h[i], want.h[i], 1e-12);
            EXPECT_NEAR(got.next.c[i], want.c[i], 1e-12);
        }
    }
}

TEST(LstmCell, GateAndStateRanges) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_cell(3, 8, rng, 1.5);
        LstmState s = LstmState::zeros(8);
        for (const auto& x : random_sequence(10, 3, rng)) {
            const auto step = lstm_cell_forward(p, x, s);
            for (std::size_t i = 0; i < 8; ++i) {
                for (double g : {step.cache.forget[i], step.cache.update[i], step.cache.output[i]}) {
                    EXPECT_GT(g, 0.0);
                    EXPECT_LT(g, 1.0);
                }
                EXPECT_GT(step.cache.candidate[i], -1.0);
                EXPECT_LT(step.cache.candidate[i], 1.0);
                EXPECT_GT(step.next.h[i], -1.0);
                EXPECT_LT(step.next.h[i], 1.0);
            }
            EXPECT_EQ(step.next.h.size(), step.next.c.size());
            s = step.next;
        }
    }
}

TEST(LstmCell, DimensionMismatchNamesTheTensor) {
    auto p = LstmCellParams::zeros(3, 4);
    EXPECT_THROW(lstm_cell_forward(p, std::vector<double>{1.0, 2.0}, LstmState::zeros(4)), StructuralError);
    EXPECT_THROW(lstm_cell_forward(p, std::vector<double>{1.0, 2.0, 3.0}, LstmState::zeros(5)), StructuralError);
    p.b_update.pop_back();
    try {
        p.validate();
        FAIL() << "expected StructuralError";
    } catch (const StructuralError& e) {
        EXPECT_NE(std::string(e.what()).find("b_update"), std::string::npos);
    }
}

TEST(StackedForward, ZeroWeightsGiveUniformReadout) {
    const auto m = StackedModelParams::zeros(3, 4, 4, log_bin_edges({.num_bins = 8}));
    const auto cache = stacked_forward(m, std::vector<Vector>{{1.0, 2.0, 3.0}});
    ASSERT_EQ(cache.probs.size(), 1u);
    for (double p : cache.probs[0]) EXPECT_DOUBLE_EQ(p, 1.0 / 8.0);
}

TEST(StackedForward, ReadoutIsADistributionAtEveryStep) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto m = random_model(3, 6, 16, seed, 2.0);
        std::mt19937_64 rng(seed + 100);
        const auto cache = stacked_forward(m, random_sequence(12, 3, rng));
        for (const auto& p : cache.probs) {
            EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
            for (double v : p) {
                EXPECT_GT(v, 0.0);
                EXPECT_LT(v, 1.0);
            }
        }
    }
}

TEST(StackedForward, ComposesCellSteps) {
    const auto m = random_model(3, 5, 8, 42);
    std::mt19937_64 rng(43);
    const auto seq = random_sequence(3, 3, rng);
    const auto cache = stacked_forward(m, seq);

    LstmState s1 = LstmState::zeros(5), s2 = LstmState::zeros(5);
    for (std::size_t t = 0; t < 3; ++t) {
        s1 = lstm_cell_forward(m.layers[0], seq[t], s1).next;
        s2 = lstm_cell_forward(m.layers[1], s1.h, s2).next;
        std::vector<double> logits(8);
        double top = -1e300;
        for (std::size_t k = 0; k < 8; ++k) {
            logits[k] = m.readout_b[k];
            for (std::size_t j = 0; j < 5; ++j) logits[k] += m.readout_w(k, j) * s2.h[j];
            top = std::max(top, logits[k]);
        }
        double z = 0.0;
        for (double l : logits) z += std::exp(l - top);
        for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(cache.probs[t][k], std::exp(logits[k] - top) / z, 1e-12);
    }
}

TEST(StackedForward, PureFunction) {
    const auto m = random_model(3, 6, 8, 5);
    std::mt19937_64 rng(6);
    const auto seq = random_sequence(7, 3, rng);
    const auto a = stacked_forward(m, seq);
    const auto b = stacked_forward(m, seq);
    EXPECT_EQ(a.probs, b.probs);
    EXPECT_EQ(a.logits, b.logits);
}

TEST(StackedForward, EmptySequenceIsUsageError) {
    const auto m = random_model(3, 4, 8, 1);
    EXPECT_THROW(stacked_forward(m, std::vector<Vector>{}), UsageError);
}

TEST(StackedForward, StepwiseRolloutMatchesBatchForward) {
    const auto m = random_model(3, 6, 8, 77);
    std::mt19937_64 rng(78);
    const auto seq = random_sequence(9, 3, rng);
    const auto cache = stacked_forward(m, seq);
    auto state = initial_rollout_state(m);
    for (std::size_t t = 0; t < seq.size(); ++t) EXPECT_EQ(stacked_step(m, seq[t], state), cache.probs[t]);
}

TEST(Loss, PerfectPredictionIsZero) {
    std::vector<Vector> probs{{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}};
    EXPECT_EQ(sequence_loss(probs, StepTargets{{1, 0}, {true, true}}), 0.0);
}

TEST(Loss, UniformPredictionIsLogNumBins) {
    std::vector<Vector> probs(4, Vector(8, 1.0 / 8.0));
    EXPECT_NEAR(sequence_loss(probs, StepTargets{{0, 3, 5, 7}, {false, true, true, true}}), 2.0794415416798359,
                1e-15);
}

TEST(Loss, MatchesScalarRecomputation) {
    const auto m = random_model(3, 5, 12, 9, 1.5);
    std::mt19937_64 rng(10);
    const auto ex = random_example(8, 3, 12, 4, rng);
    const auto cache = stacked_forward(m, ex.inputs);
    double total = 0.0;
    int n = 0;
    for (std::size_t t = 0; t < 8; ++t) {
        if (!ex.targets.supervised[t]) continue;
        total += -std::log(cache.probs[t][ex.targets.bins[t]]);
        ++n;
    }
    EXPECT_NEAR(sequence_loss(cache, ex.targets), total / n, 1e-12);
    EXPECT_NEAR(sequence_loss(cache.probs, ex.targets), total / n, 1e-12);
    EXPECT_GE(sequence_loss(cache, ex.targets), 0.0);
}

TEST(Loss, EmptyMaskIsUsageError) {
    std::vector<Vector> probs(2, Vector(4, 0.25));
    EXPECT_THROW(sequence_loss(probs, StepTargets{{0, 1}, {false, false}}), UsageError);
}

TEST(Backward, MatchesFiniteDifferences) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto m = random_model(3, 8, 10, 1000 + seed);
        std::mt19937_64 rng(2000 + seed);
        const auto ex = random_example(6, 3, 10, 3, rng);
        const auto r = grad_check(m, ex, 1e-5);
        EXPECT_LT(r.max_relative_error, 1e-4) << r.worst_tensor << "[" << r.worst_index << "] analytic "
                                              << r.analytic << " numeric " << r.numeric;
        EXPECT_EQ(r.parameters_checked, parameter_count(m));
    }
}

TEST(Backward, VanishesAtPerfectPrediction) {
    auto m = random_model(3, 4, 6, 3, 0.3);
    std::fill(m.readout_b.begin(), m.readout_b.end(), -60.0);
    m.readout_b[2] = 60.0;
    std::mt19937_64 rng(4);
    SequenceExample ex{random_sequence(5, 3, rng), {{2, 2, 2, 2, 2}, {true, true, true, true, true}}};
    const auto cache = stacked_forward(m, ex.inputs);
    EXPECT_LT(sequence_loss(cache, ex.targets), 1e-40);
    const auto g = backward(m, cache, ex.targets);
    EXPECT_LT(gradient_norm(g), 1e-40);
}

TEST(Backward, BatchSumIsOrderIndependent) {
    const auto m = random_model(3, 6, 8, 21);
    std::mt19937_64 rng(22);
    std::vector<SequenceExample> batch;
    for (int i = 0; i < 5; ++i) batch.push_back(random_example(7, 3, 8, 3, rng));
    const auto a = batch_gradient(m, batch, Execution::serial);
    std::swap(batch[1], batch[3]);
    const auto b = batch_gradient(m, batch, Execution::serial);
    std::vector<double> fa, fb;
    visit_tensors(a.grad, [&](const std::string&, std::span<const double> s) { fa.insert(fa.end(), s.begin(), s.end()); });
    visit_tensors(b.grad, [&](const std::string&, std::span<const double> s) { fb.insert(fb.end(), s.begin(), s.end()); });
    ASSERT_EQ(fa.size(), fb.size());
    for (std::size_t i = 0; i < fa.size(); ++i) EXPECT_NEAR(fa[i], fb[i], 1e-12);
}

TEST(Backward, RejectsCacheFromDifferentModel) {
    const auto small = random_model(3, 4, 8, 1);
    const auto big = random_model(3, 6, 8, 1);
    std::mt19937_64 rng(2);
    const auto ex = random_example(4, 3, 8, 2, rng);
    const auto cache = stacked_forward(small, ex.inputs);
    EXPECT_THROW(backward(big, cache, ex.targets), StructuralError);
}

TEST(BatchGradient, ParallelMatchesSerialBitForBit) {
    const auto m = random_model(3, 8, 16, 31);
    std::mt19937_64 rng(32);
    std::vector<SequenceExample> batch;
    for (int i = 0; i < 17; ++i) batch.push_back(random_example(10, 3, 16, 5, rng));
    const auto s = batch_gradient(m, batch, Execution::serial);
    const auto p = batch_gradient(m, batch, Execution::parallel);
    EXPECT_EQ(s.loss_sum, p.loss_sum);
    EXPECT_EQ(s.grad.layers, p.grad.layers);
    EXPECT_EQ(s.grad.readout_w, p.grad.readout_w);
    EXPECT_EQ(s.grad.readout_b, p.grad.readout_b);
    EXPECT_EQ(batch_loss(m, batch, Execution::serial), batch_loss(m, batch, Execution::parallel));
}

TEST(GradCheck, DetectsCorruptedComponent) {
    const auto m = random_model(3, 8, 10, 55);
    std::mt19937_64 rng(56);
    const auto ex = random_example(6, 3, 10, 3, rng);
    auto g = backward(m, stacked_forward(m, ex.inputs), ex.targets);
    ASSERT_LT(grad_check(m, ex, g, 1e-5).max_relative_error, 1e-4);
    auto& target = g.layers[0].w_update.values()[5];
    ASSERT_GT(std::abs(target), 1e-6);
    target *= 1.1;
    EXPECT_GT(grad_check(m, ex, g, 1e-5).max_relative_error, 1e-2);
}

TEST(GradCheck, SmallerStepDoesNotBlowUp) {
    const auto m = random_model(3, 8, 10, 60);
    std::mt19937_64 rng(61);
    const auto ex = random_example(6, 3, 10, 3, rng);
    const double coarse = grad_check(m, ex, 1e-4).max_relative_error;
    const double fine = grad_check(m, ex, 1e-5).max_relative_error;
    EXPECT_LE(fine, 10.0 * coarse);
}

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
    auto m = random_model(3, 4, 8, 70);
    const auto before = m;
    AdamState state;
    adam_step(m, GradientSet::zeros_like(m), state, AdamHyper{});
    EXPECT_EQ(m, before);
    EXPECT_EQ(state.step, 1u);
}

TEST(Adam, SingleParameterMatchesClosedForm) {
    std::vector<double> theta{0.5};
    std::vector<double> grad{0.2};
    std::vector<std::span<double>> params{theta};
    std::vector<std::span<const double>> grads{grad};
    AdamState state;
    const AdamHyper hyper{};
    adam_update(params, grads, state, hyper);
    // m = 0.02, v = 4e-5; bias-corrected m = 0.2, v = 0.04.
    const double expected = 0.5 - 1e-3 * 0.2 / (std::sqrt(0.04) + 1e-8);
    EXPECT_NEAR(theta[0], expected, 1e-15);
    EXPECT_NEAR(theta[0], 0.4990000000499999975, 1e-15);
    grad[0] = -0.1;
    adam_update(params, grads, state, hyper);
    EXPECT_NEAR(theta[0], 0.4987336630271867558, 1e-15);
}

TEST(Adam, ClipsGlobalNorm) {
    std::vector<double> a{0.0, 0.0}, b{0.0, 0.0};
    std::vector<double> ga{30.0, 40.0}, gb{300.0, 400.0};  // norms 50 and 500
    AdamState sa, sb;
    AdamHyper h{};
    h.clip_norm = 5.0;
    adam_update(std::vector<std::span<double>>{a}, std::vector<std::span<const double>>{ga}, sa, h);
    adam_update(std::vector<std::span<double>>{b}, std::vector<std::span<const double>>{gb}, sb, h);
    EXPECT_EQ(sa.first_moment, sb.first_moment);
    EXPECT_NEAR(sa.first_moment[0], 0.1 * 3.0, 1e-15);
}

TEST(Adam, NonFiniteGradientReportsStep) {
    auto m = random_model(3, 4, 8, 71);
    AdamState state;
    adam_step(m, GradientSet::zeros_like(m), state, AdamHyper{});
    auto g = GradientSet::zeros_like(m);
    g.readout_b[0] = std::numeric_limits<double>::quiet_NaN();
    try {
        adam_step(m, g, state, AdamHyper{});
        FAIL() << "expected TrainingError";
    } catch (const TrainingError& e) {
        EXPECT_NE(std::string(e.what()).find("step 2"), std::string::npos);
    }
}

TEST(Adam, HundredStepsAreDeterministic) {
    auto run = [] {
        auto m = init_model(3, 6, 6, log_bin_edges({.num_bins = 8}), 99);
        std::mt19937_64 rng(100);
        std::vector<SequenceExample> batch;
        for (int i = 0; i < 4; ++i) batch.push_back(random_example(6, 3, 8, 3, rng));
        AdamState state;
        for (int step = 0; step < 100; ++step) {
            auto bg = batch_gradient(m, batch);
            adam_step(m, bg.grad, state, AdamHyper{});
        }
        return std::pair{m, state};
    };
    const auto a = run();
    const auto b = run();
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.second, b.second);
    visit_tensors(a.first, [](const std::string&, std::span<const double> s) {
        for (double v : s) ASSERT_TRUE(std::isfinite(v));
    });
}

TEST(Init, ShapesAndBiases) {
    const auto m = init_model(3, 32, 32, log_bin_edges({}), 1);
    EXPECT_EQ(m.num_bins(), 64u);
    EXPECT_EQ(m.layers[1].input_dim, 32u);
    for (double b : m.layers[0].b_forget) EXPECT_EQ(b, 1.0);
    for (double b : m.layers[1].b_update) EXPECT_EQ(b, 0.0);
    const double bound = 1.0 / std::sqrt(35.0);
    for (double w : m.layers[0].w_candidate.values()) EXPECT_LE(std::abs(w), bound);
}

TEST(Checkpoint, RoundTripIsBitExact) {
    auto m = random_model(3, 5, 9, 123, 3.0);
    m.readout_b[0] = 1.0 / 3.0;
    m.readout_b[1] = 5e-324;
    m.readout_b[2] = -1.7976931348623157e308;
    const auto doc = checkpoint_to_json(m, {{"train_years", 5}});
    const auto text = doc.dump();
    const auto back = checkpoint_from_json(nlohmann::json::parse(text));
    EXPECT_EQ(back, m);
    EXPECT_EQ(doc["metadata"]["train_years"], 5);
}

TEST(Checkpoint, RejectsWrongFormatAndShapes) {
    const auto m = random_model(3, 4, 8, 1);
    auto doc = checkpoint_to_json(m);
    auto bad_tag = doc;
    bad_tag["format"] = "something-else";
    EXPECT_THROW(checkpoint_from_json(bad_tag), SchemaError);
    auto bad_version = doc;
    bad_version["version"] = 99;
    EXPECT_THROW(checkpoint_from_json(bad_version), SchemaError);
    auto truncated = doc;
    truncated["layers"][1]["w_forget"].erase(0);
    EXPECT_THROW(checkpoint_from_json(truncated), StructuralError);
}
