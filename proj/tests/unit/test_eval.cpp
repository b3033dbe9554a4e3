#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ltccp/errors.hpp"
#include "ltccp/eval/metrics.hpp"

using namespace ltccp;
using namespace ltccp::eval;

namespace {

std::vector<Pair> random_pairs(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> obs(6, 400);
    std::lognormal_distribution<double> ratio(0.0, 0.4);
    std::vector<Pair> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double o = obs(rng);
        out.push_back({o * ratio(rng), o, "p" + std::to_string(i)});
    }
    return out;
}

}  // namespace

TEST(Metrics, PerfectPredictions) {
    std::vector<Pair> pairs{{10, 10, "a"}, {7, 7, "b"}};
    EXPECT_EQ(mape(pairs), 0.0);
    EXPECT_EQ(acc(pairs), 1.0);
}

TEST(Metrics, HandComputedValues) {
    std::vector<Pair> one{{13, 10, "a"}};
    EXPECT_DOUBLE_EQ(mape(one), 0.3);
    EXPECT_EQ(acc(one, 0.3), 1.0);  // boundary counts as correct

    std::vector<Pair> two{{13, 10, "a"}, {5, 10, "b"}};
    EXPECT_DOUBLE_EQ(mape(two), 0.4);
    std::vector<Pair> two_acc{{13, 10, "a"}, {14, 10, "b"}};
    EXPECT_EQ(acc(two_acc, 0.3), 0.5);
}

TEST(Metrics, FivePairFixture) {
    // Relative errors 0.3 (boundary), 0.5, 0, 0.25, 1.0.
    std::vector<Pair> pairs{{13, 10, "a"}, {5, 10, "b"}, {20, 20, "c"}, {5, 4, "d"}, {16, 8, "e"}};
    EXPECT_DOUBLE_EQ(mape(pairs), (0.3 + 0.5 + 0.0 + 0.25 + 1.0) / 5.0);
    EXPECT_EQ(acc(pairs, 0.3), 3.0 / 5.0);
    EXPECT_EQ(acc(pairs, 0.25), 2.0 / 5.0);
    EXPECT_EQ(acc(pairs, 1.0), 1.0);
}

TEST(Metrics, InfiniteToleranceAcceptsEverything) {
    const auto pairs = random_pairs(200, 1);
    EXPECT_EQ(acc(pairs, std::numeric_limits<double>::infinity()), 1.0);
}

TEST(Metrics, ZeroObservationNamesThePaper) {
    std::vector<Pair> pairs{{1, 2, "ok"}, {1, 0, "broken-42"}};
    try {
        mape(pairs);
        FAIL();
    } catch (const MetricError& e) {
        EXPECT_NE(std::string(e.what()).find("broken-42"), std::string::npos);
    }
    EXPECT_THROW(acc(pairs), MetricError);
    EXPECT_THROW(mape(std::vector<Pair>{}), UsageError);
}

TEST(Metrics, AccMonotoneInEpsilon) {
    const auto pairs = random_pairs(500, 2);
    double prev = 0;
    for (double eps = 0.01; eps < 3; eps += 0.05) {
        const double a = acc(pairs, eps);
        EXPECT_GE(a, prev);
        prev = a;
    }
}

TEST(Metrics, PermutationAndScaleInvariance) {
    auto pairs = random_pairs(300, 3);
    const double m = mape(pairs);
    const double a = acc(pairs);
    std::mt19937_64 rng(4);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    EXPECT_NEAR(mape(pairs), m, 1e-12);
    EXPECT_EQ(acc(pairs), a);
    // Powers of two scale exactly.
    for (auto& p : pairs) {
        p.predicted *= 8;
        p.observed *= 8;
    }
    EXPECT_NEAR(mape(pairs), m, 1e-12);
    EXPECT_EQ(acc(pairs), a);
}

namespace {

GroundTruth fixture_truth() { return {{"a", {10, 12, 14}}, {"b", {10, 20, 30}}}; }

ModelPredictions fixture_model(std::string name) {
    return {std::move(name), {{"b", {5, 20, 45}, {}}, {"a", {13, 12, 14}, {}}}};
}

}  // namespace

TEST(Report, PerfectModelGivesZeroErrorFullAccuracy) {
    GroundTruth truth;
    std::vector<Prediction> preds;
    for (int i = 0; i < 4; ++i) {
        std::vector<double> obs{10.0 + i, 11.0 + i, 12.0 + i, 13.0 + i, 14.0 + i};
        truth["q" + std::to_string(i)] = obs;
        preds.push_back({"q" + std::to_string(i), obs, {}});
    }
    std::vector<ModelPredictions> models{{"LT-CCP", preds}};
    const auto r = build_report(models, truth, EvalConfig{});
    ASSERT_EQ(r.rows.size(), 5u);
    for (int t = 1; t <= 5; ++t) {
        EXPECT_EQ(r.at("LT-CCP", t).mape, 0.0);
        EXPECT_EQ(r.at("LT-CCP", t).acc, 1.0);
    }
    EXPECT_EQ(r.cohort_size, 4u);
}

TEST(Report, HandComputedFixture) {
    EvalConfig cfg;
    cfg.horizons = {1, 2, 3};
    std::vector<ModelPredictions> models{fixture_model("LR"), fixture_model("CART")};
    const auto r = build_report(models, fixture_truth(), cfg);
    ASSERT_EQ(r.rows.size(), 6u);
    EXPECT_EQ(r.rows[0].model, "LR");
    EXPECT_EQ(r.rows[3].model, "CART");
    EXPECT_DOUBLE_EQ(r.at("LR", 1).mape, 0.4);
    EXPECT_EQ(r.at("LR", 1).acc, 0.5);
    EXPECT_EQ(r.at("LR", 2).mape, 0.0);
    EXPECT_DOUBLE_EQ(r.at("CART", 3).mape, 0.25);  // (0 + 0.5) / 2
    EXPECT_EQ(r.at("CART", 3).acc, 0.5);
}

TEST(Report, RoundingModes) {
    EvalConfig cfg;
    cfg.horizons = {1};
    cfg.rounding = Rounding::floor;
    std::vector<ModelPredictions> models{{"m", {{"a", {12.9}, {}}}}};
    GroundTruth truth{{"a", {10}}};
    EXPECT_DOUBLE_EQ(build_report(models, truth, cfg).rows[0].mape, 0.2);
    cfg.rounding = Rounding::ceil;
    EXPECT_DOUBLE_EQ(build_report(models, truth, cfg).rows[0].mape, 0.3);
    EXPECT_EQ(rounding_from_name("nearest"), Rounding::nearest);
    EXPECT_THROW(rounding_from_name("banker"), ConfigError);
}

TEST(Report, MismatchedTestSetsRejected) {
    EvalConfig cfg;
    cfg.horizons = {1, 2, 3};
    auto partial = fixture_model("LR");
    partial.predictions.pop_back();
    std::vector<ModelPredictions> models{fixture_model("CART"), partial};
    EXPECT_THROW(build_report(models, fixture_truth(), cfg), IdMismatchError);

    auto stranger = fixture_model("LR");
    stranger.predictions[0].paper_id = "zzz";
    std::vector<ModelPredictions> models2{stranger};
    EXPECT_THROW(build_report(models2, fixture_truth(), cfg), IdMismatchError);

    auto short_pred = fixture_model("LR");
    short_pred.predictions[0].predicted.resize(2);
    std::vector<ModelPredictions> models3{short_pred};
    EXPECT_THROW(build_report(models3, fixture_truth(), cfg), StructuralError);
}

TEST(Report, CsvRoundTripIsExact) {
    GroundTruth truth;
    std::vector<Prediction> a, b;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.5, 1.7);
    for (int i = 0; i < 37; ++i) {
        std::vector<double> obs, pa, pb;
        for (int t = 1; t <= 5; ++t) {
            obs.push_back(10.0 + 3 * t + i);
            pa.push_back(obs.back() * u(rng));
            pb.push_back(obs.back() * u(rng));
        }
        truth["x" + std::to_string(i)] = obs;
        a.push_back({"x" + std::to_string(i), pa, {}});
        b.push_back({"x" + std::to_string(i), pb, {}});
    }
    std::vector<ModelPredictions> models{{"LR", a}, {"LT-CCP", b}};
    const auto r = build_report(models, truth, EvalConfig{});
    const auto csv = report_csv(r);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "model,t,MAPE,ACC");
    EXPECT_EQ(parse_report_csv(csv), r.rows);
    const auto j = report_json(r);
    EXPECT_EQ(j["rows"].size(), 10u);
    EXPECT_EQ(j["rows"][7]["MAPE"].get<double>(), r.rows[7].mape);
}

TEST(Report, ReferenceConstantsRelations) {
    // Printed relative improvements at t = 5 follow from the table values.
    const auto& cart = kReferenceTable[3];
    const auto& rpp = kReferenceTable[0];
    const auto& ours = kReferenceTable[4];
    EXPECT_EQ(ours.model, "LT-CCP");
    EXPECT_NEAR(ours.acc[4] / cart.acc[4] - 1.0, 0.1268, 5e-5);
    EXPECT_NEAR(ours.acc[4] / rpp.acc[4] - 1.0, 0.4892, 5e-5);
    EXPECT_EQ(ours.mape[0], 0.123);
    EXPECT_EQ(ours.acc[0], 0.940);
    EXPECT_EQ(ours.mape[4], 0.317);
    EXPECT_EQ(ours.acc[4], 0.551);
}

TEST(Distribution, IdenticalSeriesGiveIdenticalHistograms) {
    GroundTruth truth;
    std::vector<Prediction> preds;
    for (int i = 0; i < 50; ++i) {
        const double v = 1.0 + i * i;
        truth["p" + std::to_string(i)] = {v};
        preds.push_back({"p" + std::to_string(i), {v}, {}});
    }
    const auto rows = distribution_export(preds, truth, 1);
    ASSERT_EQ(rows.size(), 30u);
    EXPECT_EQ(rows.front().bin_low, 1.0);
    EXPECT_EQ(rows.back().bin_high, 1.0 + 49 * 49);
    for (const auto& r : rows) EXPECT_EQ(r.predicted_count, r.real_count);
}

TEST(Distribution, SinglePaperOccupiesOneBinEach) {
    GroundTruth truth{{"a", {40}}};
    std::vector<Prediction> preds{{"a", {7}, {}}};
    const auto rows = distribution_export(preds, truth, 1);
    std::size_t pred_bins = 0, real_bins = 0;
    for (const auto& r : rows) {
        pred_bins += r.predicted_count ? 1 : 0;
        real_bins += r.real_count ? 1 : 0;
    }
    EXPECT_EQ(pred_bins, 1u);
    EXPECT_EQ(real_bins, 1u);
    EXPECT_EQ(rows.back().real_count, 1u);  // the maximum sits in the closed last bin
}

TEST(Distribution, MassConserved) {
    GroundTruth truth;
    std::vector<Prediction> preds;
    std::mt19937_64 rng(5);
    std::lognormal_distribution<double> ln(3.0, 1.2);
    for (int i = 0; i < 1000; ++i) {
        const double real = std::ceil(ln(rng));
        truth["p" + std::to_string(i)] = {real, real + 1, real + 2, real + 3, real + 4};
        // Out-of-range predictions on both sides must still be counted.
        const double p = i % 97 == 0 ? 0.2 : (i % 89 == 0 ? 1e7 : ln(rng));
        preds.push_back({"p" + std::to_string(i), {p, p, p, p, p}, {}});
    }
    const auto rows = distribution_export(preds, truth, 5);
    std::size_t pred_total = 0, real_total = 0;
    for (const auto& r : rows) {
        pred_total += r.predicted_count;
        real_total += r.real_count;
    }
    EXPECT_EQ(pred_total, 1000u);
    EXPECT_EQ(real_total, 1000u);
    const auto csv = distribution_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "bin_low,bin_high,predicted_count,real_count");
}
