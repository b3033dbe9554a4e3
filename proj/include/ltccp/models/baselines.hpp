#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "ltccp/data/cohort.hpp"
#include "ltccp/nn/matrix.hpp"
#include "ltccp/prediction.hpp"

namespace ltccp::models {

/// Observed-window features of every year concatenated into one row.
nn::Vector window_summary(const data::Sample& sample);

// Linear regression ------------------------------------------------------

inline constexpr double kRidge = 1e-8;

struct LrModel {
    std::size_t input_dim = 0;              // length of window_summary
    std::vector<std::size_t> kept_columns;  // varying, non-duplicate columns of the training data
    std::vector<nn::Vector> coefficients;   // per horizon: intercept, then one per kept column

    bool operator==(const LrModel&) const = default;
};

/// One least-squares fit per horizon offset, solved from the normal equations
/// of the column-centered design with kRidge added to the diagonal; the
/// intercept follows from the means and is not damped. Columns constant
/// across the training set, or equal to an earlier column, are dropped.
/// Throws UsageError on an empty training set.
LrModel train_lr(std::span<const data::Sample> train);

/// Clamped to the monotone contract.
Prediction predict_lr(const LrModel& model, const data::Sample& sample, int horizon);

nlohmann::json to_json(const LrModel& model);
LrModel lr_from_json(const nlohmann::json& doc);

// Regression tree ----------------------------------------------------------

struct CartConfig {
    int max_depth = 5;
    std::size_t min_leaf = 6;

    bool operator==(const CartConfig&) const = default;
};

struct TreeNode {
    int feature = -1;  // -1 for a leaf
    double threshold = 0.0;  // go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    double value = 0.0;  // mean target of the node's samples
    std::size_t samples = 0;

    bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root; children follow in depth-first order

    double predict(std::span<const double> x) const;
    int depth() const;
    bool operator==(const RegressionTree&) const = default;
};

/// Greedy variance-reduction tree. A split needs min_leaf samples on each
/// side and must lower the summed squared error by more than 1e-12 of the
/// node's; thresholds are midpoints between consecutive distinct values.
/// Candidates within that margin tie, and ties go to the lowest feature,
/// then the lowest threshold.
/// Throws UsageError when min_leaf exceeds the number of rows or is zero.
RegressionTree fit_tree(std::span<const nn::Vector> rows, std::span<const double> targets, const CartConfig& config);

struct CartModel {
    CartConfig config;
    std::vector<RegressionTree> trees;  // per horizon offset

    bool operator==(const CartModel&) const = default;
};

CartModel train_cart(std::span<const data::Sample> train, const CartConfig& config);
Prediction predict_cart(const CartModel& model, const data::Sample& sample, int horizon);

nlohmann::json to_json(const CartModel& model);
CartModel cart_from_json(const nlohmann::json& doc);

}  // namespace ltccp::models
