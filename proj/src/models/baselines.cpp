#include "ltccp/models/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "ltccp/errors.hpp"

namespace ltccp::models {
namespace {

std::size_t common_horizon(std::span<const data::Sample> train) {
    if (train.empty()) throw UsageError("baseline: empty training set");
    const std::size_t h = train.front().targets.size();
    const std::size_t dim = window_summary(train.front()).size();
    for (const auto& s : train) {
        if (s.targets.size() != h) throw StructuralError("paper " + s.paper_id + ": inconsistent horizon");
        if (window_summary(s).size() != dim) throw StructuralError("paper " + s.paper_id + ": inconsistent window");
    }
    return h;
}

double last_observed(const data::Sample& s) {
    return s.observed_cumulative.empty() ? 0.0 : s.observed_cumulative.back();
}

void check_horizon(int horizon, std::size_t available) {
    if (horizon < 0) throw UsageError("predict: negative horizon");
    if (static_cast<std::size_t>(horizon) > available) {
        throw StructuralError("predict: horizon " + std::to_string(horizon) + " beyond the " +
                              std::to_string(available) + " trained offsets");
    }
}

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double sse = 0.0;
};

// Rows idx[begin, end) of the node; returns the best split or feature -1.
Split best_split(std::span<const nn::Vector> rows, std::span<const double> y, std::span<const std::size_t> idx,
                 std::size_t min_leaf, double node_sse, double node_mean) {
    Split best;
    best.sse = node_sse;
    // Different features can induce the same partition; treat SSEs within
    // rounding distance as ties so the lowest feature and threshold win.
    const double tie = 1e-12 * std::max(1.0, node_sse);
    const std::size_t n = idx.size();
    const std::size_t dim = rows[idx[0]].size();
    std::vector<std::size_t> order(idx.begin(), idx.end());
    for (std::size_t j = 0; j < dim; ++j) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows[a][j] < rows[b][j]; });
        // Centered prefix sums keep the squared-error arithmetic well conditioned.
        double total = 0.0, total_sq = 0.0;
        for (const auto i : order) {
            const double d = y[i] - node_mean;
            total += d;
            total_sq += d * d;
        }
        double left = 0.0, left_sq = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double d = y[order[k]] - node_mean;
            left += d;
            left_sq += d * d;
            const std::size_t nl = k + 1;
            const std::size_t nr = n - nl;
            const double a = rows[order[k]][j];
            const double b = rows[order[k + 1]][j];
            if (nl < min_leaf || nr < min_leaf || !(a < b)) continue;
            const double right = total - left;
            const double right_sq = total_sq - left_sq;
            const double sse = (left_sq - left * left / static_cast<double>(nl)) +
                               (right_sq - right * right / static_cast<double>(nr));
            if (sse < best.sse - tie) {
                best.feature = static_cast<int>(j);
                best.threshold = a + (b - a) / 2;
                best.sse = sse;
            }
        }
    }
    return best;
}

int grow(RegressionTree& tree, std::span<const nn::Vector> rows, std::span<const double> y,
         std::vector<std::size_t> idx, int depth, const CartConfig& config) {
    double mean = 0.0;
    for (const auto i : idx) mean += y[i];
    mean /= static_cast<double>(idx.size());
    double sse = 0.0;
    for (const auto i : idx) sse += (y[i] - mean) * (y[i] - mean);

    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({-1, 0.0, -1, -1, mean, idx.size()});
    if (depth >= config.max_depth || idx.size() < 2 * config.min_leaf || sse <= 0) return id;

    const Split s = best_split(rows, y, idx, config.min_leaf, sse, mean);
    if (s.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (const auto i : idx) (rows[i][static_cast<std::size_t>(s.feature)] <= s.threshold ? left : right).push_back(i);
    const int l = grow(tree, rows, y, std::move(left), depth + 1, config);
    const int r = grow(tree, rows, y, std::move(right), depth + 1, config);
    auto& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = s.feature;
    node.threshold = s.threshold;
    node.left = l;
    node.right = r;
    return id;
}

}  // namespace

nn::Vector window_summary(const data::Sample& sample) {
    nn::Vector out;
    for (const auto& x : sample.observed_features) out.insert(out.end(), x.begin(), x.end());
    return out;
}

LrModel train_lr(std::span<const data::Sample> train) {
    const std::size_t horizon = common_horizon(train);
    const std::size_t n = train.size();
    std::vector<nn::Vector> rows;
    rows.reserve(n);
    for (const auto& s : train) rows.push_back(window_summary(s));

    LrModel model;
    model.input_dim = rows.front().size();
    // Constant columns and exact copies of an earlier column carry no
    // information (log_new and log_cumulative coincide in year 0).
    for (std::size_t j = 0; j < model.input_dim; ++j) {
        const double first = rows.front()[j];
        const bool varies = std::any_of(rows.begin(), rows.end(), [&](const nn::Vector& r) { return r[j] != first; });
        const bool duplicate = std::any_of(model.kept_columns.begin(), model.kept_columns.end(), [&](std::size_t k) {
            return std::all_of(rows.begin(), rows.end(), [&](const nn::Vector& r) { return r[j] == r[k]; });
        });
        if (varies && !duplicate) model.kept_columns.push_back(j);
    }

    // Centered design: the intercept is recovered from the means and is not damped.
    const auto n_rows = static_cast<Eigen::Index>(n);
    const auto p = static_cast<Eigen::Index>(model.kept_columns.size());
    Eigen::MatrixXd X(n_rows, p);
    for (Eigen::Index i = 0; i < n_rows; ++i) {
        for (Eigen::Index k = 0; k < p; ++k) {
            X(i, k) = rows[static_cast<std::size_t>(i)][model.kept_columns[static_cast<std::size_t>(k)]];
        }
    }
    const Eigen::RowVectorXd means = X.colwise().mean();
    X.rowwise() -= means;
    Eigen::MatrixXd gram = X.transpose() * X;
    gram.diagonal().array() += kRidge;
    const Eigen::LDLT<Eigen::MatrixXd> solver(gram);

    for (std::size_t t = 0; t < horizon; ++t) {
        Eigen::VectorXd y(n_rows);
        for (Eigen::Index i = 0; i < n_rows; ++i) y(i) = train[static_cast<std::size_t>(i)].targets[t];
        const double y_mean = y.mean();
        y.array() -= y_mean;
        const Eigen::VectorXd w = p > 0 ? Eigen::VectorXd(solver.solve(X.transpose() * y)) : Eigen::VectorXd();
        nn::Vector beta{y_mean - (p > 0 ? means.dot(w) : 0.0)};
        beta.insert(beta.end(), w.data(), w.data() + w.size());
        model.coefficients.push_back(std::move(beta));
    }
    return model;
}

Prediction predict_lr(const LrModel& model, const data::Sample& sample, int horizon) {
    check_horizon(horizon, model.coefficients.size());
    const auto x = window_summary(sample);
    if (x.size() != model.input_dim) throw StructuralError("paper " + sample.paper_id + ": window size differs from the model's");
    Prediction out{sample.paper_id, {}, {}};
    for (int t = 0; t < horizon; ++t) {
        const auto& beta = model.coefficients[static_cast<std::size_t>(t)];
        double v = beta[0];
        for (std::size_t k = 0; k < model.kept_columns.size(); ++k) v += beta[k + 1] * x[model.kept_columns[k]];
        out.predicted.push_back(v);
    }
    clamp_monotone(out.predicted, last_observed(sample));
    return out;
}

nlohmann::json to_json(const LrModel& model) {
    return {{"type", "lr"},
            {"input_dim", model.input_dim},
            {"kept_columns", model.kept_columns},
            {"coefficients", model.coefficients}};
}

LrModel lr_from_json(const nlohmann::json& doc) {
    try {
        if (doc.at("type") != "lr") throw SchemaError("not a linear-regression model");
        LrModel m;
        m.input_dim = doc.at("input_dim").get<std::size_t>();
        m.kept_columns = doc.at("kept_columns").get<std::vector<std::size_t>>();
        m.coefficients = doc.at("coefficients").get<std::vector<nn::Vector>>();
        for (const auto& c : m.coefficients) {
            if (c.size() != m.kept_columns.size() + 1) throw StructuralError("lr: coefficient count mismatch");
        }
        for (const auto j : m.kept_columns) {
            if (j >= m.input_dim) throw StructuralError("lr: kept column out of range");
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("lr model: ") + e.what());
    }
}

double RegressionTree::predict(std::span<const double> x) const {
    if (nodes.empty()) throw StructuralError("empty regression tree");
    std::size_t i = 0;
    while (nodes[i].feature >= 0) {
        const auto f = static_cast<std::size_t>(nodes[i].feature);
        if (f >= x.size()) throw StructuralError("tree feature index beyond input dimension");
        i = static_cast<std::size_t>(x[f] <= nodes[i].threshold ? nodes[i].left : nodes[i].right);
    }
    return nodes[i].value;
}

int RegressionTree::depth() const {
    std::vector<int> d(nodes.size(), 0);
    int deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        deepest = std::max(deepest, d[i]);
        if (nodes[i].feature >= 0) {
            d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
        }
    }
    return deepest;
}

RegressionTree fit_tree(std::span<const nn::Vector> rows, std::span<const double> targets, const CartConfig& config) {
    if (rows.empty() || rows.size() != targets.size()) throw UsageError("fit_tree: rows and targets must be nonempty and equal length");
    if (config.max_depth < 0) throw UsageError("fit_tree: negative max_depth");
    if (config.min_leaf == 0 || config.min_leaf > rows.size()) {
        throw UsageError("fit_tree: min_leaf " + std::to_string(config.min_leaf) + " invalid for " +
                         std::to_string(rows.size()) + " rows");
    }
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    RegressionTree tree;
    grow(tree, rows, targets, std::move(idx), 0, config);
    return tree;
}

CartModel train_cart(std::span<const data::Sample> train, const CartConfig& config) {
    const std::size_t horizon = common_horizon(train);
    std::vector<nn::Vector> rows;
    for (const auto& s : train) rows.push_back(window_summary(s));
    CartModel model{config, {}};
    for (std::size_t t = 0; t < horizon; ++t) {
        std::vector<double> y;
        for (const auto& s : train) y.push_back(s.targets[t]);
        model.trees.push_back(fit_tree(rows, y, config));
    }
    return model;
}

Prediction predict_cart(const CartModel& model, const data::Sample& sample, int horizon) {
    check_horizon(horizon, model.trees.size());
    const auto x = window_summary(sample);
    Prediction out{sample.paper_id, {}, {}};
    for (int t = 0; t < horizon; ++t) out.predicted.push_back(model.trees[static_cast<std::size_t>(t)].predict(x));
    clamp_monotone(out.predicted, last_observed(sample));
    return out;
}

nlohmann::json to_json(const CartModel& model) {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& tree : model.trees) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& n : tree.nodes) {
            nodes.push_back({{"feature", n.feature},
                             {"threshold", n.threshold},
                             {"left", n.left},
                             {"right", n.right},
                             {"value", n.value},
                             {"samples", n.samples}});
        }
        trees.push_back(nodes);
    }
    return {{"type", "cart"}, {"max_depth", model.config.max_depth}, {"min_leaf", model.config.min_leaf}, {"trees", trees}};
}

CartModel cart_from_json(const nlohmann::json& doc) {
    try {
        if (doc.at("type") != "cart") throw SchemaError("not a regression-tree model");
        CartModel m;
        m.config.max_depth = doc.at("max_depth").get<int>();
        m.config.min_leaf = doc.at("min_leaf").get<std::size_t>();
        for (const auto& nodes : doc.at("trees")) {
            RegressionTree tree;
            for (const auto& n : nodes) {
                tree.nodes.push_back({n.at("feature").get<int>(), n.at("threshold").get<double>(), n.at("left").get<int>(),
                                      n.at("right").get<int>(), n.at("value").get<double>(),
                                      n.at("samples").get<std::size_t>()});
            }
            const auto count = static_cast<int>(tree.nodes.size());
            if (count == 0) throw StructuralError("cart: empty tree");
            for (int i = 0; i < count; ++i) {
                // Children strictly after their parent rule out cycles.
                const auto& n = tree.nodes[static_cast<std::size_t>(i)];
                if (n.feature >= 0 && (n.left <= i || n.left >= count || n.right <= i || n.right >= count)) {
                    throw StructuralError("cart: child index out of range");
                }
            }
            m.trees.push_back(std::move(tree));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("cart model: ") + e.what());
    }
}

}  // namespace ltccp::models
