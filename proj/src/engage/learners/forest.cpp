#include "forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "json.hpp"

#include "../rng.hpp"

namespace engage {

const std::vector<double>& Tree::predict(std::span<const double> x) const {
    int node = 0;
    while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const auto& n = nodes[static_cast<std::size_t>(node)];
        node = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(node)].value;
}

namespace {

struct SplitResult {
    int feature = -1;
    double threshold = 0.0;
    double decrease = 0.0; // impurity units, weighted by node sample count
};

std::vector<int> pick_features(Rng& rng, int d, int mf, std::vector<int>& scratch) {
    scratch.resize(static_cast<std::size_t>(d));
    std::iota(scratch.begin(), scratch.end(), 0);
    for (int j = 0; j < mf; ++j) {
        const auto r = static_cast<std::size_t>(rng.uniform_int(j, d - 1));
        std::swap(scratch[static_cast<std::size_t>(j)], scratch[r]);
    }
    return {scratch.begin(), scratch.begin() + mf};
}

/// Shared tree builder. Classification when y != nullptr, regression when
/// targets != nullptr.
class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, const std::vector<int>* y, int k, const Matrix* targets,
                const ForestConfig& config, Rng rng)
        : x_(x), y_(y), k_(k), targets_(targets), config_(config), rng_(rng) {
        d_ = static_cast<int>(x.cols());
        mf_ = config.max_features > 0
                  ? std::min(config.max_features, d_)
                  : std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(d_)))));
        q_ = targets_ ? static_cast<int>(targets_->cols()) : k_;
    }

    Tree build(std::vector<double>* importance) {
        importance_ = importance;
        std::vector<std::size_t> samples;
        const std::size_t n = x_.rows();
        samples.reserve(n);
        if (config_.bootstrap) {
            for (std::size_t i = 0; i < n; ++i)
                samples.push_back(static_cast<std::size_t>(rng_.uniform_index(n)));
        } else {
            samples.resize(n);
            std::iota(samples.begin(), samples.end(), 0);
        }
        n_total_ = static_cast<double>(samples.size());
        grow(std::move(samples), 0);
        return std::move(tree_);
    }

private:
    double node_impurity(const std::vector<std::size_t>& samples,
                         std::vector<double>& agg) const {
        const double n = static_cast<double>(samples.size());
        if (y_) {
            agg.assign(static_cast<std::size_t>(k_), 0.0);
            for (auto i : samples) agg[static_cast<std::size_t>((*y_)[i])] += 1.0;
            double sumsq = 0.0;
            for (double c : agg) sumsq += c * c;
            return 1.0 - sumsq / (n * n);
        }
        agg.assign(static_cast<std::size_t>(q_), 0.0);
        double sse = 0.0;
        for (auto i : samples) {
            const auto row = targets_->row(i);
            for (int o = 0; o < q_; ++o) agg[static_cast<std::size_t>(o)] += row[static_cast<std::size_t>(o)];
        }
        for (auto i : samples) {
            const auto row = targets_->row(i);
            for (int o = 0; o < q_; ++o) {
                const double dlt = row[static_cast<std::size_t>(o)] - agg[static_cast<std::size_t>(o)] / n;
                sse += dlt * dlt;
            }
        }
        return sse / n; // per-sample SSE, same scale convention as gini
    }

    SplitResult best_split(const std::vector<std::size_t>& samples) {
        SplitResult best;
        const std::size_t n = samples.size();
        const auto features = pick_features(rng_, d_, mf_, feature_scratch_);

        std::vector<std::pair<double, std::size_t>> order(n);
        for (int f : features) {
            for (std::size_t p = 0; p < n; ++p)
                order[p] = {x_.at(samples[p], static_cast<std::size_t>(f)), samples[p]};
            std::sort(order.begin(), order.end());
            if (order.front().first == order.back().first) continue;
            const double score = y_ ? scan_gini(order, f, best) : scan_sse(order, f, best);
            (void)score;
        }
        return best;
    }

    double scan_gini(const std::vector<std::pair<double, std::size_t>>& order, int f,
                     SplitResult& best) {
        const std::size_t n = order.size();
        left_counts_.assign(static_cast<std::size_t>(k_), 0.0);
        right_counts_.assign(static_cast<std::size_t>(k_), 0.0);
        for (const auto& [v, i] : order) right_counts_[static_cast<std::size_t>((*y_)[i])] += 1.0;
        double sumsq_l = 0.0, sumsq_r = 0.0;
        for (double c : right_counts_) sumsq_r += c * c;
        const double parent = static_cast<double>(n) - sumsq_r / static_cast<double>(n);
        const std::size_t min_leaf = static_cast<std::size_t>(config_.min_samples_leaf);

        for (std::size_t p = 1; p < n; ++p) {
            const auto cls = static_cast<std::size_t>((*y_)[order[p - 1].second]);
            sumsq_l += 2.0 * left_counts_[cls] + 1.0;
            sumsq_r -= 2.0 * right_counts_[cls] - 1.0;
            left_counts_[cls] += 1.0;
            right_counts_[cls] -= 1.0;
            if (order[p].first == order[p - 1].first) continue;
            if (p < min_leaf || n - p < min_leaf) continue;
            const double nl = static_cast<double>(p), nr = static_cast<double>(n - p);
            const double weighted = (nl - sumsq_l / nl) + (nr - sumsq_r / nr);
            const double decrease = parent - weighted;
            if (decrease > best.decrease + 1e-12) {
                best.decrease = decrease;
                best.feature = f;
                best.threshold = 0.5 * (order[p - 1].first + order[p].first);
            }
        }
        return best.decrease;
    }

    double scan_sse(const std::vector<std::pair<double, std::size_t>>& order, int f,
                    SplitResult& best) {
        const std::size_t n = order.size();
        left_counts_.assign(static_cast<std::size_t>(q_), 0.0);  // reused as sums
        right_counts_.assign(static_cast<std::size_t>(q_), 0.0);
        for (const auto& [v, i] : order) {
            const auto row = targets_->row(i);
            for (int o = 0; o < q_; ++o)
                right_counts_[static_cast<std::size_t>(o)] += row[static_cast<std::size_t>(o)];
        }
        double parent_term = 0.0;
        for (double s : right_counts_) parent_term += s * s;
        parent_term /= static_cast<double>(n);
        const std::size_t min_leaf = static_cast<std::size_t>(config_.min_samples_leaf);

        for (std::size_t p = 1; p < n; ++p) {
            const auto row = targets_->row(order[p - 1].second);
            for (int o = 0; o < q_; ++o) {
                left_counts_[static_cast<std::size_t>(o)] += row[static_cast<std::size_t>(o)];
                right_counts_[static_cast<std::size_t>(o)] -= row[static_cast<std::size_t>(o)];
            }
            if (order[p].first == order[p - 1].first) continue;
            if (p < min_leaf || n - p < min_leaf) continue;
            double lhs = 0.0, rhs = 0.0;
            for (double s : left_counts_) lhs += s * s;
            for (double s : right_counts_) rhs += s * s;
            const double gain =
                lhs / static_cast<double>(p) + rhs / static_cast<double>(n - p) - parent_term;
            if (gain > best.decrease + 1e-12) {
                best.decrease = gain;
                best.feature = f;
                best.threshold = 0.5 * (order[p - 1].first + order[p].first);
            }
        }
        return best.decrease;
    }

    int make_leaf(const std::vector<std::size_t>& samples) {
        TreeNode leaf;
        const double n = static_cast<double>(samples.size());
        if (y_) {
            leaf.value.assign(static_cast<std::size_t>(k_), 0.0);
            for (auto i : samples) leaf.value[static_cast<std::size_t>((*y_)[i])] += 1.0;
            for (double& v : leaf.value) v /= n;
        } else {
            leaf.value.assign(static_cast<std::size_t>(q_), 0.0);
            for (auto i : samples) {
                const auto row = targets_->row(i);
                for (int o = 0; o < q_; ++o)
                    leaf.value[static_cast<std::size_t>(o)] += row[static_cast<std::size_t>(o)];
            }
            for (double& v : leaf.value) v /= n;
        }
        tree_.nodes.push_back(std::move(leaf));
        return static_cast<int>(tree_.nodes.size()) - 1;
    }

    int grow(std::vector<std::size_t> samples, int depth) {
        const std::size_t n = samples.size();
        bool splittable = depth < config_.max_depth &&
                          n >= static_cast<std::size_t>(config_.min_samples_split);
        if (splittable && y_) {
            const int first = (*y_)[samples[0]];
            splittable = std::any_of(samples.begin(), samples.end(),
                                     [&](std::size_t i) { return (*y_)[i] != first; });
        }
        SplitResult split;
        if (splittable) split = best_split(samples);
        if (split.feature < 0) return make_leaf(samples);

        if (importance_)
            (*importance_)[static_cast<std::size_t>(split.feature)] += split.decrease / n_total_;

        std::vector<std::size_t> left, right;
        for (auto i : samples) {
            if (x_.at(i, static_cast<std::size_t>(split.feature)) <= split.threshold)
                left.push_back(i);
            else
                right.push_back(i);
        }
        samples.clear();
        samples.shrink_to_fit();

        tree_.nodes.emplace_back();
        const int self = static_cast<int>(tree_.nodes.size()) - 1;
        tree_.nodes[static_cast<std::size_t>(self)].feature = split.feature;
        tree_.nodes[static_cast<std::size_t>(self)].threshold = split.threshold;
        const int l = grow(std::move(left), depth + 1);
        const int r = grow(std::move(right), depth + 1);
        tree_.nodes[static_cast<std::size_t>(self)].left = l;
        tree_.nodes[static_cast<std::size_t>(self)].right = r;
        return self;
    }

    const Matrix& x_;
    const std::vector<int>* y_;
    int k_;
    const Matrix* targets_;
    ForestConfig config_;
    Rng rng_;
    int d_ = 0;
    int mf_ = 0;
    int q_ = 0;
    double n_total_ = 0.0;
    Tree tree_;
    std::vector<double>* importance_ = nullptr;
    std::vector<int> feature_scratch_;
    std::vector<double> left_counts_;
    std::vector<double> right_counts_;
};

void build_trees(const Matrix& x, const std::vector<int>* y, int k, const Matrix* targets,
                 const ForestConfig& config, std::vector<Tree>& trees,
                 std::vector<std::vector<double>>* importances) {
    const int t = config.num_trees;
    trees.resize(static_cast<std::size_t>(t));
    if (importances)
        importances->assign(static_cast<std::size_t>(t),
                            std::vector<double>(x.cols(), 0.0));
    const int threads = std::max(1, config.num_threads);
    auto work = [&](int begin, int step) {
        for (int i = begin; i < t; i += step) {
            Rng tree_rng(Rng(config.seed).fork(static_cast<std::uint64_t>(i) + 1));
            TreeBuilder builder(x, y, k, targets, config, tree_rng);
            trees[static_cast<std::size_t>(i)] =
                builder.build(importances ? &(*importances)[static_cast<std::size_t>(i)]
                                          : nullptr);
        }
    };
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
        for (auto& th : pool) th.join();
    }
}

nlohmann::ordered_json tree_to_json(const Tree& tree) {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const auto& n : tree.nodes) {
        nlohmann::ordered_json node = {n.feature, n.threshold, n.left, n.right, n.value};
        nodes.push_back(std::move(node));
    }
    return nodes;
}

Tree tree_from_json(const nlohmann::json& nodes) {
    Tree tree;
    for (const auto& node : nodes) {
        TreeNode n;
        n.feature = node.at(0).get<int>();
        n.threshold = node.at(1).get<double>();
        n.left = node.at(2).get<int>();
        n.right = node.at(3).get<int>();
        n.value = node.at(4).get<std::vector<double>>();
        tree.nodes.push_back(std::move(n));
    }
    return tree;
}

} // namespace

void RandomForestClassifier::fit(const Matrix& x, const std::vector<int>& y, int num_classes,
                                 const ForestConfig& config) {
    if (x.rows() == 0) throw DataError("empty training set");
    if (x.rows() != y.size()) throw InternalError("label count mismatch");
    for (int label : y)
        if (label < 0 || label >= num_classes) throw DataError("label out of range");
    k_ = num_classes;
    d_ = static_cast<int>(x.cols());
    std::vector<std::vector<double>> importances;
    build_trees(x, &y, k_, nullptr, config, trees_, &importances);
    importance_.assign(static_cast<std::size_t>(d_), 0.0);
    for (const auto& imp : importances)
        for (std::size_t j = 0; j < imp.size(); ++j) importance_[j] += imp[j];
    for (double& v : importance_) v /= static_cast<double>(trees_.size());
}

std::vector<double> RandomForestClassifier::predict_proba(std::span<const double> x) const {
    std::vector<double> votes(static_cast<std::size_t>(k_), 0.0);
    for (const auto& tree : trees_) {
        const auto& leaf = tree.predict(x);
        const auto cls = static_cast<std::size_t>(
            std::max_element(leaf.begin(), leaf.end()) - leaf.begin());
        votes[cls] += 1.0;
    }
    for (double& v : votes) v /= static_cast<double>(trees_.size());
    return votes;
}

int RandomForestClassifier::predict(std::span<const double> x) const {
    const auto p = predict_proba(x);
    return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::string RandomForestClassifier::to_json() const {
    nlohmann::ordered_json j;
    j["num_classes"] = k_;
    j["dimension"] = d_;
    j["importance"] = importance_;
    nlohmann::ordered_json trees = nlohmann::ordered_json::array();
    for (const auto& t : trees_) trees.push_back(tree_to_json(t));
    j["trees"] = std::move(trees);
    return j.dump();
}

RandomForestClassifier RandomForestClassifier::from_json(const std::string& json) {
    const auto j = nlohmann::json::parse(json);
    RandomForestClassifier m;
    m.k_ = j.at("num_classes").get<int>();
    m.d_ = j.at("dimension").get<int>();
    m.importance_ = j.at("importance").get<std::vector<double>>();
    for (const auto& t : j.at("trees")) m.trees_.push_back(tree_from_json(t));
    if (m.trees_.empty()) throw DataError("forest model has no trees");
    return m;
}

void RegressionForest::fit(const Matrix& x, const Matrix& y, const ForestConfig& config) {
    if (x.rows() == 0) throw DataError("empty training set");
    if (x.rows() != y.rows()) throw InternalError("target count mismatch");
    q_ = static_cast<int>(y.cols());
    d_ = static_cast<int>(x.cols());
    build_trees(x, nullptr, 0, &y, config, trees_, nullptr);
}

std::vector<double> RegressionForest::predict(std::span<const double> x) const {
    std::vector<double> out(static_cast<std::size_t>(q_), 0.0);
    for (const auto& tree : trees_) {
        const auto& leaf = tree.predict(x);
        for (std::size_t o = 0; o < out.size(); ++o) out[o] += leaf[o];
    }
    for (double& v : out) v /= static_cast<double>(trees_.size());
    return out;
}

std::string RegressionForest::to_json() const {
    nlohmann::ordered_json j;
    j["num_outputs"] = q_;
    j["dimension"] = d_;
    nlohmann::ordered_json trees = nlohmann::ordered_json::array();
    for (const auto& t : trees_) trees.push_back(tree_to_json(t));
    j["trees"] = std::move(trees);
    return j.dump();
}

RegressionForest RegressionForest::from_json(const std::string& json) {
    const auto j = nlohmann::json::parse(json);
    RegressionForest m;
    m.q_ = j.at("num_outputs").get<int>();
    m.d_ = j.at("dimension").get<int>();
    for (const auto& t : j.at("trees")) m.trees_.push_back(tree_from_json(t));
    if (m.trees_.empty()) throw DataError("forest model has no trees");
    return m;
}

} // namespace engage
