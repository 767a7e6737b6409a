#include "svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

#include "../rng.hpp"

namespace engage {

std::vector<double> LinearSvm::margins(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != d_) throw InternalError("svm dimension mismatch");
    std::vector<double> m(static_cast<std::size_t>(k_), 0.0);
    const std::size_t stride = static_cast<std::size_t>(d_) + 1;
    for (int k = 0; k < k_; ++k) {
        const double* row = w_.data() + static_cast<std::size_t>(k) * stride;
        double v = row[d_];
        for (int j = 0; j < d_; ++j) v += row[j] * x[static_cast<std::size_t>(j)];
        m[static_cast<std::size_t>(k)] = v;
    }
    return m;
}

std::vector<double> LinearSvm::predict_proba(std::span<const double> x) const {
    auto m = margins(x);
    const double mx = *std::max_element(m.begin(), m.end());
    double z = 0.0;
    for (double& v : m) {
        v = std::exp(v - mx);
        z += v;
    }
    for (double& v : m) v /= z;
    return m;
}

int LinearSvm::predict(std::span<const double> x) const {
    const auto m = margins(x);
    return static_cast<int>(std::max_element(m.begin(), m.end()) - m.begin());
}

void LinearSvm::fit(const Matrix& x, const std::vector<int>& y, const SvmConfig& config) {
    if (x.rows() == 0) throw DataError("empty training set");
    if (x.rows() != y.size()) throw InternalError("label count mismatch");
    k_ = config.num_classes;
    d_ = static_cast<int>(x.cols());
    for (int label : y)
        if (label < 0 || label >= k_) throw DataError("label out of range");
    const std::size_t stride = static_cast<std::size_t>(d_) + 1;
    w_.assign(static_cast<std::size_t>(k_) * stride, 0.0);

    const std::size_t n = x.rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(config.seed);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        const double lr = config.learning_rate / (1.0 + 0.1 * static_cast<double>(epoch));
        for (const std::size_t i : order) {
            const auto row = x.row(i);
            const auto m = margins(row);
            for (int k = 0; k < k_; ++k) {
                double* wk = w_.data() + static_cast<std::size_t>(k) * stride;
                const double target = y[i] == k ? 1.0 : -1.0;
                const bool violated = target * m[static_cast<std::size_t>(k)] < 1.0;
                for (int j = 0; j < d_; ++j) {
                    double g = config.lambda * wk[j];
                    if (violated) g -= target * row[static_cast<std::size_t>(j)];
                    wk[j] -= lr * g;
                }
                if (violated) wk[d_] += lr * target;
            }
        }
    }
}

std::string LinearSvm::to_json() const {
    nlohmann::ordered_json j;
    j["num_classes"] = k_;
    j["dimension"] = d_;
    j["weights"] = w_;
    return j.dump();
}

LinearSvm LinearSvm::from_json(const std::string& json) {
    const auto j = nlohmann::json::parse(json);
    LinearSvm m;
    m.k_ = j.at("num_classes").get<int>();
    m.d_ = j.at("dimension").get<int>();
    m.w_ = j.at("weights").get<std::vector<double>>();
    const std::size_t expected =
        static_cast<std::size_t>(m.k_) * (static_cast<std::size_t>(m.d_) + 1);
    if (m.w_.size() != expected) throw DataError("svm weight vector has wrong size");
    return m;
}

} // namespace engage
