#include "logreg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace engage {

namespace {

void softmax_inplace(std::vector<double>& s) {
    const double m = *std::max_element(s.begin(), s.end());
    double z = 0.0;
    for (double& v : s) {
        v = std::exp(v - m);
        z += v;
    }
    for (double& v : s) v /= z;
}

} // namespace

std::vector<double> LogReg::scores(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != d_) throw InternalError("logreg dimension mismatch");
    std::vector<double> s(static_cast<std::size_t>(k_), 0.0);
    const std::size_t stride = static_cast<std::size_t>(d_) + 1;
    for (int k = 0; k < k_; ++k) {
        const double* row = w_.data() + static_cast<std::size_t>(k) * stride;
        double v = row[d_]; // bias
        for (int j = 0; j < d_; ++j) v += row[j] * x[static_cast<std::size_t>(j)];
        s[static_cast<std::size_t>(k)] = v;
    }
    return s;
}

std::vector<double> LogReg::predict_proba(std::span<const double> x) const {
    auto s = scores(x);
    softmax_inplace(s);
    return s;
}

int LogReg::predict(std::span<const double> x) const {
    const auto s = scores(x);
    return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
}

void LogReg::fit(const Matrix& x, const std::vector<int>& y, const LogRegConfig& config) {
    if (x.rows() == 0) throw DataError("empty training set");
    if (x.rows() != y.size()) throw InternalError("label count mismatch");
    k_ = config.num_classes;
    d_ = static_cast<int>(x.cols());
    lambda_ = config.lambda;
    const std::size_t stride = static_cast<std::size_t>(d_) + 1;
    w_.assign(static_cast<std::size_t>(k_) * stride, 0.0);
    for (int label : y)
        if (label < 0 || label >= k_) throw DataError("label out of range");

    const std::size_t n = x.rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(config.seed);

    const std::size_t batch = config.batch_size == 0
                                  ? n
                                  : static_cast<std::size_t>(config.batch_size);
    std::vector<double> grad(w_.size());
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const double lr = config.learning_rate / (1.0 + 0.1 * static_cast<double>(epoch));
        if (config.batch_size != 0) rng.shuffle(order);
        for (std::size_t begin = 0; begin < n; begin += batch) {
            const std::size_t end = std::min(begin + batch, n);
            const double inv = 1.0 / static_cast<double>(end - begin);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t pos = begin; pos < end; ++pos) {
                const std::size_t i = order[pos];
                const auto row = x.row(i);
                auto p = predict_proba(row);
                p[static_cast<std::size_t>(y[i])] -= 1.0;
                for (int k = 0; k < k_; ++k) {
                    double* g = grad.data() + static_cast<std::size_t>(k) * stride;
                    const double pk = p[static_cast<std::size_t>(k)];
                    if (pk == 0.0) continue;
                    for (int j = 0; j < d_; ++j) g[j] += pk * row[static_cast<std::size_t>(j)];
                    g[d_] += pk;
                }
            }
            for (int k = 0; k < k_; ++k) {
                double* wk = w_.data() + static_cast<std::size_t>(k) * stride;
                const double* gk = grad.data() + static_cast<std::size_t>(k) * stride;
                for (int j = 0; j < d_; ++j)
                    wk[j] -= lr * (gk[j] * inv + lambda_ * wk[j]);
                wk[d_] -= lr * gk[d_] * inv;
            }
        }
    }
}

double LogReg::loss(const Matrix& x, const std::vector<int>& y) const {
    double nll = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        auto s = scores(x.row(i));
        const double m = *std::max_element(s.begin(), s.end());
        double z = 0.0;
        for (double v : s) z += std::exp(v - m);
        nll += m + std::log(z) - s[static_cast<std::size_t>(y[i])];
    }
    nll /= static_cast<double>(x.rows());
    const std::size_t stride = static_cast<std::size_t>(d_) + 1;
    double reg = 0.0;
    for (int k = 0; k < k_; ++k) {
        const double* wk = w_.data() + static_cast<std::size_t>(k) * stride;
        for (int j = 0; j < d_; ++j) reg += wk[j] * wk[j];
    }
    return nll + 0.5 * lambda_ * reg;
}

std::vector<double> LogReg::gradient(const Matrix& x, const std::vector<int>& y) const {
    const std::size_t stride = static_cast<std::size_t>(d_) + 1;
    std::vector<double> grad(w_.size(), 0.0);
    const double inv = 1.0 / static_cast<double>(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto row = x.row(i);
        auto p = predict_proba(row);
        p[static_cast<std::size_t>(y[i])] -= 1.0;
        for (int k = 0; k < k_; ++k) {
            double* g = grad.data() + static_cast<std::size_t>(k) * stride;
            const double pk = p[static_cast<std::size_t>(k)];
            for (int j = 0; j < d_; ++j)
                g[j] += inv * pk * row[static_cast<std::size_t>(j)];
            g[d_] += inv * pk;
        }
    }
    for (int k = 0; k < k_; ++k) {
        double* g = grad.data() + static_cast<std::size_t>(k) * stride;
        const double* wk = w_.data() + static_cast<std::size_t>(k) * stride;
        for (int j = 0; j < d_; ++j) g[j] += lambda_ * wk[j];
    }
    return grad;
}

std::vector<double>
LogReg::standardized_coefficients(const Matrix& x,
                                  const std::vector<bool>& numeric_mask) const {
    if (numeric_mask.size() != static_cast<std::size_t>(d_))
        throw InternalError("numeric mask width mismatch");
    std::vector<double> scale(static_cast<std::size_t>(d_), 1.0);
    const double n = static_cast<double>(x.rows());
    for (int j = 0; j < d_; ++j) {
        if (!numeric_mask[static_cast<std::size_t>(j)]) continue;
        double mean = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) mean += x.at(i, static_cast<std::size_t>(j));
        mean /= n;
        double var = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const double d = x.at(i, static_cast<std::size_t>(j)) - mean;
            var += d * d;
        }
        scale[static_cast<std::size_t>(j)] = 2.0 * std::sqrt(var / n);
    }
    const std::size_t stride = static_cast<std::size_t>(d_) + 1;
    std::vector<double> out(static_cast<std::size_t>(k_) * static_cast<std::size_t>(d_));
    for (int k = 0; k < k_; ++k)
        for (int j = 0; j < d_; ++j)
            out[static_cast<std::size_t>(k) * static_cast<std::size_t>(d_) +
                static_cast<std::size_t>(j)] =
                w_[static_cast<std::size_t>(k) * stride + static_cast<std::size_t>(j)] *
                scale[static_cast<std::size_t>(j)];
    return out;
}

std::string LogReg::to_json() const {
    nlohmann::ordered_json j;
    j["num_classes"] = k_;
    j["dimension"] = d_;
    j["lambda"] = lambda_;
    j["weights"] = w_;
    return j.dump();
}

LogReg LogReg::from_json(const std::string& json) {
    const auto j = nlohmann::json::parse(json);
    LogReg m;
    m.k_ = j.at("num_classes").get<int>();
    m.d_ = j.at("dimension").get<int>();
    m.lambda_ = j.at("lambda").get<double>();
    m.w_ = j.at("weights").get<std::vector<double>>();
    const std::size_t expected =
        static_cast<std::size_t>(m.k_) * (static_cast<std::size_t>(m.d_) + 1);
    if (m.w_.size() != expected) throw DataError("logreg weight vector has wrong size");
    return m;
}

} // namespace engage
