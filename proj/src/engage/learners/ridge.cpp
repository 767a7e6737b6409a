#include "ridge.hpp"

#include <cmath>

#include "json.hpp"

namespace engage {

namespace {

/// In-place Cholesky solve of A x = b for symmetric positive definite A.
/// A is n x n row-major and is destroyed; b holds the solution on return.
void cholesky_solve(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
        if (diag <= 0.0) throw InternalError("ridge normal matrix not positive definite");
        const double l = std::sqrt(diag);
        a[j * n + j] = l;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = v / l;
        }
    }
    // forward: L z = b
    for (std::size_t i = 0; i < n; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= a[i * n + k] * b[k];
        b[i] = v / a[i * n + i];
    }
    // backward: L^T x = z
    for (std::size_t ii = n; ii-- > 0;) {
        double v = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) v -= a[k * n + ii] * b[k];
        b[ii] = v / a[ii * n + ii];
    }
}

} // namespace

void Ridge::fit(const Matrix& x, const Matrix& y, const RidgeConfig& config) {
    if (x.rows() == 0) throw DataError("empty training set");
    if (x.rows() != y.rows()) throw InternalError("target count mismatch");
    d_ = static_cast<int>(x.cols());
    q_ = static_cast<int>(y.cols());
    const std::size_t p = static_cast<std::size_t>(d_) + 1; // augmented with bias column
    const std::size_t n = x.rows();

    std::vector<double> gram(p * p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = x.row(i);
        for (std::size_t a = 0; a < p; ++a) {
            const double xa = a < row.size() ? row[a] : 1.0;
            for (std::size_t b = a; b < p; ++b) {
                const double xb = b < row.size() ? row[b] : 1.0;
                gram[a * p + b] += xa * xb;
            }
        }
    }
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < a; ++b) gram[a * p + b] = gram[b * p + a];
    for (std::size_t a = 0; a + 1 < p; ++a) gram[a * p + a] += config.lambda;

    w_.assign(static_cast<std::size_t>(q_) * p, 0.0);
    for (int o = 0; o < q_; ++o) {
        std::vector<double> rhs(p, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = x.row(i);
            const double t = y.at(i, static_cast<std::size_t>(o));
            for (std::size_t a = 0; a < row.size(); ++a) rhs[a] += row[a] * t;
            rhs[p - 1] += t;
        }
        std::vector<double> a = gram; // solve destroys its copy
        cholesky_solve(a, rhs, p);
        std::copy(rhs.begin(), rhs.end(), w_.begin() + static_cast<std::size_t>(o) * p);
    }
}

std::vector<double> Ridge::predict(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != d_) throw InternalError("ridge dimension mismatch");
    const std::size_t p = static_cast<std::size_t>(d_) + 1;
    std::vector<double> out(static_cast<std::size_t>(q_), 0.0);
    for (int o = 0; o < q_; ++o) {
        const double* row = w_.data() + static_cast<std::size_t>(o) * p;
        double v = row[d_];
        for (int j = 0; j < d_; ++j) v += row[j] * x[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(o)] = v;
    }
    return out;
}

std::string Ridge::to_json() const {
    nlohmann::ordered_json j;
    j["num_outputs"] = q_;
    j["dimension"] = d_;
    j["weights"] = w_;
    return j.dump();
}

Ridge Ridge::from_json(const std::string& json) {
    const auto j = nlohmann::json::parse(json);
    Ridge m;
    m.q_ = j.at("num_outputs").get<int>();
    m.d_ = j.at("dimension").get<int>();
    m.w_ = j.at("weights").get<std::vector<double>>();
    const std::size_t expected =
        static_cast<std::size_t>(m.q_) * (static_cast<std::size_t>(m.d_) + 1);
    if (m.w_.size() != expected) throw DataError("ridge weight vector has wrong size");
    return m;
}

} // namespace engage
