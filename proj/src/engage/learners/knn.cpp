#include "knn.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace engage {

void Knn::fit(const Matrix& x, const std::vector<int>& y, const KnnConfig& config) {
    if (x.rows() == 0) throw DataError("empty training set");
    if (x.rows() != y.size()) throw InternalError("label count mismatch");
    for (int label : y)
        if (label < 0 || label >= config.num_classes) throw DataError("label out of range");
    num_classes_ = config.num_classes;
    k_ = config.k;
    x_ = x;
    y_ = y;
}

std::vector<double> Knn::predict_proba(std::span<const double> x) const {
    const std::size_t n = x_.rows();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = x_.row(i);
        double d = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double delta = row[j] - x[j];
            d += delta * delta;
        }
        dist[i] = {d, i};
    }
    const std::size_t k = std::min(static_cast<std::size_t>(k_), n);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::vector<double> counts(static_cast<std::size_t>(num_classes_), 0.0);
    for (std::size_t i = 0; i < k; ++i)
        counts[static_cast<std::size_t>(y_[dist[i].second])] += 1.0;
    for (double& c : counts) c /= static_cast<double>(k);
    return counts;
}

int Knn::predict(std::span<const double> x) const {
    const auto p = predict_proba(x);
    return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::string Knn::to_json() const {
    nlohmann::ordered_json j;
    j["num_classes"] = num_classes_;
    j["k"] = k_;
    j["cols"] = x_.cols();
    j["data"] = x_.data();
    j["labels"] = y_;
    return j.dump();
}

Knn Knn::from_json(const std::string& json) {
    const auto j = nlohmann::json::parse(json);
    Knn m;
    m.num_classes_ = j.at("num_classes").get<int>();
    m.k_ = j.at("k").get<int>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto data = j.at("data").get<std::vector<double>>();
    m.y_ = j.at("labels").get<std::vector<int>>();
    if (cols == 0 || data.size() % cols != 0 || data.size() / cols != m.y_.size())
        throw DataError("knn model has inconsistent shapes");
    m.x_ = Matrix(m.y_.size(), cols);
    for (std::size_t i = 0; i < m.y_.size(); ++i)
        for (std::size_t c = 0; c < cols; ++c) m.x_.at(i, c) = data[i * cols + c];
    return m;
}

} // namespace engage
