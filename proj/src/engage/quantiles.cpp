#include "quantiles.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "io_util.hpp"

namespace engage {

double interpolated_quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw InternalError("quantile of empty sample");
    const double h = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

const QuantileTable::Row& QuantileTable::row(int category) const {
    auto it = rows_.find(category);
    return it == rows_.end() ? global_ : it->second;
}

QuantileTable fit_quantiles(const std::vector<const DwellRecord*>& train_records) {
    if (train_records.empty()) throw DataError("cannot fit quantiles on an empty record set");
    std::map<int, std::vector<double>> per_category;
    std::vector<double> all;
    all.reserve(train_records.size());
    for (const auto* r : train_records) {
        per_category[r->category].push_back(r->dwell_seconds);
        all.push_back(r->dwell_seconds);
    }
    QuantileTable table;
    for (auto& [cat, dwells] : per_category) {
        std::sort(dwells.begin(), dwells.end());
        QuantileTable::Row row;
        row.q33 = interpolated_quantile(dwells, 0.33);
        row.q67 = interpolated_quantile(dwells, 0.67);
        row.n = dwells.size();
        table.rows_[cat] = row;
    }
    std::sort(all.begin(), all.end());
    table.global_.q33 = interpolated_quantile(all, 0.33);
    table.global_.q67 = interpolated_quantile(all, 0.67);
    table.global_.n = all.size();
    return table;
}

EngagementLevel label_engagement(double dwell_seconds, const QuantileTable::Row& row) {
    if (dwell_seconds <= row.q33) return EngagementLevel::Light;
    if (dwell_seconds <= row.q67) return EngagementLevel::Medium;
    return EngagementLevel::Intensive;
}

EngagementLevel label_engagement(const DwellRecord& record, const QuantileTable& table) {
    if (record.category < 0)
        throw DataError("record category unresolved; table/taxonomy mismatch");
    return label_engagement(record.dwell_seconds, table.row(record.category));
}

std::string QuantileTable::to_json(const Taxonomy& taxonomy) const {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["categories"] = nlohmann::ordered_json::array();
    for (const auto& [cat, row] : rows_) {
        nlohmann::ordered_json e;
        e["name"] = taxonomy.name(cat);
        e["q33"] = row.q33;
        e["q67"] = row.q67;
        e["n"] = row.n;
        j["categories"].push_back(e);
    }
    nlohmann::ordered_json g;
    g["q33"] = global_.q33;
    g["q67"] = global_.q67;
    g["n"] = global_.n;
    j["global"] = g;
    return j.dump(2) + "\n";
}

QuantileTable QuantileTable::from_json(const std::string& json, const Taxonomy& taxonomy) {
    nlohmann::json j = nlohmann::json::parse(json);
    if (j.at("version").get<int>() != 1)
        throw DataError("unsupported quantile table version");
    QuantileTable table;
    for (const auto& e : j.at("categories")) {
        Row row;
        row.q33 = e.at("q33").get<double>();
        row.q67 = e.at("q67").get<double>();
        row.n = e.at("n").get<std::size_t>();
        if (row.q33 > row.q67) throw DataError("quantile table violates q33 <= q67");
        table.rows_[taxonomy.id(e.at("name").get<std::string>())] = row;
    }
    const auto& g = j.at("global");
    table.global_.q33 = g.at("q33").get<double>();
    table.global_.q67 = g.at("q67").get<double>();
    table.global_.n = g.at("n").get<std::size_t>();
    return table;
}

} // namespace engage
