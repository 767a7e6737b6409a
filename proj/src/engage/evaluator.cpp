#include "evaluator.hpp"

#include <cmath>

#include "errors.hpp"

namespace engage {

std::map<std::string, std::size_t>
split_per_user(const std::map<std::string, std::size_t>& record_counts, double train_fraction) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw UsageError("train fraction must be in (0, 1)");
    std::map<std::string, std::size_t> out;
    for (const auto& [user, n] : record_counts) {
        const auto train = static_cast<std::size_t>(
            std::ceil(train_fraction * static_cast<double>(n)));
        out[user] = std::min(train, n);
    }
    return out;
}

MetricReport score(const std::vector<std::string>& truth,
                   const std::vector<std::string>& predicted) {
    if (truth.size() != predicted.size())
        throw InternalError("score: prediction count mismatch");
    if (truth.empty()) throw DataError("score: empty evaluation set");

    MetricReport report;
    report.n = truth.size();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        auto& t = report.per_class[truth[i]];
        t.support += 1;
        auto& p = report.per_class[predicted[i]];
        p.predicted += 1;
        if (truth[i] == predicted[i]) {
            t.true_positives += 1;
            correct += 1;
        }
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(report.n);

    for (auto& [label, m] : report.per_class) {
        m.precision = m.predicted == 0
                          ? 0.0
                          : static_cast<double>(m.true_positives) / static_cast<double>(m.predicted);
        m.recall = m.support == 0
                       ? 0.0
                       : static_cast<double>(m.true_positives) / static_cast<double>(m.support);
        m.f1 = m.precision + m.recall == 0.0
                   ? 0.0
                   : 2.0 * m.precision * m.recall / (m.precision + m.recall);
        const double w = static_cast<double>(m.support) / static_cast<double>(report.n);
        report.precision += w * m.precision;
        report.recall += w * m.recall;
        report.f1 += w * m.f1;
    }
    return report;
}

LevelConfusion confusion_level(const std::vector<EngagementLevel>& truth,
                               const std::vector<EngagementLevel>& predicted) {
    if (truth.size() != predicted.size())
        throw InternalError("confusion_level: prediction count mismatch");
    LevelConfusion c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const int t = static_cast<int>(truth[i]);
        const int p = static_cast<int>(predicted[i]);
        c.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)] += 1;
        if (t != p) {
            c.errors += 1;
            if (std::abs(t - p) == 1) c.adjacent_errors += 1;
        }
    }
    c.adjacent_share = c.errors == 0 ? 0.0
                                     : static_cast<double>(c.adjacent_errors) /
                                           static_cast<double>(c.errors);
    return c;
}

ErrorAttribution error_attribution(const std::vector<int>& truth,
                                   const std::vector<int>& reference,
                                   const std::vector<int>& candidate) {
    if (truth.size() != reference.size() || truth.size() != candidate.size())
        throw InternalError("error_attribution: prediction count mismatch");
    ErrorAttribution a;
    a.n = truth.size();
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool ref_ok = reference[i] == truth[i];
        const bool cand_ok = candidate[i] == truth[i];
        if (!ref_ok) {
            a.reference_wrong += 1;
            if (cand_ok) a.corrected += 1;
            else a.both_wrong += 1;
        } else if (!cand_ok) {
            a.broken += 1;
        }
    }
    a.net_correction_rate = a.reference_wrong == 0
                                ? 0.0
                                : (static_cast<double>(a.corrected) -
                                   static_cast<double>(a.broken)) /
                                      static_cast<double>(a.reference_wrong);
    return a;
}

} // namespace engage
