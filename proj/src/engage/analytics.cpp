#include "analytics.hpp"

#include <cmath>

namespace engage {

namespace {

constexpr std::size_t kLowSupportThreshold = 30;

struct GroupStats {
    double sum = 0.0;
    std::size_t n = 0;
    double mean() const { return n == 0 ? 0.0 : sum / static_cast<double>(n); }
};

} // namespace

LabeledCorpus label_corpus(const SessionizedCorpus& corpus, const QuantileTable& table) {
    LabeledCorpus out;
    out.base = &corpus;
    for (const auto& [user, su] : corpus.users) {
        auto& levels = out.levels[user];
        levels.reserve(su.records.size());
        for (const auto& r : su.records) levels.push_back(label_engagement(r, table));
    }
    return out;
}

EffectReport gender_effect(const SessionizedCorpus& corpus) {
    std::map<int, std::array<GroupStats, 2>> stats; // [male, female]
    for (const auto& [user, su] : corpus.users) {
        const auto g = static_cast<int>(corpus.profiles.at(user).gender);
        for (const auto& r : su.records) {
            stats[r.category][g].sum += r.dwell_seconds;
            stats[r.category][g].n += 1;
        }
    }
    EffectReport report;
    for (const auto& [cat, s] : stats) {
        if (s[0].n == 0 || s[1].n == 0) {
            report.skipped.push_back(cat);
            continue;
        }
        const double male = s[0].mean(), female = s[1].mean();
        EffectEntry e;
        if (female >= male) {
            e.effect = male == 0.0 ? 1.0 : female / male;
            e.favored_group = "female";
            e.n_favored = s[1].n;
            e.n_other = s[0].n;
        } else {
            e.effect = female == 0.0 ? 1.0 : male / female;
            e.favored_group = "male";
            e.n_favored = s[0].n;
            e.n_other = s[1].n;
        }
        e.low_support = (s[0].n + s[1].n) < kLowSupportThreshold;
        report.per_category[cat] = e;
    }
    return report;
}

EffectReport age_effect(const SessionizedCorpus& corpus) {
    std::map<int, std::array<GroupStats, kNumAgeBands>> stats;
    std::map<int, GroupStats> all;
    for (const auto& [user, su] : corpus.users) {
        const auto band = static_cast<int>(corpus.profiles.at(user).age_band);
        for (const auto& r : su.records) {
            stats[r.category][band].sum += r.dwell_seconds;
            stats[r.category][band].n += 1;
            all[r.category].sum += r.dwell_seconds;
            all[r.category].n += 1;
        }
    }
    EffectReport report;
    for (const auto& [cat, bands] : stats) {
        const double reference = all.at(cat).mean();
        EffectEntry e;
        e.effect = 0.0;
        for (int b = 0; b < kNumAgeBands; ++b) {
            if (bands[b].n == 0) continue;
            const double ag = reference == 0.0 ? 1.0 : bands[b].mean() / reference;
            if (ag > e.effect) {
                e.effect = ag;
                e.favored_group = to_string(static_cast<AgeBand>(b));
                e.n_favored = bands[b].n;
            }
        }
        e.n_other = all.at(cat).n - e.n_favored;
        e.low_support = all.at(cat).n < kLowSupportThreshold;
        report.per_category[cat] = e;
    }
    return report;
}

EffectReport device_effect(const SessionizedCorpus& corpus) {
    std::map<int, std::array<GroupStats, 2>> stats; // [phone, tablet]
    for (const auto& [user, su] : corpus.users) {
        const auto d = static_cast<int>(corpus.profiles.at(user).device_type);
        for (const auto& r : su.records) {
            stats[r.category][d].sum += r.dwell_seconds;
            stats[r.category][d].n += 1;
        }
    }
    EffectReport report;
    for (const auto& [cat, s] : stats) {
        if (s[0].n == 0 || s[1].n == 0) {
            report.skipped.push_back(cat);
            continue;
        }
        const double phone = s[0].mean(), tablet = s[1].mean();
        EffectEntry e;
        if (phone >= tablet) {
            e.effect = tablet == 0.0 ? 1.0 : phone / tablet;
            e.favored_group = "phone";
            e.n_favored = s[0].n;
            e.n_other = s[1].n;
        } else {
            e.effect = phone == 0.0 ? 1.0 : tablet / phone;
            e.favored_group = "tablet";
            e.n_favored = s[1].n;
            e.n_other = s[0].n;
        }
        e.low_support = (s[0].n + s[1].n) < kLowSupportThreshold;
        report.per_category[cat] = e;
    }
    return report;
}

namespace {

DispersionEntry dispersion_from_hourly(const std::array<GroupStats, 24>& hours) {
    std::vector<double> means;
    for (const auto& h : hours)
        if (h.n > 0) means.push_back(h.mean());
    DispersionEntry e;
    e.populated_hours = static_cast<int>(means.size());
    e.partial_coverage = e.populated_hours < 24;
    if (means.empty()) return e;
    double mu = 0.0;
    for (double m : means) mu += m;
    mu /= static_cast<double>(means.size());
    double var = 0.0;
    for (double m : means) var += (m - mu) * (m - mu);
    var /= static_cast<double>(means.size());
    e.index = mu == 0.0 ? 0.0 : var / mu;
    return e;
}

} // namespace

DispersionReport dispersion_index(const SessionizedCorpus& corpus) {
    std::map<int, std::array<GroupStats, 24>> per_cat;
    std::array<GroupStats, 24> global{};
    for (const auto& [user, su] : corpus.users) {
        for (const auto& r : su.records) {
            per_cat[r.category][r.hour_of_day].sum += r.dwell_seconds;
            per_cat[r.category][r.hour_of_day].n += 1;
            global[r.hour_of_day].sum += r.dwell_seconds;
            global[r.hour_of_day].n += 1;
        }
    }
    DispersionReport report;
    for (const auto& [cat, hours] : per_cat)
        report.per_category[cat] = dispersion_from_hourly(hours);
    report.global = dispersion_from_hourly(global);
    return report;
}

std::pair<JointTransitionMatrix, SigmaReport>
last_app_transitions(const LabeledCorpus& corpus) {
    const int C = corpus.base->taxonomy.size();
    std::map<int, std::vector<std::size_t>> counts;
    for (const auto& [user, su] : corpus.base->users) {
        const auto& levels = corpus.levels.at(user);
        for (std::size_t k = 1; k < su.records.size(); ++k) {
            const auto& prev = su.records[k - 1];
            const auto& next = su.records[k];
            if (prev.session_index != next.session_index) continue;
            auto& row = counts[prev.category];
            if (row.empty()) row.assign(static_cast<std::size_t>(C) * 3, 0);
            row[static_cast<std::size_t>(next.category) * 3 +
                static_cast<std::size_t>(levels[k])] += 1;
        }
    }
    JointTransitionMatrix matrix;
    matrix.num_categories = C;
    SigmaReport sigma;
    for (const auto& [i, row] : counts) {
        std::size_t total = 0;
        for (auto c : row) total += c;
        std::vector<double> p(row.size(), 0.0);
        for (std::size_t k = 0; k < row.size(); ++k)
            p[k] = static_cast<double>(row[k]) / static_cast<double>(total);
        for (int j = 0; j < C; ++j) {
            const double a = p[static_cast<std::size_t>(j) * 3 + 0];
            const double b = p[static_cast<std::size_t>(j) * 3 + 1];
            const double c = p[static_cast<std::size_t>(j) * 3 + 2];
            const double mean = (a + b + c) / 3.0;
            const double var =
                ((a - mean) * (a - mean) + (b - mean) * (b - mean) + (c - mean) * (c - mean)) / 3.0;
            sigma.sigma_ij[{i, j}] = std::sqrt(var);
        }
        matrix.rows[i] = std::move(p);
    }
    // sigma_j averages over every observed last-category row.
    const std::size_t n_rows = matrix.rows.size();
    if (n_rows > 0) {
        for (int j = 0; j < C; ++j) {
            double sum = 0.0;
            for (const auto& [i, row] : matrix.rows) sum += sigma.sigma_ij.at({i, j});
            sigma.sigma_j[j] = sum / static_cast<double>(n_rows);
        }
    }
    return {std::move(matrix), std::move(sigma)};
}

std::map<int, LevelTransitionMatrix>
level_transitions_same_app(const LabeledCorpus& corpus) {
    std::map<int, std::array<std::array<std::size_t, 3>, 3>> counts;
    for (const auto& [user, su] : corpus.base->users) {
        const auto& levels = corpus.levels.at(user);
        std::map<int, std::size_t> last_index_of_category;
        for (std::size_t k = 0; k < su.records.size(); ++k) {
            const int cat = su.records[k].category;
            auto it = last_index_of_category.find(cat);
            if (it != last_index_of_category.end()) {
                const int from = static_cast<int>(levels[it->second]);
                const int to = static_cast<int>(levels[k]);
                counts[cat][from][to] += 1;
            }
            last_index_of_category[cat] = k;
        }
    }
    std::map<int, LevelTransitionMatrix> out;
    for (const auto& [cat, m] : counts) {
        LevelTransitionMatrix t;
        for (int from = 0; from < 3; ++from) {
            std::size_t total = m[from][0] + m[from][1] + m[from][2];
            t.row_counts[from] = total;
            if (total == 0) continue;
            for (int to = 0; to < 3; ++to)
                t.p[from][to] = static_cast<double>(m[from][to]) / static_cast<double>(total);
        }
        out[cat] = t;
    }
    return out;
}

int interval_hour_bucket(double interval_seconds) {
    const int bucket = static_cast<int>(std::floor(interval_seconds / 3600.0 + 0.5));
    if (bucket < 0) return 0;
    return bucket > 168 ? 168 : bucket;
}

std::map<int, IntervalHistogram> interval_histograms(const LabeledCorpus& corpus) {
    std::map<int, IntervalHistogram> out;
    for (const auto& [user, su] : corpus.base->users) {
        const auto& levels = corpus.levels.at(user);
        std::map<int, std::int64_t> last_start_of_category;
        for (std::size_t k = 0; k < su.records.size(); ++k) {
            const auto& r = su.records[k];
            auto it = last_start_of_category.find(r.category);
            if (it != last_start_of_category.end()) {
                auto& hist = out[r.category];
                if (hist.counts_by_level[0].empty())
                    for (auto& v : hist.counts_by_level) v.assign(169, 0);
                const int bucket = interval_hour_bucket(static_cast<double>(r.start - it->second));
                hist.counts_by_level[static_cast<std::size_t>(levels[k])][bucket] += 1;
            }
            last_start_of_category[r.category] = r.start;
        }
    }
    return out;
}

} // namespace engage
