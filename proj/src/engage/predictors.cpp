#include "predictors.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>

#include "json.hpp"

#include "io_util.hpp"
#include "learners/model_io.hpp"
#include "rng.hpp"

namespace engage {

namespace {

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t salt) {
    return Rng(seed ^ (salt * 0x9e3779b97f4a7c15ULL)).next_u64();
}

int argmax(std::span<const double> v) {
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

} // namespace

Strategy parse_strategy(const std::string& s) {
    if (s == "sequential") return Strategy::Sequential;
    if (s == "stacking") return Strategy::Stacking;
    if (s == "boosting") return Strategy::Boosting;
    throw UsageError("unknown strategy: " + s);
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Sequential: return "sequential";
        case Strategy::Stacking: return "stacking";
        case Strategy::Boosting: return "boosting";
    }
    throw InternalError("unhandled strategy");
}

std::vector<double> residual_target(int true_category, EngagementLevel true_level,
                                    int predicted_category, int num_categories) {
    std::vector<double> r(static_cast<std::size_t>(num_categories) + 3, 0.0);
    r[static_cast<std::size_t>(true_category)] += 1.0;
    r[static_cast<std::size_t>(predicted_category)] -= 1.0;
    r[static_cast<std::size_t>(num_categories) + static_cast<std::size_t>(true_level)] = 1.0;
    return r;
}

std::vector<double> boosting_input(const EngagementSnapshot& snapshot, int predicted_category,
                                   int num_categories) {
    auto x = assemble_engagement_vector(snapshot, predicted_category);
    const std::size_t base = x.size();
    x.resize(base + static_cast<std::size_t>(num_categories), 0.0);
    x[base + static_cast<std::size_t>(predicted_category)] = 1.0;
    return x;
}

// ---------------------------------------------------------------- residuals

namespace {

class ForestResidual final : public ResidualRegressor {
public:
    explicit ForestResidual(ForestConfig config) : config_(config) {}
    explicit ForestResidual(RegressionForest model) : model_(std::move(model)) {}

    void fit(const Matrix& x, const Matrix& residuals) override {
        model_.fit(x, residuals, config_);
    }
    std::vector<double> predict(std::span<const double> x) const override {
        return model_.predict(x);
    }
    std::string kind() const override { return "forest"; }
    std::string to_json() const override { return model_.to_json(); }

private:
    ForestConfig config_;
    RegressionForest model_;
};

class RidgeResidual final : public ResidualRegressor {
public:
    explicit RidgeResidual(RidgeConfig config) : config_(config) {}
    explicit RidgeResidual(Ridge model) : model_(std::move(model)) {}

    void fit(const Matrix& x, const Matrix& residuals) override {
        model_.fit(x, residuals, config_);
    }
    std::vector<double> predict(std::span<const double> x) const override {
        return model_.predict(x);
    }
    std::string kind() const override { return "ridge"; }
    std::string to_json() const override { return model_.to_json(); }

private:
    RidgeConfig config_;
    Ridge model_;
};

} // namespace

std::unique_ptr<ResidualRegressor> make_residual_regressor(const JointConfig& config) {
    if (config.residual_kind == "forest") {
        ForestConfig fc = config.residual_forest;
        fc.num_threads = config.num_threads;
        fc.seed = sub_seed(config.seed, 7);
        return std::make_unique<ForestResidual>(fc);
    }
    if (config.residual_kind == "ridge")
        return std::make_unique<RidgeResidual>(config.residual_ridge);
    throw UsageError("unknown residual regressor kind: " + config.residual_kind);
}

std::unique_ptr<ResidualRegressor> residual_regressor_from_json(const std::string& kind,
                                                                const std::string& json) {
    if (kind == "forest") return std::make_unique<ForestResidual>(RegressionForest::from_json(json));
    if (kind == "ridge") return std::make_unique<RidgeResidual>(Ridge::from_json(json));
    throw DataError("unknown residual regressor kind in model file: " + kind);
}

// ------------------------------------------------------------------- hybrid

void HybridModel::fit(const InstanceSet& set, const JointConfig& config) {
    const auto train = set.train();
    if (train.empty()) throw DataError("no training instances");
    num_categories_ = static_cast<int>(train.front()->engagement.last_level_code.size());

    Matrix x;
    std::vector<int> y;
    for (const auto* inst : train) {
        x.push_row(inst->x_generic);
        y.push_back(inst->label_category);
    }
    ForestConfig fc = config.generic_forest;
    fc.num_threads = config.num_threads;
    fc.seed = sub_seed(config.seed, 1);
    generic_.fit(x, y, num_categories_, fc);

    std::map<int, std::map<std::string, int>> category_apps;
    std::map<std::string, int> global_apps;
    for (const auto* inst : train) {
        app_category_[inst->label_app] = inst->label_category;
        user_app_counts_[inst->user_id][inst->label_app] += 1;
        category_apps[inst->label_category][inst->label_app] += 1;
        global_apps[inst->label_app] += 1;
    }
    for (const auto& [cat, apps] : category_apps) {
        int best = 0;
        for (const auto& [app, count] : apps) {
            if (count > best) {
                best = count;
                category_top_app_[cat] = app;
            }
        }
    }
    int best = 0;
    for (const auto& [app, count] : global_apps) {
        if (count > best) {
            best = count;
            top_app_ = app;
        }
    }

    std::map<std::string, std::vector<const PredictionInstance*>> per_user;
    for (const auto* inst : train) per_user[inst->user_id].push_back(inst);
    for (const auto& [user, insts] : per_user) {
        auto schema_it = set.personal.find(user);
        if (schema_it == set.personal.end()) continue;
        const auto& schema = schema_it->second;
        if (schema.apps.size() < 2) continue;
        if (static_cast<int>(insts.size()) < config.min_personal_instances) continue;

        Matrix px;
        std::vector<int> py;
        std::set<int> distinct;
        for (const auto* inst : insts) {
            const int label = schema.app_index(inst->label_app);
            if (label < 0) throw InternalError("train app missing from personal vocabulary");
            px.push_row(inst->x_personal);
            py.push_back(label);
            distinct.insert(label);
        }
        if (distinct.size() < 2) continue;

        SvmConfig sc = config.personal_svm;
        sc.num_classes = static_cast<int>(schema.apps.size());
        sc.seed = sub_seed(config.seed, fnv1a64(user));
        Personal p;
        p.schema = schema;
        p.svm.fit(px, py, sc);
        personal_.emplace(user, std::move(p));
    }
}

std::vector<double> HybridModel::category_proba(const PredictionInstance& instance) const {
    return generic_.predict_proba(instance.x_generic);
}

int HybridModel::predict_category(const PredictionInstance& instance) const {
    return generic_.predict(instance.x_generic);
}

std::string HybridModel::predict_app(const PredictionInstance& instance) const {
    return predict_app_in_category(instance, predict_category(instance));
}

std::vector<HybridModel::RankedApp> HybridModel::rank_apps(
    const PredictionInstance& instance) const {
    std::vector<RankedApp> ranked;
    auto it = personal_.find(instance.user_id);
    if (it == personal_.end()) return ranked;

    const auto pg = category_proba(instance);
    const auto& p = it->second;
    const auto pp = p.svm.predict_proba(instance.x_personal);
    for (std::size_t v = 0; v < p.schema.apps.size(); ++v) {
        const auto& app = p.schema.apps[v];
        auto cat_it = app_category_.find(app);
        const int category = cat_it == app_category_.end() ? -1 : cat_it->second;
        const double factor = category < 0 ? 1.0 / static_cast<double>(num_categories_)
                                           : pg[static_cast<std::size_t>(category)];
        ranked.push_back({app, category, factor * pp[v]});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedApp& a, const RankedApp& b) { return a.score > b.score; });
    return ranked;
}

std::string HybridModel::predict_app_in_category(const PredictionInstance& instance,
                                                 int category) const {
    auto it = personal_.find(instance.user_id);
    if (it != personal_.end()) {
        const auto& p = it->second;
        const auto pp = p.svm.predict_proba(instance.x_personal);
        double best = -1.0;
        std::string best_app;
        for (std::size_t v = 0; v < p.schema.apps.size(); ++v) {
            const auto& app = p.schema.apps[v];
            auto cat_it = app_category_.find(app);
            if (cat_it == app_category_.end() || cat_it->second != category) continue;
            if (pp[v] > best) {
                best = pp[v];
                best_app = app;
            }
        }
        if (!best_app.empty()) return best_app;
    }
    auto counts_it = user_app_counts_.find(instance.user_id);
    if (counts_it != user_app_counts_.end()) {
        int best = 0;
        std::string best_app;
        for (const auto& [app, count] : counts_it->second) {
            auto cat_it = app_category_.find(app);
            if (cat_it == app_category_.end() || cat_it->second != category) continue;
            if (count > best) {
                best = count;
                best_app = app;
            }
        }
        if (!best_app.empty()) return best_app;
    }
    auto top_it = category_top_app_.find(category);
    if (top_it != category_top_app_.end()) return top_it->second;
    return top_app_;
}

std::string HybridModel::to_json() const {
    nlohmann::ordered_json j;
    j["num_categories"] = num_categories_;
    j["generic"] = nlohmann::ordered_json::parse(generic_.to_json());
    j["app_category"] = app_category_;
    j["user_app_counts"] = user_app_counts_;
    nlohmann::ordered_json top;
    for (const auto& [cat, app] : category_top_app_) top[std::to_string(cat)] = app;
    j["category_top_app"] = std::move(top);
    j["top_app"] = top_app_;
    nlohmann::ordered_json personal;
    for (const auto& [user, p] : personal_) {
        nlohmann::ordered_json entry;
        entry["apps"] = p.schema.apps;
        entry["svm"] = nlohmann::ordered_json::parse(p.svm.to_json());
        personal[user] = std::move(entry);
    }
    j["personal"] = std::move(personal);
    return j.dump();
}

HybridModel HybridModel::from_json(const std::string& json) {
    const auto j = nlohmann::json::parse(json);
    HybridModel m;
    m.num_categories_ = j.at("num_categories").get<int>();
    m.generic_ = RandomForestClassifier::from_json(j.at("generic").dump());
    m.app_category_ = j.at("app_category").get<std::map<std::string, int>>();
    m.user_app_counts_ =
        j.at("user_app_counts").get<std::map<std::string, std::map<std::string, int>>>();
    for (const auto& [key, app] : j.at("category_top_app").items())
        m.category_top_app_[std::stoi(key)] = app.get<std::string>();
    m.top_app_ = j.at("top_app").get<std::string>();
    for (const auto& [user, entry] : j.at("personal").items()) {
        Personal p;
        p.schema = fit_personal_schema(entry.at("apps").get<std::vector<std::string>>());
        p.svm = LinearSvm::from_json(entry.at("svm").dump());
        m.personal_.emplace(user, std::move(p));
    }
    return m;
}

// --------------------------------------------------------------------- bank

void EngagementModelBank::fit(const std::vector<const PredictionInstance*>& train,
                              const JointConfig& config) {
    if (train.empty()) throw DataError("no training instances");

    LogRegConfig lc = config.engagement_logreg;
    lc.num_classes = 3;

    Matrix gx;
    std::vector<int> gy;
    std::map<int, std::vector<const PredictionInstance*>> per_category;
    for (const auto* inst : train) {
        gx.push_row(assemble_engagement_vector(inst->engagement, inst->label_category));
        gy.push_back(static_cast<int>(inst->label_level));
        per_category[inst->label_category].push_back(inst);
    }
    lc.seed = sub_seed(config.seed, 2);
    global_.fit(gx, gy, lc);

    for (const auto& [cat, insts] : per_category) {
        if (static_cast<int>(insts.size()) < config.min_category_support) continue;
        Matrix x;
        std::vector<int> y;
        std::set<int> distinct;
        for (const auto* inst : insts) {
            x.push_row(assemble_engagement_vector(inst->engagement, cat));
            y.push_back(static_cast<int>(inst->label_level));
            distinct.insert(static_cast<int>(inst->label_level));
        }
        if (distinct.size() < 2) continue;
        lc.seed = sub_seed(config.seed, 100 + static_cast<std::uint64_t>(cat));
        LogReg model;
        model.fit(x, y, lc);
        per_category_.emplace(cat, std::move(model));
    }
}

std::vector<double> EngagementModelBank::level_proba(const EngagementSnapshot& snapshot,
                                                     int category) const {
    const auto x = assemble_engagement_vector(snapshot, category);
    auto it = per_category_.find(category);
    return it == per_category_.end() ? global_.predict_proba(x) : it->second.predict_proba(x);
}

EngagementLevel EngagementModelBank::predict_level(const EngagementSnapshot& snapshot,
                                                   int category) const {
    return static_cast<EngagementLevel>(argmax(level_proba(snapshot, category)));
}

std::string EngagementModelBank::to_json() const {
    nlohmann::ordered_json j;
    j["global"] = nlohmann::ordered_json::parse(global_.to_json());
    nlohmann::ordered_json per;
    for (const auto& [cat, model] : per_category_)
        per[std::to_string(cat)] = nlohmann::ordered_json::parse(model.to_json());
    j["per_category"] = std::move(per);
    return j.dump();
}

EngagementModelBank EngagementModelBank::from_json(const std::string& json) {
    const auto j = nlohmann::json::parse(json);
    EngagementModelBank m;
    m.global_ = LogReg::from_json(j.at("global").dump());
    for (const auto& [key, model] : j.at("per_category").items())
        m.per_category_.emplace(std::stoi(key), LogReg::from_json(model.dump()));
    return m;
}

// ---------------------------------------------------------------- oof folds

FoldedGenericPredictions folded_generic_predictions(
    const std::vector<const PredictionInstance*>& train, int num_categories,
    const JointConfig& config) {
    const std::size_t n = train.size();
    if (n < static_cast<std::size_t>(config.num_folds))
        throw DataError("not enough training instances for out-of-fold predictions");

    FoldedGenericPredictions out;
    out.proba.resize(n);
    out.predicted.resize(n);

    for (int fold = 0; fold < config.num_folds; ++fold) {
        Matrix x;
        std::vector<int> y;
        for (std::size_t i = 0; i < n; ++i) {
            if (static_cast<int>(i % static_cast<std::size_t>(config.num_folds)) == fold)
                continue;
            x.push_row(train[i]->x_generic);
            y.push_back(train[i]->label_category);
        }
        ForestConfig fc = config.generic_forest;
        fc.num_threads = config.num_threads;
        fc.seed = sub_seed(config.seed, 1000 + static_cast<std::uint64_t>(fold));
        RandomForestClassifier model;
        model.fit(x, y, num_categories, fc);
        for (std::size_t i = 0; i < n; ++i) {
            if (static_cast<int>(i % static_cast<std::size_t>(config.num_folds)) != fold)
                continue;
            out.proba[i] = model.predict_proba(train[i]->x_generic);
            out.predicted[i] = argmax(out.proba[i]);
        }
    }
    return out;
}

// -------------------------------------------------------------------- joint

void JointModel::train(const InstanceSet& set, Strategy strategy, const JointConfig& config,
                       BoostingOverride* boosting_override, TrainCache* cache) {
    strategy_ = strategy;
    generic_digest_ = set.generic.digest();
    engagement_digest_ = set.engagement.digest();

    const auto train = set.train();
    if (cache != nullptr && cache->has_components) {
        hybrid_ = cache->hybrid;
        bank_ = cache->bank;
    } else {
        hybrid_.fit(set, config);
        bank_.fit(train, config);
        if (cache != nullptr) {
            cache->hybrid = hybrid_;
            cache->bank = bank_;
            cache->has_components = true;
        }
    }
    num_categories_ = hybrid_.num_categories();

    if (strategy == Strategy::Sequential) return;

    if (cache != nullptr && !cache->has_folded) {
        cache->folded = folded_generic_predictions(train, num_categories_, config);
        cache->has_folded = true;
    }
    const auto folded = cache != nullptr
                            ? cache->folded
                            : folded_generic_predictions(train, num_categories_, config);

    if (strategy == Strategy::Stacking) {
        // The meta-classifier runs over the joint classes observed in
        // training, not the full category x level grid.
        std::set<int> observed;
        for (const auto* t : train)
            observed.insert(t->label_category * 3 + static_cast<int>(t->label_level));
        meta_classes_.assign(observed.begin(), observed.end());
        std::map<int, int> to_index;
        for (std::size_t k = 0; k < meta_classes_.size(); ++k)
            to_index[meta_classes_[k]] = static_cast<int>(k);

        Matrix z;
        std::vector<int> y;
        for (std::size_t i = 0; i < train.size(); ++i) {
            std::vector<double> row = folded.proba[i];
            const auto lp = bank_.level_proba(train[i]->engagement, folded.predicted[i]);
            row.insert(row.end(), lp.begin(), lp.end());
            z.push_row(row);
            y.push_back(to_index.at(train[i]->label_category * 3 +
                                    static_cast<int>(train[i]->label_level)));
        }
        LogRegConfig mc = config.meta_logreg;
        mc.num_classes = static_cast<int>(meta_classes_.size());
        mc.seed = sub_seed(config.seed, 3);
        meta_.fit(z, y, mc);
        return;
    }

    // Boosting. Residuals are computed against out-of-fold first-stage
    // predictions so the correction model sees the h1 mistakes it will face
    // at prediction time.
    Matrix x;
    Matrix r;
    for (std::size_t i = 0; i < train.size(); ++i) {
        x.push_row(boosting_input(train[i]->engagement, folded.predicted[i], num_categories_));
        r.push_row(residual_target(train[i]->label_category, train[i]->label_level,
                                   folded.predicted[i], num_categories_));
    }
    if (boosting_override != nullptr && boosting_override->h2 != nullptr) {
        residual_ = std::move(boosting_override->h2);
        if (!boosting_override->skip_h2_fit) residual_->fit(x, r);
    } else {
        residual_ = make_residual_regressor(config);
        residual_->fit(x, r);
    }

    if (boosting_override != nullptr && boosting_override->fix_gamma) {
        gamma_ = boosting_override->gamma;
        return;
    }
    // One-dimensional grid search: squared training loss of F = h1 + gamma*h2.
    std::vector<std::vector<double>> fitted(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) fitted[i] = residual_->predict(x.row(i));
    double best_loss = std::numeric_limits<double>::infinity();
    for (const double gamma : config.gamma_grid) {
        double loss = 0.0;
        for (std::size_t i = 0; i < train.size(); ++i) {
            const auto target = r.row(i);
            for (std::size_t k = 0; k < fitted[i].size(); ++k) {
                const double d = target[k] - gamma * fitted[i][k];
                loss += d * d;
            }
        }
        if (loss < best_loss) {
            best_loss = loss;
            gamma_ = gamma;
        }
    }
}

std::vector<double> JointModel::boosting_scores(const PredictionInstance& instance,
                                                int generic_category) const {
    // Combination rule: s = onehot(h1 category) + 0_3 + gamma * h2(x).
    std::vector<double> scores(static_cast<std::size_t>(num_categories_) + 3, 0.0);
    scores[static_cast<std::size_t>(generic_category)] = 1.0;
    const auto correction =
        residual_->predict(boosting_input(instance.engagement, generic_category, num_categories_));
    for (std::size_t k = 0; k < scores.size(); ++k) scores[k] += gamma_ * correction[k];
    return scores;
}

JointPrediction JointModel::predict(const PredictionInstance& instance) const {
    const auto pg = hybrid_.category_proba(instance);
    const int generic_category = argmax(pg);

    JointPrediction out;
    out.generic_category = generic_category;

    switch (strategy_) {
        case Strategy::Sequential: {
            out.category = generic_category;
            out.level = bank_.predict_level(instance.engagement, out.category);
            out.app = hybrid_.predict_app(instance);
            return out;
        }
        case Strategy::Stacking: {
            std::vector<double> z = pg;
            const auto lp = bank_.level_proba(instance.engagement, generic_category);
            z.insert(z.end(), lp.begin(), lp.end());
            const int joint = meta_classes_[static_cast<std::size_t>(meta_.predict(z))];
            out.category = joint / 3;
            out.level = static_cast<EngagementLevel>(joint % 3);
            out.app = hybrid_.predict_app_in_category(instance, out.category);
            return out;
        }
        case Strategy::Boosting: {
            const auto scores = boosting_scores(instance, generic_category);
            out.category = argmax({scores.data(), static_cast<std::size_t>(num_categories_)});
            out.level = static_cast<EngagementLevel>(
                argmax({scores.data() + num_categories_, 3}));
            out.app = hybrid_.predict_app_in_category(instance, out.category);
            return out;
        }
    }
    throw InternalError("unhandled strategy in predict");
}

void JointModel::save(const std::string& dir) const {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    save_model((fs::path(dir) / "hybrid.json").string(),
               {"hybrid", 1, generic_digest_, hybrid_.to_json()});
    save_model((fs::path(dir) / "bank.json").string(),
               {"engagement_bank", 1, engagement_digest_, bank_.to_json()});

    nlohmann::ordered_json j;
    j["strategy"] = to_string(strategy_);
    j["num_categories"] = num_categories_;
    j["gamma"] = gamma_;
    if (strategy_ == Strategy::Stacking) {
        j["meta"] = nlohmann::ordered_json::parse(meta_.to_json());
        j["meta_classes"] = meta_classes_;
    }
    if (strategy_ == Strategy::Boosting) {
        j["residual_kind"] = residual_->kind();
        j["residual"] = nlohmann::ordered_json::parse(residual_->to_json());
    }
    save_model((fs::path(dir) / "joint.json").string(),
               {"joint", 1, generic_digest_ + ":" + engagement_digest_, j.dump()});
}

JointModel JointModel::load(const std::string& dir) {
    namespace fs = std::filesystem;
    const auto joint_env = load_model((fs::path(dir) / "joint.json").string(), "joint");
    const auto j = nlohmann::json::parse(joint_env.params);

    JointModel m;
    m.strategy_ = parse_strategy(j.at("strategy").get<std::string>());
    m.num_categories_ = j.at("num_categories").get<int>();
    m.gamma_ = j.at("gamma").get<double>();

    const auto hybrid_env = load_model((fs::path(dir) / "hybrid.json").string(), "hybrid");
    m.generic_digest_ = hybrid_env.schema_digest;
    m.hybrid_ = HybridModel::from_json(hybrid_env.params);
    const auto bank_env = load_model((fs::path(dir) / "bank.json").string(), "engagement_bank");
    m.engagement_digest_ = bank_env.schema_digest;
    m.bank_ = EngagementModelBank::from_json(bank_env.params);

    if (joint_env.schema_digest != m.generic_digest_ + ":" + m.engagement_digest_)
        throw DataError("joint model components disagree on feature schemas");

    if (m.strategy_ == Strategy::Stacking) {
        m.meta_ = LogReg::from_json(j.at("meta").dump());
        m.meta_classes_ = j.at("meta_classes").get<std::vector<int>>();
    }
    if (m.strategy_ == Strategy::Boosting)
        m.residual_ = residual_regressor_from_json(j.at("residual_kind").get<std::string>(),
                                                   j.at("residual").dump());
    return m;
}

} // namespace engage
