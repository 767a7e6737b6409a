#include "pipeline.hpp"

#include <filesystem>
#include <sstream>

#include "json.hpp"

#include "analytics.hpp"
#include "baselines.hpp"
#include "evaluator.hpp"
#include "io_util.hpp"

namespace engage {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

const std::vector<std::string> kStageNames = {"generate", "ingest",   "analyze", "featurize",
                                              "train",    "evaluate", "report"};

namespace {

ForestConfig forest_from_json(const nlohmann::json& j, ForestConfig base) {
    base.num_trees = j.value("num_trees", base.num_trees);
    base.max_depth = j.value("max_depth", base.max_depth);
    base.min_samples_leaf = j.value("min_samples_leaf", base.min_samples_leaf);
    base.min_samples_split = j.value("min_samples_split", base.min_samples_split);
    base.max_features = j.value("max_features", base.max_features);
    base.bootstrap = j.value("bootstrap", base.bootstrap);
    return base;
}

LogRegConfig logreg_from_json(const nlohmann::json& j, LogRegConfig base) {
    base.lambda = j.value("lambda", base.lambda);
    base.learning_rate = j.value("learning_rate", base.learning_rate);
    base.epochs = j.value("epochs", base.epochs);
    base.batch_size = j.value("batch_size", base.batch_size);
    return base;
}

SvmConfig svm_from_json(const nlohmann::json& j, SvmConfig base) {
    base.lambda = j.value("lambda", base.lambda);
    base.learning_rate = j.value("learning_rate", base.learning_rate);
    base.epochs = j.value("epochs", base.epochs);
    return base;
}

} // namespace

RunConfig RunConfig::from_json(const std::string& json) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("run config is not valid JSON: ") + e.what());
    }
    RunConfig c;
    c.raw_json = json;
    c.workdir = j.value("workdir", c.workdir);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.report_format = j.value("format", c.report_format);
    if (c.report_format != "csv" && c.report_format != "json")
        throw UsageError("format must be csv or json");
    if (c.threads < 1) throw UsageError("threads must be >= 1");

    if (j.contains("input")) {
        const auto& in = j.at("input");
        c.log_path = in.value("log", c.log_path);
        c.log_format = in.value("format", c.log_format);
        c.taxonomy = in.value("taxonomy", c.taxonomy);
        c.timezone_offset_minutes = in.value("timezone_offset_minutes", c.timezone_offset_minutes);
        c.malformed_tolerance = in.value("malformed_tolerance", c.malformed_tolerance);
    }
    c.session_gap_seconds = j.value("session_gap_seconds", c.session_gap_seconds);
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    c.strategy = j.value("strategy", c.strategy);
    if (c.strategy != "all") parse_strategy(c.strategy); // validate
    c.task = j.value("task", c.task);
    if (c.task != "app" && c.task != "level" && c.task != "joint")
        throw UsageError("task must be app, level or joint");

    if (j.contains("model")) {
        const auto& m = j.at("model");
        c.joint.generic_forest = forest_from_json(m.value("generic_forest", nlohmann::json::object()),
                                                  c.joint.generic_forest);
        c.joint.personal_svm =
            svm_from_json(m.value("personal_svm", nlohmann::json::object()), c.joint.personal_svm);
        c.joint.min_personal_instances =
            m.value("min_personal_instances", c.joint.min_personal_instances);
        c.joint.engagement_logreg = logreg_from_json(
            m.value("engagement_logreg", nlohmann::json::object()), c.joint.engagement_logreg);
        c.joint.min_category_support = m.value("min_category_support", c.joint.min_category_support);
        c.joint.meta_logreg =
            logreg_from_json(m.value("meta_logreg", nlohmann::json::object()), c.joint.meta_logreg);
        c.joint.num_folds = m.value("num_folds", c.joint.num_folds);
        c.joint.residual_kind = m.value("residual_kind", c.joint.residual_kind);
        c.joint.residual_forest = forest_from_json(
            m.value("residual_forest", nlohmann::json::object()), c.joint.residual_forest);
        c.joint.residual_ridge.lambda =
            m.value("residual_ridge", nlohmann::json::object()).value("lambda",
                                                                      c.joint.residual_ridge.lambda);
        c.joint.gamma_grid = m.value("gamma_grid", c.joint.gamma_grid);
    }
    c.joint.seed = c.seed;
    c.joint.num_threads = c.threads;

    c.baselines = j.value("baselines", c.baselines);
    for (const auto& b : c.baselines)
        if (std::find(baseline_names().begin(), baseline_names().end(), b) ==
            baseline_names().end())
            throw UsageError("unknown baseline: " + b);

    if (j.contains("generator")) {
        c.generator = GeneratorConfig::from_json(j.at("generator").dump());
        if (!j.at("generator").contains("seed")) c.generator.seed = c.seed;
    } else {
        c.generator.seed = c.seed;
    }
    return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    return from_json(read_file(path));
}

namespace {

fs::path resolve_log_path(const RunConfig& cfg) {
    if (!cfg.log_path.empty()) return cfg.log_path;
    return fs::path(cfg.workdir) / "data" / "events.csv";
}

void write_stage_manifest(const RunConfig& cfg, const std::string& stage,
                          const std::vector<fs::path>& inputs,
                          const std::vector<fs::path>& outputs) {
    ordered_json m;
    m["stage"] = stage;
    m["config_digest"] = fnv1a_hex(cfg.raw_json);
    ordered_json in = ordered_json::object();
    for (const auto& p : inputs) in[p.generic_string()] = file_digest(p);
    m["inputs"] = std::move(in);
    ordered_json out = ordered_json::object();
    for (const auto& p : outputs) out[p.generic_string()] = file_digest(p);
    m["outputs"] = std::move(out);
    write_file(fs::path(cfg.workdir) / stage / "manifest.json", m.dump(2) + "\n");
}

SessionizedCorpus load_sessionized(const RunConfig& cfg) {
    ParseOptions options;
    options.malformed_tolerance = cfg.malformed_tolerance;
    options.taxonomy_names = cfg.taxonomy;
    const auto corpus =
        parse_log(resolve_log_path(cfg), parse_log_format(cfg.log_format), options);
    return sessionize_corpus(corpus, cfg.session_gap_seconds, cfg.timezone_offset_minutes);
}

std::map<std::string, std::size_t> train_counts_for(const SessionizedCorpus& corpus,
                                                    double fraction) {
    std::map<std::string, std::size_t> counts;
    for (const auto& [user, su] : corpus.users) counts[user] = su.records.size();
    return split_per_user(counts, fraction);
}

QuantileTable fit_train_quantiles(const SessionizedCorpus& corpus,
                                  const std::map<std::string, std::size_t>& train_counts) {
    std::vector<const DwellRecord*> train;
    for (const auto& [user, su] : corpus.users) {
        const std::size_t n = std::min(train_counts.at(user), su.records.size());
        for (std::size_t k = 0; k < n; ++k) train.push_back(&su.records[k]);
    }
    return fit_quantiles(train);
}

std::vector<std::string> requested_strategies(const RunConfig& cfg) {
    if (cfg.strategy == "all") return {"sequential", "stacking", "boosting"};
    return {cfg.strategy};
}

std::vector<std::string> requested_baselines(const RunConfig& cfg) {
    return cfg.baselines.empty() ? baseline_names() : cfg.baselines;
}

// -------------------------------------------------------------------- stages

void run_generate(const RunConfig& cfg) {
    const fs::path dir = fs::path(cfg.workdir) / "data";
    generate_to_dir(cfg.generator, dir.string());
    write_stage_manifest(cfg, "generate", {}, {dir / "events.csv", dir / "manifest.json"});
}

void run_ingest(const RunConfig& cfg) {
    const auto log = resolve_log_path(cfg);
    ParseOptions options;
    options.malformed_tolerance = cfg.malformed_tolerance;
    options.taxonomy_names = cfg.taxonomy;
    const auto corpus = parse_log(log, parse_log_format(cfg.log_format), options);
    const auto sessionized =
        sessionize_corpus(corpus, cfg.session_gap_seconds, cfg.timezone_offset_minutes);

    std::size_t sessions = 0;
    for (const auto& [user, su] : sessionized.users) sessions += su.sessions.size();

    ordered_json s;
    s["source"] = log.generic_string();
    s["source_digest"] = corpus.source_digest;
    s["rows"] = corpus.row_count;
    s["malformed_rows"] = corpus.malformed_rows;
    s["dropped_background_rows"] = corpus.dropped_background_rows;
    s["users"] = corpus.events.size();
    s["events"] = corpus.event_count();
    s["sessions"] = sessions;
    s["records"] = sessionized.record_count();
    s["taxonomy"] = sessionized.taxonomy.names();
    const fs::path out = fs::path(cfg.workdir) / "ingest" / "summary.json";
    write_file(out, s.dump(2) + "\n");
    write_stage_manifest(cfg, "ingest", {log}, {out});
}

ordered_json effect_to_json(const EffectReport& report, const Taxonomy& tax) {
    ordered_json per = ordered_json::object();
    for (const auto& [cat, e] : report.per_category) {
        ordered_json o;
        o["effect"] = e.effect;
        o["favored_group"] = e.favored_group;
        o["n_favored"] = e.n_favored;
        o["n_other"] = e.n_other;
        o["low_support"] = e.low_support;
        per[tax.name(cat)] = std::move(o);
    }
    ordered_json j;
    j["per_category"] = std::move(per);
    ordered_json skipped = ordered_json::array();
    for (int cat : report.skipped) skipped.push_back(tax.name(cat));
    j["skipped"] = std::move(skipped);
    return j;
}

void run_analyze(const RunConfig& cfg) {
    const auto log = resolve_log_path(cfg);
    const auto corpus = load_sessionized(cfg);
    const auto& tax = corpus.taxonomy;
    const auto tc = train_counts_for(corpus, cfg.train_fraction);
    const auto table = fit_train_quantiles(corpus, tc);
    const auto labeled = label_corpus(corpus, table);

    ordered_json a;
    a["gender_effect"] = effect_to_json(gender_effect(corpus), tax);
    a["age_effect"] = effect_to_json(age_effect(corpus), tax);
    a["device_effect"] = effect_to_json(device_effect(corpus), tax);

    const auto dispersion = dispersion_index(corpus);
    ordered_json disp = ordered_json::object();
    for (const auto& [cat, e] : dispersion.per_category) {
        ordered_json o;
        o["index"] = e.index;
        o["populated_hours"] = e.populated_hours;
        o["partial_coverage"] = e.partial_coverage;
        disp[tax.name(cat)] = std::move(o);
    }
    a["dispersion"]["per_category"] = std::move(disp);
    a["dispersion"]["global"]["index"] = dispersion.global.index;
    a["dispersion"]["global"]["populated_hours"] = dispersion.global.populated_hours;
    a["dispersion"]["global"]["partial_coverage"] = dispersion.global.partial_coverage;

    const auto [matrix, sigma] = last_app_transitions(labeled);
    ordered_json rows = ordered_json::object();
    for (const auto& [i, row] : matrix.rows) rows[tax.name(i)] = row;
    a["transitions"]["rows"] = std::move(rows);
    ordered_json sij = ordered_json::object();
    for (const auto& [key, v] : sigma.sigma_ij)
        sij[tax.name(key.first) + "|" + tax.name(key.second)] = v;
    a["transitions"]["sigma_ij"] = std::move(sij);
    ordered_json sj = ordered_json::object();
    for (const auto& [j2, v] : sigma.sigma_j) sj[tax.name(j2)] = v;
    a["transitions"]["sigma_j"] = std::move(sj);

    ordered_json lt = ordered_json::object();
    for (const auto& [cat, m] : level_transitions_same_app(labeled)) {
        ordered_json o;
        o["p"] = m.p;
        o["row_counts"] = m.row_counts;
        lt[tax.name(cat)] = std::move(o);
    }
    a["level_transitions"] = std::move(lt);

    ordered_json hist = ordered_json::object();
    for (const auto& [cat, h] : interval_histograms(labeled)) {
        ordered_json o;
        o["light"] = h.counts_by_level[0];
        o["medium"] = h.counts_by_level[1];
        o["intensive"] = h.counts_by_level[2];
        std::size_t best = 0;
        int peak = 0;
        for (int b = 0; b <= 168; ++b) {
            const std::size_t total = h.counts_by_level[0][static_cast<std::size_t>(b)] +
                                      h.counts_by_level[1][static_cast<std::size_t>(b)] +
                                      h.counts_by_level[2][static_cast<std::size_t>(b)];
            if (total > best) {
                best = total;
                peak = b;
            }
        }
        o["peak_bucket"] = peak;
        hist[tax.name(cat)] = std::move(o);
    }
    a["interval_histograms"] = std::move(hist);

    const fs::path dir = fs::path(cfg.workdir) / "analyze";
    write_file(dir / "quantiles.json", table.to_json(tax) + "\n");
    write_file(dir / "analytics.json", a.dump(2) + "\n");
    write_stage_manifest(cfg, "analyze", {log}, {dir / "quantiles.json", dir / "analytics.json"});
}

void run_featurize(const RunConfig& cfg) {
    const auto log = resolve_log_path(cfg);
    const auto corpus = load_sessionized(cfg);
    const auto tc = train_counts_for(corpus, cfg.train_fraction);
    const auto table = fit_train_quantiles(corpus, tc);
    const auto set = make_instances(corpus, table, tc);

    const fs::path dir = fs::path(cfg.workdir) / "features";
    write_file(dir / "quantiles.json", table.to_json(corpus.taxonomy) + "\n");

    ordered_json schema;
    schema["num_categories"] = corpus.taxonomy.size();
    schema["taxonomy"] = corpus.taxonomy.names();
    auto describe = [&](const char* key, const FeatureSchema& s) {
        ordered_json blocks = ordered_json::array();
        for (const auto& b : s.blocks)
            blocks.push_back({{"name", b.name}, {"width", b.width}, {"numeric", b.numeric}});
        schema[key]["dimension"] = s.dimension();
        schema[key]["digest"] = s.digest();
        schema[key]["blocks"] = std::move(blocks);
    };
    describe("generic", set.generic);
    describe("engagement", set.engagement);
    write_file(dir / "schema.json", schema.dump(2) + "\n");

    ordered_json personal = ordered_json::object();
    for (const auto& [user, ps] : set.personal) personal[user] = ps.apps;
    write_file(dir / "personal.json", personal.dump(2) + "\n");

    std::ostringstream jsonl;
    for (const auto& inst : set.instances) jsonl << instance_to_json(inst) << '\n';
    write_file(dir / "instances.jsonl", jsonl.str());
    write_file(dir / "instances.csv", instances_to_csv(set));

    write_stage_manifest(cfg, "featurize", {log},
                         {dir / "quantiles.json", dir / "schema.json", dir / "personal.json",
                          dir / "instances.jsonl", dir / "instances.csv"});
}

InstanceSet load_instances(const RunConfig& cfg) {
    const fs::path dir = fs::path(cfg.workdir) / "features";
    const auto schema = nlohmann::json::parse(read_file(dir / "schema.json"));
    const int C = schema.at("num_categories").get<int>();

    InstanceSet set;
    set.generic = generic_schema(C);
    set.engagement = engagement_schema(C);
    if (set.generic.digest() != schema.at("generic").at("digest").get<std::string>() ||
        set.engagement.digest() != schema.at("engagement").at("digest").get<std::string>())
        throw DataError("feature files were produced by an incompatible schema");

    const auto personal = nlohmann::json::parse(read_file(dir / "personal.json"));
    for (const auto& [user, apps] : personal.items())
        set.personal.emplace(user, fit_personal_schema(apps.get<std::vector<std::string>>()));

    std::istringstream in(read_file(dir / "instances.jsonl"));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto inst = instance_from_json(line);
        if (static_cast<int>(inst.x_generic.size()) != set.generic.dimension())
            throw DataError("instance width disagrees with the stored schema");
        set.instances.push_back(std::move(inst));
    }
    if (set.instances.empty()) throw DataError("no instances in features/instances.jsonl");
    return set;
}

void run_train(const RunConfig& cfg) {
    const auto set = load_instances(cfg);
    const auto taxonomy =
        nlohmann::json::parse(read_file(fs::path(cfg.workdir) / "features" / "schema.json"))
            .at("taxonomy")
            .get<std::vector<std::string>>();

    std::vector<fs::path> outputs;
    TrainCache cache;
    for (const auto& name : requested_strategies(cfg)) {
        JointModel model;
        model.train(set, parse_strategy(name), cfg.joint, nullptr, &cache);
        const fs::path dir = fs::path(cfg.workdir) / "models" / name;
        model.save(dir.string());
        write_file(dir / "taxonomy.json", ordered_json(taxonomy).dump() + "\n");
        for (const char* f : {"hybrid.json", "bank.json", "joint.json", "taxonomy.json"})
            outputs.push_back(dir / f);
    }
    write_stage_manifest(cfg, "train",
                         {fs::path(cfg.workdir) / "features" / "instances.jsonl"}, outputs);
}

ordered_json metrics_to_json(const MetricReport& r) {
    ordered_json j;
    j["n"] = r.n;
    j["accuracy"] = r.accuracy;
    j["precision"] = r.precision;
    j["recall"] = r.recall;
    j["f1"] = r.f1;
    return j;
}

std::string joint_key(const std::string& app, EngagementLevel level) {
    return app + "|" + to_string(level);
}

void run_evaluate(const RunConfig& cfg) {
    const auto set = load_instances(cfg);
    const auto test = set.test();
    if (test.empty()) throw DataError("no test instances to evaluate");

    std::vector<std::string> truth_app, truth_joint, truth_cat_s;
    std::vector<int> truth_cat;
    std::vector<EngagementLevel> truth_level;
    std::vector<std::string> truth_level_s;
    for (const auto* t : test) {
        truth_app.push_back(t->label_app);
        truth_cat.push_back(t->label_category);
        truth_cat_s.push_back(std::to_string(t->label_category));
        truth_level.push_back(t->label_level);
        truth_level_s.push_back(to_string(t->label_level));
        truth_joint.push_back(joint_key(t->label_app, t->label_level));
    }

    ordered_json out;
    out["n_test"] = test.size();

    std::map<std::string, std::vector<int>> category_calls;
    for (const auto& name : requested_strategies(cfg)) {
        const fs::path dir = fs::path(cfg.workdir) / "models" / name;
        const auto model = JointModel::load(dir.string());
        std::vector<std::string> app, cat_s, level_s, joint;
        std::vector<int> cat;
        std::vector<EngagementLevel> level;
        for (const auto* t : test) {
            const auto p = model.predict(*t);
            app.push_back(p.app);
            cat.push_back(p.category);
            cat_s.push_back(std::to_string(p.category));
            level.push_back(p.level);
            level_s.push_back(to_string(p.level));
            joint.push_back(joint_key(p.app, p.level));
        }
        category_calls[name] = cat;

        ordered_json m;
        m["app"] = metrics_to_json(score(truth_app, app));
        m["category"] = metrics_to_json(score(truth_cat_s, cat_s));
        m["level"] = metrics_to_json(score(truth_level_s, level_s));
        m["joint"] = metrics_to_json(score(truth_joint, joint));
        const auto confusion = confusion_level(truth_level, level);
        m["level_confusion"]["counts"] = confusion.counts;
        m["level_confusion"]["errors"] = confusion.errors;
        m["level_confusion"]["adjacent_errors"] = confusion.adjacent_errors;
        m["level_confusion"]["adjacent_share"] = confusion.adjacent_share;
        if (name == "boosting") m["gamma"] = model.gamma();
        out["models"][name] = std::move(m);
    }

    if (category_calls.count("sequential") && category_calls.count("boosting")) {
        const auto attribution = error_attribution(truth_cat, category_calls.at("sequential"),
                                                   category_calls.at("boosting"));
        ordered_json e;
        e["n"] = attribution.n;
        e["reference_wrong"] = attribution.reference_wrong;
        e["corrected"] = attribution.corrected;
        e["broken"] = attribution.broken;
        e["both_wrong"] = attribution.both_wrong;
        e["net_correction_rate"] = attribution.net_correction_rate;
        out["error_attribution"]["boosting_vs_sequential"] = std::move(e);
    }

    // Baselines replay the raw records, so rebuild the labeled corpus.
    const auto corpus = load_sessionized(cfg);
    const auto tc = train_counts_for(corpus, cfg.train_fraction);
    const auto table =
        QuantileTable::from_json(read_file(fs::path(cfg.workdir) / "features" / "quantiles.json"),
                                 corpus.taxonomy);
    const auto labeled = label_corpus(corpus, table);
    for (const auto& name : requested_baselines(cfg)) {
        const auto outputs = run_baseline(name, labeled, tc, cfg.seed);
        std::vector<std::string> app, level_s, joint;
        std::vector<EngagementLevel> level;
        bool has_level = false;
        for (const auto* t : test) {
            const auto& p = outputs.predictions.at(t->user_id).at(t->record_index);
            app.push_back(p.app);
            if (p.has_level) {
                has_level = true;
                level.push_back(p.level);
                level_s.push_back(to_string(p.level));
                joint.push_back(joint_key(p.app, p.level));
            }
        }
        ordered_json m;
        m["app"] = metrics_to_json(score(truth_app, app));
        if (has_level) {
            m["level"] = metrics_to_json(score(truth_level_s, level_s));
            m["joint"] = metrics_to_json(score(truth_joint, joint));
        }
        out["baselines"][name] = std::move(m);
    }

    const fs::path path = fs::path(cfg.workdir) / "evaluate" / "metrics.json";
    write_file(path, out.dump(2) + "\n");
    write_stage_manifest(cfg, "evaluate",
                         {fs::path(cfg.workdir) / "features" / "instances.jsonl"}, {path});
}

void append_metric_rows(std::ostringstream& csv, const std::string& model,
                        const nlohmann::json& tasks) {
    for (const auto& task : {"app", "category", "level", "joint"}) {
        if (!tasks.contains(task)) continue;
        const auto& m = tasks.at(task);
        csv << model << ',' << task << ',' << m.at("n").get<std::size_t>() << ','
            << format_double(m.at("accuracy").get<double>()) << ','
            << format_double(m.at("precision").get<double>()) << ','
            << format_double(m.at("recall").get<double>()) << ','
            << format_double(m.at("f1").get<double>()) << '\n';
    }
}

void run_report(const RunConfig& cfg) {
    const fs::path metrics_path = fs::path(cfg.workdir) / "evaluate" / "metrics.json";
    const fs::path analytics_path = fs::path(cfg.workdir) / "analyze" / "analytics.json";
    const auto metrics = nlohmann::json::parse(read_file(metrics_path));

    const fs::path dir = fs::path(cfg.workdir) / "report";
    std::vector<fs::path> outputs;
    if (cfg.report_format == "json") {
        ordered_json r;
        r["task"] = cfg.task;
        r["metrics"] = metrics;
        if (fs::exists(analytics_path))
            r["analytics"] = nlohmann::json::parse(read_file(analytics_path));
        write_file(dir / "report.json", r.dump(2) + "\n");
        outputs.push_back(dir / "report.json");
    } else {
        std::ostringstream csv;
        csv << "model,task,n,accuracy,precision,recall,f1\n";
        if (metrics.contains("models"))
            for (const auto& [name, tasks] : metrics.at("models").items())
                append_metric_rows(csv, name, tasks);
        if (metrics.contains("baselines"))
            for (const auto& [name, tasks] : metrics.at("baselines").items())
                append_metric_rows(csv, "baseline:" + name, tasks);
        write_file(dir / "report.csv", csv.str());
        outputs.push_back(dir / "report.csv");
    }
    std::vector<fs::path> inputs = {metrics_path};
    if (fs::exists(analytics_path)) inputs.push_back(analytics_path);
    write_stage_manifest(cfg, "report", inputs, outputs);
}

} // namespace

void run_stage(const RunConfig& config, const std::string& stage) {
    if (stage == "generate") return run_generate(config);
    if (stage == "ingest") return run_ingest(config);
    if (stage == "analyze") return run_analyze(config);
    if (stage == "featurize") return run_featurize(config);
    if (stage == "train") return run_train(config);
    if (stage == "evaluate") return run_evaluate(config);
    if (stage == "report") return run_report(config);
    throw UsageError("unknown stage: " + stage);
}

std::string run_predict_json(const std::string& model_dir, const std::string& snapshot_json) {
    const auto model = JointModel::load(model_dir);
    const auto instance = instance_from_json(snapshot_json);
    const auto p = model.predict(instance);

    ordered_json j;
    j["app"] = p.app;
    j["category"] = p.category;
    j["generic_category"] = p.generic_category;
    j["level"] = to_string(p.level);
    const fs::path tax_path = fs::path(model_dir) / "taxonomy.json";
    if (fs::exists(tax_path)) {
        const auto names =
            nlohmann::json::parse(read_file(tax_path)).get<std::vector<std::string>>();
        if (p.category >= 0 && p.category < static_cast<int>(names.size()))
            j["category_name"] = names[static_cast<std::size_t>(p.category)];
    }
    return j.dump();
}

} // namespace engage
