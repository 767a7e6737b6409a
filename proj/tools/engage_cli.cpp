#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "engage/engage_c.h"

namespace {

int log_level() {
    const char* env = std::getenv("ENGAGE_LOG_LEVEL");
    if (env == nullptr) return 1; // warn
    const std::string v = env;
    if (v == "debug") return 3;
    if (v == "info") return 2;
    if (v == "warn") return 1;
    if (v == "error" || v == "quiet") return 0;
    return 1;
}

void log_info(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[engage] " << msg << "\n";
}

std::string read_all(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CLI::ValidationError("input", "cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CommonOptions {
    std::string config_path;
    std::string workdir;
    std::int64_t seed = -1;
    int threads = 0;
    std::string strategy;
    std::string task;
    std::string format;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Run config JSON file");
    cmd->add_option("--workdir", opts.workdir, "Working directory override");
    cmd->add_option("--seed", opts.seed, "Seed override");
    cmd->add_option("--threads", opts.threads, "Worker thread count override");
    cmd->add_option("--strategy", opts.strategy, "sequential, stacking, boosting or all")
        ->check(CLI::IsMember({"sequential", "stacking", "boosting", "all"}));
    cmd->add_option("--task", opts.task, "app, level or joint")
        ->check(CLI::IsMember({"app", "level", "joint"}));
    cmd->add_option("--format", opts.format, "Report format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

std::string effective_config(const CommonOptions& opts) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    if (!opts.config_path.empty()) {
        try {
            j = nlohmann::ordered_json::parse(read_all(opts.config_path));
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "engage: config is not valid JSON: " << e.what() << "\n";
            std::exit(ENGAGE_ERR_USAGE);
        }
    }
    if (!opts.workdir.empty()) j["workdir"] = opts.workdir;
    if (opts.seed >= 0) j["seed"] = static_cast<std::uint64_t>(opts.seed);
    if (opts.threads > 0) j["threads"] = opts.threads;
    if (!opts.strategy.empty()) j["strategy"] = opts.strategy;
    if (!opts.task.empty()) j["task"] = opts.task;
    if (!opts.format.empty()) j["format"] = opts.format;
    return j.dump();
}

int run_stage_command(const std::string& stage, const CommonOptions& opts) {
    engage_session* session = engage_open();
    if (session == nullptr) {
        std::cerr << "engage: out of memory\n";
        return ENGAGE_ERR_INTERNAL;
    }
    log_info("running stage " + stage);
    const int rc = engage_run_stage(session, stage.c_str(), effective_config(opts).c_str());
    if (rc != ENGAGE_OK) std::cerr << "engage: " << engage_last_error(session) << "\n";
    else log_info("stage " + stage + " done");
    engage_close(session);
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mobile app usage engagement toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(engage_version()));

    const std::vector<std::string> stages = {"generate", "ingest",   "analyze", "featurize",
                                             "train",    "evaluate", "report"};
    std::map<std::string, CommonOptions> stage_opts;
    for (const auto& stage : stages) {
        auto* cmd = app.add_subcommand(stage, "Run the " + stage + " stage");
        add_common(cmd, stage_opts[stage]);
    }

    std::string model_dir;
    std::string input_path = "-";
    auto* predict = app.add_subcommand("predict", "Score one instance against a saved model");
    predict->add_option("--model", model_dir, "Model directory (e.g. run/models/boosting)")
        ->required();
    predict->add_option("--input", input_path, "Instance JSON file, or - for stdin");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : ENGAGE_ERR_USAGE;
    }

    for (const auto& stage : stages)
        if (app.get_subcommand(stage)->parsed()) return run_stage_command(stage, stage_opts[stage]);

    // predict
    std::string snapshot;
    try {
        snapshot = read_all(input_path);
    } catch (const CLI::Error& e) {
        std::cerr << "engage: " << e.what() << "\n";
        return ENGAGE_ERR_USAGE;
    }
    engage_session* session = engage_open();
    if (session == nullptr) {
        std::cerr << "engage: out of memory\n";
        return ENGAGE_ERR_INTERNAL;
    }
    char* out = nullptr;
    const int rc = engage_predict_json(session, model_dir.c_str(), snapshot.c_str(), &out);
    if (rc == ENGAGE_OK) {
        std::cout << out << "\n";
        engage_free_string(out);
    } else {
        std::cerr << "engage: " << engage_last_error(session) << "\n";
    }
    engage_close(session);
    return rc;
}
