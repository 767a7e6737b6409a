#include "engage/engage_c.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "engage/errors.hpp"
#include "engage/pipeline.hpp"

struct engage_session {
    std::string last_error;
};

namespace {

constexpr const char* kVersion = "1.0.0";

template <typename Fn>
int run_guarded(engage_session* session, Fn&& fn) {
    if (session == nullptr) return ENGAGE_ERR_USAGE;
    session->last_error.clear();
    try {
        fn();
        return ENGAGE_OK;
    } catch (const engage::UsageError& e) {
        session->last_error = e.what();
        return ENGAGE_ERR_USAGE;
    } catch (const engage::DataError& e) {
        session->last_error = e.what();
        return ENGAGE_ERR_DATA;
    } catch (const std::exception& e) {
        session->last_error = e.what();
        return ENGAGE_ERR_INTERNAL;
    } catch (...) {
        session->last_error = "unknown error";
        return ENGAGE_ERR_INTERNAL;
    }
}

} // namespace

extern "C" {

engage_session* engage_open(void) {
    try {
        return new engage_session();
    } catch (...) {
        return nullptr;
    }
}

void engage_close(engage_session* session) { delete session; }

const char* engage_last_error(const engage_session* session) {
    return session == nullptr ? "" : session->last_error.c_str();
}

const char* engage_version(void) { return kVersion; }

int engage_run_stage(engage_session* session, const char* stage, const char* config_json) {
    return run_guarded(session, [&] {
        if (stage == nullptr || config_json == nullptr)
            throw engage::UsageError("stage and config_json must not be null");
        const auto config = engage::RunConfig::from_json(config_json);
        engage::run_stage(config, stage);
    });
}

int engage_predict_json(engage_session* session, const char* model_dir,
                        const char* snapshot_json, char** out_json) {
    return run_guarded(session, [&] {
        if (model_dir == nullptr || snapshot_json == nullptr || out_json == nullptr)
            throw engage::UsageError("model_dir, snapshot_json and out_json must not be null");
        const std::string result = engage::run_predict_json(model_dir, snapshot_json);
        char* buffer = static_cast<char*>(std::malloc(result.size() + 1));
        if (buffer == nullptr) throw std::bad_alloc();
        std::memcpy(buffer, result.c_str(), result.size() + 1);
        *out_json = buffer;
    });
}

void engage_free_string(char* s) { std::free(s); }

} // extern "C"
