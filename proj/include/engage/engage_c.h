#ifndef ENGAGE_C_H
#define ENGAGE_C_H

#ifdef __cplusplus
extern "C" {
#endif

/* Opaque session handle. Not thread safe; use one per thread. */
typedef struct engage_session engage_session;

/* Error codes; they double as the CLI exit codes. */
enum {
    ENGAGE_OK = 0,
    ENGAGE_ERR_USAGE = 2,    /* bad arguments or config */
    ENGAGE_ERR_DATA = 3,     /* unreadable or inconsistent input data */
    ENGAGE_ERR_INTERNAL = 4  /* invariant violation, likely a bug */
};

engage_session* engage_open(void);
void engage_close(engage_session* session);

/* Message for the last failed call on this session; empty string if none.
 * The pointer stays valid until the next call on the session. */
const char* engage_last_error(const engage_session* session);

const char* engage_version(void);

/* Runs one pipeline stage (generate, ingest, analyze, featurize, train,
 * evaluate, report) driven by a JSON run config. */
int engage_run_stage(engage_session* session, const char* stage, const char* config_json);

/* Scores one serialized instance against a saved model directory. On success
 * *out_json receives a malloc'd JSON string; release it with
 * engage_free_string. */
int engage_predict_json(engage_session* session, const char* model_dir,
                        const char* snapshot_json, char** out_json);

void engage_free_string(char* s);

#ifdef __cplusplus
}
#endif

#endif /* ENGAGE_C_H */
