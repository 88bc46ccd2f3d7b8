/* Copyright 2026 The Parley Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the negotiation simulator. All functions returning
 * parley_status leave a thread-local message readable through
 * parley_last_error() on failure. Handles are created by *_load / *_parse
 * / *_run functions and must be released with the matching *_free; all
 * other pointers returned by the library point into handle-owned storage
 * and stay valid until that handle is freed.
 */

#ifndef PARLEY_H_
#define PARLEY_H_

#include <stdint.h>

#if defined(_WIN32)
#define PARLEY_API __declspec(dllexport)
#else
#define PARLEY_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum parley_status {
  PARLEY_OK = 0,
  PARLEY_ERROR_INVALID_ARGUMENT = 1, /* null handle / out pointer misuse */
  PARLEY_ERROR_DOMAIN = 2,           /* invalid domain, profile, or bid */
  PARLEY_ERROR_PROTOCOL = 3,         /* illegal negotiation action */
  PARLEY_ERROR_NUMERIC = 4,          /* failed factorization or the like */
  PARLEY_ERROR_STATE = 5,            /* operation needs state that is absent */
  PARLEY_ERROR_CONFIG = 6,           /* bad option value or agent spec */
  PARLEY_ERROR_IO = 7,               /* unreadable/unwritable file */
  PARLEY_ERROR_INTERNAL = 8
} parley_status;

/* Library version as "major.minor.patch". */
PARLEY_API const char* parley_version(void);

/* Message for the most recent failure on this thread ("" if none). */
PARLEY_API const char* parley_last_error(void);

/* Every tunable default, as a JSON object (static storage). */
PARLEY_API const char* parley_default_config_json(void);

typedef struct parley_domain parley_domain;
typedef struct parley_profile parley_profile;
typedef struct parley_tournament parley_tournament;
typedef struct parley_kernel_table parley_kernel_table;

/* ---- Domain & preference profiles ---- */

PARLEY_API parley_status parley_domain_load(const char* path, parley_domain** out);
PARLEY_API parley_status parley_domain_parse(const char* json_text, parley_domain** out);
PARLEY_API int32_t parley_domain_issue_count(const parley_domain* domain);
PARLEY_API void parley_domain_free(parley_domain* domain);

/* A profile is validated against, and keeps a reference to, its domain;
 * the domain handle may be freed before the profile. */
PARLEY_API parley_status parley_profile_load(const parley_domain* domain, const char* path,
                                             parley_profile** out);
PARLEY_API parley_status parley_profile_parse(const parley_domain* domain, const char* json_text,
                                              parley_profile** out);
PARLEY_API void parley_profile_free(parley_profile* profile);

/* ---- Tournaments ---- */

typedef struct parley_tournament_options {
  const char* agent_a;       /* agent spec, e.g. "mcts:C=0.5,iters=1000" */
  const char* agent_b;       /* e.g. "rw", "tft", "ntft" */
  int32_t sessions;          /* per profile assignment */
  int32_t max_rounds;        /* total action cap per session */
  uint64_t seed;             /* master seed */
  int32_t keep_transcripts;  /* nonzero: retain transcripts for export */
  const char* dump_tree_dir; /* per-move search-tree CSVs; NULL to disable */
} parley_tournament_options;

/* Fills in the documented defaults (mcts vs rw, 20 sessions, 2000 rounds,
 * seed 42, no transcripts, no tree dumps). */
PARLEY_API void parley_tournament_options_init(parley_tournament_options* options);

PARLEY_API parley_status parley_tournament_run(const parley_domain* domain,
                                               const parley_profile* profile1,
                                               const parley_profile* profile2,
                                               const parley_tournament_options* options,
                                               parley_tournament** out);
PARLEY_API void parley_tournament_free(parley_tournament* tournament);

/* Writes sessions.csv, aggregates.csv, and plot_data.csv under out_dir.
 * A warning (e.g. "no session succeeded") is surfaced through
 * parley_last_error() even when the call returns PARLEY_OK; *warned is
 * set nonzero in that case (pass NULL to ignore). */
PARLEY_API parley_status parley_tournament_export(const parley_tournament* tournament,
                                                  const char* out_dir, int32_t* warned);

/* One CSV per successful session; needs keep_transcripts. */
PARLEY_API parley_status parley_tournament_write_transcripts(const parley_tournament* tournament,
                                                             const char* out_dir,
                                                             int32_t* files_written);

PARLEY_API int64_t parley_tournament_session_count(const parley_tournament* tournament);
PARLEY_API int64_t parley_tournament_failed_count(const parley_tournament* tournament);
PARLEY_API int64_t parley_tournament_aggregate_count(const parley_tournament* tournament);

/* Reads one aggregate row. side gets 'a' or 'b'; spec points into the
 * tournament handle. Any out pointer may be NULL. */
PARLEY_API parley_status parley_tournament_aggregate_at(const parley_tournament* tournament,
                                                        int64_t index, char* side,
                                                        const char** spec, int32_t* profile,
                                                        int64_t* n, double* mean, double* stddev,
                                                        double* agreement_rate);

/* ---- Opponent-trace recording (kernel-eval input) ---- */

/* Runs `sessions` sessions under the first profile assignment and writes
 * the traced side's ('a' or 'b') proposal sequences to a CSV with columns
 * session, round, issue values. */
PARLEY_API parley_status parley_record_traces(const parley_domain* domain,
                                              const parley_profile* profile1,
                                              const parley_profile* profile2,
                                              const parley_tournament_options* options,
                                              char traced_side, const char* out_path,
                                              int64_t* traces_written);

/* ---- Kernel evaluation ---- */

/* Walk-forward next-bid evaluation of GP kernels over recorded traces.
 * kernels is a comma list from {rbf,rqf,matern52,ess}, or NULL for all
 * four; the repeat-last-bid baseline row is always appended. */
PARLEY_API parley_status parley_kernel_eval_run(const parley_domain* domain,
                                                const char* traces_csv_path, const char* kernels,
                                                double noise_variance,
                                                parley_kernel_table** out);
PARLEY_API void parley_kernel_table_free(parley_kernel_table* table);
PARLEY_API int64_t parley_kernel_table_row_count(const parley_kernel_table* table);
PARLEY_API parley_status parley_kernel_table_row(const parley_kernel_table* table, int64_t index,
                                                 const char** kernel, double* avg_distance,
                                                 int64_t* n_predictions,
                                                 int64_t* n_skipped_traces);
PARLEY_API parley_status parley_kernel_table_write(const parley_kernel_table* table,
                                                   const char* out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PARLEY_H_ */
