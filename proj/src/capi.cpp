// Copyright 2026 The Parley Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "parley.h"

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "csv.hpp"
#include "domain.hpp"
#include "errors.hpp"
#include "gpr.hpp"
#include "harness.hpp"

namespace {

thread_local std::string g_last_error;

parley_status fail(parley_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs the body and maps the internal exception hierarchy onto status
// codes; PARLEY_OK clears the thread-local message.
template <typename F>
parley_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const parley::ConfigError& e) {
    return fail(PARLEY_ERROR_CONFIG, e.what());
  } catch (const parley::IoError& e) {
    return fail(PARLEY_ERROR_IO, e.what());
  } catch (const parley::ProtocolError& e) {
    return fail(PARLEY_ERROR_PROTOCOL, e.what());
  } catch (const parley::NumericError& e) {
    return fail(PARLEY_ERROR_NUMERIC, e.what());
  } catch (const parley::StateError& e) {
    return fail(PARLEY_ERROR_STATE, e.what());
  } catch (const parley::DomainError& e) {
    return fail(PARLEY_ERROR_DOMAIN, e.what());
  } catch (const std::exception& e) {
    return fail(PARLEY_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(PARLEY_ERROR_INTERNAL, "unknown error");
  }
}

parley_status require(bool ok, const char* message) {
  return ok ? PARLEY_OK : fail(PARLEY_ERROR_INVALID_ARGUMENT, message);
}

std::string g_default_config;  // lazily rendered, process lifetime

parley::harness::TournamentOptions to_internal(const parley_tournament_options& options) {
  parley::harness::TournamentOptions internal;
  internal.agent_a = options.agent_a ? options.agent_a : "mcts";
  internal.agent_b = options.agent_b ? options.agent_b : "rw";
  internal.sessions = options.sessions;
  internal.max_rounds = options.max_rounds;
  internal.seed = options.seed;
  internal.keep_transcripts = options.keep_transcripts != 0;
  if (options.dump_tree_dir) internal.dump_tree_dir = options.dump_tree_dir;
  return internal;
}

}  // namespace

struct parley_domain {
  std::shared_ptr<const parley::Domain> impl;
};

struct parley_profile {
  std::shared_ptr<const parley::PreferenceProfile> impl;
};

struct parley_tournament {
  parley::harness::TournamentResult result;
  std::shared_ptr<const parley::Domain> domain;
  std::shared_ptr<const parley::PreferenceProfile> profile1;
  std::shared_ptr<const parley::PreferenceProfile> profile2;
};

struct parley_kernel_table {
  std::vector<parley::gp::KernelEvalRow> rows;
};

extern "C" {

const char* parley_version(void) { return "0.1.0"; }

const char* parley_last_error(void) { return g_last_error.c_str(); }

const char* parley_default_config_json(void) {
  if (g_default_config.empty()) {
    g_default_config = parley::harness::default_config_json();
  }
  return g_default_config.c_str();
}

parley_status parley_domain_load(const char* path, parley_domain** out) {
  if (auto s = require(path && out, "parley_domain_load: null argument")) return s;
  return guarded([&] {
    *out = new parley_domain{parley::Domain::load(path)};
    return PARLEY_OK;
  });
}

parley_status parley_domain_parse(const char* json_text, parley_domain** out) {
  if (auto s = require(json_text && out, "parley_domain_parse: null argument")) return s;
  return guarded([&] {
    auto domain = std::make_shared<const parley::Domain>(parley::Domain::from_json(json_text));
    *out = new parley_domain{std::move(domain)};
    return PARLEY_OK;
  });
}

int32_t parley_domain_issue_count(const parley_domain* domain) {
  if (!domain) return 0;
  return static_cast<int32_t>(domain->impl->issue_count());
}

void parley_domain_free(parley_domain* domain) { delete domain; }

parley_status parley_profile_load(const parley_domain* domain, const char* path,
                                  parley_profile** out) {
  if (auto s = require(domain && path && out, "parley_profile_load: null argument")) return s;
  return guarded([&] {
    auto profile = std::make_shared<const parley::PreferenceProfile>(
        parley::PreferenceProfile::load(domain->impl, path));
    *out = new parley_profile{std::move(profile)};
    return PARLEY_OK;
  });
}

parley_status parley_profile_parse(const parley_domain* domain, const char* json_text,
                                   parley_profile** out) {
  if (auto s = require(domain && json_text && out, "parley_profile_parse: null argument")) {
    return s;
  }
  return guarded([&] {
    auto profile = std::make_shared<const parley::PreferenceProfile>(
        parley::PreferenceProfile::from_json(domain->impl, json_text));
    *out = new parley_profile{std::move(profile)};
    return PARLEY_OK;
  });
}

void parley_profile_free(parley_profile* profile) { delete profile; }

void parley_tournament_options_init(parley_tournament_options* options) {
  if (!options) return;
  const parley::harness::TournamentOptions defaults;
  options->agent_a = "mcts";
  options->agent_b = "rw";
  options->sessions = defaults.sessions;
  options->max_rounds = defaults.max_rounds;
  options->seed = defaults.seed;
  options->keep_transcripts = 0;
  options->dump_tree_dir = nullptr;
}

parley_status parley_tournament_run(const parley_domain* domain, const parley_profile* profile1,
                                    const parley_profile* profile2,
                                    const parley_tournament_options* options,
                                    parley_tournament** out) {
  if (auto s = require(domain && profile1 && profile2 && options && out,
                       "parley_tournament_run: null argument")) {
    return s;
  }
  return guarded([&] {
    auto handle = std::make_unique<parley_tournament>();
    handle->domain = domain->impl;
    handle->profile1 = profile1->impl;
    handle->profile2 = profile2->impl;
    handle->result = parley::harness::run_tournament(domain->impl, *profile1->impl,
                                                     *profile2->impl, to_internal(*options));
    *out = handle.release();
    return PARLEY_OK;
  });
}

void parley_tournament_free(parley_tournament* tournament) { delete tournament; }

parley_status parley_tournament_export(const parley_tournament* tournament, const char* out_dir,
                                       int32_t* warned) {
  if (auto s = require(tournament && out_dir, "parley_tournament_export: null argument")) {
    return s;
  }
  return guarded([&] {
    const auto warnings = parley::harness::export_result(tournament->result, out_dir);
    if (warned) *warned = warnings.empty() ? 0 : 1;
    if (!warnings.empty()) g_last_error = warnings.front();
    return PARLEY_OK;
  });
}

parley_status parley_tournament_write_transcripts(const parley_tournament* tournament,
                                                  const char* out_dir, int32_t* files_written) {
  if (auto s = require(tournament && out_dir,
                       "parley_tournament_write_transcripts: null argument")) {
    return s;
  }
  return guarded([&] {
    const int written = parley::harness::write_transcripts(
        tournament->result, *tournament->profile1, *tournament->profile2, out_dir);
    if (files_written) *files_written = written;
    return PARLEY_OK;
  });
}

int64_t parley_tournament_session_count(const parley_tournament* tournament) {
  if (!tournament) return 0;
  return static_cast<int64_t>(tournament->result.rows.size());
}

int64_t parley_tournament_failed_count(const parley_tournament* tournament) {
  if (!tournament) return 0;
  return tournament->result.failed_sessions;
}

int64_t parley_tournament_aggregate_count(const parley_tournament* tournament) {
  if (!tournament) return 0;
  return static_cast<int64_t>(tournament->result.aggregates.size());
}

parley_status parley_tournament_aggregate_at(const parley_tournament* tournament, int64_t index,
                                             char* side, const char** spec, int32_t* profile,
                                             int64_t* n, double* mean, double* stddev,
                                             double* agreement_rate) {
  if (auto s = require(tournament != nullptr, "parley_tournament_aggregate_at: null handle")) {
    return s;
  }
  const auto& aggregates = tournament->result.aggregates;
  if (index < 0 || index >= static_cast<int64_t>(aggregates.size())) {
    return fail(PARLEY_ERROR_INVALID_ARGUMENT, "parley_tournament_aggregate_at: index out of range");
  }
  const auto& row = aggregates[static_cast<std::size_t>(index)];
  if (side) *side = row.side;
  if (spec) *spec = row.spec.c_str();
  if (profile) *profile = row.profile;
  if (n) *n = row.n;
  if (mean) *mean = row.mean;
  if (stddev) *stddev = row.stddev;
  if (agreement_rate) *agreement_rate = row.agreement_rate;
  return PARLEY_OK;
}

parley_status parley_record_traces(const parley_domain* domain, const parley_profile* profile1,
                                   const parley_profile* profile2,
                                   const parley_tournament_options* options, char traced_side,
                                   const char* out_path, int64_t* traces_written) {
  if (auto s = require(domain && profile1 && profile2 && options && out_path,
                       "parley_record_traces: null argument")) {
    return s;
  }
  return guarded([&] {
    const auto traces = parley::harness::record_traces(
        domain->impl, *profile1->impl, *profile2->impl, to_internal(*options), traced_side);
    parley::harness::write_traces_csv(*domain->impl, traces, out_path);
    if (traces_written) *traces_written = static_cast<int64_t>(traces.size());
    return PARLEY_OK;
  });
}

parley_status parley_kernel_eval_run(const parley_domain* domain, const char* traces_csv_path,
                                     const char* kernels, double noise_variance,
                                     parley_kernel_table** out) {
  if (auto s = require(domain && traces_csv_path && out,
                       "parley_kernel_eval_run: null argument")) {
    return s;
  }
  return guarded([&] {
    std::vector<parley::gp::KernelConfig> configs;
    if (kernels == nullptr || *kernels == '\0') {
      for (auto kind : {parley::gp::KernelKind::Rbf, parley::gp::KernelKind::Rqf,
                        parley::gp::KernelKind::Matern52, parley::gp::KernelKind::Ess}) {
        configs.push_back({kind, {}, {}, {}});
      }
    } else {
      std::string_view rest = kernels;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (item.empty()) continue;
        configs.push_back({parley::gp::kernel_kind_from_string(item), {}, {}, {}});
      }
      if (configs.empty()) throw parley::ConfigError("kernel-eval: empty kernel list");
    }
    if (noise_variance < 0.0) throw parley::ConfigError("kernel-eval: noise must be >= 0");

    const auto traces = parley::gp::read_traces_csv(traces_csv_path, *domain->impl);
    auto table = std::make_unique<parley_kernel_table>();
    table->rows = parley::gp::evaluate_kernels(traces, *domain->impl, configs, noise_variance);
    table->rows.push_back(parley::gp::evaluate_repeat_last_baseline(traces, *domain->impl));
    *out = table.release();
    return PARLEY_OK;
  });
}

void parley_kernel_table_free(parley_kernel_table* table) { delete table; }

int64_t parley_kernel_table_row_count(const parley_kernel_table* table) {
  if (!table) return 0;
  return static_cast<int64_t>(table->rows.size());
}

parley_status parley_kernel_table_row(const parley_kernel_table* table, int64_t index,
                                      const char** kernel, double* avg_distance,
                                      int64_t* n_predictions, int64_t* n_skipped_traces) {
  if (auto s = require(table != nullptr, "parley_kernel_table_row: null handle")) return s;
  if (index < 0 || index >= static_cast<int64_t>(table->rows.size())) {
    return fail(PARLEY_ERROR_INVALID_ARGUMENT, "parley_kernel_table_row: index out of range");
  }
  const auto& row = table->rows[static_cast<std::size_t>(index)];
  if (kernel) *kernel = row.kernel.c_str();
  if (avg_distance) *avg_distance = row.avg_distance;
  if (n_predictions) *n_predictions = row.n_predictions;
  if (n_skipped_traces) *n_skipped_traces = row.n_skipped_traces;
  return PARLEY_OK;
}

parley_status parley_kernel_table_write(const parley_kernel_table* table, const char* out_path) {
  if (auto s = require(table && out_path, "parley_kernel_table_write: null argument")) return s;
  return guarded([&] {
    parley::csv::write_file(out_path, parley::gp::kernel_table_csv_lines(table->rows));
    return PARLEY_OK;
  });
}

}  // extern "C"
