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

// Command-line front end. Talks to the simulator exclusively through the
// C API in parley.h; exit codes: 0 success, 2 configuration error, 3 io
// error, 1 anything else.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "parley.h"

namespace {

int exit_code_for(parley_status status) {
  switch (status) {
    case PARLEY_OK:
      return 0;
    case PARLEY_ERROR_INVALID_ARGUMENT:
    case PARLEY_ERROR_DOMAIN:
    case PARLEY_ERROR_CONFIG:
      return 2;
    case PARLEY_ERROR_IO:
      return 3;
    default:
      return 1;
  }
}

int report(parley_status status) {
  std::fprintf(stderr, "error: %s\n", parley_last_error());
  return exit_code_for(status);
}

struct DomainGuard {
  parley_domain* ptr = nullptr;
  ~DomainGuard() { parley_domain_free(ptr); }
};
struct ProfileGuard {
  parley_profile* ptr = nullptr;
  ~ProfileGuard() { parley_profile_free(ptr); }
};
struct TournamentGuard {
  parley_tournament* ptr = nullptr;
  ~TournamentGuard() { parley_tournament_free(ptr); }
};
struct KernelTableGuard {
  parley_kernel_table* ptr = nullptr;
  ~KernelTableGuard() { parley_kernel_table_free(ptr); }
};

struct RunArgs {
  std::string domain;
  std::string profile1;
  std::string profile2;
  std::string agent_a = "mcts";
  std::string agent_b = "rw";
  int sessions = 20;
  int max_rounds = 2000;
  std::uint64_t seed = 42;
  std::string out;
  bool transcripts = false;
  std::string dump_tree_dir;
};

int load_inputs(const std::string& domain_path, const std::string& p1_path,
                const std::string& p2_path, DomainGuard& domain, ProfileGuard& p1,
                ProfileGuard& p2) {
  if (auto s = parley_domain_load(domain_path.c_str(), &domain.ptr)) return report(s);
  if (auto s = parley_profile_load(domain.ptr, p1_path.c_str(), &p1.ptr)) return report(s);
  if (auto s = parley_profile_load(domain.ptr, p2_path.c_str(), &p2.ptr)) return report(s);
  return 0;
}

int cmd_run(const RunArgs& args) {
  DomainGuard domain;
  ProfileGuard p1, p2;
  if (int rc = load_inputs(args.domain, args.profile1, args.profile2, domain, p1, p2)) return rc;

  parley_tournament_options options;
  parley_tournament_options_init(&options);
  options.agent_a = args.agent_a.c_str();
  options.agent_b = args.agent_b.c_str();
  options.sessions = args.sessions;
  options.max_rounds = args.max_rounds;
  options.seed = args.seed;
  options.keep_transcripts = args.transcripts ? 1 : 0;
  options.dump_tree_dir = args.dump_tree_dir.empty() ? nullptr : args.dump_tree_dir.c_str();

  TournamentGuard tournament;
  if (auto s = parley_tournament_run(domain.ptr, p1.ptr, p2.ptr, &options, &tournament.ptr)) {
    return report(s);
  }

  int32_t warned = 0;
  if (auto s = parley_tournament_export(tournament.ptr, args.out.c_str(), &warned)) {
    return report(s);
  }
  if (warned) std::fprintf(stderr, "warning: %s\n", parley_last_error());

  if (args.transcripts) {
    int32_t files = 0;
    const std::string dir = args.out + "/transcripts";
    if (auto s = parley_tournament_write_transcripts(tournament.ptr, dir.c_str(), &files)) {
      return report(s);
    }
    std::printf("transcripts: %d files under %s\n", files, dir.c_str());
  }

  std::printf("sessions: %" PRId64 " (failed: %" PRId64 ")\n",
              parley_tournament_session_count(tournament.ptr),
              parley_tournament_failed_count(tournament.ptr));
  const int64_t aggregates = parley_tournament_aggregate_count(tournament.ptr);
  std::printf("%-6s %-24s %-8s %-5s %-9s %-9s %s\n", "side", "agent", "profile", "n", "mean",
              "stddev", "agreement_rate");
  for (int64_t i = 0; i < aggregates; ++i) {
    char side = ' ';
    const char* spec = "";
    int32_t profile = 0;
    int64_t n = 0;
    double mean = 0, stddev = 0, rate = 0;
    if (auto s = parley_tournament_aggregate_at(tournament.ptr, i, &side, &spec, &profile, &n,
                                                &mean, &stddev, &rate)) {
      return report(s);
    }
    std::printf("%-6c %-24s %-8d %-5" PRId64 " %-9.4f %-9.4f %.4f\n", side, spec, profile, n,
                mean, stddev, rate);
  }
  std::printf("results written to %s\n", args.out.c_str());
  return 0;
}

struct TracesArgs {
  std::string domain;
  std::string profile1;
  std::string profile2;
  std::string agent_a = "tft";
  std::string agent_b = "tft";
  int sessions = 50;
  int max_rounds = 2000;
  std::uint64_t seed = 42;
  std::string trace_agent = "b";
  std::string out;
};

int cmd_traces(const TracesArgs& args) {
  DomainGuard domain;
  ProfileGuard p1, p2;
  if (int rc = load_inputs(args.domain, args.profile1, args.profile2, domain, p1, p2)) return rc;

  parley_tournament_options options;
  parley_tournament_options_init(&options);
  options.agent_a = args.agent_a.c_str();
  options.agent_b = args.agent_b.c_str();
  options.sessions = args.sessions;
  options.max_rounds = args.max_rounds;
  options.seed = args.seed;

  int64_t traces = 0;
  if (auto s = parley_record_traces(domain.ptr, p1.ptr, p2.ptr, &options, args.trace_agent[0],
                                    args.out.c_str(), &traces)) {
    return report(s);
  }
  std::printf("recorded %" PRId64 " traces to %s\n", traces, args.out.c_str());
  return 0;
}

struct KernelEvalArgs {
  std::string domain;
  std::string traces;
  std::string kernels;  // empty = all four
  double noise = 1e-4;
  std::string out;
};

int cmd_kernel_eval(const KernelEvalArgs& args) {
  DomainGuard domain;
  if (auto s = parley_domain_load(args.domain.c_str(), &domain.ptr)) return report(s);

  KernelTableGuard table;
  if (auto s = parley_kernel_eval_run(domain.ptr, args.traces.c_str(),
                                      args.kernels.empty() ? nullptr : args.kernels.c_str(),
                                      args.noise, &table.ptr)) {
    return report(s);
  }
  if (!args.out.empty()) {
    if (auto s = parley_kernel_table_write(table.ptr, args.out.c_str())) return report(s);
  }

  std::printf("%-12s %-14s %-14s %s\n", "kernel", "avg_distance", "n_predictions",
              "n_skipped_traces");
  const int64_t rows = parley_kernel_table_row_count(table.ptr);
  for (int64_t i = 0; i < rows; ++i) {
    const char* kernel = "";
    double distance = 0;
    int64_t predictions = 0, skipped = 0;
    if (auto s = parley_kernel_table_row(table.ptr, i, &kernel, &distance, &predictions,
                                         &skipped)) {
      return report(s);
    }
    std::printf("%-12s %-14.6f %-14" PRId64 " %" PRId64 "\n", kernel, distance, predictions,
                skipped);
  }
  if (!args.out.empty()) std::printf("table written to %s\n", args.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deadline-free bilateral negotiation simulator"};
  app.set_version_flag("--version", parley_version());
  bool print_config = false;
  app.add_flag("--print-config", print_config, "Print every tunable default as JSON and exit");
  app.require_subcommand(0, 1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a two-agent tournament");
  run_cmd->add_option("--domain", run.domain, "Domain JSON file")->required();
  run_cmd->add_option("--profile1", run.profile1, "Preference profile 1 JSON")->required();
  run_cmd->add_option("--profile2", run.profile2, "Preference profile 2 JSON")->required();
  run_cmd->add_option("--agent-a", run.agent_a, "Agent A spec (mcts|rw|tft|ntft[:k=v,...])");
  run_cmd->add_option("--agent-b", run.agent_b, "Agent B spec");
  run_cmd->add_option("--sessions", run.sessions, "Sessions per profile assignment");
  run_cmd->add_option("--max-rounds", run.max_rounds, "Action cap per session");
  run_cmd->add_option("--seed", run.seed, "Master seed");
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_flag("--transcripts", run.transcripts, "Also write one transcript CSV per session");
  run_cmd->add_option("--dump-tree", run.dump_tree_dir,
                      "Write per-move search-tree CSVs into this directory");

  TracesArgs traces;
  CLI::App* traces_cmd =
      app.add_subcommand("traces", "Record proposal traces for kernel evaluation");
  traces_cmd->add_option("--domain", traces.domain, "Domain JSON file")->required();
  traces_cmd->add_option("--profile1", traces.profile1, "Preference profile 1 JSON")->required();
  traces_cmd->add_option("--profile2", traces.profile2, "Preference profile 2 JSON")->required();
  traces_cmd->add_option("--agent-a", traces.agent_a, "Agent A spec");
  traces_cmd->add_option("--agent-b", traces.agent_b, "Agent B spec");
  traces_cmd->add_option("--sessions", traces.sessions, "Number of sessions");
  traces_cmd->add_option("--max-rounds", traces.max_rounds, "Action cap per session");
  traces_cmd->add_option("--seed", traces.seed, "Master seed");
  traces_cmd->add_option("--trace-agent", traces.trace_agent, "Side whose proposals are recorded")
      ->check(CLI::IsMember({"a", "b"}));
  traces_cmd->add_option("--out", traces.out, "Output traces CSV path")->required();

  KernelEvalArgs kernel_eval;
  CLI::App* kernel_cmd =
      app.add_subcommand("kernel-eval", "Walk-forward kernel comparison over recorded traces");
  kernel_cmd->add_option("--domain", kernel_eval.domain, "Domain JSON file")->required();
  kernel_cmd->add_option("--traces", kernel_eval.traces, "Input traces CSV")->required();
  kernel_cmd->add_option("--kernels", kernel_eval.kernels,
                         "Comma list from rbf,rqf,matern52,ess (default: all)");
  kernel_cmd->add_option("--noise", kernel_eval.noise, "GP noise variance");
  kernel_cmd->add_option("--out", kernel_eval.out, "Output table CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // help/version exit 0; any parse failure is a config error
  }

  if (print_config) {
    std::fputs(parley_default_config_json(), stdout);
    return 0;
  }
  if (run_cmd->parsed()) return cmd_run(run);
  if (traces_cmd->parsed()) return cmd_traces(traces);
  if (kernel_cmd->parsed()) return cmd_kernel_eval(kernel_eval);

  std::fputs(app.help().c_str(), stderr);
  return 2;
}
