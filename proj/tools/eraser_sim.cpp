// Copyright 2026 The eraser-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eraser/cli.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::string scheme;
  int jobs = 0;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--config", flags->config_path,
                  "flat key=value configuration file");
  cmd->add_option("--out", flags->out_path, "output file path");
  cmd->add_option("--format", flags->format, "csv|jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--jobs", flags->jobs, "worker pool size");
  cmd->add_option("--seed", flags->seed, "master PRNG seed");
  cmd->add_option("--shots", flags->shots, "shots per grid cell");
  cmd->add_option("--scheme", flags->scheme, "anti|sym|both")
      ->check(CLI::IsMember({"anti", "sym", "both"}));
}

// Loads the config file (when given) and applies flag overrides.
int build_config(const CLI::App* cmd, const CommonFlags& flags,
                 eraser::cli::RunConfig* config) {
  try {
    if (cmd->count("--config"))
      *config = eraser::cli::parse_config_file(flags.config_path);
    if (cmd->count("--out")) config->out_path = flags.out_path;
    if (cmd->count("--format"))
      config->format = flags.format == "csv"
                           ? eraser::cli::OutputFormat::Csv
                           : eraser::cli::OutputFormat::Jsonl;
    if (cmd->count("--jobs")) config->jobs = flags.jobs;
    if (cmd->count("--seed")) config->seed = flags.seed;
    if (cmd->count("--shots")) config->shots = flags.shots;
    if (cmd->count("--scheme")) config->scheme_selector = flags.scheme;
  } catch (const eraser::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return eraser::cli::kExitConfigError;
  }
  return eraser::cli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Two-cavity quantum-erasure simulator: Lindblad bath with cross decay, "
      "pulse-level protocol, and cross-decay-rate estimation"};
  app.require_subcommand(1);

  CommonFlags simulate_flags, validate_flags, estimate_flags;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "sweep the grid; emit simulator vs closed-form rows");
  add_common_flags(simulate, &simulate_flags);
  CLI::App* validate = app.add_subcommand(
      "validate", "run the invariant suite; emit a JSON summary");
  add_common_flags(validate, &validate_flags);
  CLI::App* estimate = app.add_subcommand(
      "estimate", "sample records over the tau grid and fit k_c");
  add_common_flags(estimate, &estimate_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? eraser::cli::kExitOk
                            : eraser::cli::kExitConfigError;
  }

  eraser::cli::RunConfig config;
  if (simulate->parsed()) {
    if (int rc = build_config(simulate, simulate_flags, &config)) return rc;
    return eraser::cli::cmd_simulate(config);
  }
  if (validate->parsed()) {
    if (int rc = build_config(validate, validate_flags, &config)) return rc;
    return eraser::cli::cmd_validate(config);
  }
  if (int rc = build_config(estimate, estimate_flags, &config)) return rc;
  return eraser::cli::cmd_estimate(config);
}
