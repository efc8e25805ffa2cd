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

#ifndef ERASER_CLI_HPP
#define ERASER_CLI_HPP

#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "eraser/errors.hpp"
#include "eraser/estimate.hpp"
#include "eraser/oracle.hpp"
#include "eraser/protocol.hpp"
#include "eraser/validate.hpp"

namespace eraser::cli {

// Exit-code contract: 0 ok, 1 validation failure, 2 config error,
// 3 parameter violation, 4 unidentifiable estimation setup.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitParameterViolation = 3;
inline constexpr int kExitUnidentifiable = 4;

enum class OutputFormat { Csv, Jsonl };

/// Run description: protocol parameters plus sweep axes and output
/// routing. Flat key=value config file; CLI flags override.
struct RunConfig {
  double k = 1.0;
  double omega = 0.0;
  double phi2 = 0.0;
  Index mode_dim = 2;
  std::vector<double> phi1_list = [] {
    std::vector<double> v;
    for (int i = 0; i < 5; ++i)
      v.push_back(2.0 * std::numbers::pi * i / 5.0);
    return v;
  }();
  std::vector<double> tau_list = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  std::vector<double> kc_over_k_list = {0.0, 0.5, 1.0};
  std::string scheme_selector = "both";  // anti | sym | both
  std::uint64_t shots = 0;               // 0 = analytic only
  std::uint64_t seed = 0;
  std::string out_path;                  // empty = stdout
  OutputFormat format = OutputFormat::Csv;
  int jobs = 1;
  FitMethod fit_method = FitMethod::XiFit;
  ValidateOptions validate;

  std::vector<Scheme> schemes() const {
    if (scheme_selector == "anti") return {Scheme::AntisymmetricAbsorber};
    if (scheme_selector == "sym") return {Scheme::SymmetricAbsorber};
    if (scheme_selector == "both")
      return {Scheme::AntisymmetricAbsorber, Scheme::SymmetricAbsorber};
    throw ConfigError("scheme must be anti|sym|both, got '" + scheme_selector +
                      "'");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

inline double parse_double(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const std::string t = trim(text);
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw ConfigError(where + ": expected a number, got '" + t + "'");
  return v;
}

inline std::uint64_t parse_u64(const std::string& text,
                               const std::string& where) {
  const std::string t = trim(text);
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a nonnegative integer, got '" + t +
                      "'");
  }
}

inline std::vector<double> parse_list(const std::string& text,
                                      const std::string& where) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) values.push_back(parse_double(item, where));
  return values;
}

inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Applies one `key = value` assignment; shared by the file parser and
/// command-line overrides.
inline void apply_setting(RunConfig& config, const std::string& key,
                          const std::string& value, const std::string& where) {
  using detail::parse_double;
  using detail::parse_list;
  using detail::parse_u64;
  if (key == "k")
    config.k = parse_double(value, where);
  else if (key == "omega")
    config.omega = parse_double(value, where);
  else if (key == "phi2")
    config.phi2 = parse_double(value, where);
  else if (key == "mode_dim")
    config.mode_dim = static_cast<Index>(parse_u64(value, where));
  else if (key == "phi1")
    config.phi1_list = parse_list(value, where);
  else if (key == "tau")
    config.tau_list = parse_list(value, where);
  else if (key == "kc_over_k")
    config.kc_over_k_list = parse_list(value, where);
  else if (key == "scheme")
    config.scheme_selector = detail::trim(value);
  else if (key == "shots")
    config.shots = parse_u64(value, where);
  else if (key == "seed")
    config.seed = parse_u64(value, where);
  else if (key == "out")
    config.out_path = detail::trim(value);
  else if (key == "format") {
    const std::string f = detail::trim(value);
    if (f == "csv")
      config.format = OutputFormat::Csv;
    else if (f == "jsonl")
      config.format = OutputFormat::Jsonl;
    else
      throw ConfigError(where + ": format must be csv|jsonl");
  } else if (key == "jobs")
    config.jobs = static_cast<int>(parse_u64(value, where));
  else if (key == "fit_method") {
    const std::string m = detail::trim(value);
    if (m == "xi")
      config.fit_method = FitMethod::XiFit;
    else if (m == "joint")
      config.fit_method = FitMethod::JointLsq;
    else
      throw ConfigError(where + ": fit_method must be xi|joint");
  } else if (key == "validate_draws")
    config.validate.draws = static_cast<int>(parse_u64(value, where));
  else if (key == "rk4_steps")
    config.validate.rk4_steps = static_cast<int>(parse_u64(value, where));
  else if (key.rfind("tol_", 0) == 0)
    config.validate.tolerance_overrides[key.substr(4)] =
        parse_double(value, where);
  else
    throw ConfigError(where + ": unknown key '" + key + "'");
}

/// Flat key=value file; '#' starts a comment.
inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  RunConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = detail::trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    const std::string where = path + ":" + std::to_string(line_no);
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value'");
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    apply_setting(config, key, value, where + " [" + key + "]");
  }
  return config;
}

/// Runs body(0..n-1) on a small worker pool. Results must be written to
/// per-index slots; completion order is irrelevant.
inline void parallel_for(std::size_t n, int jobs,
                         const std::function<void(std::size_t)>& body) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const int workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(jobs), n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace detail {

struct SweepRow {
  double phi1, tau, k, kc;
  Scheme scheme;
  JointProbabilities sim, ref;
  double max_diff;
};

inline constexpr const char* kCsvHeader =
    "phi1,tau,k,kc,scheme,p_ee,p_eg,p_ge,p_gg,"
    "oracle_p_ee,oracle_p_eg,oracle_p_ge,oracle_p_gg,max_abs_diff";

inline std::string to_csv(const SweepRow& row) {
  std::string out;
  out += fmt17(row.phi1) + "," + fmt17(row.tau) + "," + fmt17(row.k) + "," +
         fmt17(row.kc) + "," + to_string(row.scheme);
  for (int o = 0; o < 4; ++o) out += "," + fmt17(row.sim[o]);
  for (int o = 0; o < 4; ++o) out += "," + fmt17(row.ref[o]);
  out += "," + fmt17(row.max_diff);
  return out;
}

inline nlohmann::json to_json(const SweepRow& row) {
  return nlohmann::json{{"phi1", row.phi1},
                        {"tau", row.tau},
                        {"k", row.k},
                        {"kc", row.kc},
                        {"scheme", to_string(row.scheme)},
                        {"p_ee", row.sim.p_ee},
                        {"p_eg", row.sim.p_eg},
                        {"p_ge", row.sim.p_ge},
                        {"p_gg", row.sim.p_gg},
                        {"oracle_p_ee", row.ref.p_ee},
                        {"oracle_p_eg", row.ref.p_eg},
                        {"oracle_p_ge", row.ref.p_ge},
                        {"oracle_p_gg", row.ref.p_gg},
                        {"max_abs_diff", row.max_diff}};
}

/// Opens config.out_path for writing, or falls back to `fallback`.
class OutputStream {
 public:
  OutputStream(const std::string& path, std::ostream& fallback)
      : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

inline void require_sweep_axes(const RunConfig& config) {
  if (config.phi1_list.empty() || config.tau_list.empty() ||
      config.kc_over_k_list.empty())
    throw ConfigError("empty sweep list (phi1, tau and kc_over_k must each "
                      "have at least one value)");
  config.schemes();  // validates the selector
}

}  // namespace detail

/// `simulate`: gate-level and closed-form probabilities for every grid
/// point, one row each, in deterministic grid order.
inline int cmd_simulate(const RunConfig& config,
                        std::ostream& out = std::cout,
                        std::ostream& diag = std::cerr) {
  try {
    detail::require_sweep_axes(config);
    const std::vector<Scheme> schemes = config.schemes();

    struct Cell {
      double phi1, tau, kc_over_k;
      Scheme scheme;
    };
    std::vector<Cell> cells;
    for (const double phi1 : config.phi1_list)
      for (const double tau : config.tau_list)
        for (const double kc : config.kc_over_k_list)
          for (const Scheme scheme : schemes)
            cells.push_back({phi1, tau, kc, scheme});

    // Validate parameters once up front so a bad config fails before any
    // work is dispatched.
    for (const Cell& cell : cells) {
      SystemParams params{config.omega, config.k, cell.kc_over_k * config.k,
                          config.mode_dim};
      ProtocolConfig pc{cell.phi1, config.phi2, cell.tau, cell.scheme, params};
      pc.validate();
    }

    std::vector<detail::SweepRow> rows(cells.size());
    parallel_for(cells.size(), config.jobs, [&](std::size_t i) {
      const Cell& cell = cells[i];
      SystemParams params{config.omega, config.k, cell.kc_over_k * config.k,
                          config.mode_dim};
      ProtocolConfig pc{cell.phi1, config.phi2, cell.tau, cell.scheme, params};
      detail::SweepRow& row = rows[i];
      row.phi1 = cell.phi1;
      row.tau = cell.tau;
      row.k = config.k;
      row.kc = params.k_c;
      row.scheme = cell.scheme;
      row.sim = joint_probabilities(pc);
      row.ref = oracle::probabilities(cell.scheme, cell.phi1, params, cell.tau);
      row.max_diff = max_probability_diff(row.sim, row.ref);
    });

    detail::OutputStream sink(config.out_path, out);
    if (config.format == OutputFormat::Csv) {
      sink.get() << detail::kCsvHeader << '\n';
      for (const auto& row : rows) sink.get() << detail::to_csv(row) << '\n';
    } else {
      for (const auto& row : rows)
        sink.get() << detail::to_json(row) << '\n';
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    diag << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const UnidentifiableError& e) {
    diag << "unidentifiable: " << e.what() << '\n';
    return kExitUnidentifiable;
  } catch (const Error& e) {
    diag << "parameter violation: " << e.what() << '\n';
    return kExitParameterViolation;
  }
}

/// `validate`: full invariant suite; JSON summary with the worst observed
/// deviation per check. Exit 0 iff everything passed.
inline int cmd_validate(const RunConfig& config,
                        std::ostream& out = std::cout,
                        std::ostream& diag = std::cerr) {
  try {
    // Parameter gate: the sweep axes must describe a physical model even
    // though the checks use their own pinned grids.
    detail::require_sweep_axes(config);
    for (const double kc : config.kc_over_k_list)
      SystemParams{config.omega, config.k, kc * config.k, config.mode_dim}
          .validate();

    const std::vector<CheckResult> results = run_validation(config.validate);
    bool all_pass = true;
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult& r : results) {
      all_pass = all_pass && r.pass;
      checks.push_back({{"name", r.name},
                        {"tolerance", r.tolerance},
                        {"worst", r.worst},
                        {"pass", r.pass}});
    }
    nlohmann::json summary{{"checks", checks}, {"all_pass", all_pass}};
    detail::OutputStream sink(config.out_path, out);
    sink.get() << summary.dump(2) << '\n';
    return all_pass ? kExitOk : kExitValidationFailure;
  } catch (const ConfigError& e) {
    diag << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    diag << "parameter violation: " << e.what() << '\n';
    return kExitParameterViolation;
  }
}

inline std::uint64_t default_estimate_shots() { return 100000; }

/// `estimate`: sample records for both schemes over the tau grid at the
/// first phi1 and first kc_over_k, fit k_c, write the records (JSONL, to
/// --out) and the result JSON (to `result_out`).
inline int cmd_estimate(const RunConfig& config,
                        std::ostream& result_out = std::cout,
                        std::ostream& diag = std::cerr) {
  try {
    if (config.phi1_list.empty() || config.kc_over_k_list.empty() ||
        config.tau_list.empty())
      throw ConfigError("estimate: phi1, tau and kc_over_k must be nonempty");

    const double phi1 = config.phi1_list.front();
    const std::uint64_t shots =
        config.shots == 0 ? default_estimate_shots() : config.shots;
    SystemParams params{config.omega, config.k,
                        config.kc_over_k_list.front() * config.k,
                        config.mode_dim};
    params.validate();

    std::vector<double> taus = config.tau_list;
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
    if (taus.size() < 3)
      throw UnidentifiableError("estimate: need >= 3 distinct tau values");
    if (std::abs(std::cos(phi1)) < 1e-9)
      throw UnidentifiableError("estimate: cos(phi1) = 0, xi carries no signal");

    constexpr Scheme kSchemes[] = {Scheme::AntisymmetricAbsorber,
                                   Scheme::SymmetricAbsorber};
    std::vector<ExperimentRecord> records(2 * taus.size());
    parallel_for(records.size(), config.jobs, [&](std::size_t cell) {
      const double tau = taus[cell / 2];
      const Scheme scheme = kSchemes[cell % 2];
      ProtocolConfig pc{phi1, config.phi2, tau, scheme, params};
      const JointProbabilities probs = joint_probabilities(pc);
      records[cell] = sample_record(probs, scheme, phi1, tau, shots,
                                    derive_seed(config.seed, cell));
    });

    const EstimationResult fit =
        fit_kc(records, config.k, phi1, config.fit_method);

    detail::OutputStream sink(config.out_path, result_out);
    write_records(sink.get(), records);

    nlohmann::json result{{"kc_hat", fit.kc_hat},
                          {"stderr", fit.kc_stderr},
                          {"k_hat", fit.k_hat},
                          {"residual", fit.residual},
                          {"method", to_string(fit.method)},
                          {"n_records", fit.n_records},
                          {"at_boundary", fit.at_boundary},
                          {"shots", shots},
                          {"seed", config.seed}};
    result_out << result.dump() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    diag << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const UnidentifiableError& e) {
    diag << "unidentifiable: " << e.what() << '\n';
    return kExitUnidentifiable;
  } catch (const Error& e) {
    diag << "parameter violation: " << e.what() << '\n';
    return kExitParameterViolation;
  }
}

}  // namespace eraser::cli

#endif  // ERASER_CLI_HPP
