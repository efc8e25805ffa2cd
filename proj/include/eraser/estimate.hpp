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

#ifndef ERASER_ESTIMATE_HPP
#define ERASER_ESTIMATE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "eraser/errors.hpp"
#include "eraser/oracle.hpp"
#include "eraser/outcomes.hpp"
#include "eraser/rng.hpp"

namespace eraser {

/// Measurement counts of one (scheme, phi1, tau) cell.
struct ExperimentRecord {
  Scheme scheme = Scheme::AntisymmetricAbsorber;
  double phi1 = 0.0;
  double tau = 0.0;
  std::uint64_t shots = 0;
  std::array<std::uint64_t, 4> counts{};  // indexed by Outcome
  std::uint64_t seed = 0;

  std::uint64_t total_counts() const {
    return counts[0] + counts[1] + counts[2] + counts[3];
  }
};

enum class FitMethod { XiFit, JointLsq };

inline std::string to_string(FitMethod m) {
  return m == FitMethod::XiFit ? "xi_fit" : "joint_lsq";
}

struct EstimationResult {
  double kc_hat = 0.0;
  double kc_stderr = 0.0;
  double k_hat = 0.0;     // k_known under XiFit, fitted under JointLsq
  double residual = 0.0;  // weighted sum of squares at the minimum
  FitMethod method = FitMethod::XiFit;
  std::size_t n_records = 0;
  bool at_boundary = false;  // estimate pinned at a search-box edge
};

/// Multinomial draw over the four outcomes by inverse CDF on the pinned
/// uniform stream. Identical (seed, inputs) give identical counts on
/// every platform.
inline ExperimentRecord sample_record(const JointProbabilities& probs,
                                      Scheme scheme, double phi1, double tau,
                                      std::uint64_t shots,
                                      std::uint64_t seed) {
  if (shots < 1) throw DomainError("sample_record: shots must be >= 1");
  if (!probs.valid(1e-9))
    throw DomainError("sample_record: invalid joint probabilities");

  const double c0 = std::max(0.0, probs.p_ee);
  const double c1 = c0 + std::max(0.0, probs.p_eg);
  const double c2 = c1 + std::max(0.0, probs.p_ge);

  ExperimentRecord rec{scheme, phi1, tau, shots, {0, 0, 0, 0}, seed};
  DeterministicRng rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform();
    if (u < c0)
      ++rec.counts[kEE];
    else if (u < c1)
      ++rec.counts[kEG];
    else if (u < c2)
      ++rec.counts[kGE];
    else
      ++rec.counts[kGG];
  }
  return rec;
}

struct XiEstimate {
  double value = 0.0;
  double sigma = 0.0;
};

/// Signed frequency combination of one record:
/// s = (n_ge - n_gg - n_ee + n_eg) / shots. Since the coefficients are
/// +-1 and the frequencies sum to 1, the multinomial variance reduces to
/// Var(s) = (1 - s^2) / shots (plug-in estimate).
inline XiEstimate signed_frequency_sum(const ExperimentRecord& rec) {
  if (rec.shots == 0 || rec.total_counts() != rec.shots)
    throw DomainError("record counts do not sum to shots");
  const double n = static_cast<double>(rec.shots);
  const double s =
      (static_cast<double>(rec.counts[kGE]) - rec.counts[kGG] -
       rec.counts[kEE] + rec.counts[kEG]) /
      n;
  return {s, std::sqrt(std::max(0.0, 1.0 - s * s) / n)};
}

/// Empirical plug-in of the eight frequencies from one antisymmetric and
/// one symmetric record at the same (phi1, tau).
inline XiEstimate xi_statistic(const ExperimentRecord& rec1,
                               const ExperimentRecord& rec2) {
  if (rec1.scheme != Scheme::AntisymmetricAbsorber ||
      rec2.scheme != Scheme::SymmetricAbsorber)
    throw PairingError("xi_statistic: need (antisymmetric, symmetric) records");
  if (rec1.phi1 != rec2.phi1 || rec1.tau != rec2.tau)
    throw PairingError("xi_statistic: records disagree on (phi1, tau)");
  const XiEstimate s1 = signed_frequency_sum(rec1);
  const XiEstimate s2 = signed_frequency_sum(rec2);
  return {s1.value + s2.value,
          std::sqrt(s1.sigma * s1.sigma + s2.sigma * s2.sigma)};
}

/// One point of the xi(tau) curve entering the fit.
struct XiPoint {
  double tau = 0.0;
  double xi_hat = 0.0;
  double sigma = 0.0;
};

namespace detail {

/// 64-point grid scan over [lo, hi] followed by golden-section
/// refinement of the bracketing interval down to width `tol`.
inline double grid_then_golden(const std::function<double(double)>& f,
                               double lo, double hi, double tol) {
  constexpr int kGridPoints = 64;
  double best_x = lo, best_f = f(lo);
  for (int i = 1; i < kGridPoints; ++i) {
    const double x = lo + (hi - lo) * i / (kGridPoints - 1);
    const double fx = f(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  const double step = (hi - lo) / (kGridPoints - 1);
  double a = std::max(lo, best_x - step);
  double b = std::min(hi, best_x + step);

  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return (a + b) / 2.0;
}

/// Curvature-based standard error: Var(x) ~ 2 / S''(x) for a weighted
/// least-squares objective S. Central difference; the model extends
/// smoothly past the box edge so the stencil is always usable.
inline double curvature_stderr(const std::function<double(double)>& objective,
                               double x, double h) {
  const double second =
      (objective(x + h) - 2.0 * objective(x) + objective(x - h)) / (h * h);
  if (!(second > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(2.0 / second);
}

}  // namespace detail

/// Weighted least squares of the xi(tau) model over k_c in [0, k_known].
inline EstimationResult fit_kc_from_xi(std::span<const XiPoint> points,
                                       double k_known, double phi1) {
  if (!(k_known > 0.0)) throw DomainError("fit_kc: k_known must be > 0");
  if (std::abs(std::cos(phi1)) < 1e-9)
    throw UnidentifiableError("fit_kc: cos(phi1) = 0, xi carries no signal");
  if (points.size() < 3)
    throw UnidentifiableError("fit_kc: need >= 3 distinct tau values");
  // tau = 0 cells at full fringe visibility have zero variance and zero
  // information (xi(., 0) = 0 identically); they drop out of the fit.
  std::vector<XiPoint> informative;
  for (const XiPoint& p : points) {
    if (p.tau == 0.0 && p.sigma == 0.0) continue;
    if (!(p.sigma > 0.0))
      throw DomainError("fit_kc: nonpositive stderr on a xi point");
    if (p.tau > 0.0) informative.push_back(p);
  }
  if (informative.empty())
    throw UnidentifiableError("fit_kc: all tau = 0, xi is identically zero");

  const auto model = [&](double kc, double tau) {
    return std::exp(-2.0 * (k_known - kc) * tau) *
           (1.0 - std::exp(-4.0 * kc * tau)) * std::cos(phi1);
  };
  const auto objective = [&](double kc) {
    double s = 0.0;
    for (const XiPoint& p : informative) {
      const double r = (p.xi_hat - model(kc, p.tau)) / p.sigma;
      s += r * r;
    }
    return s;
  };

  const double tol = 1e-6 * k_known;
  const double kc_hat = detail::grid_then_golden(objective, 0.0, k_known, tol);

  EstimationResult result;
  result.kc_hat = kc_hat;
  result.kc_stderr =
      detail::curvature_stderr(objective, kc_hat, 1e-4 * k_known);
  result.k_hat = k_known;
  result.residual = objective(kc_hat);
  result.method = FitMethod::XiFit;
  result.n_records = points.size();
  result.at_boundary = kc_hat <= 2.0 * tol || kc_hat >= k_known - 2.0 * tol;
  return result;
}

namespace detail {

struct RecordPair {
  const ExperimentRecord* anti = nullptr;
  const ExperimentRecord* sym = nullptr;
};

inline std::map<double, RecordPair> pair_records(
    std::span<const ExperimentRecord> records, double phi1) {
  std::map<double, RecordPair> pairs;
  for (const ExperimentRecord& rec : records) {
    if (rec.phi1 != phi1)
      throw PairingError("fit_kc: record phi1 differs from the fit phi1");
    RecordPair& pair = pairs[rec.tau];
    const ExperimentRecord*& slot =
        rec.scheme == Scheme::AntisymmetricAbsorber ? pair.anti : pair.sym;
    if (slot != nullptr)
      throw PairingError("fit_kc: duplicate record for one (scheme, tau)");
    slot = &rec;
  }
  for (const auto& [tau, pair] : pairs)
    if (pair.anti == nullptr || pair.sym == nullptr)
      throw PairingError("fit_kc: unpaired record at tau = " +
                         std::to_string(tau));
  return pairs;
}

/// Fringe difference of one record with its multinomial stderr:
/// D = c . p_hat for c = (-1, 0, +1, 0) on (ee, eg, ge, gg) in scheme 1
/// and c = (+1, 0, -1, 0) in scheme 2; Var = (p_ee + p_ge - D^2)/shots.
inline XiEstimate fringe_difference(const ExperimentRecord& rec) {
  if (rec.shots == 0 || rec.total_counts() != rec.shots)
    throw DomainError("record counts do not sum to shots");
  const double n = static_cast<double>(rec.shots);
  const double pee = static_cast<double>(rec.counts[kEE]) / n;
  const double pge = static_cast<double>(rec.counts[kGE]) / n;
  double d = pge - pee;
  if (rec.scheme == Scheme::SymmetricAbsorber) d = -d;
  const double var = std::max(0.0, pee + pge - d * d) / n;
  // Guard against a degenerate zero-variance cell (both counts zero).
  return {d, std::sqrt(std::max(var, 0.25 / (n * n)))};
}

/// Fits the envelope rate r in D(tau) = (cos(phi1)/2) e^{-r tau} by the
/// same grid + golden-section search; returns (r_hat, stderr, residual).
struct RateFit {
  double rate = 0.0;
  double sigma = 0.0;
  double residual = 0.0;
  bool at_boundary = false;
};

inline RateFit fit_envelope_rate(const std::vector<XiEstimate>& diffs,
                                 const std::vector<double>& taus, double phi1,
                                 double rate_hi) {
  const double amplitude = std::cos(phi1) / 2.0;
  const auto objective = [&](double rate) {
    double s = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
      const double r =
          (diffs[i].value - amplitude * std::exp(-rate * taus[i])) /
          diffs[i].sigma;
      s += r * r;
    }
    return s;
  };
  const double tol = 1e-6 * rate_hi;
  RateFit fit;
  fit.rate = grid_then_golden(objective, 0.0, rate_hi, tol);
  fit.sigma = curvature_stderr(objective, fit.rate, 1e-4 * rate_hi);
  fit.residual = objective(fit.rate);
  fit.at_boundary =
      fit.rate <= 2.0 * tol || fit.rate >= rate_hi - 2.0 * tol;
  return fit;
}

}  // namespace detail

/// Estimates k_c from paired records over a tau grid.
///
/// XI_FIT (default): weighted least squares of the closed-form xi(tau)
/// against the per-tau xi statistics, k treated as known.
///
/// JOINT_LSQ: fits the two fringe envelopes independently in the
/// decoupled rates r1 = 2(k - k_c), r2 = 2(k + k_c) (search box
/// [0, 8 k_known] each), then k_hat = (r1 + r2)/4 and
/// kc_hat = (r2 - r1)/4; k_known only sets the search scale.
inline EstimationResult fit_kc(std::span<const ExperimentRecord> records,
                               double k_known, double phi1,
                               FitMethod method = FitMethod::XiFit) {
  if (!(k_known > 0.0)) throw DomainError("fit_kc: k_known must be > 0");
  if (std::abs(std::cos(phi1)) < 1e-9)
    throw UnidentifiableError("fit_kc: cos(phi1) = 0, fringes carry no signal");
  const auto pairs = detail::pair_records(records, phi1);
  if (pairs.size() < 3)
    throw UnidentifiableError("fit_kc: need >= 3 distinct tau values");

  if (method == FitMethod::XiFit) {
    std::vector<XiPoint> points;
    points.reserve(pairs.size());
    for (const auto& [tau, pair] : pairs) {
      const XiEstimate est = xi_statistic(*pair.anti, *pair.sym);
      points.push_back({tau, est.value, est.sigma});
    }
    EstimationResult result = fit_kc_from_xi(points, k_known, phi1);
    result.n_records = records.size();
    return result;
  }

  // JOINT_LSQ: the scheme-1 envelope depends only on r1, scheme-2 only
  // on r2, so the joint least squares decouples into two 1-d fits.
  std::vector<XiEstimate> d1, d2;
  std::vector<double> taus;
  bool any_positive_tau = false;
  for (const auto& [tau, pair] : pairs) {
    d1.push_back(detail::fringe_difference(*pair.anti));
    d2.push_back(detail::fringe_difference(*pair.sym));
    taus.push_back(tau);
    if (tau > 0.0) any_positive_tau = true;
  }
  if (!any_positive_tau)
    throw UnidentifiableError("fit_kc: all tau = 0, envelopes are flat");

  const double rate_hi = 8.0 * k_known;
  const detail::RateFit fit1 =
      detail::fit_envelope_rate(d1, taus, phi1, rate_hi);
  const detail::RateFit fit2 =
      detail::fit_envelope_rate(d2, taus, phi1, rate_hi);

  EstimationResult result;
  result.method = FitMethod::JointLsq;
  result.k_hat = (fit1.rate + fit2.rate) / 4.0;
  result.kc_hat = std::clamp((fit2.rate - fit1.rate) / 4.0, 0.0,
                             std::max(result.k_hat, 0.0));
  result.kc_stderr =
      std::sqrt(fit1.sigma * fit1.sigma + fit2.sigma * fit2.sigma) / 4.0;
  result.residual = fit1.residual + fit2.residual;
  result.n_records = records.size();
  result.at_boundary = fit1.at_boundary || fit2.at_boundary ||
                       result.kc_hat <= 0.0 || result.kc_hat >= result.k_hat;
  return result;
}

// ---- record file format: one JSON object per line --------------------

inline nlohmann::json to_json(const ExperimentRecord& rec) {
  return nlohmann::json{
      {"scheme", to_string(rec.scheme)},
      {"phi1", rec.phi1},
      {"tau", rec.tau},
      {"shots", rec.shots},
      {"counts",
       {{"ee", rec.counts[kEE]},
        {"eg", rec.counts[kEG]},
        {"ge", rec.counts[kGE]},
        {"gg", rec.counts[kGG]}}},
      {"seed", rec.seed}};
}

inline ExperimentRecord record_from_json(const nlohmann::json& j) {
  ExperimentRecord rec;
  try {
    rec.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    rec.phi1 = j.at("phi1").get<double>();
    rec.tau = j.at("tau").get<double>();
    rec.shots = j.at("shots").get<std::uint64_t>();
    const auto& counts = j.at("counts");
    rec.counts[kEE] = counts.at("ee").get<std::uint64_t>();
    rec.counts[kEG] = counts.at("eg").get<std::uint64_t>();
    rec.counts[kGE] = counts.at("ge").get<std::uint64_t>();
    rec.counts[kGG] = counts.at("gg").get<std::uint64_t>();
    rec.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("record: ") + e.what());
  }
  if (rec.total_counts() != rec.shots)
    throw ConfigError("record: counts do not sum to shots");
  return rec;
}

inline void write_records(std::ostream& out,
                          std::span<const ExperimentRecord> records) {
  for (const ExperimentRecord& rec : records) out << to_json(rec) << '\n';
}

inline std::vector<ExperimentRecord> read_records(std::istream& in) {
  std::vector<ExperimentRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("record line " + std::to_string(line_no) + ": " +
                        e.what());
    }
    records.push_back(record_from_json(j));
  }
  return records;
}

}  // namespace eraser

#endif  // ERASER_ESTIMATE_HPP
