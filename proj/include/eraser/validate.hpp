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

#ifndef ERASER_VALIDATE_HPP
#define ERASER_VALIDATE_HPP

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "eraser/estimate.hpp"
#include "eraser/lindblad.hpp"
#include "eraser/oracle.hpp"
#include "eraser/protocol.hpp"
#include "eraser/qcore.hpp"
#include "eraser/rng.hpp"

// Self-check suite: every analytic invariant the simulator must satisfy,
// with its tolerance pinned in code. Used by the `validate` subcommand
// and by the acceptance test binary.
namespace eraser {

struct CheckResult {
  std::string name;
  double tolerance = 0.0;
  double worst = 0.0;  // worst observed deviation (signed margin for
                       // ordering checks: pass iff worst <= tolerance)
  bool pass = false;
};

struct ValidateOptions {
  int draws = 1000;          // randomized propagations
  int rk4_steps = 4096;      // steps of the cross-check integrator
  std::uint64_t seed = 20260810;
  std::map<std::string, double> tolerance_overrides;  // by check name
};

namespace checks {

inline DensityOperator random_density(DeterministicRng& rng, Index dim) {
  Matrix g(dim, dim);
  for (Index r = 0; r < dim; ++r)
    for (Index c = 0; c < dim; ++c) g(r, c) = Cplx(rng.normal(), rng.normal());
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return {HilbertSpace({dim}), std::move(m)};
}

inline SystemParams random_params(DeterministicRng& rng) {
  SystemParams p;
  p.k = 0.5 + 1.5 * rng.uniform();
  p.k_c = p.k * rng.uniform();
  p.omega = 5.0 * p.k * rng.uniform();
  p.mode_dim = 2;
  return p;
}

// rho on the (mode A, mode B) space but with a single flat factor, as
// produced by random_density; rebind to the two-mode space for the
// propagators.
inline DensityOperator as_field_state(const DensityOperator& rho,
                                      const SystemParams& params) {
  return {field_space(params), rho.matrix};
}

inline StateVector bell_mode_state(const SystemParams& params, double sign) {
  const HilbertSpace space = field_space(params);
  CVector amps = CVector::Zero(space.dim());
  amps[params.mode_dim] = 1.0 / std::sqrt(2.0);  // |1_A 0_B>
  amps[1] = sign / std::sqrt(2.0);               // |0_A 1_B>
  return {space, std::move(amps)};
}

}  // namespace checks

namespace detail {

inline double pick_tol(const ValidateOptions& opts, const std::string& name,
                       double fallback) {
  const auto it = opts.tolerance_overrides.find(name);
  return it == opts.tolerance_overrides.end() ? fallback : it->second;
}

inline CheckResult make_result(const ValidateOptions& opts, std::string name,
                               double fallback_tol, double worst) {
  CheckResult r;
  r.tolerance = pick_tol(opts, name, fallback_tol);
  r.name = std::move(name);
  r.worst = worst;
  r.pass = worst <= r.tolerance;
  return r;
}

}  // namespace detail

// ---- lindblad-level checks --------------------------------------------

/// Tr(L rho) = 0 for every rho: the vectorized trace functional
/// annihilates the generator.
inline CheckResult check_generator_trace_preserving(
    const ValidateOptions& opts) {
  DeterministicRng rng(derive_seed(opts.seed, 1));
  double worst = 0.0;
  for (int i = 0; i < 32; ++i) {
    const SystemParams params = checks::random_params(rng);
    const Superoperator sup = build_liouvillian(params);
    const CVector trace_functional = vec(
        Matrix::Identity(sup.dim, sup.dim));
    worst = std::max(
        worst, (trace_functional.transpose() * sup.matrix).cwiseAbs().maxCoeff());
  }
  return detail::make_result(opts, "generator_trace_preserving", 1e-12, worst);
}

struct CptpWorst {
  double hermiticity = 0.0;
  double trace = 0.0;
  double negativity = 0.0;
  double vs_rk4 = 0.0;
};

/// Randomized propagations feeding the CPTP and cross-integrator checks.
inline CptpWorst cptp_sweep(const ValidateOptions& opts, bool with_rk4) {
  DeterministicRng rng(derive_seed(opts.seed, 2));
  CptpWorst worst;
  for (int i = 0; i < opts.draws; ++i) {
    const SystemParams params = checks::random_params(rng);
    const Superoperator sup = build_liouvillian(params);
    const DensityOperator rho = checks::as_field_state(
        checks::random_density(rng, params.mode_dim * params.mode_dim),
        params);
    const double t = 2.0 / params.k * rng.uniform();
    const DensityOperator out = propagate_expm(sup, rho, t);
    worst.hermiticity =
        std::max(worst.hermiticity, max_abs(out.matrix - out.matrix.adjoint()));
    worst.trace =
        std::max(worst.trace, std::abs(out.matrix.trace().real() - 1.0));
    worst.negativity =
        std::max(worst.negativity, -min_eigenvalue(out.matrix));
    if (with_rk4) {
      const DensityOperator rk =
          propagate_rk4(sup, rho, t, opts.rk4_steps);
      worst.vs_rk4 = std::max(worst.vs_rk4, max_abs(out.matrix - rk.matrix));
    }
  }
  return worst;
}

inline std::vector<CheckResult> check_cptp(const ValidateOptions& opts,
                                           bool with_rk4 = true) {
  const CptpWorst worst = cptp_sweep(opts, with_rk4);
  std::vector<CheckResult> results;
  results.push_back(detail::make_result(opts, "cptp_hermiticity",
                                        default_tolerance(),
                                        worst.hermiticity));
  results.push_back(detail::make_result(opts, "cptp_trace",
                                        default_tolerance(), worst.trace));
  results.push_back(
      detail::make_result(opts, "cptp_positivity", 1e-9, worst.negativity));
  if (with_rk4)
    results.push_back(
        detail::make_result(opts, "expm_vs_rk4", 1e-7, worst.vs_rk4));
  return results;
}

/// Three-route agreement on the single-excitation sector: closed form
/// (f, l) vs matrix exponential vs RK4, pairwise, over
/// k = 1, k_c in {0, 0.25, 0.5, 1}, t in [0, 2].
inline CheckResult check_integrator_agreement(const ValidateOptions& opts) {
  double worst = 0.0;
  const Cplx alpha = std::exp(Cplx(0, 0.8)) / std::sqrt(2.0);
  const Cplx beta = 1.0 / std::sqrt(2.0);
  for (const double kc : {0.0, 0.25, 0.5, 1.0}) {
    SystemParams params;
    params.k = 1.0;
    params.k_c = kc;
    const Superoperator sup = build_liouvillian(params);
    const DensityOperator rho0 =
        single_excitation_density(params, alpha, beta);
    for (int j = 0; j <= 8; ++j) {
      const double t = 2.0 * j / 8.0;
      const auto evolved = single_excitation_propagate(params, alpha, beta, t);
      const Matrix closed =
          single_excitation_density(params, evolved.alpha, evolved.beta)
              .matrix;
      const Matrix via_expm = propagate_expm(sup, rho0, t).matrix;
      const Matrix via_rk4 =
          propagate_rk4(sup, rho0, t, opts.rk4_steps).matrix;
      worst = std::max({worst, max_abs(closed - via_expm),
                        max_abs(closed - via_rk4),
                        max_abs(via_expm - via_rk4)});
    }
  }
  return detail::make_result(opts, "integrator_agreement", 1e-7, worst);
}

/// Single-excitation closed form (f, l) vs the superoperator exponential,
/// entrywise on reconstructed density matrices.
inline CheckResult check_single_excitation_oracle(const ValidateOptions& opts) {
  DeterministicRng rng(derive_seed(opts.seed, 3));
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const SystemParams params = checks::random_params(rng);
    // random amplitudes with |a|^2 + |b|^2 <= 1
    Cplx alpha(rng.normal(), rng.normal()), beta(rng.normal(), rng.normal());
    const double scale =
        std::sqrt(std::norm(alpha) + std::norm(beta)) / rng.uniform();
    alpha /= scale;
    beta /= scale;
    const double t = 2.0 / params.k * rng.uniform();
    const auto evolved = single_excitation_propagate(params, alpha, beta, t);
    const DensityOperator expected =
        single_excitation_density(params, evolved.alpha, evolved.beta);
    const DensityOperator via_expm = propagate_expm(
        build_liouvillian(params),
        single_excitation_density(params, alpha, beta), t);
    worst = std::max(worst, max_abs(expected.matrix - via_expm.matrix));
  }
  return detail::make_result(opts, "single_excitation_oracle", 1e-9, worst);
}

/// Populations of |psi+-> = (|10> +- |01>)/sqrt(2) decay at 2(k +- k_c);
/// the log-slope is fitted over t in [0, 1/k].
inline CheckResult check_collective_decay_rates(const ValidateOptions& opts) {
  double worst = 0.0;
  for (const double kc : {0.0, 0.25, 0.5}) {
    SystemParams params;
    params.k = 1.0;
    params.k_c = kc;
    const Superoperator sup = build_liouvillian(params);
    for (const double sign : {+1.0, -1.0}) {
      const StateVector psi = checks::bell_mode_state(params, sign);
      const DensityOperator rho0 = pure_density(psi);
      // least-squares slope of log population over 9 samples
      constexpr int kSamples = 9;
      double sum_t = 0, sum_y = 0, sum_tt = 0, sum_ty = 0;
      for (int j = 0; j < kSamples; ++j) {
        const double t = (j + 1) / (double(kSamples) * params.k);
        const DensityOperator rho = propagate_expm(sup, rho0, t);
        const double pop =
            (psi.amplitudes.adjoint() * rho.matrix * psi.amplitudes)(0).real();
        const double y = std::log(pop);
        sum_t += t;
        sum_y += y;
        sum_tt += t * t;
        sum_ty += t * y;
      }
      const double slope = (kSamples * sum_ty - sum_t * sum_y) /
                           (kSamples * sum_tt - sum_t * sum_t);
      const double expected = -2.0 * (params.k + sign * params.k_c);
      worst = std::max(worst, std::abs(slope - expected) / std::abs(expected));
    }
  }
  return detail::make_result(opts, "collective_decay_rates", 1e-6, worst);
}

/// k_c = k: the antisymmetric single-photon state is decoherence-free.
inline CheckResult check_dfs_fixed_point(const ValidateOptions& opts) {
  SystemParams params;
  params.k = 1.0;
  params.k_c = 1.0;
  const Superoperator sup = build_liouvillian(params);
  const DensityOperator rho =
      pure_density(checks::bell_mode_state(params, -1.0));
  const CVector derivative = sup.matrix * vec(rho.matrix);
  const double worst = derivative.cwiseAbs().maxCoeff();
  return detail::make_result(opts, "dfs_fixed_point", 1e-12, worst);
}

/// exp(L t1) exp(L t2) = exp(L (t1 + t2)) applied to random states.
inline CheckResult check_semigroup(const ValidateOptions& opts) {
  DeterministicRng rng(derive_seed(opts.seed, 4));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const SystemParams params = checks::random_params(rng);
    const Superoperator sup = build_liouvillian(params);
    const DensityOperator rho = checks::as_field_state(
        checks::random_density(rng, params.mode_dim * params.mode_dim),
        params);
    const double t1 = rng.uniform() / params.k;
    const double t2 = rng.uniform() / params.k;
    const DensityOperator two_step =
        propagate_expm(sup, propagate_expm(sup, rho, t1), t2);
    const DensityOperator one_step = propagate_expm(sup, rho, t1 + t2);
    worst = std::max(worst, max_abs(two_step.matrix - one_step.matrix));
  }
  return detail::make_result(opts, "semigroup", 1e-9, worst);
}

// ---- protocol-level checks --------------------------------------------

/// The acceptance grid: 5 phases x 5 intervals x 3 cross rates.
struct GridPoint {
  double phi1;
  double tau;
  double kc_over_k;
};

inline std::vector<GridPoint> acceptance_grid() {
  std::vector<GridPoint> grid;
  for (int ip = 0; ip < 5; ++ip)
    for (int it = 0; it < 5; ++it)
      for (const double kc : {0.0, 0.5, 1.0})
        grid.push_back(
            {2.0 * std::numbers::pi * ip / 5.0, 0.25 * it, kc});
  return grid;
}

/// Gate-level simulator vs closed-form probabilities over the grid.
inline CheckResult check_gate_vs_oracle(const ValidateOptions& opts,
                                        Scheme scheme) {
  double worst = 0.0;
  for (const GridPoint& point : acceptance_grid()) {
    ProtocolConfig config;
    config.phi1 = point.phi1;
    config.phi2 = 0.9;  // arbitrary nonzero Stark phase
    config.tau = point.tau;
    config.scheme = scheme;
    config.params.k = 1.0;
    config.params.k_c = point.kc_over_k;
    const JointProbabilities sim = joint_probabilities(config);
    const JointProbabilities ref =
        oracle::probabilities(scheme, point.phi1, config.params, point.tau);
    worst = std::max(worst, max_probability_diff(sim, ref));
  }
  const std::string name = scheme == Scheme::AntisymmetricAbsorber
                               ? "gate_vs_oracle_scheme1"
                               : "gate_vs_oracle_scheme2";
  return detail::make_result(opts, name, 1e-9, worst);
}

/// Joint probabilities do not depend on the Stark phase phi2.
inline CheckResult check_phi2_invariance(const ValidateOptions& opts) {
  double worst = 0.0;
  for (const Scheme scheme :
       {Scheme::AntisymmetricAbsorber, Scheme::SymmetricAbsorber}) {
    ProtocolConfig config;
    config.phi1 = 1.1;
    config.tau = 0.37;
    config.scheme = scheme;
    config.params.k = 1.0;
    config.params.k_c = 0.6;
    config.phi2 = 0.0;
    const JointProbabilities base = joint_probabilities(config);
    for (const double phi2 : {0.4, 2.345, 5.9}) {
      config.phi2 = phi2;
      worst = std::max(
          worst, max_probability_diff(base, joint_probabilities(config)));
    }
  }
  return detail::make_result(opts, "phi2_invariance", 1e-12, worst);
}

/// Joint probabilities do not depend on the mode frequency.
inline CheckResult check_omega_invariance(const ValidateOptions& opts) {
  double worst = 0.0;
  for (const Scheme scheme :
       {Scheme::AntisymmetricAbsorber, Scheme::SymmetricAbsorber}) {
    for (const double phi1 : {0.0, 2.2}) {
      ProtocolConfig config;
      config.phi1 = phi1;
      config.tau = 0.5;
      config.scheme = scheme;
      config.params.k = 1.0;
      config.params.k_c = 0.5;
      config.params.omega = 0.0;
      const JointProbabilities base = joint_probabilities(config);
      config.params.omega = 10.0;
      worst = std::max(
          worst, max_probability_diff(base, joint_probabilities(config)));
    }
  }
  return detail::make_result(opts, "omega_invariance", 1e-9, worst);
}

/// The protocol never populates two photons: enlarging the Fock
/// truncation must not move any probability.
inline CheckResult check_truncation_invariance(const ValidateOptions& opts) {
  double worst = 0.0;
  for (const Scheme scheme :
       {Scheme::AntisymmetricAbsorber, Scheme::SymmetricAbsorber}) {
    ProtocolConfig config;
    config.phi1 = 0.9;
    config.tau = 0.41;
    config.scheme = scheme;
    config.params.k = 1.0;
    config.params.k_c = 0.5;
    config.params.mode_dim = 2;
    const JointProbabilities base = joint_probabilities(config);
    for (const Index dim : {Index{3}, Index{4}}) {
      config.params.mode_dim = dim;
      worst = std::max(
          worst, max_probability_diff(base, joint_probabilities(config)));
    }
  }
  return detail::make_result(opts, "truncation_invariance", 1e-10, worst);
}

/// tau = 0 and k_c = k both restore full-visibility fringes in scheme 1:
/// P_ge - P_ee = cos(phi1)/2.
inline CheckResult check_full_visibility_limits(const ValidateOptions& opts) {
  double worst = 0.0;
  for (int ip = 0; ip < 8; ++ip) {
    const double phi1 = 2.0 * std::numbers::pi * ip / 8.0;
    ProtocolConfig config;
    config.phi1 = phi1;
    config.scheme = Scheme::AntisymmetricAbsorber;
    config.params.k = 1.0;

    config.tau = 0.0;
    config.params.k_c = 0.5;
    JointProbabilities probs = joint_probabilities(config);
    worst = std::max(
        worst, std::abs(probs.p_ge - probs.p_ee - std::cos(phi1) / 2.0));

    config.tau = 0.8;
    config.params.k_c = 1.0;
    probs = joint_probabilities(config);
    worst = std::max(
        worst, std::abs(probs.p_ge - probs.p_ee - std::cos(phi1) / 2.0));
  }
  return detail::make_result(opts, "full_visibility_limits", 1e-12, worst);
}

/// For k_c > 0 and tau > 0 the scheme-1 fringe visibility strictly
/// exceeds scheme 2's. `worst` is the negated minimum margin, so the
/// check passes only when the ordering is strict everywhere.
inline CheckResult check_scheme_asymmetry(const ValidateOptions& opts) {
  double min_margin = std::numeric_limits<double>::infinity();
  for (const double kc : {0.25, 0.5, 1.0})
    for (const double tau : {0.2, 0.5, 1.0}) {
      ProtocolConfig config;
      config.phi1 = 0.0;
      config.tau = tau;
      config.params.k = 1.0;
      config.params.k_c = kc;
      config.scheme = Scheme::AntisymmetricAbsorber;
      const JointProbabilities p1 = joint_probabilities(config);
      config.scheme = Scheme::SymmetricAbsorber;
      const JointProbabilities p2 = joint_probabilities(config);
      // visibility at phi1 = 0: P_ge - P_ee (scheme 1), P_ee - P_ge (2)
      min_margin = std::min(
          min_margin, (p1.p_ge - p1.p_ee) - (p2.p_ee - p2.p_ge));
    }
  return detail::make_result(opts, "scheme_asymmetry", 0.0, -min_margin);
}

/// Marginal invariants of the gate-level probabilities on the grid.
inline CheckResult check_probability_marginals(const ValidateOptions& opts) {
  double worst = 0.0;
  for (const GridPoint& point : acceptance_grid()) {
    for (const Scheme scheme :
         {Scheme::AntisymmetricAbsorber, Scheme::SymmetricAbsorber}) {
      ProtocolConfig config;
      config.phi1 = point.phi1;
      config.tau = point.tau;
      config.scheme = scheme;
      config.params.k = 1.0;
      config.params.k_c = point.kc_over_k;
      const JointProbabilities p = joint_probabilities(config);
      worst = std::max({worst, std::abs(p.sum() - 1.0),
                        std::abs(p.p_ee + p.p_eg - 0.5),
                        std::abs(p.p_ge + p.p_gg - 0.5)});
    }
  }
  return detail::make_result(opts, "probability_marginals", 1e-12, worst);
}

// ---- oracle-level checks ----------------------------------------------

/// Closed-form xi vs the signed sum of the eight probabilities, plus
/// xi = 0 at k_c = 0, plus the amplitude-route consistency.
inline CheckResult check_xi_identity(const ValidateOptions& opts) {
  DeterministicRng rng(derive_seed(opts.seed, 5));
  double worst = 0.0;
  const auto probe = [&](double phi1, const SystemParams& params, double tau) {
    const JointProbabilities p1 =
        oracle::probabilities_scheme1(phi1, params, tau);
    const JointProbabilities p2 =
        oracle::probabilities_scheme2(phi1, params, tau);
    const double closed = oracle::xi(phi1, params, tau);
    worst = std::max(worst,
                     std::abs(closed - oracle::xi_from_probabilities(p1, p2)));
    if (params.k_c == 0.0) worst = std::max(worst, std::abs(closed));
    for (const Scheme scheme :
         {Scheme::AntisymmetricAbsorber, Scheme::SymmetricAbsorber}) {
      const JointProbabilities via_amplitudes =
          oracle::probabilities_from_amplitudes(phi1, params, tau, scheme);
      const JointProbabilities direct =
          oracle::probabilities(scheme, phi1, params, tau);
      worst = std::max(worst, max_probability_diff(via_amplitudes, direct));
    }
  };
  for (const GridPoint& point : acceptance_grid()) {
    SystemParams params;
    params.k = 1.0;
    params.k_c = point.kc_over_k;
    probe(point.phi1, params, point.tau);
  }
  for (int i = 0; i < 500; ++i) {
    SystemParams params;
    params.k = 0.5 + 1.5 * rng.uniform();
    params.k_c = (i % 7 == 0) ? 0.0 : params.k * rng.uniform();
    probe(2.0 * std::numbers::pi * rng.uniform(), params,
          1.5 / params.k * rng.uniform());
  }
  return detail::make_result(opts, "xi_identity", 1e-12, worst);
}

/// Projective-measurement probabilities on random states are nonnegative
/// and sum to one.
inline CheckResult check_projective_probabilities(const ValidateOptions& opts) {
  DeterministicRng rng(derive_seed(opts.seed, 6));
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Index dim = 2 + static_cast<Index>(rng.uniform() * 3);
    DensityOperator rho = checks::random_density(rng, dim * 2);
    rho = DensityOperator{HilbertSpace({dim, 2}), rho.matrix};
    const std::size_t factor = rng.uniform() < 0.5 ? 0 : 1;
    const auto outcomes =
        project_measure(rho, level_projectors(rho.space, factor));
    double sum = 0.0;
    for (const auto& out : outcomes) {
      worst = std::max(worst, -out.probability);
      sum += out.probability;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return detail::make_result(opts, "projective_probabilities", 1e-12, worst);
}

/// The full suite in report order.
inline std::vector<CheckResult> run_validation(const ValidateOptions& opts) {
  std::vector<CheckResult> results;
  results.push_back(check_generator_trace_preserving(opts));
  for (CheckResult& r : check_cptp(opts)) results.push_back(std::move(r));
  results.push_back(check_integrator_agreement(opts));
  results.push_back(check_single_excitation_oracle(opts));
  results.push_back(check_collective_decay_rates(opts));
  results.push_back(check_dfs_fixed_point(opts));
  results.push_back(check_semigroup(opts));
  results.push_back(check_gate_vs_oracle(opts, Scheme::AntisymmetricAbsorber));
  results.push_back(check_gate_vs_oracle(opts, Scheme::SymmetricAbsorber));
  results.push_back(check_phi2_invariance(opts));
  results.push_back(check_omega_invariance(opts));
  results.push_back(check_truncation_invariance(opts));
  results.push_back(check_full_visibility_limits(opts));
  results.push_back(check_scheme_asymmetry(opts));
  results.push_back(check_probability_marginals(opts));
  results.push_back(check_xi_identity(opts));
  results.push_back(check_projective_probabilities(opts));
  return results;
}

}  // namespace eraser

#endif  // ERASER_VALIDATE_HPP
