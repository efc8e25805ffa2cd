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

#ifndef ERASER_ORACLE_HPP
#define ERASER_ORACLE_HPP

#include <cmath>
#include <complex>

#include "eraser/lindblad.hpp"
#include "eraser/outcomes.hpp"

// Closed-form reference values for every analytic expression of the
// two-scheme eraser experiment. Scalar arithmetic only: this is an
// independent code path against which the gate-level simulator is tested.
namespace eraser::oracle {

enum class Branch {
  Plus,   // first atom measured in e
  Minus,  // first atom measured in g
};

/// Field amplitudes (zeta on |1_A 0_B>, eta on |0_A 1_B>) of one
/// first-atom branch after the bath interval.
struct BranchAmplitudes {
  Cplx zeta;
  Cplx eta;
  Branch branch;
};

/// zeta_+ = (e^{i phi1} f + l)/sqrt(2),  eta_+ = (f + e^{i phi1} l)/sqrt(2);
/// the minus branch flips the sign of the e^{i phi1} term.
inline BranchAmplitudes branch_amplitudes(double phi1,
                                          const SystemParams& params,
                                          double tau, Branch branch) {
  const Cplx f = f_coeff(params, tau);
  const Cplx l = l_coeff(params, tau);
  const Cplx phase = std::exp(Cplx(0, phi1));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  if (branch == Branch::Plus)
    return {(phase * f + l) * inv_sqrt2, (f + phase * l) * inv_sqrt2, branch};
  return {(-phase * f + l) * inv_sqrt2, (f - phase * l) * inv_sqrt2, branch};
}

/// Scheme 1 (antisymmetric absorber):
///   P_ee = 1/4 (1 - cos phi1) e^{-2(k-kc) tau},  P_eg = 1/2 - P_ee,
///   P_ge = 1/4 (1 + cos phi1) e^{-2(k-kc) tau},  P_gg = 1/2 - P_ge.
inline JointProbabilities probabilities_scheme1(double phi1,
                                                const SystemParams& params,
                                                double tau) {
  if (tau < 0.0) throw DomainError("probabilities_scheme1: tau must be >= 0");
  params.validate();
  const double env = std::exp(-2.0 * (params.k - params.k_c) * tau);
  const double c = std::cos(phi1);
  JointProbabilities p;
  p.p_ee = 0.25 * (1.0 - c) * env;
  p.p_eg = 0.5 - p.p_ee;
  p.p_ge = 0.25 * (1.0 + c) * env;
  p.p_gg = 0.5 - p.p_ge;
  return p;
}

/// Scheme 2 (symmetric absorber): envelope e^{-2(k+kc) tau} and the
/// cosine signs swapped with respect to scheme 1.
inline JointProbabilities probabilities_scheme2(double phi1,
                                                const SystemParams& params,
                                                double tau) {
  if (tau < 0.0) throw DomainError("probabilities_scheme2: tau must be >= 0");
  params.validate();
  const double env = std::exp(-2.0 * (params.k + params.k_c) * tau);
  const double c = std::cos(phi1);
  JointProbabilities p;
  p.p_ee = 0.25 * (1.0 + c) * env;
  p.p_eg = 0.5 - p.p_ee;
  p.p_ge = 0.25 * (1.0 - c) * env;
  p.p_gg = 0.5 - p.p_ge;
  return p;
}

inline JointProbabilities probabilities(Scheme scheme, double phi1,
                                        const SystemParams& params,
                                        double tau) {
  return scheme == Scheme::AntisymmetricAbsorber
             ? probabilities_scheme1(phi1, params, tau)
             : probabilities_scheme2(phi1, params, tau);
}

/// Intermediate route through the absorber algebra: the second atom ends
/// in e with conditional probability |zeta -+ eta|^2 / 2 (antisymmetric /
/// symmetric scheme), and each first-atom branch has weight 1/2.
inline JointProbabilities probabilities_from_amplitudes(
    double phi1, const SystemParams& params, double tau, Scheme scheme) {
  const auto plus = branch_amplitudes(phi1, params, tau, Branch::Plus);
  const auto minus = branch_amplitudes(phi1, params, tau, Branch::Minus);
  const double sign = scheme == Scheme::AntisymmetricAbsorber ? -1.0 : 1.0;
  JointProbabilities p;
  p.p_ee = 0.5 * std::norm(plus.zeta + sign * plus.eta) / 2.0;
  p.p_eg = 0.5 - p.p_ee;
  p.p_ge = 0.5 * std::norm(minus.zeta + sign * minus.eta) / 2.0;
  p.p_gg = 0.5 - p.p_ge;
  return p;
}

/// xi = e^{-2(k-kc) tau} (1 - e^{-4 kc tau}) cos phi1; nonzero exactly
/// when k_c > 0 (given tau > 0 and cos phi1 != 0).
inline double xi(double phi1, const SystemParams& params, double tau) {
  if (tau < 0.0) throw DomainError("xi: tau must be >= 0");
  params.validate();
  return std::exp(-2.0 * (params.k - params.k_c) * tau) *
         (1.0 - std::exp(-4.0 * params.k_c * tau)) * std::cos(phi1);
}

/// The same quantity as the signed sum of the eight probabilities.
inline double xi_from_probabilities(const JointProbabilities& scheme1,
                                    const JointProbabilities& scheme2) {
  return scheme1.p_ge - scheme1.p_gg - scheme1.p_ee + scheme1.p_eg +
         scheme2.p_ge - scheme2.p_gg - scheme2.p_ee + scheme2.p_eg;
}

}  // namespace eraser::oracle

#endif  // ERASER_ORACLE_HPP
