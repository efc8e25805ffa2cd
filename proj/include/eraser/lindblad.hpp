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

#ifndef ERASER_LINDBLAD_HPP
#define ERASER_LINDBLAD_HPP

#include <cmath>
#include <complex>

#include "eraser/errors.hpp"
#include "eraser/linalg.hpp"
#include "eraser/qcore.hpp"

namespace eraser {

/// Physical parameters of the two-mode bath problem. Rates and times are
/// unit-agnostic; k sets the natural scale.
struct SystemParams {
  double omega = 0.0;   // mode angular frequency
  double k = 1.0;       // decay rate of each mode
  double k_c = 0.0;     // cross decay rate
  Index mode_dim = 2;   // Fock truncation per mode

  /// k >= 0 and 0 <= k_c <= k. The ceiling is complete positivity: the
  /// antisymmetric-mode rate k - k_c must be nonnegative. Out-of-range
  /// values are rejected, not clamped.
  void validate() const {
    if (!(k >= 0.0)) throw DomainError("SystemParams: k must be >= 0");
    if (!(k_c >= 0.0)) throw DomainError("SystemParams: k_c must be >= 0");
    if (!(k_c <= k)) throw DomainError("SystemParams: k_c must be <= k");
    if (!std::isfinite(omega))
      throw DomainError("SystemParams: omega must be finite");
    if (mode_dim < 2) throw DomainError("SystemParams: mode_dim must be >= 2");
  }
};

/// The two-mode field space (mode A ⊗ mode B), atom factors excluded.
inline HilbertSpace field_space(const SystemParams& params) {
  return HilbertSpace({params.mode_dim, params.mode_dim});
}

/// Generator matrix acting on column-vectorized density matrices.
struct Superoperator {
  Index dim;      // Hilbert dimension; matrix is dim^2 x dim^2
  Matrix matrix;
};

/// Two-mode Liouvillian with cross decay:
///   L rho = -i[w a†a + w b†b, rho]
///           + k (2 a rho a† - rho a†a - a†a rho)   (same for b)
///           + k_c (2 a rho b† + 2 b rho a† - rho(a†b + b†a) - (a†b + b†a) rho)
/// The cross term uses 2 b rho a†: that is the unique Hermiticity- and
/// trace-preserving completion, and the one consistent with the f/l
/// closed-form solutions. Column-stacking throughout:
/// vec(A X B) = (B^T ⊗ A) vec(X).
inline Superoperator build_liouvillian(const SystemParams& params) {
  params.validate();
  const Index d = params.mode_dim;
  const Matrix a1 = fock_annihilation(d);
  const Matrix id = Matrix::Identity(d, d);
  const Matrix a = kron(a1, id);
  const Matrix b = kron(id, a1);
  const Index n = d * d;
  const Matrix idn = Matrix::Identity(n, n);

  const auto lmul = [&](const Matrix& m) { return kron(idn, m); };
  const auto rmul = [&](const Matrix& m) { return kron(m.transpose(), idn); };

  const Matrix h = params.omega * (a.adjoint() * a + b.adjoint() * b);
  Matrix sup = Cplx(0, -1) * (lmul(h) - rmul(h));
  for (const Matrix* c : {&a, &b}) {
    const Matrix cdc = c->adjoint() * (*c);
    sup += params.k *
           (2.0 * kron(c->conjugate(), *c) - rmul(cdc) - lmul(cdc));
  }
  const Matrix x = a.adjoint() * b + b.adjoint() * a;
  sup += params.k_c * (2.0 * kron(b.conjugate(), a) +
                       2.0 * kron(a.conjugate(), b) - rmul(x) - lmul(x));
  return {n, std::move(sup)};
}

/// rho(t) = exp(L t) rho(0) via the dense matrix exponential.
inline DensityOperator propagate_expm(const Superoperator& sup,
                                      const DensityOperator& rho, double t) {
  if (t < 0.0) throw DomainError("propagate_expm: t must be >= 0");
  if (rho.space.dim() != sup.dim)
    throw DimensionError("propagate_expm: dimension mismatch");
  const CVector out = expm(sup.matrix * t) * vec(rho.matrix);
  return {rho.space, unvec(out, sup.dim)};
}

/// Classical fixed-step RK4 on d rho/dt = L rho. Independent integration
/// route used to cross-check propagate_expm.
inline DensityOperator propagate_rk4(const Superoperator& sup,
                                     const DensityOperator& rho, double t,
                                     int steps) {
  if (t < 0.0) throw DomainError("propagate_rk4: t must be >= 0");
  if (steps < 1) throw DomainError("propagate_rk4: steps must be >= 1");
  if (rho.space.dim() != sup.dim)
    throw DimensionError("propagate_rk4: dimension mismatch");
  const double h = t / steps;
  CVector y = vec(rho.matrix);
  for (int i = 0; i < steps; ++i) {
    const CVector k1 = sup.matrix * y;
    const CVector k2 = sup.matrix * (y + (h / 2) * k1);
    const CVector k3 = sup.matrix * (y + (h / 2) * k2);
    const CVector k4 = sup.matrix * (y + h * k3);
    y += (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return {rho.space, unvec(y, sup.dim)};
}

/// f(t) = e^{-iwt}/2 (e^{-(k+kc)t} + e^{-(k-kc)t}): amplitude retained on
/// the starting mode after time t in the common bath.
inline Cplx f_coeff(const SystemParams& params, double t) {
  if (t < 0.0) throw DomainError("f_coeff: t must be >= 0");
  params.validate();
  const Cplx phase = std::exp(Cplx(0, -params.omega * t));
  return phase *
         (std::exp(-(params.k + params.k_c) * t) +
          std::exp(-(params.k - params.k_c) * t)) /
         2.0;
}

/// l(t) = e^{-iwt}/2 (e^{-(k+kc)t} - e^{-(k-kc)t}): amplitude leaked onto
/// the other mode. Zero when k_c = 0.
inline Cplx l_coeff(const SystemParams& params, double t) {
  if (t < 0.0) throw DomainError("l_coeff: t must be >= 0");
  params.validate();
  const Cplx phase = std::exp(Cplx(0, -params.omega * t));
  return phase *
         (std::exp(-(params.k + params.k_c) * t) -
          std::exp(-(params.k - params.k_c) * t)) /
         2.0;
}

struct SingleExcitationResult {
  Cplx alpha;                // evolved amplitude on |1_A 0_B>
  Cplx beta;                 // evolved amplitude on |0_A 1_B>
  double vacuum_population;  // 1 - |alpha|^2 - |beta|^2
};

/// Analytic propagation in the zero/one-excitation sector:
/// (alpha, beta) -> (f alpha + l beta, f beta + l alpha). Exact for states
/// with no coherence between the excitation and the vacuum.
inline SingleExcitationResult single_excitation_propagate(
    const SystemParams& params, Cplx alpha, Cplx beta, double t) {
  const double norm2 = std::norm(alpha) + std::norm(beta);
  if (norm2 > 1.0 + default_tolerance())
    throw DomainError("single_excitation_propagate: |alpha|^2 + |beta|^2 > 1");
  const Cplx f = f_coeff(params, t);
  const Cplx l = l_coeff(params, t);
  const Cplx ap = f * alpha + l * beta;
  const Cplx bp = f * beta + l * alpha;
  return {ap, bp, 1.0 - std::norm(ap) - std::norm(bp)};
}

/// (alpha |10> + beta |01>)(H.c.) + (1 - |alpha|^2 - |beta|^2)|00><00|
/// on the two-mode field space.
inline DensityOperator single_excitation_density(const SystemParams& params,
                                                 Cplx alpha, Cplx beta) {
  const HilbertSpace space = field_space(params);
  const Index d = params.mode_dim;
  CVector psi = CVector::Zero(space.dim());
  psi[d] = alpha;  // |1_A 0_B>
  psi[1] = beta;   // |0_A 1_B>
  Matrix m = psi * psi.adjoint();
  m(0, 0) = 1.0 - std::norm(alpha) - std::norm(beta);
  return {space, std::move(m)};
}

}  // namespace eraser

#endif  // ERASER_LINDBLAD_HPP
