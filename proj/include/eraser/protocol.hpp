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

#ifndef ERASER_PROTOCOL_HPP
#define ERASER_PROTOCOL_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <utility>

#include "eraser/errors.hpp"
#include "eraser/lindblad.hpp"
#include "eraser/outcomes.hpp"
#include "eraser/qcore.hpp"

namespace eraser {

// Atomic level conventions, fixed project-wide. The interferometer atom
// carries four levels; the probe atom only ever touches e and g.
namespace atom1 {
inline constexpr Index kI = 0, kE = 1, kF = 2, kG = 3, kDim = 4;
}
namespace atom2 {
inline constexpr Index kE = 0, kG = 1, kDim = 2;
}

inline double reduce_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  phi = std::fmod(phi, two_pi);
  return phi < 0.0 ? phi + two_pi : phi;
}

/// One run of the eraser experiment: interferometric phase phi1, Stark
/// phase phi2, bath interval tau, and the absorber scheme.
struct ProtocolConfig {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double tau = 0.0;
  Scheme scheme = Scheme::AntisymmetricAbsorber;
  SystemParams params;

  void validate() const {
    if (!(tau >= 0.0)) throw DomainError("ProtocolConfig: tau must be >= 0");
    if (!std::isfinite(phi1) || !std::isfinite(phi2))
      throw DomainError("ProtocolConfig: phases must be finite");
    params.validate();
  }

  ProtocolConfig normalized() const {
    ProtocolConfig c = *this;
    c.phi1 = reduce_phase(phi1);
    c.phi2 = reduce_phase(phi2);
    return c;
  }
};

enum class PulseTarget { ModeA, ModeB, Classical };

/// One resonant pulse: `upper`/`lower` are levels of the atom factor
/// (upper emits into the mode), `area` the pulse area, `phase` the drive
/// phase phi in the doublet rotation
///   [ cos(h)              -i e^{+i phi} sin(h) ]
///   [ -i e^{-i phi} sin(h)         cos(h)      ]
/// with h = area/2 (classical) or area*sqrt(n+1)/2 (Jaynes-Cummings).
struct PulseSpec {
  Index upper = 0;
  Index lower = 1;
  PulseTarget target = PulseTarget::Classical;
  double area = 0.0;
  double phase = 0.0;
};

namespace detail {

inline void check_transition(const HilbertSpace& space, const PulseSpec& spec) {
  const Index ad = space.factor(0);
  if (spec.upper < 0 || spec.upper >= ad || spec.lower < 0 ||
      spec.lower >= ad || spec.upper == spec.lower)
    throw ConfigError("pulse: unknown atomic transition");
  // The e <-> f transition of the four-level atom is dipole-forbidden.
  if (ad == atom1::kDim) {
    const Index lo = std::min(spec.upper, spec.lower);
    const Index hi = std::max(spec.upper, spec.lower);
    if (lo == atom1::kE && hi == atom1::kF)
      throw ConfigError("pulse: the e <-> f transition is not allowed");
  }
  if (!(spec.area >= 0.0) || !std::isfinite(spec.area))
    throw ConfigError("pulse: area must be finite and >= 0");
}

// Builds the unitary of one pulse on (atom ⊗ mode_A ⊗ mode_B).
inline Matrix pulse_unitary(const HilbertSpace& space, const PulseSpec& spec) {
  if (space.num_factors() != 3)
    throw DimensionError("pulse: expected (atom, mode A, mode B) space");
  check_transition(space, spec);
  const Index da = space.factor(1), db = space.factor(2);
  Matrix u = Matrix::Identity(space.dim(), space.dim());

  const auto idx = [&](Index lvl, Index na, Index nb) {
    return (lvl * da + na) * db + nb;
  };
  const auto set_block = [&](Index iu, Index il, double half) {
    const double c = std::cos(half), s = std::sin(half);
    const Cplx drive = std::exp(Cplx(0, spec.phase));
    u(iu, iu) = c;
    u(il, il) = c;
    u(iu, il) = Cplx(0, -1) * drive * s;
    u(il, iu) = Cplx(0, -1) * std::conj(drive) * s;
  };

  switch (spec.target) {
    case PulseTarget::Classical:
      for (Index na = 0; na < da; ++na)
        for (Index nb = 0; nb < db; ++nb)
          set_block(idx(spec.upper, na, nb), idx(spec.lower, na, nb),
                    spec.area / 2.0);
      break;
    case PulseTarget::ModeA:
      // Doublets {|upper, n>, |lower, n+1>}; the topmost photon level has
      // no partner under truncation and is left untouched.
      for (Index n = 0; n + 1 < da; ++n)
        for (Index nb = 0; nb < db; ++nb)
          set_block(idx(spec.upper, n, nb), idx(spec.lower, n + 1, nb),
                    spec.area * std::sqrt(double(n + 1)) / 2.0);
      break;
    case PulseTarget::ModeB:
      for (Index n = 0; n + 1 < db; ++n)
        for (Index na = 0; na < da; ++na)
          set_block(idx(spec.upper, na, n), idx(spec.lower, na, n + 1),
                    spec.area * std::sqrt(double(n + 1)) / 2.0);
      break;
  }
  return u;
}

}  // namespace detail

/// Resonant Jaynes-Cummings pulse of the given area on one cavity mode,
/// ideal rotating-frame unitary.
inline StateVector jc_pulse(const StateVector& psi, const PulseSpec& spec) {
  if (spec.target == PulseTarget::Classical)
    throw ConfigError("jc_pulse: target must be a cavity mode");
  return {psi.space, detail::pulse_unitary(psi.space, spec) * psi.amplitudes};
}

inline DensityOperator jc_pulse(const DensityOperator& rho,
                                const PulseSpec& spec) {
  if (spec.target == PulseTarget::Classical)
    throw ConfigError("jc_pulse: target must be a cavity mode");
  const Matrix u = detail::pulse_unitary(rho.space, spec);
  return {rho.space, u * rho.matrix * u.adjoint()};
}

/// Classical-field (Ramsey zone) rotation on the atomic factor only.
inline StateVector ramsey_pulse(const StateVector& psi, const PulseSpec& spec) {
  if (spec.target != PulseTarget::Classical)
    throw ConfigError("ramsey_pulse: target must be Classical");
  return {psi.space, detail::pulse_unitary(psi.space, spec) * psi.amplitudes};
}

inline DensityOperator ramsey_pulse(const DensityOperator& rho,
                                    const PulseSpec& spec) {
  if (spec.target != PulseTarget::Classical)
    throw ConfigError("ramsey_pulse: target must be Classical");
  const Matrix u = detail::pulse_unitary(rho.space, spec);
  return {rho.space, u * rho.matrix * u.adjoint()};
}

/// Multiplies the amplitude of one atomic level by e^{i phi}.
inline StateVector level_phase(const StateVector& psi, Index level,
                               double phi) {
  Matrix p = Matrix::Identity(psi.space.factor(0), psi.space.factor(0));
  if (level < 0 || level >= psi.space.factor(0))
    throw DimensionError("level_phase: level out of range");
  p(level, level) = std::exp(Cplx(0, phi));
  return {psi.space, embed(p, psi.space, 0) * psi.amplitudes};
}

inline DensityOperator level_phase(const DensityOperator& rho, Index level,
                                   double phi) {
  Matrix p = Matrix::Identity(rho.space.factor(0), rho.space.factor(0));
  if (level < 0 || level >= rho.space.factor(0))
    throw DimensionError("level_phase: level out of range");
  p(level, level) = std::exp(Cplx(0, phi));
  const Matrix u = embed(p, rho.space, 0);
  return {rho.space, u * rho.matrix * u.adjoint()};
}

inline HilbertSpace first_atom_space(const SystemParams& params) {
  return HilbertSpace({atom1::kDim, params.mode_dim, params.mode_dim});
}

inline HilbertSpace absorber_space(const SystemParams& params) {
  return HilbertSpace({atom2::kDim, params.mode_dim, params.mode_dim});
}

// Drive-phase convention: -pi/2 turns the doublet rotation real
// (upper -> lower picks up +sin). The second Ramsey zone uses +pi/2 so
// that the e branch ends up on the (|0_A 1_B> + e^{i phi1}|1_A 0_B>)
// superposition.
inline constexpr double kDrivePhase = -std::numbers::pi / 2.0;

/// First-atom sequence up to (and including) the phi1 phase gate:
/// pi/2 (i<->e, mode A), pi (i<->f, mode B), Ramsey pi (f->g), phase phi1
/// on |e>. Equals the paper's pre-Ramsey superposition state exactly.
inline StateVector first_atom_checkpoint(const ProtocolConfig& config_in) {
  const ProtocolConfig config = config_in.normalized();
  config.validate();
  const double pi = std::numbers::pi;
  StateVector psi = basis_state(first_atom_space(config.params),
                                {atom1::kI, 0, 0});
  psi = jc_pulse(psi, {atom1::kI, atom1::kE, PulseTarget::ModeA, pi / 2,
                       kDrivePhase});
  psi = jc_pulse(psi, {atom1::kI, atom1::kF, PulseTarget::ModeB, pi,
                       kDrivePhase});
  psi = ramsey_pulse(psi, {atom1::kF, atom1::kG, PulseTarget::Classical, pi,
                           kDrivePhase});
  return level_phase(psi, atom1::kE, config.phi1);
}

/// Full first-atom sequence: checkpoint followed by the second Ramsey
/// zone (pi/2 on e<->g).
inline StateVector first_atom_state(const ProtocolConfig& config) {
  StateVector psi = first_atom_checkpoint(config);
  return ramsey_pulse(psi, {atom1::kE, atom1::kG, PulseTarget::Classical,
                            std::numbers::pi / 2, -kDrivePhase});
}

inline DensityOperator run_first_atom(const ProtocolConfig& config) {
  return pure_density(first_atom_state(config));
}

/// The two realizable branches of the first-atom measurement.
struct Atom1Branches {
  double p_e = 0.0;
  std::optional<DensityOperator> field_e;  // on (mode A, mode B)
  double p_g = 0.0;
  std::optional<DensityOperator> field_g;
};

/// Projective {e, g} measurement of atom 1 immediately after the second
/// Ramsey zone; the atom factor is traced out of each conditional state.
/// Residual population on i or f indicates a broken pulse sequence.
inline Atom1Branches measure_atom1(const DensityOperator& state) {
  const auto outcomes =
      project_measure(state, level_projectors(state.space, 0));
  if (outcomes[atom1::kI].probability > default_tolerance() ||
      outcomes[atom1::kF].probability > default_tolerance())
    throw SequencingError("measure_atom1: population left on i or f");

  Atom1Branches branches;
  branches.p_e = outcomes[atom1::kE].probability;
  branches.p_g = outcomes[atom1::kG].probability;
  if (outcomes[atom1::kE].state)
    branches.field_e = partial_trace(*outcomes[atom1::kE].state, {1, 2});
  if (outcomes[atom1::kG].state)
    branches.field_g = partial_trace(*outcomes[atom1::kG].state, {1, 2});
  return branches;
}

/// Free bath evolution of the field for the interval tau.
inline DensityOperator bath_interval(const DensityOperator& field,
                                     const SystemParams& params, double tau) {
  return propagate_expm(build_liouvillian(params), field, tau);
}

/// Residual photon population allowed in cavity A after the absorber.
inline constexpr double kModeAVacuumTolerance = 1e-10;

/// Second-atom absorber: atom 2 starts in g, interacts with mode A for a
/// 3pi (antisymmetric scheme) or pi (symmetric scheme) pulse, then with
/// mode B for pi/2; the Stark phase phi2 multiplies the e amplitude after
/// the B interaction. Mode A must end in vacuum and is traced out.
inline DensityOperator run_absorber(const DensityOperator& field,
                                    const ProtocolConfig& config_in) {
  const ProtocolConfig config = config_in.normalized();
  config.validate();
  if (!(field.space == field_space(config.params)))
    throw DimensionError("run_absorber: field space mismatch");
  const double pi = std::numbers::pi;
  const HilbertSpace space = absorber_space(config.params);

  Matrix ground = Matrix::Zero(atom2::kDim, atom2::kDim);
  ground(atom2::kG, atom2::kG) = 1.0;
  DensityOperator rho{space, kron(ground, field.matrix)};

  const double area_a =
      config.scheme == Scheme::AntisymmetricAbsorber ? 3 * pi : pi;
  rho = jc_pulse(rho, {atom2::kE, atom2::kG, PulseTarget::ModeA, area_a,
                       kDrivePhase});
  rho = jc_pulse(rho, {atom2::kE, atom2::kG, PulseTarget::ModeB, pi / 2,
                       kDrivePhase});
  rho = level_phase(rho, atom2::kE, -config.phi2);

  const Matrix number_a = embed(fock_number(config.params.mode_dim), space, 1);
  const double residual = (number_a * rho.matrix).trace().real();
  if (residual > kModeAVacuumTolerance)
    throw SequencingError(
        "run_absorber: cavity A retains population after the pulse sequence");
  return partial_trace(rho, {0, 2});
}

/// (p_e, p_g) of the probe atom; input lives on (atom2, mode B) or any
/// space with the atom as factor 0.
inline std::pair<double, double> measure_atom2(const DensityOperator& state) {
  const auto outcomes =
      project_measure(state, level_projectors(state.space, 0));
  return {outcomes[atom2::kE].probability, outcomes[atom2::kG].probability};
}

/// Full gate-level pipeline; P_xy = p(atom1 = x) * p(atom2 = y | x).
inline JointProbabilities joint_probabilities(const ProtocolConfig& config_in) {
  const ProtocolConfig config = config_in.normalized();
  config.validate();
  const Atom1Branches branches = measure_atom1(run_first_atom(config));

  JointProbabilities probs;
  const auto fill = [&](double p1, const std::optional<DensityOperator>& field,
                        double& p_first_e, double& p_first_g) {
    if (!field) return;  // unrealizable branch contributes nothing
    const DensityOperator evolved =
        bath_interval(*field, config.params, config.tau);
    const auto [pe, pg] = measure_atom2(run_absorber(evolved, config));
    p_first_e = p1 * pe;
    p_first_g = p1 * pg;
  };
  fill(branches.p_e, branches.field_e, probs.p_ee, probs.p_eg);
  fill(branches.p_g, branches.field_g, probs.p_ge, probs.p_gg);
  return probs;
}

}  // namespace eraser

#endif  // ERASER_PROTOCOL_HPP
