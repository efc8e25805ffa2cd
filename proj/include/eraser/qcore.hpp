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

#ifndef ERASER_QCORE_HPP
#define ERASER_QCORE_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "eraser/errors.hpp"
#include "eraser/linalg.hpp"

namespace eraser {

/// Ordered list of subsystem dimensions of a composite Hilbert space.
/// Factor 0 varies slowest in the composite basis index, matching kron():
/// |l0, l1, ...> has flat index ((l0*d1 + l1)*d2 + l2)*...
class HilbertSpace {
 public:
  explicit HilbertSpace(std::vector<Index> factors)
      : factors_(std::move(factors)) {
    if (factors_.empty())
      throw DimensionError("HilbertSpace: at least one factor required");
    for (Index d : factors_)
      if (d < 2) throw DimensionError("HilbertSpace: factor dimension < 2");
    dim_ = std::accumulate(factors_.begin(), factors_.end(), Index{1},
                           std::multiplies<>());
  }

  const std::vector<Index>& factors() const { return factors_; }
  std::size_t num_factors() const { return factors_.size(); }
  Index factor(std::size_t i) const { return factors_.at(i); }
  Index dim() const { return dim_; }

  bool operator==(const HilbertSpace& other) const {
    return factors_ == other.factors_;
  }

 private:
  std::vector<Index> factors_;
  Index dim_;
};

struct StateVector {
  HilbertSpace space;
  CVector amplitudes;

  StateVector(HilbertSpace s, CVector a)
      : space(std::move(s)), amplitudes(std::move(a)) {
    if (amplitudes.size() != space.dim())
      throw DimensionError("StateVector: amplitude length != space dimension");
  }

  double norm() const { return amplitudes.norm(); }
};

struct DensityOperator {
  HilbertSpace space;
  Matrix matrix;

  DensityOperator(HilbertSpace s, Matrix m)
      : space(std::move(s)), matrix(std::move(m)) {
    if (matrix.rows() != space.dim() || matrix.cols() != space.dim())
      throw DimensionError("DensityOperator: matrix shape != space dimension");
  }

  double trace_real() const { return matrix.trace().real(); }
};

inline DensityOperator pure_density(const StateVector& psi) {
  return {psi.space, psi.amplitudes * psi.amplitudes.adjoint()};
}

/// Basis state |levels[0], levels[1], ...> of the given space.
inline StateVector basis_state(const HilbertSpace& space,
                               const std::vector<Index>& levels) {
  if (levels.size() != space.num_factors())
    throw DimensionError("basis_state: one level per factor required");
  Index idx = 0;
  for (std::size_t f = 0; f < levels.size(); ++f) {
    if (levels[f] < 0 || levels[f] >= space.factor(f))
      throw DimensionError("basis_state: level out of range");
    idx = idx * space.factor(f) + levels[f];
  }
  CVector amps = CVector::Zero(space.dim());
  amps[idx] = 1.0;
  return {space, std::move(amps)};
}

/// Checks Hermiticity, unit trace and positivity of a density operator.
/// `eig_floor` bounds how negative the smallest eigenvalue may be.
inline bool is_valid_density(const DensityOperator& rho, double tol,
                             double eig_floor) {
  if (!is_hermitian(rho.matrix, tol)) return false;
  if (std::abs(rho.matrix.trace() - Cplx{1.0}) > tol) return false;
  return min_eigenvalue(rho.matrix) >= -eig_floor;
}

inline void assert_valid_density(const DensityOperator& rho, double tol,
                                 double eig_floor) {
  if (!is_valid_density(rho, tol, eig_floor))
    throw DomainError("density operator violates Hermiticity/trace/positivity");
}

/// Truncated bosonic annihilation operator: M[n-1, n] = sqrt(n).
/// On the truncated ladder [a, a†] = I holds except in the top level.
inline Matrix fock_annihilation(Index dim) {
  if (dim < 2) throw DimensionError("fock_annihilation: dim must be >= 2");
  Matrix m = Matrix::Zero(dim, dim);
  for (Index n = 1; n < dim; ++n) m(n - 1, n) = std::sqrt(double(n));
  return m;
}

inline Matrix fock_number(Index dim) {
  const Matrix a = fock_annihilation(dim);
  return a.adjoint() * a;
}

/// Kronecker product of the operands in the declared factor order.
inline Matrix tensor(const std::vector<Matrix>& ops) {
  if (ops.empty()) throw DimensionError("tensor: no operands");
  for (const Matrix& op : ops)
    if (op.rows() != op.cols())
      throw DimensionError("tensor: operand is not square");
  Matrix out = ops.front();
  for (std::size_t i = 1; i < ops.size(); ++i) out = kron(out, ops[i]);
  return out;
}

/// Embeds a single-factor operator into the composite space:
/// I ⊗ ... ⊗ op ⊗ ... ⊗ I with op at position `factor`.
inline Matrix embed(const Matrix& op, const HilbertSpace& space,
                    std::size_t factor) {
  if (factor >= space.num_factors())
    throw DimensionError("embed: factor index out of range");
  if (op.rows() != space.factor(factor) || op.cols() != space.factor(factor))
    throw DimensionError("embed: operator does not match factor dimension");
  std::vector<Matrix> ops;
  ops.reserve(space.num_factors());
  for (std::size_t f = 0; f < space.num_factors(); ++f)
    ops.push_back(f == factor
                      ? op
                      : Matrix::Identity(space.factor(f), space.factor(f)));
  return tensor(ops);
}

/// Reduced density operator on the kept factors (original order preserved).
inline DensityOperator partial_trace(const DensityOperator& rho,
                                     const std::vector<std::size_t>& keep) {
  const std::size_t nf = rho.space.num_factors();
  if (keep.empty()) throw DimensionError("partial_trace: empty keep set");
  std::vector<bool> kept(nf, false);
  for (std::size_t f : keep) {
    if (f >= nf) throw DimensionError("partial_trace: factor index out of range");
    if (kept[f]) throw DimensionError("partial_trace: duplicate factor index");
    kept[f] = true;
  }

  // Strides of each factor in the flat composite index.
  std::vector<Index> stride(nf);
  Index s = 1;
  for (std::size_t f = nf; f-- > 0;) {
    stride[f] = s;
    s *= rho.space.factor(f);
  }

  std::vector<Index> keep_dims, keep_strides, trace_dims, trace_strides;
  for (std::size_t f = 0; f < nf; ++f) {
    if (kept[f]) {
      keep_dims.push_back(rho.space.factor(f));
      keep_strides.push_back(stride[f]);
    } else {
      trace_dims.push_back(rho.space.factor(f));
      trace_strides.push_back(stride[f]);
    }
  }

  const auto flatten = [](const std::vector<Index>& dims,
                          const std::vector<Index>& strides, Index ordinal) {
    Index flat = 0;
    for (std::size_t f = dims.size(); f-- > 0;) {
      flat += (ordinal % dims[f]) * strides[f];
      ordinal /= dims[f];
    }
    return flat;
  };

  const Index kd = std::accumulate(keep_dims.begin(), keep_dims.end(),
                                   Index{1}, std::multiplies<>());
  const Index td = rho.space.dim() / kd;

  Matrix out = Matrix::Zero(kd, kd);
  for (Index r = 0; r < kd; ++r) {
    const Index rbase = flatten(keep_dims, keep_strides, r);
    for (Index c = 0; c < kd; ++c) {
      const Index cbase = flatten(keep_dims, keep_strides, c);
      Cplx sum = 0.0;
      for (Index t = 0; t < td; ++t) {
        const Index off = flatten(trace_dims, trace_strides, t);
        sum += rho.matrix(rbase + off, cbase + off);
      }
      out(r, c) = sum;
    }
  }
  return {HilbertSpace(keep_dims), std::move(out)};
}

/// One branch of a projective measurement. `state` is empty when the
/// outcome probability is below the realizability floor.
struct MeasurementOutcome {
  double probability = 0.0;
  std::optional<DensityOperator> state;
};

/// Probability floor below which a conditional state is marked unrealizable.
inline constexpr double kProbabilityFloor = 1e-12;

/// Projective measurement: p_i = Tr(P_i rho), conditional P_i rho P_i / p_i.
/// The projector set must resolve the identity within `tol`.
inline std::vector<MeasurementOutcome> project_measure(
    const DensityOperator& rho, const std::vector<Matrix>& projectors,
    double tol = default_tolerance()) {
  if (projectors.empty())
    throw CompletenessError("project_measure: empty projector set");
  Matrix sum = Matrix::Zero(rho.space.dim(), rho.space.dim());
  for (const Matrix& p : projectors) {
    if (p.rows() != rho.space.dim() || p.cols() != rho.space.dim())
      throw DimensionError("project_measure: projector shape mismatch");
    sum += p;
  }
  if (!approx_equal(sum, Matrix::Identity(rho.space.dim(), rho.space.dim()),
                    tol))
    throw CompletenessError(
        "project_measure: projectors do not sum to the identity");

  std::vector<MeasurementOutcome> outcomes;
  outcomes.reserve(projectors.size());
  for (const Matrix& p : projectors) {
    MeasurementOutcome out;
    out.probability = (p * rho.matrix).trace().real();
    if (out.probability >= kProbabilityFloor) {
      Matrix cond = p * rho.matrix * p / out.probability;
      out.state = DensityOperator{rho.space, std::move(cond)};
    }
    outcomes.push_back(std::move(out));
  }
  return outcomes;
}

/// Full-space projectors |l><l| ⊗ I for every level l of one factor.
inline std::vector<Matrix> level_projectors(const HilbertSpace& space,
                                            std::size_t factor) {
  if (factor >= space.num_factors())
    throw DimensionError("level_projectors: factor index out of range");
  const Index d = space.factor(factor);
  std::vector<Matrix> projectors;
  projectors.reserve(d);
  for (Index l = 0; l < d; ++l) {
    Matrix p = Matrix::Zero(d, d);
    p(l, l) = 1.0;
    projectors.push_back(embed(p, space, factor));
  }
  return projectors;
}

}  // namespace eraser

#endif  // ERASER_QCORE_HPP
