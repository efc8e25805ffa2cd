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

#ifndef ERASER_LINALG_HPP
#define ERASER_LINALG_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdlib>

#include "eraser/errors.hpp"

namespace eraser {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Default absolute tolerance for invariant checks. 1e-10 unless the
/// ERASER_SIM_TOLERANCE environment variable supplies another value.
inline double default_tolerance() {
  static const double tol = [] {
    if (const char* env = std::getenv("ERASER_SIM_TOLERANCE")) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end != env && v > 0.0) return v;
    }
    return 1e-10;
  }();
  return tol;
}

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs(a - b) <= tol;
}

inline bool is_hermitian(const Matrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

/// Smallest eigenvalue of the Hermitian part of m.
inline double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
  return es.eigenvalues().minCoeff();
}

/// Kronecker product, row-major block convention:
/// (a ⊗ b)[i*rb + k, j*cb + l] = a[i,j] * b[k,l].
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Column-stacking vectorization, fixed project-wide:
//   vec(M)[j*n + i] = M[i, j],   vec(A X B) = (B^T ⊗ A) vec(X).
inline CVector vec(const Matrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

inline Matrix unvec(const CVector& v, Index n) {
  if (v.size() != n * n) throw DimensionError("unvec: size is not n*n");
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

namespace detail {

// Pade(13,13) numerator coefficients for exp(x).
inline constexpr double kPade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

// ||A||_1 <= theta_13 keeps the Pade(13,13) backward error below eps.
inline constexpr double kTheta13 = 5.371920351148152;

}  // namespace detail

/// Matrix exponential by scaling-and-squaring with a Pade(13,13) kernel
/// (Higham 2005). Dense, suitable for the <= 256x256 operators used here.
inline Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("expm: matrix must be square");
  const Index n = a.rows();
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();

  int squarings = 0;
  if (norm1 > detail::kTheta13) {
    squarings = static_cast<int>(
        std::ceil(std::log2(norm1 / detail::kTheta13)));
  }
  const Matrix as = a / std::pow(2.0, squarings);

  const auto& b = detail::kPade13;
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = as * as;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a2 * a4;
  const Matrix u =
      as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
            b[5] * a4 + b[3] * a2 + b[1] * id);
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                   b[4] * a4 + b[2] * a2 + b[0] * id;

  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

}  // namespace eraser

#endif  // ERASER_LINALG_HPP
