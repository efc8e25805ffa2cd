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

#include <catch2/catch_amalgamated.hpp>

#include "eraser/qcore.hpp"
#include "eraser/rng.hpp"

using namespace eraser;

namespace {

Matrix random_square(DeterministicRng& rng, Index dim) {
  Matrix m(dim, dim);
  for (Index r = 0; r < dim; ++r)
    for (Index c = 0; c < dim; ++c) m(r, c) = Cplx(rng.normal(), rng.normal());
  return m;
}

DensityOperator random_density(DeterministicRng& rng,
                               const HilbertSpace& space) {
  Matrix g = random_square(rng, space.dim());
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return {space, std::move(m)};
}

}  // namespace

TEST_CASE("fock_annihilation matrix elements", "[qcore]") {
  const Matrix a2 = fock_annihilation(2);
  REQUIRE(a2(0, 1) == Cplx(1.0));
  REQUIRE(a2(0, 0) == Cplx(0.0));
  REQUIRE(a2(1, 0) == Cplx(0.0));
  REQUIRE(a2(1, 1) == Cplx(0.0));

  const Matrix a3 = fock_annihilation(3);
  REQUIRE(std::abs(a3(1, 2).real() - 1.4142135623730951) < 1e-15);
  REQUIRE(a3(0, 2) == Cplx(0.0));

  SECTION("number operator eigenstate") {
    const Matrix n = fock_number(4);
    CVector one = CVector::Zero(4);
    one[1] = 1.0;
    REQUIRE((n * one - one).cwiseAbs().maxCoeff() < 1e-15);
  }

  SECTION("invalid dimension") {
    REQUIRE_THROWS_AS(fock_annihilation(1), DimensionError);
    REQUIRE_THROWS_AS(fock_annihilation(0), DimensionError);
  }
}

TEST_CASE("truncated commutator [a, a+] = I except in the top level",
          "[qcore]") {
  for (const Index dim : {2, 3, 4, 5}) {
    const Matrix a = fock_annihilation(dim);
    const Matrix comm = a * a.adjoint() - a.adjoint() * a;
    // levels 0..dim-2 carry the canonical commutator
    for (Index n = 0; n + 1 < dim; ++n) {
      REQUIRE(std::abs(comm(n, n) - Cplx(1.0)) < 1e-14);
    }
    // truncation defect: the top level absorbs -(dim-1) instead of +1
    REQUIRE(std::abs(comm(dim - 1, dim - 1) - Cplx(1.0 - dim)) < 1e-12);
  }
}

TEST_CASE("tensor products", "[qcore]") {
  const Matrix i2 = Matrix::Identity(2, 2);

  SECTION("identity case") {
    REQUIRE(approx_equal(tensor({i2, i2}), Matrix::Identity(4, 4), 0.0));
  }

  SECTION("acts on first factor only") {
    const Matrix op = tensor({fock_annihilation(2), i2});
    CVector ten = CVector::Zero(4);
    ten[2] = 1.0;  // |1> (x) |0>
    const CVector out = op * ten;
    REQUIRE(std::abs(out[0] - Cplx(1.0)) < 1e-15);  // |0> (x) |0>
    REQUIRE(out.tail(3).cwiseAbs().maxCoeff() < 1e-15);
  }

  SECTION("Kronecker block structure") {
    Matrix sigma = Matrix::Zero(2, 2);
    sigma(0, 1) = 1.0;
    const Matrix op = tensor({sigma, i2});
    for (Index r = 0; r < 4; ++r)
      for (Index c = 0; c < 4; ++c) {
        const bool expected = (r == 0 && c == 2) || (r == 1 && c == 3);
        REQUIRE((std::abs(op(r, c)) > 0.5) == expected);
      }
  }

  SECTION("non-square operand is rejected") {
    REQUIRE_THROWS_AS(tensor({Matrix::Zero(2, 3)}), DimensionError);
    REQUIRE_THROWS_AS(tensor({}), DimensionError);
  }

  SECTION("associativity on random operands") {
    DeterministicRng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix x = random_square(rng, 2);
      const Matrix y = random_square(rng, 3);
      const Matrix z = random_square(rng, 2);
      REQUIRE(approx_equal(kron(kron(x, y), z), tensor({x, y, z}), 1e-12));
      REQUIRE(approx_equal(kron(x, kron(y, z)), tensor({x, y, z}), 1e-12));
    }
  }
}

TEST_CASE("HilbertSpace validation", "[qcore]") {
  REQUIRE_THROWS_AS(HilbertSpace({}), DimensionError);
  REQUIRE_THROWS_AS(HilbertSpace({2, 1}), DimensionError);
  const HilbertSpace space({4, 2, 3});
  REQUIRE(space.dim() == 24);
  REQUIRE(space.num_factors() == 3);
}

TEST_CASE("partial_trace", "[qcore]") {
  const HilbertSpace two_modes({2, 2});

  SECTION("product state") {
    const StateVector psi = basis_state(two_modes, {0, 1});  // |0_A 1_B>
    const DensityOperator reduced =
        partial_trace(pure_density(psi), {0});
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 1.0;
    REQUIRE(approx_equal(reduced.matrix, expected, 1e-14));
  }

  SECTION("Bell state reduces to the maximally mixed state") {
    CVector amps = CVector::Zero(4);
    amps[0] = amps[3] = 1.0 / std::sqrt(2.0);
    const DensityOperator rho = pure_density({two_modes, amps});
    for (const std::size_t keep : {std::size_t{0}, std::size_t{1}}) {
      const DensityOperator reduced = partial_trace(rho, {keep});
      REQUIRE(approx_equal(reduced.matrix, Matrix::Identity(2, 2) / 2.0,
                           1e-14));
    }
  }

  SECTION("single-photon branch state: kept mode-A population") {
    // (zeta |10> + eta |01>)(H.c.) + (1 - |zeta|^2 - |eta|^2)|00><00|
    // at phi1 = 0, k = 1, k_c = 0.5, tau = 0.4: zeta = eta = e^{-0.6}/sqrt(2).
    const double zeta = 0.3880684294761698;
    const double eta = zeta;
    CVector bracket = CVector::Zero(4);
    bracket[2] = zeta;
    bracket[1] = eta;
    Matrix m = bracket * bracket.adjoint();
    m(0, 0) = 1.0 - zeta * zeta - eta * eta;
    const DensityOperator rho{two_modes, m};
    const DensityOperator mode_a = partial_trace(rho, {0});
    REQUIRE(std::abs(mode_a.matrix(1, 1).real() - 0.15059710595610107) <
            1e-12);
    REQUIRE(std::abs(mode_a.matrix.trace().real() - 1.0) < 1e-12);
  }

  SECTION("keeping every factor returns the operator unchanged") {
    DeterministicRng rng(11);
    const HilbertSpace space({2, 3, 2});
    const DensityOperator rho = random_density(rng, space);
    const DensityOperator same = partial_trace(rho, {0, 1, 2});
    REQUIRE(approx_equal(same.matrix, rho.matrix, 1e-14));
  }

  SECTION("trace preserved on random states and subsets") {
    DeterministicRng rng(13);
    const HilbertSpace space({2, 2, 3});
    for (int trial = 0; trial < 25; ++trial) {
      const DensityOperator rho = random_density(rng, space);
      for (const std::vector<std::size_t>& keep :
           {std::vector<std::size_t>{0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1}}) {
        const DensityOperator reduced = partial_trace(rho, keep);
        REQUIRE(std::abs(reduced.matrix.trace().real() - 1.0) < 1e-12);
      }
    }
  }

  SECTION("index errors") {
    DeterministicRng rng(17);
    const DensityOperator rho = random_density(rng, two_modes);
    REQUIRE_THROWS_AS(partial_trace(rho, {}), DimensionError);
    REQUIRE_THROWS_AS(partial_trace(rho, {2}), DimensionError);
    REQUIRE_THROWS_AS(partial_trace(rho, {0, 0}), DimensionError);
  }
}

TEST_CASE("project_measure", "[qcore]") {
  const HilbertSpace space({2, 2});

  SECTION("projector eigenstate: probability one, state unchanged") {
    const StateVector psi = basis_state(space, {1, 0});
    const DensityOperator rho = pure_density(psi);
    const auto outcomes = project_measure(rho, level_projectors(space, 0));
    REQUIRE(std::abs(outcomes[1].probability - 1.0) < 1e-12);
    REQUIRE(outcomes[1].state.has_value());
    REQUIRE(approx_equal(outcomes[1].state->matrix, rho.matrix, 1e-12));
    REQUIRE(outcomes[0].probability < 1e-15);
    REQUIRE_FALSE(outcomes[0].state.has_value());  // below the floor
  }

  SECTION("probabilities are a distribution on random states") {
    DeterministicRng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
      const DensityOperator rho = random_density(rng, space);
      const std::size_t factor = trial % 2;
      const auto outcomes =
          project_measure(rho, level_projectors(space, factor));
      double sum = 0.0;
      for (const auto& out : outcomes) {
        REQUIRE(out.probability >= -1e-12);
        sum += out.probability;
        if (out.state) {
          REQUIRE(std::abs(out.state->matrix.trace().real() - 1.0) < 1e-10);
        }
      }
      REQUIRE(std::abs(sum - 1.0) < 1e-12);
    }
  }

  SECTION("incomplete projector set") {
    DeterministicRng rng(29);
    const DensityOperator rho = random_density(rng, space);
    auto projectors = level_projectors(space, 0);
    projectors.pop_back();
    REQUIRE_THROWS_AS(project_measure(rho, projectors), CompletenessError);
    REQUIRE_THROWS_AS(project_measure(rho, {}), CompletenessError);
  }
}

TEST_CASE("density validity checks", "[qcore]") {
  const HilbertSpace space({2});
  Matrix good = Matrix::Zero(2, 2);
  good(0, 0) = 0.75;
  good(1, 1) = 0.25;
  REQUIRE(is_valid_density({space, good}, 1e-10, 1e-9));

  Matrix traceless = good;
  traceless(0, 0) = 0.5;
  traceless(1, 1) = 0.25;
  REQUIRE_FALSE(is_valid_density({space, traceless}, 1e-10, 1e-9));

  Matrix nonhermitian = good;
  nonhermitian(0, 1) = 0.1;
  REQUIRE_FALSE(is_valid_density({space, nonhermitian}, 1e-10, 1e-9));

  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  REQUIRE_FALSE(is_valid_density({space, negative}, 1e-10, 1e-9));
  REQUIRE_THROWS_AS(assert_valid_density({space, negative}, 1e-10, 1e-9),
                    DomainError);
}
