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

#ifndef ERASER_OUTCOMES_HPP
#define ERASER_OUTCOMES_HPP

#include <array>
#include <cmath>
#include <string>

#include "eraser/errors.hpp"

namespace eraser {

/// Which normal mode of the field the second atom absorbs.
enum class Scheme {
  AntisymmetricAbsorber,  // three pi pulses in cavity A (scheme 1)
  SymmetricAbsorber,      // one pi pulse in cavity A (scheme 2)
};

inline std::string to_string(Scheme s) {
  return s == Scheme::AntisymmetricAbsorber ? "anti" : "sym";
}

inline Scheme scheme_from_string(const std::string& s) {
  if (s == "anti") return Scheme::AntisymmetricAbsorber;
  if (s == "sym") return Scheme::SymmetricAbsorber;
  throw ConfigError("unknown scheme '" + s + "' (expected anti|sym)");
}

/// Joint measurement outcome (atom1, atom2); fixed storage order.
enum Outcome : int { kEE = 0, kEG = 1, kGE = 2, kGG = 3 };

inline constexpr std::array<const char*, 4> kOutcomeNames = {"ee", "eg", "ge",
                                                             "gg"};

/// The four joint outcome probabilities of one scheme.
struct JointProbabilities {
  double p_ee = 0.0;
  double p_eg = 0.0;
  double p_ge = 0.0;
  double p_gg = 0.0;

  double operator[](int outcome) const {
    switch (outcome) {
      case kEE: return p_ee;
      case kEG: return p_eg;
      case kGE: return p_ge;
      case kGG: return p_gg;
      default: throw DomainError("JointProbabilities: outcome out of range");
    }
  }

  double sum() const { return p_ee + p_eg + p_ge + p_gg; }

  /// Each in [0,1], total 1, and the first-atom marginal unbiased:
  /// p_ee + p_eg = p_ge + p_gg = 1/2.
  bool valid(double tol) const {
    for (int o = 0; o < 4; ++o)
      if ((*this)[o] < -tol || (*this)[o] > 1.0 + tol) return false;
    if (std::abs(sum() - 1.0) > tol) return false;
    return std::abs(p_ee + p_eg - 0.5) <= tol &&
           std::abs(p_ge + p_gg - 0.5) <= tol;
  }
};

inline double max_probability_diff(const JointProbabilities& a,
                                   const JointProbabilities& b) {
  double worst = 0.0;
  for (int o = 0; o < 4; ++o)
    worst = std::max(worst, std::abs(a[o] - b[o]));
  return worst;
}

}  // namespace eraser

#endif  // ERASER_OUTCOMES_HPP
