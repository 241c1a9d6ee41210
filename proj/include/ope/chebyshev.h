// Copyright 2026 The minimax-ope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ope/bandit.h"
#include "ope/estimators.h"

namespace ope {

/// 50 significant decimal digits; used for the polynomial expansion, whose
/// shifted-basis coefficients alternate in sign and grow like (4/r)^j.
using ExtendedFloat = boost::multiprecision::cpp_bin_float_50;

inline constexpr double kDefaultC0 = 0.2;
inline constexpr double kDefaultC1 = 4.0;

/// Parameters of the bias-corrected estimator: the polynomial approximates
/// zero on [ell, r] subject to P(0) = -1.
struct ChebyshevConfig {
  double nu = 0.0;              // minimum exploration probability
  double ell = 0.0;             // left endpoint, = nu
  double r = 1.0;               // right endpoint
  std::size_t degree_L = 1;
  std::size_t n = 1;            // sample size / Poisson rate
  double c0 = kDefaultC0;
  double c1 = kDefaultC1;

  /// L = max(1, ceil(c0 ln k)), r = min(1, c1 ln k / n), ell = nu. The result
  /// may have ell >= r, in which case the estimator reduces to plug-in.
  static ChebyshevConfig from_constants(double nu, std::size_t k, std::size_t n,
                                        double c0 = kDefaultC0, double c1 = kDefaultC1);

  bool falls_back_to_plug_in() const { return !(ell < r); }

  /// Throws DegenerateInterval when r <= ell, InvalidArgument for the rest.
  void validate() const;
};

class ChebyshevWeights {
 public:
  /// Degree-0 weights P = -1: g(0) = 0 and g(j) = 1 otherwise, i.e. plug-in.
  static ChebyshevWeights plug_in(std::size_t n);

  std::size_t degree() const { return coeffs_.size() - 1; }
  std::size_t n() const { return n_; }
  bool plug_in_fallback() const { return plug_in_fallback_; }

  /// Monomial coefficients a_0..a_L of P_L; a_0 == -1 exactly.
  const std::vector<ExtendedFloat>& coeffs() const { return coeffs_; }
  int coeff_sign(std::size_t j) const;
  ExtendedFloat coeff_log_magnitude(std::size_t j) const;

  /// Q_L at the image of x = 0, i.e. Q_L((-r - ell) / (r - ell)).
  const ExtendedFloat& normalizer() const { return normalizer_; }

  /// g_L(j) for j <= L (double precision).
  const std::vector<double>& g_table() const { return g_table_; }
  double g(std::size_t j) const { return j < g_table_.size() ? g_table_[j] : 1.0; }

  /// Horner evaluation of P_L in extended precision.
  ExtendedFloat evaluate(const ExtendedFloat& x) const;

 private:
  friend ChebyshevWeights chebyshev_coefficients(const ChebyshevConfig& config);
  ChebyshevWeights(std::vector<ExtendedFloat> coeffs, ExtendedFloat normalizer,
                   std::size_t n, bool fallback);

  std::vector<ExtendedFloat> coeffs_;
  ExtendedFloat normalizer_;
  std::vector<double> g_table_;
  std::size_t n_;
  bool plug_in_fallback_;
};

/// Expands P_L(x) = -Q_L(alpha x + beta) / Q_L(beta) with alpha = 2/(r-ell),
/// beta = -(r+ell)/(r-ell) through the three-term recurrence, then fills
/// g_L(j) = a_j j!/n^j + 1 via sign and log-magnitude.
ChebyshevWeights chebyshev_coefficients(const ChebyshevConfig& config);

/// chebyshev_coefficients, or plug-in weights when the config is degenerate.
ChebyshevWeights chebyshev_weights_or_plug_in(const ChebyshevConfig& config);

struct ChebyshevEstimate {
  double value = 0.0;
  // Set for multinomial data; the weights are derived for Poisson counts.
  bool model_mismatch = false;
};

/// sum_a target(a) rhat(a) g_L(n(a)).
ChebyshevEstimate chebyshev_estimate(const Dataset& data, const Policy& target,
                                     const ChebyshevWeights& weights);
double chebyshev_estimate(const ArmStatistics& stats, const Policy& target,
                          const ChebyshevWeights& weights);

/// Exact Poisson-model bias sum_a target(a) r_f(a) e^{-n behavior(a)} P_L(behavior(a)).
double chebyshev_bias_oracle(const BanditInstance& instance, const ChebyshevWeights& weights,
                             std::size_t n);

struct DelocalizationReport {
  double gamma = 0.0;     // sum target^2 = k^{-gamma}
  bool c0_within_bound = false;  // c0 <= gamma / 7
};

DelocalizationReport target_delocalization(const Policy& target, double c0);

}  // namespace ope
