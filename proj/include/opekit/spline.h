/*
* Copyright 2026 The ope-kit Authors.
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     https://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
* ============================================================================
*/
// Univariate P-spline regression: clamped B-spline basis on equally spaced
// knots, difference penalty on adjacent coefficients, smoothing parameter
// chosen by generalized cross-validation.
//
//   beta(lambda) = (B'B + lambda D'D + jitter I)^-1 B'y
//   edf(lambda)  = trace((B'B + lambda D'D + jitter I)^-1 B'B)
//   gcv(lambda)  = n rss / (n - edf)^2
#ifndef OPEKIT_SPLINE_H_
#define OPEKIT_SPLINE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "opekit/linalg.h"

namespace opekit::spline {

// Added to the diagonal of every normal matrix.
inline constexpr double kRidgeJitter = 1e-10;
// Regressor ranges narrower than this are treated as a single point.
inline constexpr double kDegenerateRange = 1e-8;
// Half-width of the knot interval used for a degenerate regressor.
inline constexpr double kDegenerateHalfWidth = 1e-6;
// Knots extend past the observed range by this fraction of the range.
inline constexpr double kRangePadding = 1e-9;
// Upper bound on the spline degree; keeps basis evaluation allocation-free.
inline constexpr int kMaxDegree = 20;

enum class KnotRange {
  kObserved,      // knots span the observed regressor range
  kUnitInterval,  // knots span [0, 1] regardless of the data
};

// 25 log-spaced values from 1e-4 to 1e4.
std::vector<double> DefaultLambdaGrid();

// max(5, min(ceil(sqrt(n)), 40)).
int DefaultSegments(std::size_t n);

struct SplineSpec {
  int degree = 3;
  // Number of knot intervals; DefaultSegments(n) when unset.
  std::optional<int> segments;
  int penalty_order = 1;
  std::vector<double> lambda_grid = DefaultLambdaGrid();
  // Skips the grid search when set.
  std::optional<double> lambda_fixed;
  KnotRange knot_range = KnotRange::kObserved;

  // Throws Error(kInvalidArgument) on a malformed spec. `segments` is checked
  // against the resolved value when provided.
  void Validate(std::optional<int> resolved_segments = std::nullopt) const;
  int ResolveSegments(std::size_t n) const {
    return segments.value_or(DefaultSegments(n));
  }
};

// Equally spaced interior knots with `degree` repeated knots at each end.
class KnotVector {
 public:
  KnotVector() = default;
  static KnotVector Uniform(double lower, double upper, int segments, int degree);

  int degree() const { return degree_; }
  int segments() const { return static_cast<int>(interior_.size()) - 1; }
  std::size_t dimension() const {
    return static_cast<std::size_t>(segments() + degree_);
  }
  double lower() const { return interior_.front(); }
  double upper() const { return interior_.back(); }

  std::span<const double> interior() const { return interior_; }
  // Interior knots padded with `degree` copies of each boundary knot.
  std::span<const double> full() const { return full_; }

  // Index j of the interval [k_j, k_{j+1}) holding x; x is clamped into the
  // knot range and the upper boundary belongs to the last interval.
  int Interval(double x) const;

 private:
  int degree_ = 0;
  double width_ = 0.0;
  std::vector<double> interior_;
  std::vector<double> full_;
};

KnotVector BuildKnots(std::span<const double> x, const SplineSpec& spec);

// Writes the degree+1 basis values that can be nonzero at x and returns the
// index of the first of them. `values` must hold degree+1 entries.
std::size_t EvalBasisNonzero(const KnotVector& knots, double x,
                             std::span<double> values);

// Full basis vector (B_1(x), ..., B_{J+d}(x)).
std::vector<double> EvalBasis(const KnotVector& knots, int degree, double x);

// D'D for the order-th difference matrix D of shape (dimension-order) x dimension.
Matrix DifferencePenalty(std::size_t dimension, int order);

struct SplineFit {
  KnotVector knots;
  int degree = 3;
  std::vector<double> coefficients;
  double lambda = 0.0;
  double train_min = 0.0;
  double train_max = 0.0;
  double edf = 0.0;
  double rss = 0.0;
  // True when the regressor range was degenerate and the fit is the sample mean.
  bool constant_fallback = false;
};

// Basis, Gram matrix and penalty for one data set, reusable across lambdas.
class PenalizedProblem {
 public:
  PenalizedProblem(std::span<const double> x, std::span<const double> y,
                   const SplineSpec& spec);

  struct Solution {
    std::vector<double> coefficients;
    double edf = 0.0;
    double rss = 0.0;
    // +inf when edf >= n.
    double gcv = 0.0;
  };

  // Throws Error(kSingularSystem) if the regularized normal matrix is not
  // numerically positive definite.
  Solution Solve(double lambda) const;

  const KnotVector& knots() const { return knots_; }
  std::size_t size() const { return y_.size(); }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  bool degenerate() const { return degenerate_; }

 private:
  int degree_;
  KnotVector knots_;
  std::vector<double> y_;
  double x_min_ = 0.0;
  double x_max_ = 0.0;
  bool degenerate_ = false;
  // Row i of B stored sparsely: degree+1 values starting at column first_[i].
  std::vector<std::size_t> first_;
  std::vector<double> basis_;
  Matrix gram_;
  Matrix penalty_;
  std::vector<double> bty_;
};

SplineFit FitPSpline(std::span<const double> x, std::span<const double> y,
                     const SplineSpec& spec);

// n rss(lambda) / (n - edf(lambda))^2, +inf for a saturated fit.
double GcvScore(std::span<const double> x, std::span<const double> y,
                const SplineSpec& spec, double lambda);

// B(clamp(x, train_min, train_max))' beta.
double Predict(const SplineFit& fit, double x);
void PredictMany(const SplineFit& fit, std::span<const double> x,
                 std::span<double> out);

}  // namespace opekit::spline

#endif  // OPEKIT_SPLINE_H_
