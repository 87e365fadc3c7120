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
#include "opekit/spline.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "opekit/error.h"
#include "opekit/kernels.h"

namespace opekit::spline {

namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

bool IsDegenerate(double lo, double hi) { return hi - lo < kDegenerateRange; }

}  // namespace

std::vector<double> DefaultLambdaGrid() {
  constexpr int kPoints = 25;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    grid[i] = std::pow(10.0, -4.0 + 8.0 * i / (kPoints - 1));
  }
  return grid;
}

int DefaultSegments(std::size_t n) {
  const int root = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  return std::max(5, std::min(root, 40));
}

void SplineSpec::Validate(std::optional<int> resolved_segments) const {
  if (degree < 0 || degree > kMaxDegree) {
    throw Error(ErrorCode::kInvalidArgument,
                "degree must be in [0, " + std::to_string(kMaxDegree) + "]");
  }
  const std::optional<int> j = segments ? segments : resolved_segments;
  if (j && *j < 1) {
    throw Error(ErrorCode::kInvalidArgument, "segments must be >= 1");
  }
  if (penalty_order < 1) {
    throw Error(ErrorCode::kInvalidArgument, "penalty_order must be >= 1");
  }
  if (j && penalty_order > *j + degree - 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "penalty_order " + std::to_string(penalty_order) +
                    " exceeds segments + degree - 1 = " +
                    std::to_string(*j + degree - 1));
  }
  if (lambda_fixed) {
    if (!(*lambda_fixed > 0.0) || !std::isfinite(*lambda_fixed)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "lambda_fixed must be a positive finite value, got " +
                      Num(*lambda_fixed));
    }
    return;
  }
  if (lambda_grid.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "lambda_grid is empty");
  }
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] > 0.0) || !std::isfinite(lambda_grid[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "lambda_grid values must be positive, got " +
                      Num(lambda_grid[i]));
    }
    if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "lambda_grid must be strictly increasing");
    }
  }
}

KnotVector KnotVector::Uniform(double lower, double upper, int segments,
                               int degree) {
  if (segments < 1 || degree < 0 || !(upper > lower)) {
    throw Error(ErrorCode::kInvalidArgument,
                "bad knot vector: [" + Num(lower) + ", " + Num(upper) + "], " +
                    std::to_string(segments) + " segments");
  }
  KnotVector k;
  k.degree_ = degree;
  k.width_ = (upper - lower) / segments;
  k.interior_.resize(segments + 1);
  for (int j = 0; j < segments; ++j) k.interior_[j] = lower + j * k.width_;
  k.interior_[segments] = upper;
  k.full_.reserve(k.interior_.size() + 2 * degree);
  k.full_.insert(k.full_.end(), degree, lower);
  k.full_.insert(k.full_.end(), k.interior_.begin(), k.interior_.end());
  k.full_.insert(k.full_.end(), degree, upper);
  return k;
}

int KnotVector::Interval(double x) const {
  const int last = segments() - 1;
  if (!(x > lower())) return 0;
  if (!(x < upper())) return last;
  int j = static_cast<int>((x - lower()) / width_);
  j = std::clamp(j, 0, last);
  // Division can land one interval off near a knot.
  while (j > 0 && x < interior_[j]) --j;
  while (j < last && x >= interior_[j + 1]) ++j;
  return j;
}

KnotVector BuildKnots(std::span<const double> x, const SplineSpec& spec) {
  if (x.empty()) throw Error(ErrorCode::kEmptyInput, "no regressor values");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::kInvalidArgument, "regressor values must be finite");
  }
  if (IsDegenerate(lo, hi)) {
    const double c = 0.5 * (lo + hi);
    return KnotVector::Uniform(c - kDegenerateHalfWidth, c + kDegenerateHalfWidth,
                               1, spec.degree);
  }
  const int segments = spec.ResolveSegments(x.size());
  spec.Validate(segments);
  if (spec.knot_range == KnotRange::kUnitInterval) {
    return KnotVector::Uniform(std::min(0.0, lo), std::max(1.0, hi), segments,
                               spec.degree);
  }
  const double eps = kRangePadding * (hi - lo);
  return KnotVector::Uniform(lo - eps, hi + eps, segments, spec.degree);
}

std::size_t EvalBasisNonzero(const KnotVector& knots, double x,
                             std::span<double> values) {
  const int p = knots.degree();
  const std::span<const double> u = knots.full();
  const int j = knots.Interval(x);
  const int span = j + p;
  x = std::clamp(x, knots.lower(), knots.upper());

  // Triangular Cox-de Boor scheme over the p+1 functions supported on
  // [u_span, u_span+1).
  double left[kMaxDegree + 1], right[kMaxDegree + 1];
  values[0] = 1.0;
  for (int k = 1; k <= p; ++k) {
    left[k] = x - u[span + 1 - k];
    right[k] = u[span + k] - x;
    double saved = 0.0;
    for (int r = 0; r < k; ++r) {
      const double t = values[r] / (right[r + 1] + left[k - r]);
      values[r] = saved + right[r + 1] * t;
      saved = left[k - r] * t;
    }
    values[k] = saved;
  }
  return static_cast<std::size_t>(j);
}

std::vector<double> EvalBasis(const KnotVector& knots, int degree, double x) {
  if (degree != knots.degree()) {
    throw Error(ErrorCode::kInvalidArgument,
                "degree " + std::to_string(degree) +
                    " does not match the knot vector degree " +
                    std::to_string(knots.degree()));
  }
  std::vector<double> out(knots.dimension(), 0.0);
  std::vector<double> nz(degree + 1);
  const std::size_t first = EvalBasisNonzero(knots, x, nz);
  std::copy(nz.begin(), nz.end(), out.begin() + first);
  return out;
}

Matrix DifferencePenalty(std::size_t dimension, int order) {
  if (order < 1 || static_cast<std::size_t>(order) >= dimension) {
    throw Error(ErrorCode::kInvalidOrder,
                "difference order " + std::to_string(order) +
                    " needs 1 <= order < dimension " + std::to_string(dimension));
  }
  // Row r of D holds the signed binomial coefficients of the order-th
  // difference starting at column r.
  std::vector<double> coef(order + 1);
  coef[0] = 1.0;
  for (int k = 1; k <= order; ++k) {
    for (int j = k; j > 0; --j) coef[j] = coef[j - 1] - coef[j];
    coef[0] = -coef[0];
  }
  Matrix p(dimension, dimension);
  const std::size_t rows = dimension - order;
  for (std::size_t r = 0; r < rows; ++r) {
    for (int a = 0; a <= order; ++a) {
      for (int b = 0; b <= order; ++b) p(r + a, r + b) += coef[a] * coef[b];
    }
  }
  return p;
}

PenalizedProblem::PenalizedProblem(std::span<const double> x,
                                   std::span<const double> y,
                                   const SplineSpec& spec)
    : degree_(spec.degree), y_(y.begin(), y.end()) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "x has " + std::to_string(x.size()) + " values, y has " +
                    std::to_string(y.size()));
  }
  spec.Validate();
  for (double v : y) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "responses must be finite");
    }
  }
  knots_ = BuildKnots(x, spec);
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  x_min_ = *lo_it;
  x_max_ = *hi_it;
  // A single regressor value only supports the constant fit, which any
  // nonempty sample determines.
  degenerate_ = IsDegenerate(x_min_, x_max_);
  if (degenerate_) return;
  const std::size_t min_points = 2 * static_cast<std::size_t>(spec.degree + 1);
  if (x.size() < min_points) {
    throw Error(ErrorCode::kTooFewPoints,
                "need at least " + std::to_string(min_points) + " points, got " +
                    std::to_string(x.size()));
  }

  const std::size_t n = x.size();
  const std::size_t dim = knots_.dimension();
  const std::size_t w = static_cast<std::size_t>(degree_) + 1;
  first_.resize(n);
  basis_.resize(n * w);
  gram_ = Matrix(dim, dim);
  bty_.assign(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<double> b(basis_.data() + i * w, w);
    const std::size_t f = EvalBasisNonzero(knots_, x[i], b);
    first_[i] = f;
    for (std::size_t a = 0; a < w; ++a) {
      bty_[f + a] += b[a] * y[i];
      for (std::size_t c = 0; c < w; ++c) gram_(f + a, f + c) += b[a] * b[c];
    }
  }
  penalty_ = DifferencePenalty(dim, spec.penalty_order);
}

PenalizedProblem::Solution PenalizedProblem::Solve(double lambda) const {
  const std::size_t n = y_.size();
  Solution s;
  if (degenerate_) {
    // The conditional mean of y given a single regressor value is one number.
    const double mean = kernels::Sum(y_) / static_cast<double>(n);
    s.coefficients.assign(knots_.dimension(), mean);
    for (double v : y_) s.rss += (v - mean) * (v - mean);
    s.edf = 1.0;
  } else {
    const std::size_t dim = knots_.dimension();
    Matrix a = gram_;
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) a(r, c) += lambda * penalty_(r, c);
      a(r, r) += kRidgeJitter;
    }
    const auto chol = Cholesky::Factor(a);
    if (!chol) {
      throw Error(ErrorCode::kSingularSystem,
                  "penalized normal matrix is not positive definite at lambda " +
                      Num(lambda));
    }
    s.coefficients = chol->Solve(bty_);
    const Matrix inv = chol->Inverse();
    for (std::size_t r = 0; r < dim; ++r) s.edf += kernels::Dot(inv.row(r), gram_.row(r));
    const std::size_t w = static_cast<std::size_t>(degree_) + 1;
    for (std::size_t i = 0; i < n; ++i) {
      const double fitted = kernels::Dot(
          std::span<const double>(basis_.data() + i * w, w),
          std::span<const double>(s.coefficients.data() + first_[i], w));
      const double e = y_[i] - fitted;
      s.rss += e * e;
    }
  }
  const double dn = static_cast<double>(n);
  s.gcv = s.edf < dn ? dn * s.rss / ((dn - s.edf) * (dn - s.edf))
                     : std::numeric_limits<double>::infinity();
  return s;
}

SplineFit FitPSpline(std::span<const double> x, std::span<const double> y,
                     const SplineSpec& spec) {
  const PenalizedProblem problem(x, y, spec);
  SplineFit fit;
  fit.knots = problem.knots();
  fit.degree = spec.degree;
  fit.constant_fallback = problem.degenerate();
  if (spec.knot_range == KnotRange::kUnitInterval && !problem.degenerate()) {
    fit.train_min = fit.knots.lower();
    fit.train_max = fit.knots.upper();
  } else {
    fit.train_min = problem.x_min();
    fit.train_max = problem.x_max();
  }

  PenalizedProblem::Solution best;
  if (spec.lambda_fixed) {
    fit.lambda = *spec.lambda_fixed;
    best = problem.Solve(fit.lambda);
  } else if (problem.degenerate()) {
    // Every lambda gives the same constant fit.
    fit.lambda = spec.lambda_grid.back();
    best = problem.Solve(fit.lambda);
  } else {
    bool have = false;
    for (double lambda : spec.lambda_grid) {
      PenalizedProblem::Solution s = problem.Solve(lambda);
      if (!have || s.gcv < best.gcv) {
        best = std::move(s);
        fit.lambda = lambda;
        have = true;
      }
    }
  }
  fit.coefficients = std::move(best.coefficients);
  fit.edf = best.edf;
  fit.rss = best.rss;
  return fit;
}

double GcvScore(std::span<const double> x, std::span<const double> y,
                const SplineSpec& spec, double lambda) {
  if (!(lambda > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");
  }
  return PenalizedProblem(x, y, spec).Solve(lambda).gcv;
}

double Predict(const SplineFit& fit, double x) {
  const double xc = std::clamp(x, fit.train_min, fit.train_max);
  double nz[kMaxDegree + 1];
  const std::size_t w = static_cast<std::size_t>(fit.degree) + 1;
  const std::size_t first = EvalBasisNonzero(fit.knots, xc, std::span<double>(nz, w));
  double v = 0.0;
  for (std::size_t a = 0; a < w; ++a) v += nz[a] * fit.coefficients[first + a];
  return v;
}

void PredictMany(const SplineFit& fit, std::span<const double> x,
                 std::span<double> out) {
  if (x.size() != out.size()) {
    throw Error(ErrorCode::kShapeMismatch, "PredictMany output size mismatch");
  }
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = Predict(fit, x[i]);
}

}  // namespace opekit::spline
