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
#include "opekit/supervised.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <utility>

#include "opekit/error.h"
#include "opekit/kernels.h"

namespace opekit {

namespace {

// Rows [1, x_i].
Matrix Augment(const Matrix& x) {
  Matrix a(x.rows(), x.cols() + 1);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    a(i, 0) = 1.0;
    std::copy(x.row(i).begin(), x.row(i).end(), a.row(i).begin() + 1);
  }
  return a;
}

void CheckFinite(const Matrix& x, const char* what) {
  for (double v : x.values()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + " contains non-finite values");
    }
  }
}

double Norm(std::span<const double> v) { return std::sqrt(kernels::Dot(v, v)); }

double ObjectiveAugmented(const Matrix& xa, std::span<const int> labels,
                          const std::vector<bool>& present, double l2,
                          const Matrix& weights, Matrix* gradient);

}  // namespace

Standardizer Standardizer::Fit(const Matrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "cannot standardize 0 rows");
  Standardizer s;
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) kernels::Axpy(1.0, x.row(i), s.mean);
  for (double& m : s.mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = x(i, j) - s.mean[j];
      s.scale[j] += c * c;
    }
  }
  for (double& v : s.scale) {
    v = std::sqrt(v / static_cast<double>(n));
    if (!(v >= 1e-12)) v = 1.0;
  }
  return s;
}

Matrix Standardizer::Apply(const Matrix& x) const {
  if (x.cols() != mean.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "standardizer fitted on " + std::to_string(mean.size()) +
                    " columns, got " + std::to_string(x.cols()));
  }
  Matrix z(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      z(i, j) = (x(i, j) - mean[j]) / scale[j];
    }
  }
  return z;
}

double LogisticObjective(const Matrix& x, std::span<const int> labels,
                         const std::vector<bool>& present, double l2,
                         const Matrix& weights, Matrix* gradient) {
  if (x.rows() != labels.size() || weights.cols() != x.cols() + 1 ||
      weights.rows() != present.size()) {
    throw Error(ErrorCode::kShapeMismatch, "logistic objective shape mismatch");
  }
  return ObjectiveAugmented(Augment(x), labels, present, l2, weights, gradient);
}

namespace {

// xa already carries the intercept column.
double ObjectiveAugmented(const Matrix& xa, std::span<const int> labels,
                          const std::vector<bool>& present, double l2,
                          const Matrix& weights, Matrix* gradient) {
  const std::size_t n = xa.rows(), k = weights.rows(), p = weights.cols();
  if (gradient) *gradient = Matrix(k, p);
  std::vector<double> score(k);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      score[c] = present[c] ? kernels::Dot(weights.row(c), xa.row(i))
                            : -std::numeric_limits<double>::infinity();
      top = std::max(top, score[c]);
    }
    double z = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      score[c] = present[c] ? std::exp(score[c] - top) : 0.0;
      z += score[c];
    }
    const int y = labels[i];
    loss += std::log(z) - std::log(score[y]);
    if (gradient) {
      for (std::size_t c = 0; c < k; ++c) {
        if (!present[c]) continue;
        const double coef = score[c] / z - (static_cast<int>(c) == y ? 1.0 : 0.0);
        kernels::Axpy(coef, xa.row(i), gradient->row(c));
      }
    }
  }
  double penalty = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = 1; j < p; ++j) penalty += weights(c, j) * weights(c, j);
  }
  const double dn = static_cast<double>(n);
  if (gradient) {
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t j = 0; j < p; ++j) {
        double g = (*gradient)(c, j);
        if (j > 0) g += l2 * weights(c, j);
        (*gradient)(c, j) = g / dn;
      }
    }
  }
  return (loss + 0.5 * l2 * penalty) / dn;
}

}  // namespace

Classifier FitMultinomialLogistic(const Matrix& x, std::span<const int> labels,
                                  std::size_t num_classes,
                                  const LogisticOptions& options) {
  const std::size_t n = x.rows();
  if (labels.size() != n) {
    throw Error(ErrorCode::kShapeMismatch, "one label per row is required");
  }
  if (num_classes < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two classes");
  }
  if (n <= num_classes) {
    throw Error(ErrorCode::kTooFewPoints,
                "logistic regression needs more rows (" + std::to_string(n) +
                    ") than classes (" + std::to_string(num_classes) + ")");
  }
  if (!(options.l2 >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "l2 must be >= 0");
  }
  CheckFinite(x, "features");
  Classifier model;
  model.num_classes = num_classes;
  model.present.assign(num_classes, false);
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) {
      throw Error(ErrorCode::kInvalidArgument,
                  "label " + std::to_string(y) + " out of range");
    }
    model.present[y] = true;
  }
  model.degenerate_labels =
      std::count(model.present.begin(), model.present.end(), true) <
      static_cast<long>(num_classes);

  const Matrix xa = Augment(x);
  const std::size_t dim = num_classes * xa.cols();
  Matrix w(num_classes, xa.cols());
  Matrix g;
  double f = ObjectiveAugmented(xa, labels, model.present, options.l2, w, &g);
  model.loss_trace.push_back(f);

  // L-BFGS with a backtracking Armijo line search; every accepted step
  // lowers the objective.
  std::deque<std::pair<std::vector<double>, std::vector<double>>> memory;
  std::vector<double> dir(dim), alpha_hist;
  Matrix w_new, g_new;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (Norm(g.values()) <= options.gradient_tolerance) break;
    // Two-loop recursion.
    std::copy(g.values().begin(), g.values().end(), dir.begin());
    alpha_hist.assign(memory.size(), 0.0);
    for (std::size_t m = memory.size(); m-- > 0;) {
      const auto& [s, y] = memory[m];
      const double rho = 1.0 / kernels::Dot(y, s);
      alpha_hist[m] = rho * kernels::Dot(s, dir);
      kernels::Axpy(-alpha_hist[m], y, dir);
    }
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      const double gamma = kernels::Dot(s, y) / kernels::Dot(y, y);
      for (double& v : dir) v *= gamma;
    }
    for (std::size_t m = 0; m < memory.size(); ++m) {
      const auto& [s, y] = memory[m];
      const double rho = 1.0 / kernels::Dot(y, s);
      const double beta = rho * kernels::Dot(y, dir);
      kernels::Axpy(alpha_hist[m] - beta, s, dir);
    }
    for (double& v : dir) v = -v;
    double slope = kernels::Dot(g.values(), dir);
    if (!(slope < 0.0)) {
      // Not a descent direction; restart from steepest descent.
      memory.clear();
      for (std::size_t j = 0; j < dim; ++j) dir[j] = -g.values()[j];
      slope = kernels::Dot(g.values(), dir);
    }
    double step = memory.empty() ? std::min(1.0, 1.0 / Norm(g.values())) : 1.0;
    bool accepted = false;
    double f_new = f;
    for (int ls = 0; ls < 60; ++ls) {
      w_new = w;
      kernels::Axpy(step, dir, w_new.values());
      f_new = ObjectiveAugmented(xa, labels, model.present, options.l2, w_new,
                                &g_new);
      if (f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || !(f_new <= f)) break;
    std::vector<double> s(dim), y(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      s[j] = w_new.values()[j] - w.values()[j];
      y[j] = g_new.values()[j] - g.values()[j];
    }
    if (kernels::Dot(s, y) > 1e-16 * Norm(s) * Norm(y)) {
      memory.emplace_back(std::move(s), std::move(y));
      if (memory.size() > static_cast<std::size_t>(options.history)) {
        memory.pop_front();
      }
    }
    w = std::move(w_new);
    g = std::move(g_new);
    f = f_new;
    model.loss_trace.push_back(f);
  }
  model.iterations = it;
  model.converged = Norm(g.values()) <= options.gradient_tolerance;
  model.weights = std::move(w);
  return model;
}

Matrix ClassScores(const Classifier& model, const Matrix& x) {
  if (x.cols() + 1 != model.weights.cols()) {
    throw Error(ErrorCode::kShapeMismatch,
                "classifier expects " + std::to_string(model.weights.cols() - 1) +
                    " features, got " + std::to_string(x.cols()));
  }
  const Matrix xa = Augment(x);
  Matrix s(x.rows(), model.num_classes);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t c = 0; c < model.num_classes; ++c) {
      s(i, c) = model.present[c] ? kernels::Dot(model.weights.row(c), xa.row(i))
                                 : -std::numeric_limits<double>::infinity();
    }
  }
  return s;
}

Matrix PredictProba(const Classifier& model, const Matrix& x) {
  Matrix p = ClassScores(model, x);
  for (std::size_t i = 0; i < p.rows(); ++i) {
    std::span<double> row = p.row(i);
    const double top = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    for (double& v : row) {
      v = std::exp(v - top);
      z += v;
    }
    for (double& v : row) v /= z;
  }
  return p;
}

PolicyMatrix ArgmaxPolicy(const Matrix& scores) {
  Matrix pi(scores.rows(), scores.cols());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    const std::span<const double> row = scores.row(i);
    // max_element returns the first maximum, i.e. the lowest index.
    const std::size_t best =
        static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    pi(i, best) = 1.0;
  }
  return {std::move(pi)};
}

PolicyMatrix ToDeterministicPolicy(const Classifier& model, const Matrix& x) {
  return ArgmaxPolicy(ClassScores(model, x));
}

RidgeModel FitRidgePerAction(const Matrix& x, const Matrix& losses, double l2) {
  const std::size_t n = x.rows();
  if (losses.rows() != n) {
    throw Error(ErrorCode::kShapeMismatch, "one loss row per feature row is required");
  }
  if (n < 2) throw Error(ErrorCode::kTooFewPoints, "ridge needs n > 1");
  if (!(l2 >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "l2 must be >= 0");
  CheckFinite(x, "features");
  CheckFinite(losses, "losses");
  const Matrix xa = Augment(x);
  const std::size_t p = xa.cols(), k = losses.cols();
  Matrix a(p, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < p; ++r) {
      const double v = xa(i, r);
      if (v != 0.0) kernels::Axpy(v, xa.row(i), a.row(r));
    }
  }
  for (std::size_t j = 1; j < p; ++j) a(j, j) += l2;
  const auto chol = Cholesky::Factor(a);
  if (!chol) {
    throw Error(ErrorCode::kSingularSystem,
                "ridge normal matrix is singular; increase l2");
  }
  RidgeModel model;
  model.l2 = l2;
  model.coefficients = Matrix(k, p);
  std::vector<double> rhs(p);
  for (std::size_t c = 0; c < k; ++c) {
    std::fill(rhs.begin(), rhs.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) kernels::Axpy(losses(i, c), xa.row(i), rhs);
    chol->SolveInPlace(rhs);
    std::copy(rhs.begin(), rhs.end(), model.coefficients.row(c).begin());
  }
  return model;
}

RewardPredictions PredictRewards(const RidgeModel& model, const Matrix& x) {
  if (x.cols() + 1 != model.coefficients.cols()) {
    throw Error(ErrorCode::kShapeMismatch,
                "ridge model expects " +
                    std::to_string(model.coefficients.cols() - 1) +
                    " features, got " + std::to_string(x.cols()));
  }
  const Matrix xa = Augment(x);
  RewardPredictions mu{Matrix(x.rows(), model.coefficients.rows())};
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t c = 0; c < model.coefficients.rows(); ++c) {
      mu.mu_hat(i, c) = kernels::Dot(model.coefficients.row(c), xa.row(i));
    }
  }
  return mu;
}

}  // namespace opekit
