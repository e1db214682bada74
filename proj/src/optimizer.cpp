// Copyright 2026 The tbvqd Authors
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

#include "tbvqd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace tbvqd {
namespace {

class CountingObjective {
 public:
  explicit CountingObjective(const Objective& f) : f_(f) {}

  double operator()(const std::vector<double>& x) {
    const double v = f_(std::span<const double>(x.data(), x.size()));
    ++evaluations;
    if (!std::isfinite(v)) {
      std::string where;
      for (std::size_t i = 0; i < x.size(); ++i) where += fmt::format("{}{:.6g}", i ? ", " : "", x[i]);
      throw NumericalError(fmt::format("objective returned {} at x = [{}] (evaluation {})", v, where, evaluations));
    }
    return v;
  }

  int evaluations = 0;

 private:
  const Objective& f_;
};

Eigen::VectorXd step_for_shift(const Eigen::VectorXd& lambda, const Eigen::VectorXd& gt, double shift,
                               const Eigen::MatrixXd& V) {
  Eigen::VectorXd c(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double d = lambda(i) + shift;
    c(i) = d > 0.0 ? -gt(i) / d : 0.0;
  }
  return V * c;
}

}  // namespace

Eigen::VectorXd trust_region_step(const Eigen::VectorXd& g, const Eigen::MatrixXd& B, double radius) {
  const Eigen::Index n = g.size();
  if (n == 0) return Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (B + B.transpose()));
  const Eigen::VectorXd lambda = es.eigenvalues();  // ascending
  const Eigen::MatrixXd& V = es.eigenvectors();
  const Eigen::VectorXd gt = V.transpose() * g;
  const double scale = std::max({1.0, lambda.cwiseAbs().maxCoeff(), g.norm()});
  const double tiny = 1e-14 * scale;

  const double lmin = lambda(0);
  if (lmin > tiny) {
    Eigen::VectorXd s = step_for_shift(lambda, gt, 0.0, V);
    if (s.norm() <= radius) return s;
  }

  // Boundary solution: find shift >= max(0, -lmin) with |s(shift)| = radius.
  const double lo0 = std::max(0.0, -lmin);
  double norm_at_lo = 0.0;
  {
    // Norm of s restricted to components not in the (near-)null space of B + lo0.
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = lambda(i) + lo0;
      if (d > tiny) norm_at_lo += (gt(i) / d) * (gt(i) / d);
    }
    norm_at_lo = std::sqrt(norm_at_lo);
  }
  bool hard = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambda(i) + lo0 <= tiny && std::abs(gt(i)) > 1e-12 * scale) hard = false;
  }
  if (hard && norm_at_lo < radius) {
    // Hard case: pad the step along the lowest eigenvector to reach the boundary.
    Eigen::VectorXd s = step_for_shift(lambda, gt, lo0, V);
    const double tau = std::sqrt(std::max(0.0, radius * radius - s.squaredNorm()));
    const Eigen::VectorXd v = V.col(0);
    // Choose the sign that lowers the model more (curvature term is equal for both).
    const Eigen::VectorXd sp = s + tau * v, sm = s - tau * v;
    auto model = [&](const Eigen::VectorXd& x) { return g.dot(x) + 0.5 * x.dot(B * x); };
    return model(sp) <= model(sm) ? sp : sm;
  }

  double lo = lo0;
  double hi = lo0 + g.norm() / radius + lambda.cwiseAbs().maxCoeff() + 1.0;
  while (step_for_shift(lambda, gt, hi, V).norm() > radius) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double nm = (lambda.array() + mid > 0.0).all() ? step_for_shift(lambda, gt, mid, V).norm()
                                                         : std::numeric_limits<double>::infinity();
    if (nm > radius) lo = mid;
    else hi = mid;
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
  }
  return step_for_shift(lambda, gt, hi, V);
}

OptimizeResult minimize(const Objective& f, std::vector<double> x0, const OptimizerOptions& opts) {
  if (opts.max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
  if (!(opts.min_stencil_width > 0.0) || !(opts.stencil_width >= opts.min_stencil_width) ||
      !(opts.initial_radius > 0.0))
    throw ValidationError("stencil widths and initial radius must be positive and ordered");

  CountingObjective F(f);
  const std::size_t n = x0.size();
  OptimizeResult res;
  res.x = std::move(x0);
  res.value = F(res.x);
  if (n == 0) {
    res.evaluations = F.evaluations;
    res.termination = "step";
    return res;
  }

  double radius = opts.initial_radius;
  res.termination = "max_iterations";

  std::vector<double> fp(n), fm(n);
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    res.iterations = iter;
    const double h = std::clamp(radius, opts.min_stencil_width, opts.stencil_width);
    if (opts.noisy && iter > 1) res.value = F(res.x);
    const double f0 = res.value;
    std::vector<double> best_x = res.x;
    double best_f = f0;
    auto consider = [&](const std::vector<double>& x, double v) {
      if (opts.noisy) return;
      if (v < best_f) {
        best_f = v;
        best_x = x;
      }
    };

    Eigen::VectorXd g(n);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> y = res.x;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = res.x[i] + h;
      fp[i] = F(y);
      consider(y, fp[i]);
      y[i] = res.x[i] - h;
      fm[i] = F(y);
      consider(y, fm[i]);
      y[i] = res.x[i];
      g(i) = (fp[i] - fm[i]) / (2.0 * h);
      B(i, i) = (fp[i] + fm[i] - 2.0 * f0) / (h * h);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        y[i] = res.x[i] + h;
        y[j] = res.x[j] + h;
        const double fij = F(y);
        consider(y, fij);
        y[i] = res.x[i];
        y[j] = res.x[j];
        B(i, j) = B(j, i) = (fij - fp[i] - fp[j] + f0) / (h * h);
      }
    }

    const Eigen::VectorXd s = trust_region_step(g, B, radius);
    const double predicted = -(g.dot(s) + 0.5 * s.dot(B * s));
    if (!(predicted > opts.objective_tolerance)) {
      if (h > opts.min_stencil_width) {
        // A wide stencil can hide a real gradient; refine before trusting it.
        radius = std::max(opts.min_stencil_width, 0.1 * h);
        if (best_f < f0) {
          res.x = best_x;
          res.value = best_f;
        }
        continue;
      }
      if (best_f < f0) {
        res.x = best_x;
        res.value = best_f;
      }
      res.termination = "objective";
      break;
    }

    std::vector<double> trial = res.x;
    for (std::size_t i = 0; i < n; ++i) trial[i] += s(static_cast<Eigen::Index>(i));
    const double ft = F(trial);
    consider(trial, ft);
    if (opts.noisy && ft < f0) {
      best_x = trial;
      best_f = ft;
    }
    const double rho = (f0 - ft) / predicted;
    const double snorm = s.norm();

    if (rho >= 0.75 && snorm >= 0.99 * radius) radius = std::min(2.0 * radius, opts.max_radius);
    else if (rho < 0.25) radius = 0.5 * std::min(radius, snorm);

    if (best_f < f0) {
      res.x = best_x;
      res.value = best_f;
    }
    if (radius < opts.step_tolerance) {
      res.termination = "step";
      break;
    }
  }
  res.evaluations = F.evaluations;
  return res;
}

}  // namespace tbvqd
