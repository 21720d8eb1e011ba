// Copyright 2026 The aqec Authors
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

#include <functional>

#include "aqec/qalg.hpp"

namespace aqec {

/// Objective value together with its Euclidean gradient G, in the convention
/// f(U + dU) = f(U) + Re Tr(G^dagger dU) + O(|dU|^2).
struct ValueAndGradient {
  double value = 0.0;
  Matrix gradient;
};

using StiefelObjective = std::function<ValueAndGradient(const Matrix&)>;

struct StiefelOptions {
  int max_iterations = 4000;
  /// Converged once the objective improved by less than this over `window` iterations.
  double tol = 1e-9;
  int window = 50;
  double initial_step = 0.1;
};

struct StiefelResult {
  Matrix point;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

inline Matrix tangent_projection(const Matrix& u, const Matrix& g) {
  return g - u * hermitian_part(u.adjoint() * g);
}

inline double real_inner(const Matrix& a, const Matrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

}  // namespace detail

/// Minimizes f over isometries U (U^dagger U = I) with Riemannian conjugate
/// gradients, Armijo backtracking, and a QR retraction.
inline StiefelResult minimize_on_stiefel(const StiefelObjective& f, Matrix start,
                                         const StiefelOptions& opts = {}) {
  if (start.rows() < start.cols()) throw DimensionError("minimize_on_stiefel: need rows >= cols");
  Matrix u = orthonormalize(start);
  ValueAndGradient cur = f(u);
  Matrix grad = detail::tangent_projection(u, cur.gradient);
  Matrix dir = -grad;
  double step = opts.initial_step;
  std::vector<double> history{cur.value};

  StiefelResult result{u, cur.value, 0, false};
  for (int it = 1; it <= opts.max_iterations; ++it) {
    double slope = detail::real_inner(grad, dir);
    if (slope >= 0.0) {
      dir = -grad;
      slope = -grad.squaredNorm();
    }
    if (slope > -1e-30) {
      result.converged = true;
      result.iterations = it;
      break;
    }

    // Armijo backtracking along the retracted direction.
    double t = step;
    Matrix next;
    ValueAndGradient trial;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      next = orthonormalize(u + t * dir);
      trial = f(next);
      if (trial.value <= cur.value + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      result.converged = true;
      result.iterations = it;
      break;
    }
    step = std::min(4.0 * t, 10.0);

    const Matrix new_grad = detail::tangent_projection(next, trial.gradient);
    // Polak-Ribiere+, with the previous gradient and direction projected onto the new tangent space.
    const Matrix old_grad = detail::tangent_projection(next, grad);
    const double denom = grad.squaredNorm();
    double beta = denom > 0 ? detail::real_inner(new_grad, new_grad - old_grad) / denom : 0.0;
    beta = std::max(beta, 0.0);
    dir = -new_grad + beta * detail::tangent_projection(next, dir);
    if (it % (2 * static_cast<int>(u.size()) + 1) == 0) dir = -new_grad;

    u = std::move(next);
    cur = std::move(trial);
    grad = new_grad;
    history.push_back(cur.value);
    result.iterations = it;

    if (history.size() > static_cast<std::size_t>(opts.window)) {
      const double past = history[history.size() - 1 - static_cast<std::size_t>(opts.window)];
      if (past - cur.value < opts.tol) {
        result.converged = true;
        break;
      }
    }
  }
  result.point = u;
  result.value = cur.value;
  return result;
}

}  // namespace aqec
