#pragma once

// Dynamic-programming search for the optimal warp on an N x N grid.

#include <cstddef>
#include <vector>

#include "spdtraj/fiber.hpp"
#include "spdtraj/warp.hpp"

namespace spdtraj {

struct DpOptions {
  std::size_t grid = 100;
  // Largest step (in grid cells) along either axis; slopes stay within
  // [1 / max_step, max_step].
  std::size_t max_step = 5;
};

struct DpResult {
  WarpFn gamma;
  // Discretized value of the integral of |q1(t) - q2(gamma(t)) sqrt(gamma'(t))|^2.
  double cost;
};

// Both fields share one tangent space and the same number of samples.
DpResult dp_optimal_warp(const Fiber& q1, const Fiber& q2, const DpOptions& opts = {});

// Continuous refinement of a grid warp: golden-section line searches over hat
// perturbations of the node heights, coarse widths first, within the slope
// band. For an input inside the band the result is no worse under
// dp_objective.
DpResult refine_warp(const Fiber& q1, const Fiber& q2, const WarpFn& gamma,
                     const DpOptions& opts = {}, std::size_t sweeps = 20);

// Quadrature of the DP objective for an arbitrary warp, using the same
// midpoint sampling as the DP.
double dp_objective(const Fiber& q1, const Fiber& q2, const WarpFn& gamma, std::size_t grid);

struct DtwResult {
  double value;
  WarpFn gamma;
};

// Minimizes sum over t of cost(t, gamma(t)) dt with monotone unit moves; a
// move in gamma alone costs nothing. `cost` is row-major n x n,
// cost[i * n + j] = d(alpha1(t_i), alpha2(t_j)).
DtwResult pointwise_dtw(const std::vector<double>& cost, std::size_t n);

}  // namespace spdtraj
