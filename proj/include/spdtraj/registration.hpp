#pragma once

// Rate-invariant comparison of two trajectories: alternating bundle geodesics
// and DP alignment (full), or a geodesic baseline between starting points with
// DP alignment on top (fast).

#include <limits>
#include <vector>

#include "spdtraj/bundle.hpp"
#include "spdtraj/dp.hpp"
#include "spdtraj/tsrvf.hpp"
#include "spdtraj/warp.hpp"

namespace spdtraj {

struct RegistrationOptions {
  bool full = false;
  DpOptions dp;
  // Outer iterations and the stopping threshold on |gamma - id|_L2.
  std::size_t itermax = 10;
  double tol = 1e-3;
  // Extra DP passes in fast mode (0 = a single alignment).
  std::size_t fast_repeats = 0;
  // Polish each DP warp off the lattice (refine_warp).
  bool refine = true;
  ShootOptions shoot;
};

struct RegistrationResult {
  WarpFn gamma_star = WarpFn::identity(2);
  double d_q = 0.0;
  double d_c_before = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool approximate = false;
  std::vector<double> history;  // objective per evaluated gamma*
};

template <class M>
struct Registered {
  RegistrationResult result;
  TsrvfRepr<M> aligned;    // (p2, q2 * gamma*)
  BundleTangent<M> dir;    // inverse exponential from the first argument
};

namespace detail {

struct AlignState {
  WarpFn gamma_star;
  double objective;
};

// One DP pass: gamma aligning `moving` (in the tangent space of q1) to q1.
inline WarpFn dp_step(const Fiber& q1, const Fiber& moving, const DpOptions& dp, bool refine) {
  auto r = dp_optimal_warp(q1, moving, dp);
  if (!refine) return std::move(r.gamma);
  return refine_warp(q1, moving, r.gamma, dp).gamma;
}

}  // namespace detail

template <class M>
Registered<M> fast_register(const M& m, const TsrvfRepr<M>& r1, const TsrvfRepr<M>& r2,
                            const RegistrationOptions& opts = {}) {
  detail::require_same_shape(m, r1, r2);
  const std::size_t d = m.tangent_size();
  Registered<M> out{{}, r2, {Vec(d), Fiber()}};
  out.result.approximate = true;
  const auto back = m.log_and_transport(r1.start, r2.start, out.dir.u).inverse();
  const double base = m.distance(r1.start, r2.start);
  const Fiber q2p = transport_fiber(back, r2.q);

  const WarpFn id = WarpFn::identity(opts.dp.grid);
  WarpFn best_gamma = id;
  double best = std::hypot(base, l2_dist(r1.q, q2p));
  Fiber best_q = q2p;
  out.result.d_c_before = best;
  out.result.history.push_back(best);

  WarpFn gamma_star = id;
  Fiber current = q2p;
  const std::size_t passes = 1 + opts.fast_repeats;
  std::size_t iter = 0;
  for (; iter < passes; ++iter) {
    const WarpFn g = detail::dp_step(r1.q, current, opts.dp, opts.refine);
    const double move = g.distance_to_identity();
    gamma_star = gamma_star.compose(g);
    current = warp_tsrvf(q2p, gamma_star);
    const double value = std::hypot(base, l2_dist(r1.q, current));
    out.result.history.push_back(value);
    if (value >= best) {
      out.result.converged = true;
      ++iter;
      break;
    }
    best = value;
    best_gamma = gamma_star;
    best_q = current;
    if (move < opts.tol) {
      out.result.converged = true;
      ++iter;
      break;
    }
  }
  if (iter == passes) out.result.converged = true;
  out.result.gamma_star = best_gamma;
  out.result.d_q = best;
  out.result.iterations = iter;
  out.aligned.q = warp_tsrvf(r2.q, best_gamma);
  out.dir.w = best_q - r1.q;
  return out;
}

template <class M>
Registered<M> full_register(const M& m, const TsrvfRepr<M>& r1, const TsrvfRepr<M>& r2,
                            const RegistrationOptions& opts = {}) {
  detail::require_same_shape(m, r1, r2);
  Registered<M> out{{}, r2, {}};
  WarpFn gamma_star = WarpFn::identity(opts.dp.grid);
  TsrvfRepr<M> target = r2;
  double best = std::numeric_limits<double>::infinity();
  bool stop_after = false;
  std::size_t iter = 0;
  for (;; ++iter) {
    const auto shot = bundle_shoot(m, r1, target, opts.shoot);
    const double value = dc_along(m, shot.path, r1, target).value;
    out.result.history.push_back(value);
    if (iter == 0) out.result.d_c_before = value;
    if (value < best) {
      best = value;
      out.result.gamma_star = gamma_star;
      out.aligned = target;
      out.dir = shot.dir;
    } else if (iter > 0) {
      out.result.converged = true;
      break;
    }
    if (stop_after) {
      out.result.converged = true;
      break;
    }
    if (iter >= opts.itermax) break;
    // Bring q2 * gamma* back to p1 along the baseline, then align.
    const auto pull = m.transport(target.start, shot.path.end())
                          .then(shot.path.chain.back().inverse());
    const WarpFn g = detail::dp_step(r1.q, transport_fiber(pull, target.q), opts.dp, opts.refine);
    stop_after = g.distance_to_identity() < opts.tol;
    gamma_star = gamma_star.compose(g);
    target.q = warp_tsrvf(r2.q, gamma_star);
  }
  out.result.d_q = best;
  out.result.iterations = iter;
  return out;
}

template <class M>
Registered<M> register_repr(const M& m, const TsrvfRepr<M>& r1, const TsrvfRepr<M>& r2,
                            const RegistrationOptions& opts = {}) {
  return opts.full ? full_register(m, r1, r2, opts) : fast_register(m, r1, r2, opts);
}

template <class M>
RegistrationResult pairwise_register(const M& m, const Trajectory<M>& a1, const Trajectory<M>& a2,
                                     const RegistrationOptions& opts = {}) {
  if (a1.size() != a2.size()) throw ValidationError("register: trajectories differ in T");
  return register_repr(m, tsrvf_of(m, a1), tsrvf_of(m, a2), opts).result;
}

template <class M>
double quotient_distance_dq(const M& m, const Trajectory<M>& a1, const Trajectory<M>& a2,
                            const RegistrationOptions& opts = {}) {
  return pairwise_register(m, a1, a2, opts).d_q;
}

// d_c between the unaligned representations, with the baseline chosen as in
// `opts` (shooting when full, starting-point geodesic otherwise).
template <class M>
double unaligned_distance_dc(const M& m, const TsrvfRepr<M>& r1, const TsrvfRepr<M>& r2,
                             const RegistrationOptions& opts = {}) {
  return opts.full ? bundle_distance_dc(m, r1, r2, opts.shoot).value
                   : dc_geodesic_baseline(m, r1, r2).value;
}

// Pointwise formulation inf_gamma int d(alpha1(t), alpha2(gamma(t))) dt.
// Kept as a baseline: its optimal warps degenerate (pinching).
template <class M>
DtwResult naive_warped_distance(const M& m, const Trajectory<M>& a1, const Trajectory<M>& a2) {
  if (a1.size() != a2.size()) throw ValidationError("naive distance: trajectories differ in T");
  const std::size_t n = a1.size();
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = m.distance(a1.points[i], a2.points[j]);
  return pointwise_dtw(cost, n);
}

}  // namespace spdtraj
