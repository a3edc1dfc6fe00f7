#pragma once

// Karcher mean of trajectories under d_q and alignment to a template.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "spdtraj/registration.hpp"
#include "spdtraj/parallel.hpp"

namespace spdtraj {

struct MeanOptions {
  RegistrationOptions reg;
  double step = 0.5;
  // Relative to the norms of the first average direction.
  double eps_u = 1e-3;
  double eps_w = 1e-3;
  std::size_t itermax = 20;
  std::size_t bundle_steps = 20;
  std::size_t jobs = 1;
};

template <class M>
struct AlignedTrajectory {
  Trajectory<M> trajectory;
  WarpFn gamma = WarpFn::identity(2);
};

template <class M>
struct MeanResult {
  TsrvfRepr<M> mean_repr;
  Trajectory<M> mean_trajectory;
  std::vector<AlignedTrajectory<M>> aligned;
  // Mean squared d_q to the current estimate, one entry per accepted iterate.
  std::vector<double> variance_history;
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t initial_index = 0;
};

// Pointwise Karcher mean of points on the manifold by fixed-point iteration.
template <class M>
typename M::Point manifold_mean(const M& m, const std::vector<typename M::Point>& pts,
                                std::size_t itermax = 100, double tol = 1e-12) {
  if (pts.empty()) throw ValidationError("mean: no points");
  const std::size_t d = m.tangent_size();
  auto mu = pts.front();
  Vec sum(d), lg(d);
  for (std::size_t it = 0; it < itermax; ++it) {
    std::fill(sum.begin(), sum.end(), 0.0);
    for (const auto& p : pts) {
      m.log(mu, p, lg);
      kernels::axpy(1.0 / static_cast<double>(pts.size()), lg.data(), sum.data(), d);
    }
    if (vec_norm(sum) < tol) break;
    mu = m.exp(mu, sum);
  }
  return mu;
}

// Mean over sample times of the pointwise variance (mean squared distance to
// the pointwise Karcher mean).
template <class M>
double cross_sectional_variance(const M& m, const std::vector<Trajectory<M>>& trajs) {
  if (trajs.empty()) return 0.0;
  const std::size_t n = trajs.front().size();
  double total = 0.0;
  std::vector<typename M::Point> pts;
  for (std::size_t k = 0; k < n; ++k) {
    pts.clear();
    for (const auto& a : trajs) pts.push_back(a.points.at(k));
    const auto mu = manifold_mean(m, pts);
    double v = 0.0;
    for (const auto& p : pts) v += std::pow(m.distance(mu, p), 2);
    total += v / static_cast<double>(pts.size());
  }
  return total / static_cast<double>(n);
}

namespace detail {

template <class M>
std::vector<Registered<M>> align_all(const M& m, const TsrvfRepr<M>& tmpl,
                                     const std::vector<TsrvfRepr<M>>& reprs,
                                     const RegistrationOptions& opts, std::size_t jobs) {
  return parallel_map(reprs.size(), jobs,
                      [&](std::size_t i) { return register_repr(m, tmpl, reprs[i], opts); });
}

template <class M>
double mean_sq_dq(const std::vector<Registered<M>>& regs) {
  double s = 0.0;
  for (const auto& r : regs) s += r.result.d_q * r.result.d_q;
  return s / static_cast<double>(regs.size());
}

}  // namespace detail

// Registers each trajectory to the template; returns alpha_i o gamma_i and gamma_i.
template <class M>
std::vector<AlignedTrajectory<M>> groupwise_align(const M& m,
                                                  const std::vector<Trajectory<M>>& trajs,
                                                  const TsrvfRepr<M>& tmpl,
                                                  const RegistrationOptions& opts = {},
                                                  std::size_t jobs = 1) {
  std::vector<AlignedTrajectory<M>> out(trajs.size());
  parallel_for(trajs.size(), jobs, [&](std::size_t i) {
    const auto reg = register_repr(m, tmpl, tsrvf_of(m, trajs[i]), opts);
    out[i].gamma = reg.result.gamma_star;
    out[i].trajectory = warp_trajectory(m, trajs[i], reg.result.gamma_star);
  });
  return out;
}

template <class M>
MeanResult<M> karcher_mean(const M& m, const std::vector<Trajectory<M>>& trajs,
                           const MeanOptions& opts = {}) {
  if (trajs.empty()) throw ValidationError("karcher_mean: no trajectories");
  const std::size_t n = trajs.size();
  for (const auto& a : trajs)
    if (a.size() != trajs.front().size())
      throw ValidationError("karcher_mean: trajectories differ in T");
  const auto reprs =
      parallel_map(n, opts.jobs, [&](std::size_t i) { return tsrvf_of(m, trajs[i]); });

  MeanResult<M> res{reprs.front(), {}, {}, {}, 0, false, 0};
  // Medoid under fast d_q.
  {
    RegistrationOptions fast = opts.reg;
    fast.full = false;
    std::vector<double> dist(n * n, 0.0);
    parallel_for(n * n, opts.jobs, [&](std::size_t k) {
      const std::size_t i = k / n, j = k % n;
      if (i < j) dist[k] = register_repr(m, reprs[i], reprs[j], fast).result.d_q;
    });
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += i < j ? dist[i * n + j] : dist[j * n + i];
      if (s < best) {
        best = s;
        res.initial_index = i;
      }
    }
  }

  TsrvfRepr<M> mu = reprs[res.initial_index];
  auto regs = detail::align_all(m, mu, reprs, opts.reg, opts.jobs);
  double variance = detail::mean_sq_dq(regs);
  res.variance_history.push_back(variance);
  const std::size_t d = m.tangent_size();
  double u0 = -1.0, w0 = -1.0;
  std::size_t iter = 0;
  for (; iter < opts.itermax; ++iter) {
    BundleTangent<M> avg{Vec(d, 0.0), Fiber(mu.size(), d)};
    const double inv = 1.0 / static_cast<double>(n);
    for (const auto& r : regs) {
      kernels::axpy(inv, r.dir.u.data(), avg.u.data(), d);
      avg.w.add_scaled(inv, r.dir.w);
    }
    const double un = vec_norm(avg.u), wn = l2_norm(avg.w);
    if (u0 < 0) {
      u0 = un;
      w0 = wn;
    }
    if ((un <= opts.eps_u * u0 || un < 1e-12) && (wn <= opts.eps_w * w0 || wn < 1e-12)) {
      res.converged = true;
      break;
    }
    // Step along the average direction; halve the step while the variance
    // would increase.
    bool accepted = false;
    for (double step = opts.step; step > 1e-4; step *= 0.5) {
      BundleTangent<M> dir{avg.u, avg.w};
      for (auto& x : dir.u) x *= step;
      dir.w *= step;
      const auto path = bundle_exp(m, mu, dir, opts.bundle_steps);
      TsrvfRepr<M> next{path.end(), path.fiber(path.steps)};
      auto next_regs = detail::align_all(m, next, reprs, opts.reg, opts.jobs);
      const double v = detail::mean_sq_dq(next_regs);
      if (v <= variance) {
        mu = std::move(next);
        regs = std::move(next_regs);
        variance = v;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.converged = true;
      break;
    }
    res.variance_history.push_back(variance);
  }
  res.iterations = iter;
  res.mean_repr = mu;
  res.mean_trajectory = reconstruct(m, mu);
  res.aligned.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    res.aligned[i].gamma = regs[i].result.gamma_star;
    res.aligned[i].trajectory = warp_trajectory(m, trajs[i], regs[i].result.gamma_star);
  }
  return res;
}

}  // namespace spdtraj
