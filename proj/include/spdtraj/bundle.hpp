#pragma once

// Geodesics on the bundle of (starting point, TSRVF) pairs: the numerical
// exponential map, shooting between two bundle points, and the distance d_c.
//
// A path is stored through its base samples x_i, base velocities x_s(i) and
// the cumulative transports x_0 -> x_i. The fiber at step i is
// v_i = (q + i eps w) transported along the base path, which is the
// covariantly linear solution of the fiber equation.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spdtraj/error.hpp"
#include "spdtraj/fiber.hpp"
#include "spdtraj/kernels.hpp"
#include "spdtraj/tsrvf.hpp"

namespace spdtraj {

using Vec = std::vector<double>;

inline double vec_norm(std::span<const double> v) {
  return std::sqrt(kernels::dot(v.data(), v.data(), v.size()));
}

template <class M>
struct BundleTangent {
  Vec u;    // base direction at p
  Fiber w;  // fiber direction, T rows at p
};

template <class M>
struct BundlePath {
  using Point = typename M::Point;
  using Transport = typename M::Transport;

  std::vector<Point> x;            // S + 1 base samples
  std::vector<Vec> xs;             // base velocity at each sample
  std::vector<Transport> chain;    // x_0 -> x_i
  Fiber q;                         // v(0), at x_0
  Fiber w;                         // fiber direction at x_0
  std::size_t steps = 0;

  double eps() const { return 1.0 / static_cast<double>(steps); }

  // v(i eps), at x_i.
  Fiber fiber(std::size_t i) const {
    Fiber v = q;
    v.add_scaled(static_cast<double>(i) * eps(), w);
    return transport_fiber(chain[i], v);
  }
  const Point& end() const { return x.back(); }
};

struct ShootOptions {
  std::size_t steps = 20;
  std::size_t itermax = 100;
  double tol = 1e-4;
  double eta = 0.5;
  // Double S (up to max_steps) while the base-equation residual exceeds
  // residual_tol * max(1, |u|).
  bool refine = true;
  double residual_tol = 1e-2;
  std::size_t max_steps = 160;
};

template <class M>
struct ShootResult {
  BundleTangent<M> dir;
  BundlePath<M> path;
  double base_gap = 0.0;   // d(x(1), p2)
  double fiber_gap = 0.0;  // L2 gap after transport to p2
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> history;  // total discrepancy per iteration
  std::vector<std::string> warnings;

  double discrepancy() const { return std::hypot(base_gap, fiber_gap); }
};

namespace detail {

template <class M>
void require_same_shape(const M& m, const TsrvfRepr<M>& a, const TsrvfRepr<M>& b) {
  if (a.size() != b.size()) throw ValidationError("bundle: representations differ in T");
  if (a.q.dim() != m.tangent_size() || b.q.dim() != m.tangent_size())
    throw ValidationError("bundle: tangent size mismatch");
}

// -sum_tau weight R(v, w)(xs) at p; v and w already at p.
template <class M>
void curvature_acceleration(const M& m, const typename M::Point& p, const Fiber& v,
                            const Fiber& w, const std::vector<double>& weights,
                            std::span<const double> xs, std::span<double> out) {
  m.integrated_curvature(p, v.flat(), w.flat(), weights, xs, out);
  for (auto& a : out) a = -a;
}

}  // namespace detail

// Numerical exponential map from `origin` along `dir` with S steps of size
// 1/S. The base velocity is advanced by Euler steps of the curvature-driven
// acceleration and carried between samples by parallel transport.
template <class M>
BundlePath<M> bundle_exp(const M& m, const TsrvfRepr<M>& origin, const BundleTangent<M>& dir,
                         std::size_t steps) {
  if (steps < 1) throw ValidationError("bundle_exp: need at least one step");
  const std::size_t d = m.tangent_size();
  if (dir.u.size() != d || dir.w.samples() != origin.size() || dir.w.dim() != d)
    throw ValidationError("bundle_exp: direction does not match the origin");
  const double eps = 1.0 / static_cast<double>(steps);
  const auto weights = trapezoid_weights(origin.size());

  BundlePath<M> path;
  path.q = origin.q;
  path.w = dir.w;
  path.steps = steps;
  path.x.reserve(steps + 1);
  path.xs.reserve(steps + 1);
  path.chain.reserve(steps + 1);
  path.x.push_back(origin.start);
  path.xs.push_back(dir.u);
  path.chain.push_back(m.identity_transport());

  Vec step(d), acc(d), next(d);
  for (std::size_t i = 0; i < steps; ++i) {
    const auto& xi = path.x[i];
    const Vec& vi = path.xs[i];
    for (std::size_t j = 0; j < d; ++j) step[j] = eps * vi[j];
    auto x_next = m.exp(xi, step);
    const auto tr = m.transport(xi, x_next);
    // R(v + c w, w) = R(v, w), so the transported q and w suffice.
    const Fiber vq = transport_fiber(path.chain[i], origin.q);
    const Fiber vw = transport_fiber(path.chain[i], dir.w);
    detail::curvature_acceleration(m, xi, vq, vw, weights, vi, acc);
    for (std::size_t j = 0; j < d; ++j) step[j] = vi[j] + eps * acc[j];
    tr.apply(step, next);
    path.chain.push_back(path.chain[i].then(tr));
    path.x.push_back(std::move(x_next));
    path.xs.push_back(next);
  }
  return path;
}

struct GeodesicResiduals {
  double base = 0.0;   // max over interior samples of the base-equation residual
  double fiber = 0.0;  // max over interior samples of |second covariant difference of v|
};

// Discrete residuals of the two geodesic equations along a path: central
// second differences of x and v (via log and transport at x_i) against the
// curvature term evaluated with the central-difference velocity.
template <class M>
GeodesicResiduals geodesic_residuals(const M& m, const BundlePath<M>& path) {
  GeodesicResiduals r;
  const std::size_t d = m.tangent_size();
  const std::size_t steps = path.steps;
  if (steps < 2) return r;
  const double eps = path.eps();
  const auto weights = trapezoid_weights(path.q.samples());
  Vec fwd(d), bwd(d), vel(d), acc(d), res(d);
  for (std::size_t i = 1; i < steps; ++i) {
    const auto& xi = path.x[i];
    m.log(xi, path.x[i + 1], fwd);
    m.log(xi, path.x[i - 1], bwd);
    for (std::size_t j = 0; j < d; ++j) vel[j] = (fwd[j] - bwd[j]) / (2.0 * eps);
    const Fiber vq = transport_fiber(path.chain[i], path.q);
    const Fiber vw = transport_fiber(path.chain[i], path.w);
    m.integrated_curvature(xi, vq.flat(), vw.flat(), weights, vel, acc);
    for (std::size_t j = 0; j < d; ++j) res[j] = (fwd[j] + bwd[j]) / (eps * eps) + acc[j];
    r.base = std::max(r.base, vec_norm(res));

    const Fiber vc = path.fiber(i);
    const Fiber vn = transport_fiber(m.transport(path.x[i + 1], xi), path.fiber(i + 1));
    const Fiber vp = transport_fiber(m.transport(path.x[i - 1], xi), path.fiber(i - 1));
    Fiber second = vn + vp;
    second.add_scaled(-2.0, vc);
    second *= 1.0 / (eps * eps);
    r.fiber = std::max(r.fiber, l2_norm(second));
  }
  return r;
}

namespace detail {

template <class M>
struct Endpoint {
  double base_gap;
  double fiber_gap;
  double total() const { return std::hypot(base_gap, fiber_gap); }
};

template <class M>
Endpoint<M> endpoint_gap(const M& m, const BundlePath<M>& path, const TsrvfRepr<M>& target) {
  const auto to_target = m.transport(path.end(), target.start);
  const Fiber reached = transport_fiber(to_target, path.fiber(path.steps));
  return {m.distance(path.end(), target.start), l2_dist(reached, target.q)};
}

// log_{x(1)}(p2) carried back to p1 along the path.
template <class M>
void base_residual(const M& m, const BundlePath<M>& path, const TsrvfRepr<M>& target,
                   std::span<double> out) {
  Vec r(m.tangent_size());
  m.log(path.end(), target.start, r);
  path.chain.back().inverse().apply(r, out);
}

// Coupled model of the base path. The curvature of both manifolds is
// parallel, so R(v_i, w_i)(x) at x_i equals the transported action of the
// operator C(w) = sum_tau weight R(q(tau), w(tau)) at p1. The base path is
// thus a function of u and C alone, and C ranges over the span of the
// operators R(e_a, e_b) (dimension 3 on P(3), 1 on S^2).
template <class M>
struct Coupling {
  std::vector<Vec> basis;                  // orthonormal basis of T_{p1}
  std::vector<Eigen::MatrixXd> generators;  // orthonormal span of R(e_a, e_b)
  std::vector<double> weights;              // trapezoid weights over tau

  std::size_t dim() const { return basis.size(); }

  Eigen::VectorXd coeffs(const M& m, std::span<const double> v) const {
    Eigen::VectorXd c(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i)
      c[static_cast<Eigen::Index>(i)] = kernels::dot(basis[i].data(), v.data(), m.tangent_size());
    return c;
  }
  Vec vector(const M& m, const Eigen::VectorXd& c) const {
    Vec v(m.tangent_size(), 0.0);
    for (std::size_t i = 0; i < basis.size(); ++i)
      kernels::axpy(c[static_cast<Eigen::Index>(i)], basis[i].data(), v.data(), v.size());
    return v;
  }

  // Matrix of x -> sum_k weights[k] R(v_k, w_k)(x) in `basis`.
  Eigen::MatrixXd operator_of(const M& m, const typename M::Point& p, const Fiber& v,
                              const Fiber& w) const {
    const auto k = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd op(k, k);
    Vec out(m.tangent_size());
    for (Eigen::Index j = 0; j < k; ++j) {
      m.integrated_curvature(p, v.flat(), w.flat(), weights, basis[j], out);
      op.col(j) = coeffs(m, out);
    }
    return op;
  }

  Eigen::VectorXd project(const Eigen::MatrixXd& op) const {
    Eigen::VectorXd c(static_cast<Eigen::Index>(generators.size()));
    for (std::size_t j = 0; j < generators.size(); ++j)
      c[static_cast<Eigen::Index>(j)] = (generators[j].array() * op.array()).sum();
    return c;
  }
  Eigen::MatrixXd lift(const Eigen::VectorXd& c) const {
    const auto k = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t j = 0; j < generators.size(); ++j)
      op += c[static_cast<Eigen::Index>(j)] * generators[j];
    return op;
  }
};

template <class M>
Coupling<M> make_coupling(const M& m, const typename M::Point& p, std::size_t samples) {
  Coupling<M> c;
  c.basis = m.tangent_basis(p);
  c.weights = trapezoid_weights(samples);
  const std::size_t k = c.basis.size();
  const std::vector<double> one{1.0};
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      Eigen::MatrixXd op(k, k);
      Vec out(m.tangent_size());
      for (std::size_t j = 0; j < k; ++j) {
        m.integrated_curvature(p, c.basis[a], c.basis[b], one, c.basis[j], out);
        op.col(static_cast<Eigen::Index>(j)) = c.coeffs(m, out);
      }
      for (const auto& g : c.generators) op -= (g.array() * op.array()).sum() * g;
      const double norm = op.norm();
      if (norm > 1e-8) c.generators.push_back(op / norm);
    }
  }
  return c;
}

// Base path for direction u under the fixed curvature operator `op` (in the
// coupling basis at x_0). Fiber fields of the result are left empty.
template <class M>
BundlePath<M> exp_with_operator(const M& m, const Coupling<M>& cp, const typename M::Point& p,
                                const Vec& u, const Eigen::MatrixXd& op, std::size_t steps) {
  const std::size_t d = m.tangent_size();
  const double eps = 1.0 / static_cast<double>(steps);
  BundlePath<M> path;
  path.steps = steps;
  path.x.push_back(p);
  path.xs.push_back(u);
  path.chain.push_back(m.identity_transport());
  Vec step(d), local(d), next(d);
  for (std::size_t i = 0; i < steps; ++i) {
    const Vec& vi = path.xs[i];
    for (std::size_t j = 0; j < d; ++j) step[j] = eps * vi[j];
    auto x_next = m.exp(path.x[i], step);
    const auto tr = m.transport(path.x[i], x_next);
    path.chain[i].inverse().apply(vi, local);
    const Vec acc0 = cp.vector(m, -(op * cp.coeffs(m, local)));
    Vec acc(d);
    path.chain[i].apply(acc0, acc);
    for (std::size_t j = 0; j < d; ++j) step[j] = vi[j] + eps * acc[j];
    tr.apply(step, next);
    path.chain.push_back(path.chain[i].then(tr));
    path.x.push_back(std::move(x_next));
    path.xs.push_back(next);
  }
  return path;
}

// Fiber direction that makes the fiber endpoint exact for a given base path.
template <class M>
Fiber fiber_solution(const M& m, const BundlePath<M>& path, const TsrvfRepr<M>& start,
                     const TsrvfRepr<M>& target) {
  const auto pull = m.transport(target.start, path.end()).then(path.chain.back().inverse());
  Fiber w = transport_fiber(pull, target.q);
  w -= start.q;
  return w;
}

// Newton direction for the coupled system in z = (u, c):
//   base residual   log_{x(1)}(p2) pulled back to p1 = 0
//   consistency     project(C(w(z))) - c = 0
// where the path uses the operator lift(c) and w(z) is the exact fiber
// solution on that path. Returns the new (u, w), or nothing when the
// Jacobian is singular.
template <class M>
bool coupled_newton(const M& m, const Coupling<M>& cp, const TsrvfRepr<M>& start,
                    const TsrvfRepr<M>& target, const BundleTangent<M>& dir,
                    std::size_t steps, Vec& du, Eigen::VectorXd& dc, Eigen::VectorXd& c0) {
  const std::size_t d = m.tangent_size();
  const auto k = static_cast<Eigen::Index>(cp.dim());
  const auto r = static_cast<Eigen::Index>(cp.generators.size());
  c0 = cp.project(cp.operator_of(m, start.start, start.q, dir.w));
  const Eigen::VectorXd u0 = cp.coeffs(m, dir.u);
  auto residual = [&](const Eigen::VectorXd& z) {
    const Vec u = cp.vector(m, z.head(k));
    const Eigen::VectorXd c = z.tail(r);
    const auto path = exp_with_operator(m, cp, start.start, u, cp.lift(c), steps);
    const Fiber w = fiber_solution(m, path, start, target);
    Vec g(d);
    base_residual(m, path, target, g);
    Eigen::VectorXd out(k + r);
    out.head(k) = cp.coeffs(m, g);
    out.tail(r) = cp.project(cp.operator_of(m, start.start, start.q, w)) - c;
    return out;
  };
  Eigen::VectorXd z(k + r);
  z << u0, c0;
  const Eigen::VectorXd f0 = residual(z);
  const double h = 1e-6 * std::max(1.0, z.norm());
  Eigen::MatrixXd jac(k + r, k + r);
  for (Eigen::Index j = 0; j < k + r; ++j) {
    Eigen::VectorXd zj = z;
    zj[j] += h;
    jac.col(j) = (residual(zj) - f0) / h;
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
  if (!lu.isInvertible()) return false;
  const Eigen::VectorXd step = lu.solve(-f0);
  if (!step.allFinite()) return false;
  du = cp.vector(m, step.head(k));
  dc = step.tail(r);
  return true;
}

template <class M>
ShootResult<M> shoot_fixed(const M& m, const TsrvfRepr<M>& start, const TsrvfRepr<M>& target,
                           const ShootOptions& opts, std::size_t steps,
                           const BundleTangent<M>* init = nullptr) {
  const std::size_t d = m.tangent_size();
  ShootResult<M> out;
  BundleTangent<M> dir{Vec(d), Fiber(start.size(), d)};
  if (init) {
    dir = *init;
  } else {
    const auto back = m.log_and_transport(start.start, target.start, dir.u).inverse();
    dir.w = transport_fiber(back, target.q);
    dir.w -= start.q;
  }

  auto path = bundle_exp(m, start, dir, steps);
  auto gap = endpoint_gap(m, path, target);
  BundleTangent<M> best_dir = dir;
  BundlePath<M> best_path = path;
  auto best_gap = gap;
  out.history.push_back(gap.total());

  Vec pulled(d);
  const auto coupling = make_coupling(m, start.start, start.size());
  constexpr double kMinStep = 1.0 / 1024.0;
  std::size_t iter = 0;
  while (!(gap.total() < opts.tol) && iter < opts.itermax) {
    ++iter;
    bool moved = false;
    // Stage one: w absorbs the fiber residual pulled back to p1 through x(1)
    // and the base path. With u fixed the fiber update is exact, but it also
    // bends the base path, so the step backtracks when the total
    // discrepancy grows.
    {
      const auto pull = m.transport(target.start, path.end()).then(path.chain.back().inverse());
      // chain^{-1} v(1) = q1 + w
      Fiber delta = transport_fiber(pull, target.q);
      delta -= start.q;
      delta -= dir.w;
      const Fiber w_prev = dir.w;
      for (double beta = 1.0; beta >= kMinStep; beta *= 0.5) {
        dir.w = w_prev;
        dir.w.add_scaled(beta, delta);
        auto trial = bundle_exp(m, start, dir, steps);
        const auto trial_gap = endpoint_gap(m, trial, target);
        if (trial_gap.total() < gap.total()) {
          path = std::move(trial);
          gap = trial_gap;
          moved = true;
          break;
        }
      }
      if (!moved) dir.w = w_prev;
    }
    // Stage two: u moves along the pulled-back base residual. The plain
    // residual is a good direction only while the fiber term turns x_s by
    // well under a right angle, so the step is first Newton-corrected on the
    // coupled (u, C) system above, with w re-solved on the trial path; the
    // plain step (eta halved on non-decrease) is the fallback.
    if (gap.base_gap >= opts.tol) {
      const BundleTangent<M> prev = dir;
      bool accepted = false;
      auto try_trial = [&](const BundleTangent<M>& t) {
        auto trial = bundle_exp(m, start, t, steps);
        const auto trial_gap = endpoint_gap(m, trial, target);
        if (trial_gap.total() < gap.total()) {
          dir = t;
          path = std::move(trial);
          gap = trial_gap;
          return true;
        }
        return false;
      };
      Vec du;
      Eigen::VectorXd dc, c0;
      bool have_newton = false;
      try {
        have_newton = coupled_newton(m, coupling, start, target, dir, steps, du, dc, c0);
      } catch (const NumericalRangeError&) {
      } catch (const DomainError&) {
      }
      if (have_newton) {
        for (double eta = 1.0; eta >= kMinStep && !accepted; eta *= 0.5) {
          BundleTangent<M> t = prev;
          for (std::size_t j = 0; j < d; ++j) t.u[j] += eta * du[j];
          // Overlong trial steps can leave the domain of exp (SPD
          // eigenvalues underflow); those count as rejected.
          try {
            const auto base = exp_with_operator(m, coupling, start.start, t.u,
                                                coupling.lift(c0 + eta * dc), steps);
            t.w = fiber_solution(m, base, start, target);
            accepted = try_trial(t);
          } catch (const NumericalRangeError&) {
          } catch (const DomainError&) {
          }
        }
      }
      if (!accepted) {
        base_residual(m, path, target, pulled);
        for (double eta = opts.eta; eta >= kMinStep * opts.eta && !accepted; eta *= 0.5) {
          BundleTangent<M> t = prev;
          for (std::size_t j = 0; j < d; ++j) t.u[j] += eta * pulled[j];
          accepted = try_trial(t);
        }
      }
      moved = moved || accepted;
    }
    out.history.push_back(gap.total());
    if (gap.total() < best_gap.total()) {
      best_dir = dir;
      best_path = path;
      best_gap = gap;
    }
    if (!moved) break;
  }
  if (gap.total() <= best_gap.total()) {
    best_dir = dir;
    best_path = path;
    best_gap = gap;
  }
  out.dir = std::move(best_dir);
  out.path = std::move(best_path);
  out.base_gap = best_gap.base_gap;
  out.fiber_gap = best_gap.fiber_gap;
  out.iterations = iter;
  out.converged = best_gap.total() < opts.tol;
  return out;
}

}  // namespace detail

// Shooting from (p1, q1) to (p2, q2). Starts from u = log_{p1}(p2) and
// w = (q2 transported to p1) - q1, then alternates a fiber update of w and a
// damped base update of u.
template <class M>
ShootResult<M> bundle_shoot(const M& m, const TsrvfRepr<M>& start, const TsrvfRepr<M>& target,
                            const ShootOptions& opts = {}) {
  detail::require_same_shape(m, start, target);
  std::size_t steps = std::max<std::size_t>(1, opts.steps);
  // When the direct solve stalls, the fiber term is switched on gradually:
  // at zero strength the answer is the base geodesic, and each stage starts
  // from the previous solution.
  auto solve = [&](std::size_t s) {
    auto direct = detail::shoot_fixed(m, start, target, opts, s);
    if (direct.converged) return direct;
    // Strength steps start at 1/4 and halve on a failed stage.
    std::optional<BundleTangent<M>> warm;
    ShootResult<M> staged;
    std::size_t stage_iters = 0;
    double lam = 0.0, h = 0.25;
    while (lam < 1.0 && h >= 1.0 / 64.0) {
      const double next = std::min(1.0, lam + h);
      TsrvfRepr<M> a{start.start, next * start.q};
      TsrvfRepr<M> b{target.start, next * target.q};
      std::optional<BundleTangent<M>> init = warm;
      if (init) init->w *= next / lam;
      auto r = detail::shoot_fixed(m, a, b, opts, s, init ? &*init : nullptr);
      stage_iters += r.iterations;
      if (!r.converged) {
        h *= 0.5;
        continue;
      }
      lam = next;
      warm = r.dir;
      staged = std::move(r);
    }
    if (lam < 1.0) return direct;
    staged.history.insert(staged.history.begin(), direct.history.begin(), direct.history.end());
    staged.iterations = direct.iterations + stage_iters;
    return staged;
  };
  auto res = solve(steps);
  while (opts.refine && steps * 2 <= opts.max_steps) {
    const double limit = opts.residual_tol * std::max(1.0, vec_norm(res.dir.u));
    const double base = geodesic_residuals(m, res.path).base;
    if (base <= limit) break;
    res.warnings.push_back("geodesic residual " + std::to_string(base) + " at S=" +
                           std::to_string(steps) + "; doubling steps");
    steps *= 2;
    auto warnings = std::move(res.warnings);
    res = solve(steps);
    res.warnings = std::move(warnings);
  }
  if (!res.converged)
    res.warnings.push_back("shooting did not converge; discrepancy " +
                           std::to_string(res.discrepancy()));
  return res;
}

struct DcValue {
  double value = 0.0;
  double base_length = 0.0;
  double fiber_term = 0.0;
  bool converged = true;
};

// sqrt(l_x^2 + |q1 transported along x to p2 - q2|^2) for a given baseline.
template <class M>
DcValue dc_along(const M& m, const BundlePath<M>& path, const TsrvfRepr<M>& a,
                 const TsrvfRepr<M>& b) {
  DcValue r;
  for (std::size_t i = 0; i + 1 < path.x.size(); ++i)
    r.base_length += m.distance(path.x[i], path.x[i + 1]);
  r.base_length += m.distance(path.end(), b.start);
  const auto along = path.chain.back().then(m.transport(path.end(), b.start));
  r.fiber_term = l2_dist(transport_fiber(along, a.q), b.q);
  r.value = std::hypot(r.base_length, r.fiber_term);
  return r;
}

// d_c with the manifold geodesic between starting points as baseline.
template <class M>
DcValue dc_geodesic_baseline(const M& m, const TsrvfRepr<M>& a, const TsrvfRepr<M>& b) {
  detail::require_same_shape(m, a, b);
  DcValue r;
  r.base_length = m.distance(a.start, b.start);
  r.fiber_term = l2_dist(transport_fiber(m.transport(a.start, b.start), a.q), b.q);
  r.value = std::hypot(r.base_length, r.fiber_term);
  return r;
}

// d_c with the baseline obtained by shooting.
template <class M>
DcValue bundle_distance_dc(const M& m, const TsrvfRepr<M>& a, const TsrvfRepr<M>& b,
                           const ShootOptions& opts = {}) {
  const auto shot = bundle_shoot(m, a, b, opts);
  auto r = dc_along(m, shot.path, a, b);
  r.converged = shot.converged;
  return r;
}

}  // namespace spdtraj
