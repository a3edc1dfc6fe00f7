#include "spdtraj/dp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "spdtraj/error.hpp"
#include "spdtraj/kernels.hpp"

namespace spdtraj {
namespace {

constexpr double kTieRel = 1e-12;

struct Step {
  int di, dj;
};

std::vector<Step> admissible_steps(std::size_t max_step) {
  std::vector<Step> steps;
  for (int a = 1; a <= static_cast<int>(max_step); ++a)
    for (int b = 1; b <= static_cast<int>(max_step); ++b)
      if (std::gcd(a, b) == 1) steps.push_back({a, b});
  return steps;
}

// q1 sampled at the midpoints of `points` equal subintervals of [0, 1].
class SegmentCost {
 public:
  SegmentCost(const Fiber& q1, const Fiber& q2, std::size_t grid)
      : q2_(q2), grid_(grid), dim_(q1.dim()) {
    const std::size_t t = q1.samples();
    per_cell_ = std::max<std::size_t>(1, (t - 1 + grid - 2) / (grid - 1));
    points_ = per_cell_ * (grid - 1);
    mid_.resize(points_ * dim_);
    for (std::size_t p = 0; p < points_; ++p)
      interp_row(q1, (static_cast<double>(p) + 0.5) / static_cast<double>(points_),
                 std::span<double>(mid_.data() + p * dim_, dim_));
  }

  // Cost of the straight segment (i, j) -> (k, l) in grid units.
  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return span(i, k, static_cast<double>(j), static_cast<double>(l));
  }

  // Cost over t-cells [i, k) of the linear warp from grid height a to b
  // (fractional grid units).
  double span(std::size_t i, std::size_t k, double a, double b) const {
    const double cells = static_cast<double>(grid_ - 1);
    const double slope = (b - a) / static_cast<double>(k - i);
    const double root = std::sqrt(slope);
    const double h = 1.0 / static_cast<double>(points_);
    const double s0 = a / cells;
    const double t0 = static_cast<double>(i) / cells;
    const std::size_t rows = q2_.samples();
    double acc = 0.0;
    for (std::size_t p = i * per_cell_; p < k * per_cell_; ++p) {
      const double t = (static_cast<double>(p) + 0.5) * h;
      const double s = std::clamp(s0 + slope * (t - t0), 0.0, 1.0);
      const double pos = s * static_cast<double>(rows - 1);
      const auto r = std::min(static_cast<std::size_t>(pos), rows - 2);
      acc += kernels::interp_sq_dist(mid_.data() + p * dim_, q2_.row(r).data(),
                                     q2_.row(r + 1).data(), pos - static_cast<double>(r), root,
                                     dim_);
    }
    return acc * h;
  }

 private:
  const Fiber& q2_;
  std::size_t grid_;
  std::size_t dim_;
  std::size_t per_cell_ = 1;
  std::size_t points_ = 1;
  std::vector<double> mid_;
};

void check_fields(const Fiber& q1, const Fiber& q2) {
  if (q1.samples() != q2.samples() || q1.dim() != q2.dim())
    throw ValidationError("dp: fields must have the same shape");
  if (q1.samples() < 2) throw ValidationError("dp: need at least 2 samples");
}

}  // namespace

DpResult dp_optimal_warp(const Fiber& q1, const Fiber& q2, const DpOptions& opts) {
  check_fields(q1, q2);
  const std::size_t n = opts.grid;
  if (n < 2) throw ValidationError("dp: grid must have at least 2 points");
  if (opts.max_step < 1) throw ValidationError("dp: max_step must be positive");
  const SegmentCost seg(q1, q2, n);
  const auto steps = admissible_steps(opts.max_step);
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> cost(n * n, inf);
  std::vector<double> dev(n * n, inf);
  std::vector<int> from(n * n, -1);
  cost[0] = 0.0;
  dev[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t l = 1; l < n; ++l) {
      const std::size_t at = k * n + l;
      const double diag = std::abs(static_cast<double>(k) - static_cast<double>(l));
      for (const auto& st : steps) {
        if (static_cast<std::size_t>(st.di) > k || static_cast<std::size_t>(st.dj) > l) continue;
        const std::size_t i = k - st.di, j = l - st.dj;
        const std::size_t prev = i * n + j;
        if (cost[prev] == inf) continue;
        const double c = cost[prev] + seg(i, j, k, l);
        const double d = dev[prev] + diag;
        const double tie = kTieRel * std::max(std::abs(c), std::abs(cost[at]));
        if (cost[at] == inf || c < cost[at] - tie || (c <= cost[at] + tie && d < dev[at])) {
          cost[at] = c;
          dev[at] = d;
          from[at] = static_cast<int>(prev);
        }
      }
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> path;
  for (int at = static_cast<int>(n * n - 1); at >= 0; at = from[at]) {
    path.emplace_back(at / n, at % n);
    if (at == 0) break;
  }
  std::reverse(path.begin(), path.end());

  std::vector<double> values(n);
  const double scale = 1.0 / static_cast<double>(n - 1);
  for (std::size_t s = 0; s + 1 < path.size(); ++s) {
    const auto [i, j] = path[s];
    const auto [k, l] = path[s + 1];
    for (std::size_t x = i; x <= k; ++x)
      values[x] = (static_cast<double>(j) + static_cast<double>(l - j) *
                                                static_cast<double>(x - i) /
                                                static_cast<double>(k - i)) *
                  scale;
  }
  return {WarpFn(std::move(values)), cost[n * n - 1]};
}

DpResult refine_warp(const Fiber& q1, const Fiber& q2, const WarpFn& gamma,
                     const DpOptions& opts, std::size_t sweeps) {
  check_fields(q1, q2);
  const std::size_t n = opts.grid;
  if (n < 2) throw ValidationError("dp: grid must have at least 2 points");
  const WarpFn g = gamma.size() == n ? gamma : gamma.resample(n);
  const SegmentCost seg(q1, q2, n);
  const double cells = static_cast<double>(n - 1);
  const double lo_slope = 1.0 / static_cast<double>(opts.max_step);
  const double hi_slope = static_cast<double>(opts.max_step);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = g.values()[i] * cells;
  // Heights may start off the slope band (resampled input); pull them in.
  for (std::size_t i = 1; i < n; ++i) y[i] = std::max(y[i], y[i - 1] + lo_slope);
  y[n - 1] = cells;
  for (std::size_t i = n - 1; i-- > 0;) y[i] = std::min(y[i], y[i + 1] - lo_slope);

  // Moves are hat functions of half-width b centred on a node, from coarse to
  // fine. Single-node moves alone (b = 1) relax smooth offsets very slowly.
  std::vector<std::size_t> widths;
  for (std::size_t b = 1; b < n / 2; b *= 2) widths.insert(widths.begin(), b);
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  std::vector<double> trial(n);
  for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
    double gain = 0.0;
    for (std::size_t b : widths) {
      for (std::size_t c = 1; c + 1 < n; c += std::max<std::size_t>(1, b / 2)) {
        const std::size_t first = c > b ? c - b : 0;
        const std::size_t last = std::min(c + b, n - 1);
        auto hat = [&](std::size_t j) {
          const double dist = std::abs(static_cast<double>(j) - static_cast<double>(c));
          return j == 0 || j == n - 1 ? 0.0 : std::max(0.0, 1.0 - dist / static_cast<double>(b));
        };
        // Feasible offsets keep every touched slope in the band.
        double lo = -static_cast<double>(b), hi = static_cast<double>(b);
        for (std::size_t j = first; j < last; ++j) {
          const double gap = y[j + 1] - y[j];
          const double dh = hat(j + 1) - hat(j);
          if (dh > 0) {
            lo = std::max(lo, (lo_slope - gap) / dh);
            hi = std::min(hi, (hi_slope - gap) / dh);
          } else if (dh < 0) {
            lo = std::max(lo, (hi_slope - gap) / dh);
            hi = std::min(hi, (lo_slope - gap) / dh);
          }
        }
        if (!(hi > lo)) continue;
        auto cost = [&](double delta) {
          for (std::size_t j = first; j <= last; ++j) trial[j] = y[j] + delta * hat(j);
          double acc = 0.0;
          for (std::size_t j = first; j < last; ++j) acc += seg.span(j, j + 1, trial[j], trial[j + 1]);
          return acc;
        };
        double a = lo, z = hi;
        double p = z - golden * (z - a), q = a + golden * (z - a);
        double fp = cost(p), fq = cost(q);
        for (int it = 0; it < 40 && z - a > 1e-9; ++it) {
          if (fp < fq) {
            z = q;
            q = p;
            fq = fp;
            p = z - golden * (z - a);
            fp = cost(p);
          } else {
            a = p;
            p = q;
            fp = fq;
            q = a + golden * (z - a);
            fq = cost(q);
          }
        }
        const double best = fp < fq ? p : q;
        const double f_best = std::min(fp, fq);
        const double f_now = cost(0.0);
        if (f_best < f_now) {
          gain += f_now - f_best;
          for (std::size_t j = first; j <= last; ++j) y[j] += best * hat(j);
        }
      }
    }
    if (gain <= 1e-14) break;
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) total += seg.span(i, i + 1, y[i], y[i + 1]);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = std::clamp(y[i] / cells, 0.0, 1.0);
  values.front() = 0.0;
  values.back() = 1.0;
  return {WarpFn(std::move(values)), total};
}

double dp_objective(const Fiber& q1, const Fiber& q2, const WarpFn& gamma, std::size_t grid) {
  check_fields(q1, q2);
  const WarpFn g = gamma.size() == grid ? gamma : gamma.resample(grid);
  const SegmentCost seg(q1, q2, grid);
  double acc = 0.0;
  const double scale = static_cast<double>(grid - 1);
  for (std::size_t i = 0; i + 1 < grid; ++i) {
    const double j = g.values()[i] * scale;
    const double l = g.values()[i + 1] * scale;
    acc += seg.span(i, i + 1, j, l);
  }
  return acc;
}

DtwResult pointwise_dtw(const std::vector<double>& cost, std::size_t n) {
  if (n < 2 || cost.size() != n * n) throw ValidationError("dtw: cost must be n x n, n >= 2");
  const double h = 1.0 / static_cast<double>(n - 1);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> acc(n * n, inf);
  std::vector<double> dev(n * n, inf);
  std::vector<int> from(n * n, -1);
  acc[0] = 0.0;
  dev[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == 0 && j == 0) continue;
      const std::size_t at = i * n + j;
      const double diag = std::abs(static_cast<double>(i) - static_cast<double>(j));
      auto relax = [&](std::size_t pi, std::size_t pj, double add) {
        const std::size_t prev = pi * n + pj;
        const double c = acc[prev] + add;
        const double d = dev[prev] + diag;
        const double tie = kTieRel * std::max(std::abs(c), std::abs(acc[at]));
        if (acc[at] == inf || c < acc[at] - tie || (c <= acc[at] + tie && d < dev[at])) {
          acc[at] = c;
          dev[at] = d;
          from[at] = static_cast<int>(prev);
        }
      };
      // Trapezoid in t for moves that advance t; vertical moves take no time.
      if (i > 0 && j > 0) relax(i - 1, j - 1, 0.5 * h * (cost[(i - 1) * n + j - 1] + cost[at]));
      if (i > 0) relax(i - 1, j, 0.5 * h * (cost[(i - 1) * n + j] + cost[at]));
      if (j > 0) relax(i, j - 1, 0.0);
    }
  }
  std::vector<double> values(n, 0.0);
  for (int at = static_cast<int>(n * n - 1); at > 0; at = from[at]) {
    const std::size_t i = at / n, j = at % n;
    values[i] = std::max(values[i], static_cast<double>(j) * h);
  }
  values[0] = 0.0;
  return {acc[n * n - 1], WarpFn(std::move(values))};
}

}  // namespace spdtraj
