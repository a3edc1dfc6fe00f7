#pragma once

#include <cstddef>
#include <vector>

namespace spdtraj {

// A sampled warping function: values on the uniform grid of [0, 1] with
// gamma(0) = 0, gamma(1) = 1 and non-decreasing in between. Evaluated by
// piecewise-linear interpolation.
class WarpFn {
 public:
  explicit WarpFn(std::vector<double> values);

  static WarpFn identity(std::size_t n);
  template <class F>
  static WarpFn from_function(std::size_t n, F&& f) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = f(n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1));
    return WarpFn(std::move(v));
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double grid(std::size_t i) const {
    return static_cast<double>(i) / static_cast<double>(values_.size() - 1);
  }

  double operator()(double t) const;

  WarpFn resample(std::size_t n) const;
  // (this o inner)(t) = this(inner(t)), sampled on inner's grid.
  WarpFn compose(const WarpFn& inner) const;
  // Generalized inverse s -> inf{t : gamma(t) >= s}, sampled on this grid.
  WarpFn inverse() const;

  // Central differences (one-sided at the ends), clamped at 0. Second-order
  // accurate, which keeps the warp action on q norm-preserving to O(h^2).
  std::vector<double> derivative() const;
  // Largest slope of the piecewise-linear interpolant.
  double max_slope() const;

  // Trapezoid-rule L2 distance to the identity warp.
  double distance_to_identity() const;

 private:
  std::vector<double> values_;
};

// L2 distance between two warps, evaluated on the finer of the two grids.
double warp_l2_distance(const WarpFn& a, const WarpFn& b);

}  // namespace spdtraj
