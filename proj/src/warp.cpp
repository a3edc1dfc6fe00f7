#include "spdtraj/warp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spdtraj/error.hpp"

namespace spdtraj {
namespace {

constexpr double kEndpointTol = 1e-9;

double trapezoid_sq(const std::vector<double>& f) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    s += w * f[i] * f[i];
  }
  return s / static_cast<double>(n - 1);
}

}  // namespace

WarpFn::WarpFn(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw ValidationError("warp: need at least 2 samples");
  for (double v : values_)
    if (!std::isfinite(v)) throw ValidationError("warp: non-finite value");
  if (std::abs(values_.front()) > kEndpointTol || std::abs(values_.back() - 1.0) > kEndpointTol)
    throw ValidationError("warp: endpoints must be gamma(0) = 0 and gamma(1) = 1");
  values_.front() = 0.0;
  values_.back() = 1.0;
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] < values_[i - 1] - kEndpointTol) {
      std::ostringstream os;
      os << "warp: decreasing at sample " << i << " (" << values_[i - 1] << " -> " << values_[i]
         << ")";
      throw ValidationError(os.str());
    }
    values_[i] = std::clamp(values_[i], values_[i - 1], 1.0);
  }
}

WarpFn WarpFn::identity(std::size_t n) {
  return from_function(n, [](double t) { return t; });
}

double WarpFn::operator()(double t) const {
  const std::size_t n = values_.size();
  if (t <= 0.0) return values_.front();
  if (t >= 1.0) return values_.back();
  const double pos = t * static_cast<double>(n - 1);
  const auto i = std::min(static_cast<std::size_t>(pos), n - 2);
  const double f = pos - static_cast<double>(i);
  return (1.0 - f) * values_[i] + f * values_[i + 1];
}

WarpFn WarpFn::resample(std::size_t n) const {
  return from_function(n, [this](double t) { return (*this)(t); });
}

WarpFn WarpFn::compose(const WarpFn& inner) const {
  std::vector<double> v(inner.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (*this)(inner.values()[i]);
  return WarpFn(std::move(v));
}

WarpFn WarpFn::inverse() const {
  const std::size_t n = values_.size();
  std::vector<double> v(n);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = grid(i);
    while (j + 1 < n && values_[j + 1] < s) ++j;
    // values_[j] < s <= values_[j + 1] (or s == 0)
    if (s <= values_[0]) {
      v[i] = 0.0;
      continue;
    }
    const double a = values_[j];
    const double b = values_[std::min(j + 1, n - 1)];
    const double f = b > a ? (s - a) / (b - a) : 1.0;
    v[i] = std::clamp(grid(j) + f * (grid(std::min(j + 1, n - 1)) - grid(j)), 0.0, 1.0);
  }
  v.front() = 0.0;
  v.back() = 1.0;
  for (std::size_t i = 1; i < n; ++i) v[i] = std::max(v[i], v[i - 1]);
  return WarpFn(std::move(v));
}

std::vector<double> WarpFn::derivative() const {
  const std::size_t n = values_.size();
  std::vector<double> d(n);
  const double scale = static_cast<double>(n - 1);
  d[0] = (values_[1] - values_[0]) * scale;
  d[n - 1] = (values_[n - 1] - values_[n - 2]) * scale;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = 0.5 * (values_[i + 1] - values_[i - 1]) * scale;
  for (auto& x : d) x = std::max(0.0, x);
  return d;
}

double WarpFn::max_slope() const {
  const double scale = static_cast<double>(values_.size() - 1);
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < values_.size(); ++i)
    m = std::max(m, (values_[i + 1] - values_[i]) * scale);
  return m;
}

double WarpFn::distance_to_identity() const {
  std::vector<double> diff(values_.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = values_[i] - grid(i);
  return std::sqrt(trapezoid_sq(diff));
}

double warp_l2_distance(const WarpFn& a, const WarpFn& b) {
  const std::size_t n = std::max(a.size(), b.size());
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    diff[i] = a(t) - b(t);
  }
  return std::sqrt(trapezoid_sq(diff));
}

}  // namespace spdtraj
