#pragma once

// A sampled tangent field on [0, 1]: `samples` rows of `dim` coordinates, all
// attached to one base point. Coordinates are isometric (Euclidean dot product
// equals the Riemannian inner product), so L2 quantities reduce to flat
// array kernels.

#include <cstddef>
#include <span>
#include <vector>

namespace spdtraj {

class Fiber {
 public:
  Fiber() = default;
  Fiber(std::size_t samples, std::size_t dim);

  std::size_t samples() const { return samples_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return samples_ == 0; }

  std::span<double> row(std::size_t k) { return {data_.data() + k * dim_, dim_}; }
  std::span<const double> row(std::size_t k) const { return {data_.data() + k * dim_, dim_}; }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  void set_zero();
  Fiber& operator+=(const Fiber& o);
  Fiber& operator-=(const Fiber& o);
  Fiber& operator*=(double s);
  // this += alpha * o
  void add_scaled(double alpha, const Fiber& o);

  friend Fiber operator+(Fiber a, const Fiber& b) { return a += b; }
  friend Fiber operator-(Fiber a, const Fiber& b) { return a -= b; }
  friend Fiber operator*(double s, Fiber a) { return a *= s; }

 private:
  std::size_t samples_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// Trapezoid weights on the uniform grid of [0, 1] with `samples` points.
std::vector<double> trapezoid_weights(std::size_t samples);

// Trapezoid-rule L2 inner product / norm over [0, 1].
double l2_inner(const Fiber& a, const Fiber& b);
double l2_norm_sq(const Fiber& a);
double l2_norm(const Fiber& a);
double l2_dist(const Fiber& a, const Fiber& b);

// Linear interpolation of the rows at s in [0, 1].
void interp_row(const Fiber& q, double s, std::span<double> out);

// Apply a linear map row by row: out.row(k) = f(in.row(k)).
template <class Transport>
Fiber transport_fiber(const Transport& t, const Fiber& in) {
  Fiber out(in.samples(), in.dim());
  for (std::size_t k = 0; k < in.samples(); ++k) t.apply(in.row(k), out.row(k));
  return out;
}

}  // namespace spdtraj
