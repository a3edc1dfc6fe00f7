#pragma once

#include <Eigen/Dense>

namespace spdtraj {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative symmetry tolerance: |M - M^T|_max <= kSymTol * max(1, |M|_max).
inline constexpr double kSymTol = 1e-9;
// Positive-definiteness floor relative to the largest eigenvalue.
inline constexpr double kPdTol = 1e-12;
// General numerical agreement tolerance used by invariants.
inline constexpr double kNumTol = 1e-8;

enum class MatrixFunction { kSqrt, kLog, kExp, kPow };

bool is_symmetric(const Matrix& m, double tol = kSymTol);

// (M + M^T) / 2
Matrix symmetrize(const Matrix& m);

// Spectral decomposition of a symmetric matrix, kept so that several
// functions of the same matrix cost one eigensolve.
class SymEig {
 public:
  explicit SymEig(const Matrix& m);

  const Vector& values() const { return values_; }
  const Matrix& vectors() const { return vectors_; }

  // Q diag(f(lambda)) Q^T, re-symmetrized.
  template <class F>
  Matrix apply(F&& f) const {
    Vector mapped(values_.size());
    for (Eigen::Index i = 0; i < values_.size(); ++i) mapped[i] = f(values_[i]);
    return symmetrize(vectors_ * mapped.asDiagonal() * vectors_.transpose());
  }

  // Throws NumericalRangeError naming the eigenvalue when the smallest one is
  // not above kPdTol * largest.
  void require_positive(const char* what) const;

  Matrix sqrt() const;
  Matrix inv_sqrt() const;
  Matrix log() const;
  Matrix exp() const;
  Matrix inverse() const;
  Matrix pow(double p) const;

 private:
  Vector values_;
  Matrix vectors_;
};

// f(M) for symmetric M through its eigendecomposition. `power` is only read
// for MatrixFunction::kPow.
Matrix sym_matrix_function(const Matrix& m, MatrixFunction f, double power = 1.0);

// [A, B] = AB - BA
inline Matrix bracket(const Matrix& a, const Matrix& b) { return a * b - b * a; }

}  // namespace spdtraj
