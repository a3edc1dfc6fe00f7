#include "spdtraj/matrix_function.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "spdtraj/error.hpp"

namespace spdtraj {

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

SymEig::SymEig(const Matrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("matrix function: matrix is not square");
  if (!m.allFinite()) throw ValidationError("matrix function: non-finite entries");
  if (!is_symmetric(m)) throw ValidationError("matrix function: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
  if (es.info() != Eigen::Success)
    throw NumericalRangeError("matrix function: eigendecomposition failed");
  values_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

void SymEig::require_positive(const char* what) const {
  if (values_.size() == 0) return;
  const double lo = values_.minCoeff();
  const double hi = values_.maxCoeff();
  if (!(hi > 0.0) || lo <= kPdTol * hi) {
    std::ostringstream os;
    os << what << ": eigenvalue " << lo << " is not positive (largest " << hi << ")";
    throw NumericalRangeError(os.str());
  }
}

Matrix SymEig::sqrt() const {
  require_positive("sqrt");
  return apply([](double x) { return std::sqrt(x); });
}

Matrix SymEig::inv_sqrt() const {
  require_positive("inverse sqrt");
  return apply([](double x) { return 1.0 / std::sqrt(x); });
}

Matrix SymEig::log() const {
  require_positive("log");
  return apply([](double x) { return std::log(x); });
}

Matrix SymEig::exp() const {
  if (values_.size() > 0 && values_.maxCoeff() > 700.0)
    throw NumericalRangeError("exp: eigenvalue " + std::to_string(values_.maxCoeff()) +
                              " overflows");
  if (values_.size() > 0 && values_.minCoeff() < -700.0)
    throw NumericalRangeError("exp: eigenvalue " + std::to_string(values_.minCoeff()) +
                              " underflows");
  return apply([](double x) { return std::exp(x); });
}

Matrix SymEig::inverse() const {
  require_positive("inverse");
  return apply([](double x) { return 1.0 / x; });
}

Matrix SymEig::pow(double p) const {
  require_positive("pow");
  return apply([p](double x) { return std::pow(x, p); });
}

Matrix sym_matrix_function(const Matrix& m, MatrixFunction f, double power) {
  const SymEig eig(m);
  switch (f) {
    case MatrixFunction::kSqrt:
      return eig.sqrt();
    case MatrixFunction::kLog:
      return eig.log();
    case MatrixFunction::kExp:
      return eig.exp();
    case MatrixFunction::kPow:
      return eig.pow(power);
  }
  throw ValidationError("matrix function: unknown function tag");
}

}  // namespace spdtraj
