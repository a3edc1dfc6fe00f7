#include "spdtraj/tsrvf.hpp"

namespace spdtraj {

Fiber warp_tsrvf(const Fiber& q, const WarpFn& gamma) {
  if (q.samples() < 2) throw ValidationError("tsrvf: need at least 2 samples");
  const WarpFn g = gamma.size() == q.samples() ? gamma : gamma.resample(q.samples());
  const auto slope = g.derivative();
  Fiber out(q.samples(), q.dim());
  for (std::size_t k = 0; k < q.samples(); ++k) {
    auto row = out.row(k);
    interp_row(q, g.values()[k], row);
    const double s = std::sqrt(slope[k]);
    for (auto& x : row) x *= s;
  }
  return out;
}

}  // namespace spdtraj
