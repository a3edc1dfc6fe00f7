#pragma once

// Nearest-neighbour classification over distance matrices, quadrant weight
// training and synthetic datasets.

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "spdtraj/io.hpp"
#include "spdtraj/spd.hpp"
#include "spdtraj/sphere.hpp"
#include "spdtraj/tsrvf.hpp"
#include "spdtraj/warp.hpp"

namespace spdtraj {

struct NnResult {
  std::vector<std::string> predicted;
  std::vector<std::size_t> neighbour;  // row index of the chosen train item
  std::vector<double> distance;
};

// For each query row, the label of the nearest candidate column; ties go to
// the lowest column index and NaN distances are skipped. `dist` is
// queries x candidates.
NnResult nearest_neighbour(const DenseMatrix& dist, const std::vector<std::string>& candidate_labels);

struct ClassReport {
  std::vector<std::string> labels;  // sorted
  // confusion[true][predicted], indexed like `labels`
  std::vector<std::vector<std::size_t>> confusion;
  std::map<std::string, double> per_class;
  double accuracy = 0.0;
  std::size_t total = 0;
};

ClassReport make_report(const std::vector<std::string>& truth,
                        const std::vector<std::string>& predicted);

// Rows and columns of `full` picked out by index.
DenseMatrix submatrix(const DenseMatrix& full, const std::vector<std::size_t>& rows,
                      const std::vector<std::size_t>& cols);

using QuadrantWeights = std::array<double, 4>;

DenseMatrix fuse_quadrants(const std::array<DenseMatrix, 4>& parts, const QuadrantWeights& w);

// Leave-one-out 1-NN accuracy on a square train matrix.
double loo_accuracy(const DenseMatrix& dist, const std::vector<std::string>& labels);

struct WeightSearch {
  QuadrantWeights weights{0.25, 0.25, 0.25, 0.25};
  double accuracy = 0.0;
  std::size_t candidates = 0;
};

// Exhaustive search over the simplex grid with spacing `step` for the
// weights maximizing leave-one-out accuracy. Ties go to the weights closest
// to uniform, then lexicographically smallest.
WeightSearch train_weights(const std::array<DenseMatrix, 4>& train,
                           const std::vector<std::string>& labels, double step = 0.05);

// Monotone warp with endpoints fixed; strength 0 gives the identity. Mixes an
// exponential rate change with a bounded sinusoidal one.
WarpFn random_warp(std::mt19937_64& rng, std::size_t samples, double strength);

struct SimulateSpec {
  std::string manifold = "spd";
  std::size_t classes = 3;
  std::size_t train_per_class = 5;
  std::size_t test_per_class = 5;
  std::size_t samples = 50;  // T
  std::size_t n = 3;         // SPD size
  double warp_noise = 1.0;
  double start_noise = 0.05;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SimulatedItem {
  std::string id;
  std::string label;
  Split split;
  TrajectoryData data;
};

// Per class a base trajectory; per sample a random warp of it, moved by a
// small isometry (congruence on SPD, rotation on the sphere).
std::vector<SimulatedItem> simulate(const SimulateSpec& spec);

}  // namespace spdtraj
