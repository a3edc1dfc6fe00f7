#include "spdtraj/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "spdtraj/error.hpp"

namespace spdtraj {

NnResult nearest_neighbour(const DenseMatrix& dist, const std::vector<std::string>& candidate_labels) {
  if (candidate_labels.empty()) throw ValidationError("1-NN: no candidates");
  NnResult r;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const auto& row = dist[i];
    if (row.size() != candidate_labels.size())
      throw ValidationError("1-NN: row " + std::to_string(i) + " has the wrong length");
    std::size_t best = row.size();
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (std::isnan(row[j])) continue;
      if (best == row.size() || row[j] < row[best]) best = j;
    }
    if (best == row.size()) {
      r.predicted.emplace_back();
      r.neighbour.push_back(best);
      r.distance.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    r.predicted.push_back(candidate_labels[best]);
    r.neighbour.push_back(best);
    r.distance.push_back(row[best]);
  }
  return r;
}

ClassReport make_report(const std::vector<std::string>& truth,
                        const std::vector<std::string>& predicted) {
  if (truth.size() != predicted.size()) throw ValidationError("report: size mismatch");
  ClassReport rep;
  std::set<std::string> labels(truth.begin(), truth.end());
  for (const auto& p : predicted)
    if (!p.empty()) labels.insert(p);
  rep.labels.assign(labels.begin(), labels.end());
  auto index = [&](const std::string& s) {
    return static_cast<std::size_t>(
        std::lower_bound(rep.labels.begin(), rep.labels.end(), s) - rep.labels.begin());
  };
  rep.confusion.assign(rep.labels.size(), std::vector<std::size_t>(rep.labels.size(), 0));
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    auto& c = counts[truth[i]];
    ++c.second;
    if (!predicted[i].empty()) ++rep.confusion[index(truth[i])][index(predicted[i])];
    if (predicted[i] == truth[i]) {
      ++c.first;
      ++hits;
    }
  }
  for (const auto& [label, c] : counts)
    rep.per_class[label] = static_cast<double>(c.first) / static_cast<double>(c.second);
  rep.total = truth.size();
  rep.accuracy = truth.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(truth.size());
  return rep;
}

DenseMatrix submatrix(const DenseMatrix& full, const std::vector<std::size_t>& rows,
                      const std::vector<std::size_t>& cols) {
  DenseMatrix out(rows.size(), std::vector<double>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out[i][j] = full.at(rows[i]).at(cols[j]);
  return out;
}

DenseMatrix fuse_quadrants(const std::array<DenseMatrix, 4>& parts, const QuadrantWeights& w) {
  const std::size_t rows = parts[0].size();
  DenseMatrix out(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t cols = parts[0][i].size();
    out[i].assign(cols, 0.0);
    for (std::size_t k = 0; k < 4; ++k) {
      if (parts[k].size() != rows || parts[k][i].size() != cols)
        throw ValidationError("quadrant matrices differ in shape");
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += w[k] * parts[k][i][j];
    }
  }
  return out;
}

double loo_accuracy(const DenseMatrix& dist, const std::vector<std::string>& labels) {
  const std::size_t n = labels.size();
  if (dist.size() != n) throw ValidationError("LOO: matrix does not match the labels");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || std::isnan(dist[i][j])) continue;
      if (best == n || dist[i][j] < dist[i][best]) best = j;
    }
    if (best < n && labels[best] == labels[i]) ++hits;
  }
  return n == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(n);
}

WeightSearch train_weights(const std::array<DenseMatrix, 4>& train,
                           const std::vector<std::string>& labels, double step) {
  if (std::set<std::string>(labels.begin(), labels.end()).size() < 2)
    throw ValidationError("train-weights: the train split needs at least two classes");
  const long units = std::lround(1.0 / step);
  if (units < 1 || std::abs(static_cast<double>(units) * step - 1.0) > 1e-9)
    throw ValidationError("train-weights: step must divide 1");
  WeightSearch best;
  best.accuracy = -1.0;
  double best_spread = std::numeric_limits<double>::infinity();
  const double u = static_cast<double>(units);
  // Loops run in lexicographic order, so strict comparisons keep the
  // lexicographically smallest weights among exact ties.
  for (long a = 0; a <= units; ++a)
    for (long b = 0; a + b <= units; ++b)
      for (long c = 0; a + b + c <= units; ++c) {
        const long d = units - a - b - c;
        const QuadrantWeights w{a / u, b / u, c / u, d / u};
        const double acc = loo_accuracy(fuse_quadrants(train, w), labels);
        double spread = 0.0;
        for (double x : w) spread += (x - 0.25) * (x - 0.25);
        ++best.candidates;
        if (acc > best.accuracy + 1e-12 ||
            (std::abs(acc - best.accuracy) <= 1e-12 && spread < best_spread - 1e-15)) {
          best.accuracy = acc;
          best.weights = w;
          best_spread = spread;
        }
      }
  // Exact simplex: the last weight absorbs rounding.
  best.weights[3] = 1.0 - best.weights[0] - best.weights[1] - best.weights[2];
  return best;
}

WarpFn random_warp(std::mt19937_64& rng, std::size_t samples, double strength) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double c = 2.0 * strength * unit(rng);
  const double a = std::clamp(0.8 * strength, 0.0, 0.8) * unit(rng);
  const double k = 2.0 * std::numbers::pi;
  return WarpFn::from_function(samples, [&](double t) {
    const double e = std::abs(c) < 1e-12 ? t : std::expm1(c * t) / std::expm1(c);
    return std::clamp(e + a * std::sin(k * e) / k, 0.0, 1.0);
  });
}

void SimulateSpec::validate() const {
  if (manifold != "spd" && manifold != "sphere")
    throw ValidationError("simulate: manifold must be spd or sphere");
  if (classes < 1) throw ValidationError("simulate: need at least one class");
  if (train_per_class + test_per_class < 1) throw ValidationError("simulate: no samples per class");
  if (samples < 2) throw ValidationError("simulate: need T >= 2");
  if (manifold == "spd" && n < 1) throw ValidationError("simulate: need n >= 1");
  if (!(warp_noise >= 0.0) || !(start_noise >= 0.0))
    throw ValidationError("simulate: noise levels must be nonnegative");
}

namespace {

Matrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  const auto k = static_cast<Eigen::Index>(n);
  Matrix a(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
  const double norm = a.norm();
  return norm > 0 ? Matrix(a / norm) : a;
}

// Classes share one full sinusoid period across a drift and differ in its
// amplitude, so their shapes are close while rate changes move them apart.
double wiggle(std::size_t c, double t) {
  return (0.2 + 0.2 * static_cast<double>(c)) * std::sin(2.0 * std::numbers::pi * t);
}

std::vector<Trajectory<SpdManifold>> spd_bases(const SimulateSpec& s, std::mt19937_64& rng) {
  const SpdManifold m(s.n);
  const Matrix a = random_symmetric(rng, s.n), b = random_symmetric(rng, s.n);
  const Matrix p0 = sym_matrix_function(0.3 * random_symmetric(rng, s.n), MatrixFunction::kExp);
  const SpdPoint start(p0);
  std::vector<Trajectory<SpdManifold>> out(s.classes);
  std::vector<double> coords(s.n * s.n);
  for (std::size_t c = 0; c < s.classes; ++c) {
    for (std::size_t k = 0; k < s.samples; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(s.samples - 1);
      m.from_body(1.2 * t * a + wiggle(c, t) * b, coords);
      out[c].points.push_back(m.exp(start, coords));
    }
  }
  return out;
}

std::vector<Trajectory<SphereManifold>> sphere_bases(const SimulateSpec& s, std::mt19937_64& rng) {
  const SphereManifold m;
  std::normal_distribution<double> g;
  const Eigen::Vector3d p = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
  Eigen::Vector3d a = Eigen::Vector3d(g(rng), g(rng), g(rng));
  a = (a - a.dot(p) * p).normalized();
  const Eigen::Vector3d b = p.cross(a);
  const SpherePoint start(p);
  std::vector<Trajectory<SphereManifold>> out(s.classes);
  for (std::size_t c = 0; c < s.classes; ++c) {
    for (std::size_t k = 0; k < s.samples; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(s.samples - 1);
      const Eigen::Vector3d v = 1.2 * t * a + wiggle(c, t) * b;
      out[c].points.push_back(m.exp(start, std::vector<double>{v[0], v[1], v[2]}));
    }
  }
  return out;
}

Matrix random_skew(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  const auto k = static_cast<Eigen::Index>(n);
  Matrix a = Matrix::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < i; ++j) {
      a(i, j) = g(rng);
      a(j, i) = -a(i, j);
    }
  const double norm = a.norm();
  return norm > 0 ? Matrix(a / norm) : a;
}

}  // namespace

std::vector<SimulatedItem> simulate(const SimulateSpec& spec) {
  spec.validate();
  std::mt19937_64 world(spec.seed);
  std::mt19937_64 noise(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  const bool spd = spec.manifold == "spd";
  std::vector<Trajectory<SpdManifold>> spd_base;
  std::vector<Trajectory<SphereManifold>> sphere_base;
  if (spd) spd_base = spd_bases(spec, world);
  else sphere_base = sphere_bases(spec, world);

  const std::size_t per = spec.train_per_class + spec.test_per_class;
  const SpdManifold spd_m(spd ? spec.n : 1);
  const SphereManifold sphere_m;
  std::vector<SimulatedItem> out;
  for (std::size_t c = 0; c < spec.classes; ++c) {
    for (std::size_t i = 0; i < per; ++i) {
      SimulatedItem item;
      item.label = "class" + std::to_string(c);
      item.id = item.label + "_" + std::to_string(i);
      item.split = i < spec.train_per_class ? Split::Train : Split::Test;
      const WarpFn g = random_warp(noise, spec.samples, spec.warp_noise);
      if (spd) {
        auto a = warp_trajectory(spd_m, spd_base[c], g);
        // Congruence by exp(eps S) is an isometry; it moves the start only.
        const Matrix h = sym_matrix_function(spec.start_noise * random_symmetric(noise, spec.n),
                                             MatrixFunction::kExp);
        for (auto& p : a.points) p = SpdPoint(symmetrize(h * p.mat() * h.transpose()));
        item.data = to_data(a);
      } else {
        auto a = warp_trajectory(sphere_m, sphere_base[c], g);
        const Matrix k = spec.start_noise * random_skew(noise, 3);
        const Eigen::Vector3d axis(k(2, 1), k(0, 2), k(1, 0));
        const double angle = axis.norm();
        const Eigen::Matrix3d r = angle > 0 ? Eigen::AngleAxisd(angle, axis / angle).toRotationMatrix()
                                            : Eigen::Matrix3d::Identity();
        for (auto& p : a.points) p = SpherePoint::normalized(r * p.vec());
        item.data = to_data(a);
      }
      out.push_back(std::move(item));
    }
  }
  return out;
}

}  // namespace spdtraj
