#pragma once

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "spdtraj/io.hpp"
#include "spdtraj/registration.hpp"
#include "spdtraj/spd.hpp"
#include "spdtraj/sphere.hpp"

namespace spdtraj::cli {

using nlohmann::json;
namespace fs = std::filesystem;

struct Common {
  std::size_t grid = 100;
  std::size_t steps = 20;
  bool full = false;
  bool fast = false;  // explicit --fast; the default anyway
  double tol = 1e-3;
  std::uint64_t seed = 1;
  std::size_t jobs = 0;  // 0: all cores
  fs::path out = ".";
  bool quiet = false;

  std::size_t threads() const;
  RegistrationOptions registration() const;
  void log(const std::string& msg) const {
    if (!quiet) std::cerr << msg << "\n";
  }
};

// Trajectories of a manifest, region by region. A failed entry keeps its
// slot with `ok[i] == false` and a message in `errors`.
struct Dataset {
  std::vector<ManifestEntry> entries;
  std::string manifold;
  std::size_t n = 0;
  std::size_t regions = 1;
  std::size_t samples = 0;
  std::vector<std::vector<TrajectoryData>> data;  // [entry][region]
  std::vector<bool> ok;
  std::map<std::string, std::string> errors;  // id -> message

  std::vector<std::string> ids() const;
  std::vector<std::string> labels() const;
};

// `resample` 0 keeps T when all entries agree and otherwise resamples
// everything to the largest T.
Dataset load_dataset(const fs::path& manifest, std::size_t resample);

// Train/test indices. Entries without a split tag are divided by a seeded
// shuffle, half of each class going to train.
void split_indices(const std::vector<ManifestEntry>& entries, std::uint64_t seed,
                   std::vector<std::size_t>& train, std::vector<std::size_t>& test);

// Manifold dispatch on the loaded data.
template <class F>
decltype(auto) with_manifold(const std::string& manifold, std::size_t n, F&& f) {
  if (manifold == "sphere") return f(SphereManifold());
  return f(SpdManifold(n));
}

inline Trajectory<SpdManifold> from_data(const SpdManifold&, const TrajectoryData& d) {
  return spd_trajectory(d);
}
inline Trajectory<SphereManifold> from_data(const SphereManifold&, const TrajectoryData& d) {
  return sphere_trajectory(d);
}

json report_errors(const std::map<std::string, std::string>& errors);
void write_json(const json& j, const fs::path& path);
std::string safe_name(const std::string& id);

}  // namespace spdtraj::cli
