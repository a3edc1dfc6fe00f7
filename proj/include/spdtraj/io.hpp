#pragma once

// File formats: trajectory JSON, dataset manifests, CSV matrices and warps.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "spdtraj/spd.hpp"
#include "spdtraj/sphere.hpp"
#include "spdtraj/tsrvf.hpp"
#include "spdtraj/warp.hpp"

namespace spdtraj {

// {"manifold": "spd" | "sphere", "n": n, "T": T, "points": [[row-major], ...]}
// For the sphere n is 3 and each point is a unit 3-vector.
struct TrajectoryData {
  std::string manifold = "spd";
  std::size_t n = 0;
  std::vector<std::vector<double>> points;

  std::size_t size() const { return points.size(); }
};

TrajectoryData to_data(const Trajectory<SpdManifold>& a);
TrajectoryData to_data(const Trajectory<SphereManifold>& a);
Trajectory<SpdManifold> spd_trajectory(const TrajectoryData& d);
Trajectory<SphereManifold> sphere_trajectory(const TrajectoryData& d);

std::string trajectory_to_json(const TrajectoryData& d);
TrajectoryData trajectory_from_json(const std::string& text);
TrajectoryData read_trajectory(const std::filesystem::path& path);
void write_trajectory(const TrajectoryData& d, const std::filesystem::path& path);

enum class Split { Train, Test, Unassigned };
Split parse_split(const std::string& s);
const char* split_name(Split s);

// One dataset item. `paths` holds one trajectory file, or four (upper-left,
// upper-right, lower-left, lower-right) in quadrant mode.
struct ManifestEntry {
  std::string id;
  std::vector<std::filesystem::path> paths;
  std::string label;
  Split split = Split::Unassigned;
  std::string group;  // optional, e.g. speaker
};

// JSON array of {"id", "path" or "paths", "label", "split", ["group"]}.
// Relative paths are resolved against the manifest's directory on read and
// written relative to it when possible.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path);
void validate_manifest(const std::vector<ManifestEntry>& entries);

using DenseMatrix = std::vector<std::vector<double>>;

// Headerless CSV; NaN marks a missing value. The ids go to `<path>.ids.json`
// as {"0": id0, "1": id1, ...}.
void write_matrix_csv(const DenseMatrix& m, const std::vector<std::string>& ids,
                      const std::filesystem::path& path);
DenseMatrix read_matrix_csv(const std::filesystem::path& path);
std::vector<std::string> read_matrix_ids(const std::filesystem::path& csv_path);
std::filesystem::path ids_sidecar(const std::filesystem::path& csv_path);

// "t,gamma" rows.
void write_warp_csv(const WarpFn& g, const std::filesystem::path& path);
WarpFn read_warp_csv(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::string& text, const std::filesystem::path& path);
// Shortest text that reads back to the same double.
std::string format_double(double v);

}  // namespace spdtraj
