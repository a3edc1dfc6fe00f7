#include "cli_common.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <thread>

#include "spdtraj/error.hpp"
#include "spdtraj/tsrvf.hpp"

namespace spdtraj::cli {

std::size_t Common::threads() const {
  if (jobs > 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

RegistrationOptions Common::registration() const {
  RegistrationOptions o;
  o.full = full;
  o.dp.grid = grid;
  o.tol = tol;
  o.shoot.steps = steps;
  return o;
}

std::vector<std::string> Dataset::ids() const {
  std::vector<std::string> out;
  for (const auto& e : entries) out.push_back(e.id);
  return out;
}

std::vector<std::string> Dataset::labels() const {
  std::vector<std::string> out;
  for (const auto& e : entries) out.push_back(e.label);
  return out;
}

namespace {

template <class M>
TrajectoryData resampled(const M& m, const TrajectoryData& d, std::size_t samples) {
  return to_data(resample(m, from_data(m, d), samples));
}

}  // namespace

Dataset load_dataset(const fs::path& manifest, std::size_t resample_to) {
  Dataset ds;
  ds.entries = read_manifest(manifest);
  if (ds.entries.empty()) throw ValidationError("manifest has no entries");
  ds.regions = ds.entries.front().paths.size();
  ds.data.resize(ds.entries.size());
  ds.ok.assign(ds.entries.size(), false);
  for (std::size_t i = 0; i < ds.entries.size(); ++i) {
    const auto& e = ds.entries[i];
    try {
      if (e.paths.size() != ds.regions)
        throw ValidationError("has " + std::to_string(e.paths.size()) + " regions, expected " +
                              std::to_string(ds.regions));
      for (const auto& p : e.paths) {
        auto d = read_trajectory(p);
        if (ds.manifold.empty()) {
          ds.manifold = d.manifold;
          ds.n = d.n;
        }
        if (d.manifold != ds.manifold || d.n != ds.n)
          throw ValidationError(p.string() + ": manifold " + d.manifold + "(" +
                                std::to_string(d.n) + ") differs from the dataset");
        if (d.size() < 2) throw ValidationError(p.string() + ": fewer than 2 points");
        // Parse the points now so bad matrices are reported per entry.
        with_manifold(d.manifold, d.n, [&](const auto& m) {
          validate_trajectory(m, from_data(m, d));
          return 0;
        });
        ds.data[i].push_back(std::move(d));
      }
      ds.ok[i] = true;
    } catch (const std::exception& ex) {
      ds.errors[e.id] = ex.what();
      ds.data[i].clear();
    }
  }
  std::set<std::size_t> lengths;
  for (std::size_t i = 0; i < ds.entries.size(); ++i)
    if (ds.ok[i])
      for (const auto& d : ds.data[i]) lengths.insert(d.size());
  if (lengths.empty()) return ds;
  ds.samples = resample_to > 0 ? resample_to : *lengths.rbegin();
  if (resample_to > 0 || lengths.size() > 1) {
    for (std::size_t i = 0; i < ds.entries.size(); ++i) {
      if (!ds.ok[i]) continue;
      for (auto& d : ds.data[i]) {
        if (d.size() == ds.samples) continue;
        d = with_manifold(ds.manifold, ds.n,
                          [&](const auto& m) { return resampled(m, d, ds.samples); });
      }
    }
  }
  return ds;
}

void split_indices(const std::vector<ManifestEntry>& entries, std::uint64_t seed,
                   std::vector<std::size_t>& train, std::vector<std::size_t>& test) {
  train.clear();
  test.clear();
  std::map<std::string, std::vector<std::size_t>> unassigned;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    switch (entries[i].split) {
      case Split::Train: train.push_back(i); break;
      case Split::Test: test.push_back(i); break;
      default: unassigned[entries[i].label].push_back(i);
    }
  }
  std::mt19937_64 rng(seed);
  for (auto& [label, idx] : unassigned) {
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t half = (idx.size() + 1) / 2;
    for (std::size_t k = 0; k < idx.size(); ++k) (k < half ? train : test).push_back(idx[k]);
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
}

json report_errors(const std::map<std::string, std::string>& errors) {
  json arr = json::array();
  for (const auto& [id, msg] : errors) arr.push_back({{"id", id}, {"error", msg}});
  return arr;
}

void write_json(const json& j, const fs::path& path) { write_text(j.dump(2) + "\n", path); }

std::string safe_name(const std::string& id) {
  std::string s = id;
  for (auto& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  return s;
}

}  // namespace spdtraj::cli
