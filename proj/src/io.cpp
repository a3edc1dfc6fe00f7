#include "spdtraj/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "spdtraj/error.hpp"

namespace spdtraj {

using nlohmann::json;

TrajectoryData to_data(const Trajectory<SpdManifold>& a) {
  TrajectoryData d;
  d.manifold = "spd";
  d.n = a.points.empty() ? 0 : a.points.front().dim();
  for (const auto& p : a.points) {
    std::vector<double> row(d.n * d.n);
    for (std::size_t i = 0; i < d.n; ++i)
      for (std::size_t j = 0; j < d.n; ++j)
        row[i * d.n + j] = p.mat()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    d.points.push_back(std::move(row));
  }
  return d;
}

TrajectoryData to_data(const Trajectory<SphereManifold>& a) {
  TrajectoryData d;
  d.manifold = "sphere";
  d.n = 3;
  for (const auto& p : a.points) d.points.push_back({p.vec()[0], p.vec()[1], p.vec()[2]});
  return d;
}

Trajectory<SpdManifold> spd_trajectory(const TrajectoryData& d) {
  if (d.manifold != "spd") throw ValidationError("trajectory is not on the spd manifold");
  Trajectory<SpdManifold> a;
  const auto n = static_cast<Eigen::Index>(d.n);
  for (std::size_t k = 0; k < d.points.size(); ++k) {
    const auto& row = d.points[k];
    if (row.size() != d.n * d.n)
      throw ValidationError("point " + std::to_string(k) + ": expected " +
                            std::to_string(d.n * d.n) + " values");
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(i * n + j)];
    try {
      a.points.emplace_back(m);
    } catch (const std::exception& e) {
      throw ValidationError("point " + std::to_string(k) + ": " + e.what());
    }
  }
  return a;
}

Trajectory<SphereManifold> sphere_trajectory(const TrajectoryData& d) {
  if (d.manifold != "sphere") throw ValidationError("trajectory is not on the sphere");
  Trajectory<SphereManifold> a;
  for (std::size_t k = 0; k < d.points.size(); ++k) {
    const auto& row = d.points[k];
    if (row.size() != 3) throw ValidationError("point " + std::to_string(k) + ": expected 3 values");
    try {
      a.points.emplace_back(Eigen::Vector3d(row[0], row[1], row[2]));
    } catch (const std::exception& e) {
      throw ValidationError("point " + std::to_string(k) + ": " + e.what());
    }
  }
  return a;
}

std::string trajectory_to_json(const TrajectoryData& d) {
  json j;
  j["manifold"] = d.manifold;
  j["n"] = d.n;
  j["T"] = d.points.size();
  j["points"] = d.points;
  return j.dump();
}

TrajectoryData trajectory_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("trajectory JSON: ") + e.what());
  }
  TrajectoryData d;
  try {
    d.manifold = j.at("manifold").get<std::string>();
    d.n = j.at("n").get<std::size_t>();
    d.points = j.at("points").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("trajectory JSON: ") + e.what());
  }
  if (d.manifold != "spd" && d.manifold != "sphere")
    throw ValidationError("trajectory JSON: unknown manifold '" + d.manifold + "'");
  if (j.contains("T") && j["T"].get<std::size_t>() != d.points.size())
    throw ValidationError("trajectory JSON: T does not match the number of points");
  return d;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

TrajectoryData read_trajectory(const std::filesystem::path& path) {
  try {
    return trajectory_from_json(read_text(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_trajectory(const TrajectoryData& d, const std::filesystem::path& path) {
  write_text(trajectory_to_json(d) + "\n", path);
}

Split parse_split(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  if (s.empty() || s == "unassigned") return Split::Unassigned;
  throw ValidationError("unknown split '" + s + "'");
}

const char* split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Test: return "test";
    default: return "unassigned";
  }
}

void validate_manifest(const std::vector<ManifestEntry>& entries) {
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (e.id.empty()) throw ValidationError("manifest: empty id");
    if (!seen.insert(e.id).second) throw ValidationError("manifest: duplicate id '" + e.id + "'");
    if (e.label.empty()) throw ValidationError("manifest: entry '" + e.id + "' has no label");
    if (e.paths.size() != 1 && e.paths.size() != 4)
      throw ValidationError("manifest: entry '" + e.id + "' needs 1 or 4 paths");
  }
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (j.is_object() && j.contains("entries")) j = j["entries"];
  if (!j.is_array()) throw ValidationError(path.string() + ": manifest must be a JSON array");
  const auto base = path.parent_path();
  std::vector<ManifestEntry> out;
  for (const auto& item : j) {
    ManifestEntry e;
    try {
      e.id = item.at("id").get<std::string>();
      e.label = item.value("label", std::string());
      e.split = parse_split(item.value("split", std::string()));
      e.group = item.value("group", std::string());
      std::vector<std::string> paths;
      if (item.contains("paths")) paths = item["paths"].get<std::vector<std::string>>();
      else paths.push_back(item.at("path").get<std::string>());
      for (const auto& p : paths) {
        std::filesystem::path fp(p);
        e.paths.push_back(fp.is_absolute() ? fp : base / fp);
      }
    } catch (const json::exception& ex) {
      throw ValidationError(path.string() + ": " + ex.what());
    }
    out.push_back(std::move(e));
  }
  validate_manifest(out);
  return out;
}

void write_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path) {
  validate_manifest(entries);
  const auto base = path.parent_path();
  auto rel = [&](const std::filesystem::path& p) {
    if (base.empty()) return p.generic_string();
    const auto r = p.lexically_relative(base);
    return (r.empty() || *r.begin() == "..") ? p.generic_string() : r.generic_string();
  };
  json j = json::array();
  for (const auto& e : entries) {
    json item;
    item["id"] = e.id;
    if (e.paths.size() == 1) {
      item["path"] = rel(e.paths.front());
    } else {
      std::vector<std::string> ps;
      for (const auto& p : e.paths) ps.push_back(rel(p));
      item["paths"] = ps;
    }
    item["label"] = e.label;
    item["split"] = split_name(e.split);
    if (!e.group.empty()) item["group"] = e.group;
    j.push_back(item);
  }
  write_text(j.dump(2) + "\n", path);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::filesystem::path ids_sidecar(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".ids.json");
}

void write_matrix_csv(const DenseMatrix& m, const std::vector<std::string>& ids,
                      const std::filesystem::path& path) {
  if (!ids.empty() && ids.size() != m.size())
    throw ValidationError("matrix CSV: id count does not match the row count");
  std::string text;
  for (const auto& row : m) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) text += ',';
      text += format_double(row[j]);
    }
    text += '\n';
  }
  write_text(text, path);
  nlohmann::ordered_json side = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < ids.size(); ++i) side[std::to_string(i)] = ids[i];
  write_text(side.dump(2) + "\n", ids_sidecar(path));
}

namespace {

double parse_cell(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty() || s == "nan" || s == "NaN" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ValidationError("CSV: bad number '" + s + "'");
  return v;
}

std::vector<std::vector<double>> read_csv_rows(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      row.push_back(parse_cell(line.substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

DenseMatrix read_matrix_csv(const std::filesystem::path& path) {
  DenseMatrix m;
  try {
    m = read_csv_rows(path);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  for (const auto& row : m)
    if (row.size() != m.size())
      throw ValidationError(path.string() + ": matrix is not square");
  return m;
}

std::vector<std::string> read_matrix_ids(const std::filesystem::path& csv_path) {
  const auto side = ids_sidecar(csv_path);
  if (!std::filesystem::exists(side)) return {};
  const json j = json::parse(read_text(side));
  std::vector<std::string> ids(j.size());
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::size_t i = std::stoul(it.key());
    if (i >= ids.size()) throw ValidationError(side.string() + ": row index out of range");
    ids[i] = it.value().get<std::string>();
  }
  return ids;
}

void write_warp_csv(const WarpFn& g, const std::filesystem::path& path) {
  std::string text = "t,gamma\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    text += format_double(g.grid(i)) + "," + format_double(g.values()[i]) + "\n";
  write_text(text, path);
}

WarpFn read_warp_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  std::vector<double> values;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && line.rfind("t,", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    const std::size_t comma = line.find(',');
    values.push_back(parse_cell(comma == std::string::npos ? line : line.substr(comma + 1)));
  }
  return WarpFn(std::move(values));
}

}  // namespace spdtraj
