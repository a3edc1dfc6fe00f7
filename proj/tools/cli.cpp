#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cli_common.hpp"
#include "spdtraj/classify.hpp"
#include "spdtraj/error.hpp"
#include "spdtraj/features.hpp"
#include "spdtraj/parallel.hpp"
#include "spdtraj/stats.hpp"

namespace spdtraj::cli {
namespace {

constexpr const char* kWeightNote =
    "engineering substitute: exhaustive simplex grid search maximizing leave-one-out 1-NN "
    "accuracy on the train split";

void add_common(CLI::App* app, Common& c) {
  app->add_option("--grid", c.grid, "DP grid size N")->check(CLI::Range(2, 100000));
  app->add_option("--steps", c.steps, "bundle exponential steps S")->check(CLI::PositiveNumber);
  auto* fast = app->add_flag("--fast", c.fast, "baseline-geodesic approximation (default)");
  app->add_flag("--full", c.full, "shooting on the bundle at every iteration")->excludes(fast);
  app->add_option("--tol", c.tol, "registration stopping threshold on |gamma - id|")
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--jobs", c.jobs, "worker threads (0 = all cores)");
  app->add_option("--out", c.out, "output directory");
  app->add_flag("--quiet", c.quiet, "no progress output");
}

std::string mode_name(const Common& c) { return c.full ? "full" : "fast"; }

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  SimulateSpec spec;
};

int cmd_simulate(const Common& c, SimulateArgs a) {
  a.spec.seed = c.seed;
  const auto items = simulate(a.spec);
  std::vector<ManifestEntry> entries;
  for (const auto& it : items) {
    const fs::path file = c.out / "trajectories" / (safe_name(it.id) + ".json");
    write_trajectory(it.data, file);
    entries.push_back({it.id, {file}, it.label, it.split, ""});
  }
  write_manifest(entries, c.out / "manifest.json");
  const auto& s = a.spec;
  write_json({{"manifold", s.manifold},
              {"classes", s.classes},
              {"train_per_class", s.train_per_class},
              {"test_per_class", s.test_per_class},
              {"T", s.samples},
              {"n", s.n},
              {"warp_noise", s.warp_noise},
              {"start_noise", s.start_noise},
              {"seed", s.seed},
              {"items", items.size()}},
             c.out / "simulate.json");
  c.log("simulate: wrote " + std::to_string(items.size()) + " trajectories to " + c.out.string());
  return 0;
}

// ---------------------------------------------------------------- features

struct FeaturesArgs {
  std::vector<std::string> dirs;
  std::string videos;
  std::string kind = "intensity";
  bool quadrants = false;
  double overlap = 0.1;
  std::size_t cell = 8, block = 2, bins = 7;
  std::string label = "unlabelled";
  std::string split;
};

int cmd_features(const Common& c, const FeaturesArgs& a) {
  FeatureConfig cfg;
  cfg.kind = parse_feature_kind(a.kind);
  cfg.quadrants = a.quadrants;
  cfg.overlap = a.overlap;
  cfg.hog = {a.cell, a.block, a.bins};

  struct Video {
    std::string id;
    fs::path dir;
    std::string label;
    Split split;
    std::string group;
  };
  std::vector<Video> videos;
  for (const auto& d : a.dirs) {
    fs::path p(d);
    const std::string id = (p.has_filename() ? p.filename() : p.parent_path().filename()).string();
    videos.push_back({id, p, a.label, parse_split(a.split), ""});
  }
  if (!a.videos.empty()) {
    const json j = json::parse(read_text(a.videos));
    const fs::path base = fs::path(a.videos).parent_path();
    for (const auto& v : j) {
      fs::path dir(v.at("dir").get<std::string>());
      if (dir.is_relative()) dir = base / dir;
      videos.push_back({v.at("id").get<std::string>(), dir, v.value("label", a.label),
                        parse_split(v.value("split", a.split)), v.value("group", std::string())});
    }
  }
  if (videos.empty()) throw ValidationError("features: no input videos");

  std::map<std::string, std::string> errors;
  std::vector<ManifestEntry> entries;
  json summary = json::array();
  for (const auto& v : videos) {
    try {
      std::vector<Image> frames;
      for (const auto& f : list_frames(v.dir)) frames.push_back(read_image(f));
      const auto trajs = video_to_trajectory(frames, cfg, c.threads());
      ManifestEntry e{v.id, {}, v.label, v.split, v.group};
      for (std::size_t r = 0; r < trajs.size(); ++r) {
        const std::string name =
            safe_name(v.id) + (trajs.size() > 1 ? "_q" + std::to_string(r) : "") + ".json";
        const fs::path file = c.out / "trajectories" / name;
        write_trajectory(to_data(trajs[r]), file);
        e.paths.push_back(file);
      }
      entries.push_back(std::move(e));
      summary.push_back({{"id", v.id}, {"frames", frames.size()},
                         {"d", feature_dim(cfg.kind, cfg.hog)}, {"regions", trajs.size()}});
      c.log("features: " + v.id + " (" + std::to_string(frames.size()) + " frames)");
    } catch (const std::exception& ex) {
      errors[v.id] = ex.what();
      c.log("features: " + v.id + " failed: " + ex.what());
    }
  }
  if (!entries.empty()) write_manifest(entries, c.out / "manifest.json");
  write_json({{"kind", feature_kind_name(cfg.kind)},
              {"quadrants", cfg.quadrants},
              {"overlap", cfg.overlap},
              {"videos", summary},
              {"errors", report_errors(errors)}},
             c.out / "features.json");
  return errors.empty() ? 0 : 1;
}

// ---------------------------------------------------------------- register

struct RegisterArgs {
  std::string first, second;
  std::size_t resample = 0;
};

template <class M>
int register_pair(const Common& c, const M& m, const TrajectoryData& d1, const TrajectoryData& d2,
                  std::size_t samples) {
  auto a1 = from_data(m, d1), a2 = from_data(m, d2);
  if (a1.size() != samples) a1 = resample(m, a1, samples);
  if (a2.size() != samples) a2 = resample(m, a2, samples);
  const auto opts = c.registration();
  const auto reg = register_repr(m, tsrvf_of(m, a1), tsrvf_of(m, a2), opts);
  const auto& r = reg.result;
  write_warp_csv(r.gamma_star, c.out / "gamma.csv");
  write_trajectory(to_data(warp_trajectory(m, a2, r.gamma_star)), c.out / "aligned.json");
  write_text("d_c,d_q\n" + format_double(r.d_c_before) + "," + format_double(r.d_q) + "\n",
             c.out / "distances.csv");
  write_json({{"mode", mode_name(c)},
              {"grid", c.grid},
              {"T", samples},
              {"d_c", r.d_c_before},
              {"d_q", r.d_q},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"approximate", r.approximate},
              {"history", r.history}},
             c.out / "register.json");
  c.log("register: d_c = " + format_double(r.d_c_before) + ", d_q = " + format_double(r.d_q));
  return 0;
}

int cmd_register(const Common& c, const RegisterArgs& a) {
  const auto d1 = read_trajectory(a.first), d2 = read_trajectory(a.second);
  if (d1.manifold != d2.manifold || d1.n != d2.n)
    throw ValidationError("register: trajectories live on different manifolds");
  const std::size_t samples = a.resample ? a.resample : std::max(d1.size(), d2.size());
  return with_manifold(d1.manifold, d1.n,
                       [&](const auto& m) { return register_pair(c, m, d1, d2, samples); });
}

// ---------------------------------------------------------------- dist

struct DistArgs {
  std::string manifest;
  std::string metric = "dq";
  std::size_t resample = 0;
  bool dump = false;
};

struct PairValue {
  double value = std::numeric_limits<double>::quiet_NaN();
  double d_c = std::numeric_limits<double>::quiet_NaN();
  std::optional<WarpFn> gamma;
  std::string error;
};

template <class M>
DenseMatrix distance_matrix(const Common& c, const M& m, const Dataset& ds, std::size_t region,
                            bool quotient, bool dump, std::map<std::string, std::string>& errors,
                            json& pair_log) {
  const std::size_t n = ds.entries.size();
  std::vector<std::optional<TsrvfRepr<M>>> reprs(n);
  parallel_for(n, c.threads(), [&](std::size_t i) {
    if (ds.ok[i]) reprs[i] = tsrvf_of(m, from_data(m, ds.data[i][region]));
  });
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (ds.ok[i] && ds.ok[j]) pairs.emplace_back(i, j);
  const auto opts = c.registration();
  std::atomic<std::size_t> done{0};
  const auto t0 = std::chrono::steady_clock::now();
  const auto values = parallel_map(pairs.size(), c.threads(), [&](std::size_t k) {
    PairValue pv;
    const auto [i, j] = pairs[k];
    try {
      if (quotient) {
        const auto reg = register_repr(m, *reprs[i], *reprs[j], opts);
        pv.value = reg.result.d_q;
        pv.d_c = reg.result.d_c_before;
        if (dump) pv.gamma = reg.result.gamma_star;
      } else {
        pv.value = pv.d_c = unaligned_distance_dc(m, *reprs[i], *reprs[j], opts);
      }
    } catch (const std::exception& ex) {
      pv.error = ex.what();
    }
    const std::size_t d = ++done;
    if (!c.quiet && (d % 50 == 0 || d == pairs.size())) {
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::ostringstream msg;
      msg << "dist: region " << region << " " << d << "/" << pairs.size() << " pairs (" << s << " s)";
      c.log(msg.str());
    }
    return pv;
  });
  DenseMatrix mat(n, std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()));
  for (std::size_t i = 0; i < n; ++i)
    if (ds.ok[i]) mat[i][i] = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    const auto& pv = values[k];
    mat[i][j] = mat[j][i] = pv.value;
    if (!pv.error.empty()) {
      errors[ds.entries[i].id + "/" + ds.entries[j].id] = pv.error;
      continue;
    }
    if (dump) {
      const std::string name = safe_name(ds.entries[i].id) + "__" + safe_name(ds.entries[j].id) +
                               (ds.regions > 1 ? "_q" + std::to_string(region) : "");
      if (pv.gamma) write_warp_csv(*pv.gamma, c.out / "pairs" / (name + ".csv"));
      pair_log.push_back({{"i", ds.entries[i].id}, {"j", ds.entries[j].id}, {"region", region},
                          {"d_c", pv.d_c}, {"value", pv.value}});
    }
  }
  return mat;
}

int cmd_dist(const Common& c, const DistArgs& a) {
  const bool quotient = a.metric == "dq" || a.metric == "d_q";
  if (!quotient && a.metric != "dc" && a.metric != "d_c")
    throw ValidationError("dist: metric must be dq or dc");
  const auto ds = load_dataset(a.manifest, a.resample);
  auto errors = ds.errors;
  json pair_log = json::array();
  json files = json::array();
  const std::string tag = quotient ? "dq" : "dc";
  for (std::size_t r = 0; r < ds.regions; ++r) {
    const auto mat = with_manifold(ds.manifold, ds.n, [&](const auto& m) {
      return distance_matrix(c, m, ds, r, quotient, a.dump, errors, pair_log);
    });
    const std::string name = "dist_" + tag + (ds.regions > 1 ? "_q" + std::to_string(r) : "") + ".csv";
    write_matrix_csv(mat, ds.ids(), c.out / name);
    files.push_back(name);
  }
  if (a.dump) write_json(pair_log, c.out / "pairs.json");
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < ds.entries.size(); ++i)
    if (!ds.ok[i]) missing.push_back(ds.entries[i].id);
  write_json({{"metric", tag},
              {"mode", mode_name(c)},
              {"grid", c.grid},
              {"T", ds.samples},
              {"entries", ds.entries.size()},
              {"files", files},
              {"missing", missing},
              {"errors", report_errors(errors)}},
             c.out / "dist.json");
  c.log("dist: wrote " + std::to_string(files.size()) + " matrix file(s) to " + c.out.string());
  return errors.empty() ? 0 : 1;
}

// ---------------------------------------------------------------- mean

struct MeanArgs {
  std::string manifest;
  std::vector<std::string> files;
  std::size_t region = 0;
  std::size_t resample = 0;
  std::size_t itermax = 20;
  double step = 0.5;
};

template <class M>
int mean_of(const Common& c, const M& m, const std::vector<std::string>& ids,
            const std::vector<TrajectoryData>& data, const MeanArgs& a) {
  std::vector<Trajectory<M>> trajs;
  for (const auto& d : data) trajs.push_back(from_data(m, d));
  MeanOptions opts;
  opts.reg = c.registration();
  opts.jobs = c.threads();
  opts.itermax = a.itermax;
  opts.step = a.step;
  opts.bundle_steps = c.steps;
  const auto res = karcher_mean(m, trajs, opts);
  write_trajectory(to_data(res.mean_trajectory), c.out / "mean.json");
  std::string hist = "iteration,variance\n";
  for (std::size_t i = 0; i < res.variance_history.size(); ++i)
    hist += std::to_string(i) + "," + format_double(res.variance_history[i]) + "\n";
  write_text(hist, c.out / "variance_history.csv");
  std::vector<Trajectory<M>> aligned;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const std::string name = safe_name(ids[i]);
    write_trajectory(to_data(res.aligned[i].trajectory), c.out / "aligned" / (name + ".json"));
    write_warp_csv(res.aligned[i].gamma, c.out / "warps" / (name + ".csv"));
    aligned.push_back(res.aligned[i].trajectory);
  }
  const double before = cross_sectional_variance(m, trajs);
  const double after = cross_sectional_variance(m, aligned);
  write_json({{"mode", mode_name(c)},
              {"count", trajs.size()},
              {"T", trajs.front().size()},
              {"initial", ids[res.initial_index]},
              {"iterations", res.iterations},
              {"converged", res.converged},
              {"variance_history", res.variance_history},
              {"cross_sectional_variance_before", before},
              {"cross_sectional_variance_after", after}},
             c.out / "mean_report.json");
  c.log("mean: " + std::to_string(res.iterations) + " iterations, variance " +
        format_double(res.variance_history.back()));
  return 0;
}

int cmd_mean(const Common& c, const MeanArgs& a) {
  std::vector<std::string> ids;
  std::vector<TrajectoryData> data;
  std::map<std::string, std::string> errors;
  std::string manifold;
  std::size_t n = 0;
  if (!a.manifest.empty()) {
    const auto ds = load_dataset(a.manifest, a.resample);
    if (a.region >= ds.regions) throw ValidationError("mean: region out of range");
    errors = ds.errors;
    for (std::size_t i = 0; i < ds.entries.size(); ++i) {
      if (!ds.ok[i]) continue;
      ids.push_back(ds.entries[i].id);
      data.push_back(ds.data[i][a.region]);
    }
    manifold = ds.manifold;
    n = ds.n;
  }
  for (const auto& f : a.files) {
    auto d = read_trajectory(f);
    if (manifold.empty()) {
      manifold = d.manifold;
      n = d.n;
    }
    if (d.manifold != manifold || d.n != n) throw ValidationError(f + ": manifold mismatch");
    ids.push_back(fs::path(f).stem().string());
    data.push_back(std::move(d));
  }
  if (data.empty()) throw ValidationError("mean: no trajectories");
  std::size_t samples = a.resample;
  for (const auto& d : data) samples = std::max(samples, a.resample ? a.resample : d.size());
  const int rc = with_manifold(manifold, n, [&](const auto& m) {
    for (auto& d : data)
      if (d.size() != samples) d = to_data(resample(m, from_data(m, d), samples));
    return mean_of(c, m, ids, data, a);
  });
  if (!errors.empty()) write_json({{"errors", report_errors(errors)}}, c.out / "mean_errors.json");
  return errors.empty() ? rc : 1;
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
  std::string manifest;
  std::vector<std::string> dist;
  std::string weights;
};

// Distance files in manifest order; the ids sidecar (when present) must
// list the manifest ids.
std::vector<DenseMatrix> load_matrices(const std::vector<std::string>& files,
                                       const std::vector<ManifestEntry>& entries) {
  std::vector<DenseMatrix> out;
  for (const auto& f : files) {
    auto mat = read_matrix_csv(f);
    const auto ids = read_matrix_ids(f);
    if (mat.size() != entries.size())
      throw ValidationError(f + ": matrix size " + std::to_string(mat.size()) +
                            " does not match the manifest (" + std::to_string(entries.size()) + ")");
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] != entries[i].id) throw ValidationError(f + ": row ids do not match the manifest");
    out.push_back(std::move(mat));
  }
  return out;
}

QuadrantWeights parse_weights(const std::string& s) {
  QuadrantWeights w{0.25, 0.25, 0.25, 0.25};
  if (s.empty()) return w;
  if (fs::exists(s)) {
    const json j = json::parse(read_text(s));
    const auto v = j.at("weights").get<std::vector<double>>();
    if (v.size() != 4) throw ValidationError("weights file needs 4 weights");
    std::copy(v.begin(), v.end(), w.begin());
  } else {
    std::stringstream ss(s);
    std::string item;
    std::size_t k = 0;
    while (std::getline(ss, item, ',')) {
      if (k == 4) throw ValidationError("--weights takes 4 values");
      w[k++] = std::stod(item);
    }
    if (k != 4) throw ValidationError("--weights takes 4 values");
  }
  double sum = 0;
  for (double x : w) {
    if (x < 0) throw ValidationError("weights must be nonnegative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("weights must sum to 1");
  return w;
}

int cmd_classify(const Common& c, const ClassifyArgs& a) {
  const auto entries = read_manifest(a.manifest);
  const auto mats = load_matrices(a.dist, entries);
  if (mats.size() != 1 && mats.size() != 4)
    throw ValidationError("classify: give one distance matrix or four quadrant matrices");
  const auto w = parse_weights(a.weights);
  const DenseMatrix dist =
      mats.size() == 1 ? mats.front() : fuse_quadrants({mats[0], mats[1], mats[2], mats[3]}, w);
  std::vector<std::size_t> train, test;
  split_indices(entries, c.seed, train, test);
  if (train.empty()) throw ValidationError("classify: the train split is empty");
  if (test.empty()) throw ValidationError("classify: the test split is empty");
  std::vector<std::string> train_labels, truth;
  for (auto i : train) train_labels.push_back(entries[i].label);
  for (auto i : test) truth.push_back(entries[i].label);
  const auto nn = nearest_neighbour(submatrix(dist, test, train), train_labels);
  const auto rep = make_report(truth, nn.predicted);

  json items = json::array();
  std::map<std::string, std::string> errors;
  for (std::size_t k = 0; k < test.size(); ++k) {
    const auto& e = entries[test[k]];
    const bool found = nn.neighbour[k] < train.size();
    if (!found) errors[e.id] = "no finite distance to any train item";
    items.push_back({{"id", e.id},
                     {"truth", e.label},
                     {"predicted", nn.predicted[k]},
                     {"neighbour", found ? entries[train[nn.neighbour[k]]].id : ""},
                     {"distance", found ? json(nn.distance[k]) : json(nullptr)}});
  }
  std::string conf = "truth\\predicted";
  for (const auto& l : rep.labels) conf += "," + l;
  conf += "\n";
  for (std::size_t i = 0; i < rep.labels.size(); ++i) {
    conf += rep.labels[i];
    for (auto v : rep.confusion[i]) conf += "," + std::to_string(v);
    conf += "\n";
  }
  write_text(conf, c.out / "confusion.csv");
  json report = {{"accuracy", rep.accuracy},
                 {"total", rep.total},
                 {"per_class", rep.per_class},
                 {"labels", rep.labels},
                 {"confusion", rep.confusion},
                 {"train", train.size()},
                 {"test", test.size()},
                 {"items", items},
                 {"errors", report_errors(errors)}};
  if (mats.size() == 4) report["weights"] = w;
  write_json(report, c.out / "classify.json");
  std::ostringstream msg;
  msg << "classify: accuracy " << rep.accuracy * 100.0 << "% (" << test.size() << " test items)";
  c.log(msg.str());
  return errors.empty() ? 0 : 1;
}

// ---------------------------------------------------------------- train-weights

struct TrainArgs {
  std::string manifest;
  std::vector<std::string> dist;
  double step = 0.05;
};

int cmd_train_weights(const Common& c, const TrainArgs& a) {
  const auto entries = read_manifest(a.manifest);
  const auto mats = load_matrices(a.dist, entries);
  if (mats.size() != 4) throw ValidationError("train-weights: needs four quadrant matrices");
  std::vector<std::size_t> train, test;
  split_indices(entries, c.seed, train, test);
  std::vector<std::string> labels;
  for (auto i : train) labels.push_back(entries[i].label);
  std::array<DenseMatrix, 4> parts;
  for (std::size_t k = 0; k < 4; ++k) parts[k] = submatrix(mats[k], train, train);
  const auto ws = train_weights(parts, labels, a.step);
  std::vector<std::string> train_ids;
  for (auto i : train) train_ids.push_back(entries[i].id);
  write_json({{"weights", ws.weights},
              {"loo_accuracy", ws.accuracy},
              {"candidates", ws.candidates},
              {"step", a.step},
              {"train", train_ids},
              {"note", kWeightNote}},
             c.out / "weights.json");
  std::ostringstream msg;
  msg << "train-weights: (" << ws.weights[0] << ", " << ws.weights[1] << ", " << ws.weights[2]
      << ", " << ws.weights[3] << "), LOO accuracy " << ws.accuracy * 100.0 << "%";
  c.log(msg.str());
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Rate-invariant analysis of trajectories on SPD matrices", "spdtraj"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "spdtraj 1.0");

  Common common;
  SimulateArgs sim;
  FeaturesArgs feat;
  RegisterArgs reg;
  DistArgs dist;
  MeanArgs mean;
  ClassifyArgs cls;
  TrainArgs train;

  auto* s = app.add_subcommand("simulate", "generate a labelled synthetic trajectory set");
  add_common(s, common);
  s->add_option("--manifold", sim.spec.manifold, "spd or sphere");
  s->add_option("--classes", sim.spec.classes, "number of classes");
  s->add_option("--train", sim.spec.train_per_class, "train items per class");
  s->add_option("--test", sim.spec.test_per_class, "test items per class");
  s->add_option("-T,--samples", sim.spec.samples, "samples per trajectory");
  s->add_option("-n,--dim", sim.spec.n, "SPD matrix size");
  s->add_option("--warp-noise", sim.spec.warp_noise, "strength of the random warps");
  s->add_option("--start-noise", sim.spec.start_noise, "size of the random isometry");

  auto* f = app.add_subcommand("features", "frame directories -> descriptor trajectories");
  add_common(f, common);
  f->add_option("dirs", feat.dirs, "frame directories (*.pgm / *.png)");
  f->add_option("--videos", feat.videos, "JSON list of {id, dir, label, split, group}");
  f->add_option("--kind", feat.kind, "intensity or hog");
  f->add_flag("--quadrants", feat.quadrants, "four overlapping quadrant trajectories");
  f->add_option("--overlap", feat.overlap, "quadrant overlap fraction");
  f->add_option("--cell", feat.cell, "HOG cell size in pixels");
  f->add_option("--block", feat.block, "HOG block size in cells");
  f->add_option("--bins", feat.bins, "HOG orientation bins");
  f->add_option("--label", feat.label, "label for positional directories");
  f->add_option("--split", feat.split, "split tag for positional directories");

  auto* r = app.add_subcommand("register", "align the second trajectory to the first");
  add_common(r, common);
  r->add_option("first", reg.first, "trajectory JSON")->required();
  r->add_option("second", reg.second, "trajectory JSON")->required();
  r->add_option("--resample", reg.resample, "common number of samples (0 = larger T)");

  auto* d = app.add_subcommand("dist", "pairwise distance matrix of a manifest");
  add_common(d, common);
  d->add_option("--manifest", dist.manifest, "dataset manifest")->required();
  d->add_option("--metric", dist.metric, "dq (aligned) or dc (unaligned)");
  d->add_option("--resample", dist.resample, "common number of samples (0 = automatic)");
  d->add_flag("--dump", dist.dump, "write per-pair warps and distances");

  auto* m = app.add_subcommand("mean", "Karcher mean and groupwise alignment");
  add_common(m, common);
  m->add_option("files", mean.files, "trajectory JSON files");
  m->add_option("--manifest", mean.manifest, "dataset manifest");
  m->add_option("--region", mean.region, "quadrant index for four-region entries");
  m->add_option("--resample", mean.resample, "common number of samples (0 = largest T)");
  m->add_option("--itermax", mean.itermax, "maximum iterations");
  m->add_option("--step", mean.step, "initial step size");

  auto* c = app.add_subcommand("classify", "1-NN classification from distance matrices");
  add_common(c, common);
  c->add_option("--manifest", cls.manifest, "dataset manifest")->required();
  c->add_option("--dist", cls.dist, "distance CSV (one, or four quadrant files)")->required();
  c->add_option("--weights", cls.weights, "quadrant weights: a,b,c,d or a weights.json file");

  auto* t = app.add_subcommand("train-weights", "quadrant weights by leave-one-out search");
  add_common(t, common);
  t->add_option("--manifest", train.manifest, "dataset manifest")->required();
  t->add_option("--dist", train.dist, "four quadrant distance CSVs")->required()->expected(4);
  t->add_option("--step", train.step, "simplex grid spacing");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  auto* chosen = app.get_subcommands().front();
  try {
    fs::create_directories(common.out);
    if (chosen == s) return cmd_simulate(common, sim);
    if (chosen == f) return cmd_features(common, feat);
    if (chosen == r) return cmd_register(common, reg);
    if (chosen == d) return cmd_dist(common, dist);
    if (chosen == m) return cmd_mean(common, mean);
    if (chosen == c) return cmd_classify(common, cls);
    return cmd_train_weights(common, train);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace spdtraj::cli
