#include <cmath>
#include <filesystem>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "spdtraj/image.hpp"
#include "spdtraj/io.hpp"

using namespace spdtraj;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& rel) const { return (path / rel).string(); }
};

int run(std::vector<std::string> args) {
  args.push_back("--quiet");
  return cli::run(args);
}

json load(const std::string& path) { return json::parse(read_text(path)); }

void make_video(const fs::path& dir, std::size_t frames, double speed) {
  fs::create_directories(dir);
  for (std::size_t k = 0; k < frames; ++k) {
    Image img(24, 20);
    const double cx = 4.0 + speed * static_cast<double>(k), cy = 10.0;
    for (std::size_t y = 0; y < 20; ++y)
      for (std::size_t x = 0; x < 24; ++x)
        img.at(x, y) = std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / 12.0);
    char name[32];
    std::snprintf(name, sizeof name, "f%03zu.pgm", k);
    write_pgm(img, dir / name);
  }
}

}  // namespace

TEST_CASE("simulate, dist and classify") {
  TempDir tmp("spdtraj_test_cli_pipeline");
  const std::vector<std::string> sim{"simulate", "--classes", "2", "--train", "2", "--test",
                                     "2", "-T", "30", "--seed", "7"};
  auto with_out = [](std::vector<std::string> a, const std::string& out) {
    a.insert(a.end(), {"--out", out});
    return a;
  };
  REQUIRE(run(with_out(sim, tmp / "a")) == 0);
  REQUIRE(run(with_out(sim, tmp / "b")) == 0);
  CHECK(read_text(tmp / "a/manifest.json") == read_text(tmp / "b/manifest.json"));
  const auto entries = read_manifest(tmp / "a/manifest.json");
  REQUIRE(entries.size() == 8);
  for (const auto& e : entries) {
    const auto rel = fs::relative(e.paths[0], tmp.path / "a");
    CHECK(read_text(e.paths[0]) == read_text(tmp.path / "b" / rel));
  }

  const std::string manifest = tmp / "a/manifest.json";
  REQUIRE(run({"dist", "--manifest", manifest, "--metric", "dq", "--out", tmp / "dq", "--dump"}) == 0);
  REQUIRE(run({"dist", "--manifest", manifest, "--metric", "dc", "--out", tmp / "dc"}) == 0);
  const auto dq = read_matrix_csv(tmp / "dq/dist_dq.csv");
  const auto dc = read_matrix_csv(tmp / "dc/dist_dc.csv");
  REQUIRE(dq.size() == 8);
  CHECK(read_matrix_ids(tmp / "dq/dist_dq.csv").front() == entries.front().id);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(dq[i][i] == 0.0);
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(std::abs(dq[i][j] - dq[j][i]) <= 0.02 * std::max(dq[i][j], dq[j][i]));
      CHECK(dq[i][j] <= dc[i][j] + 1e-6);
    }
  }
  CHECK(fs::exists(tmp.path / "dq" / "pairs.json"));

  REQUIRE(run({"classify", "--manifest", manifest, "--dist", tmp / "dq/dist_dq.csv", "--out",
               tmp / "cls"}) == 0);
  const auto rep = load(tmp / "cls/classify.json");
  CHECK(rep.at("accuracy").get<double>() >= 0.0);
  CHECK(fs::exists(tmp.path / "cls" / "confusion.csv"));
}

TEST_CASE("single trajectory gives a zero matrix; missing entries are reported") {
  TempDir tmp("spdtraj_test_cli_missing");
  REQUIRE(run({"simulate", "--classes", "1", "--train", "2", "--test", "0", "-T", "20", "--out",
               tmp / "sim"}) == 0);
  auto entries = read_manifest(tmp / "sim/manifest.json");
  write_manifest({entries[0]}, tmp.path / "one.json");
  REQUIRE(run({"dist", "--manifest", tmp / "one.json", "--out", tmp / "one"}) == 0);
  CHECK(read_matrix_csv(tmp / "one/dist_dq.csv") == DenseMatrix{{0.0}});

  // A duplicated trajectory sits at distance 0 from its twin.
  entries[1].paths = entries[0].paths;
  entries.push_back({"broken", {tmp.path / "nope.json"}, entries[0].label, Split::Train, ""});
  write_manifest(entries, tmp.path / "three.json");
  CHECK(run({"dist", "--manifest", tmp / "three.json", "--out", tmp / "three"}) == 1);
  const auto m = read_matrix_csv(tmp / "three/dist_dq.csv");
  CHECK(m[0][1] < 1e-8);
  CHECK(std::isnan(m[2][0]));
  CHECK(std::isnan(m[0][2]));
  const auto report = load(tmp / "three/dist.json");
  CHECK(report.at("errors").size() == 1);
  CHECK(report.at("errors")[0].at("id") == "broken");
}

TEST_CASE("register identical inputs and mean of one input") {
  TempDir tmp("spdtraj_test_cli_register");
  REQUIRE(run({"simulate", "--classes", "1", "--train", "1", "--test", "0", "-T", "40", "--out",
               tmp / "sim"}) == 0);
  const auto e = read_manifest(tmp / "sim/manifest.json");
  const std::string file = e[0].paths[0].string();
  REQUIRE(run({"register", file, file, "--out", tmp / "reg"}) == 0);
  const auto g = read_warp_csv(tmp / "reg/gamma.csv");
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(g.values()[i] - g.grid(i)) <= 0.01);
  CHECK(load(tmp / "reg/register.json").at("d_q").get<double>() < 1e-10);

  REQUIRE(run({"mean", file, "--out", tmp / "mean"}) == 0);
  const auto in = spd_trajectory(read_trajectory(file));
  const auto out = spd_trajectory(read_trajectory(tmp / "mean/mean.json"));
  REQUIRE(out.size() == in.size());
  for (std::size_t k = 0; k < in.size(); ++k)
    CHECK(spd_distance(in.points[k], out.points[k]) < 1e-9);
  CHECK(fs::exists(tmp.path / "mean" / "variance_history.csv"));
}

TEST_CASE("features from frame directories and quadrant weights") {
  TempDir tmp("spdtraj_test_cli_features");
  make_video(tmp.path / "v1", 10, 1.5);
  REQUIRE(run({"features", tmp / "v1", "--label", "move", "--out", tmp / "f"}) == 0);
  const auto d = read_trajectory(tmp / "f/trajectories/v1.json");
  CHECK(d.size() == 10);
  CHECK(d.n == 7);

  // Six videos in two classes, quadrant mode.
  json videos = json::array();
  for (int k = 0; k < 6; ++k) {
    const std::string id = "v" + std::to_string(k);
    make_video(tmp.path / "q" / id, 8, k % 2 ? 1.5 : -0.0);
    videos.push_back({{"id", id}, {"dir", "q/" + id}, {"label", k % 2 ? "moving" : "still"},
                      {"split", k < 4 ? "train" : "test"}});
  }
  write_text(videos.dump(), tmp.path / "videos.json");
  REQUIRE(run({"features", "--videos", tmp / "videos.json", "--quadrants", "--kind", "hog",
               "--cell", "4", "--out", tmp / "fq"}) == 0);
  const auto entries = read_manifest(tmp / "fq/manifest.json");
  REQUIRE(entries.size() == 6);
  CHECK(entries[0].paths.size() == 4);
  REQUIRE(run({"dist", "--manifest", tmp / "fq/manifest.json", "--metric", "dc", "--out",
               tmp / "dist"}) == 0);
  std::vector<std::string> quads;
  for (int q = 0; q < 4; ++q) quads.push_back(tmp / ("dist/dist_dc_q" + std::to_string(q) + ".csv"));
  std::vector<std::string> args{"train-weights", "--manifest", tmp / "fq/manifest.json", "--dist"};
  args.insert(args.end(), quads.begin(), quads.end());
  args.insert(args.end(), {"--out", tmp / "w"});
  REQUIRE(run(args) == 0);
  const auto w = load(tmp / "w/weights.json").at("weights").get<std::vector<double>>();
  CHECK(std::abs(w[0] + w[1] + w[2] + w[3] - 1.0) < 1e-12);

  args = {"classify", "--manifest", tmp / "fq/manifest.json", "--dist"};
  args.insert(args.end(), quads.begin(), quads.end());
  args.insert(args.end(), {"--weights", tmp / "w/weights.json", "--out", tmp / "c"});
  REQUIRE(run(args) == 0);
  CHECK(load(tmp / "c/classify.json").at("weights").size() == 4);
}

TEST_CASE("argument and input errors") {
  TempDir tmp("spdtraj_test_cli_errors");
  CHECK(run({"dist"}) != 0);
  CHECK(run({"nonsense"}) != 0);
  CHECK(run({"register", "--fast", "--full", "a", "b"}) != 0);
  CHECK(run({"register", tmp / "missing1.json", tmp / "missing2.json", "--out", tmp / "r"}) == 2);
  CHECK(run({"simulate", "--classes", "0", "--out", tmp / "s"}) == 2);
}
