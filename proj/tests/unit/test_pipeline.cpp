#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <unistd.h>

#include "doctest.h"
#include "mwmusic/errors.hpp"
#include "mwmusic/metrics.hpp"
#include "mwmusic/pipeline.hpp"

using namespace mwmusic;

namespace {

ExperimentConfig example(const std::string& name, double step = 0.002) {
  auto cfg = load_config(std::string(MWMUSIC_CONFIG_DIR) + "/" + name);
  cfg.grid_step = step;
  return cfg;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mwmusic_pipeline_" + std::to_string(::getpid()));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

MapTable table_of(const ImagingMap& map) {
  MapTable t;
  for (std::size_t p = 0; p < map.grid.size(); ++p) t.points.push_back(map.grid.point(p));
  t.values = map.values;
  return t;
}

}  // namespace

TEST_CASE("simulate gives split-shaped matrices") {
  const auto ex1 = example("example1.ini");
  const auto K = simulate(ex1, "A1_B1");
  CHECK(K.rows() == 3);
  CHECK(K.cols() == 3);
  CHECK(K.provenance == Provenance::BornSynthetic);
  CHECK(image(ex1, K, 2).subspace.rank == 1);

  const auto ex4 = example("example4.ini");
  const auto K2 = simulate(ex4, "A4_B1");
  CHECK(K2.rows() == 9);
  CHECK(K2.cols() == 3);
  CHECK(subspace_split(K2.entries).rank == 2);
  CHECK_THROWS_AS(simulate(ex4, "nope"), ValidationError);
}

TEST_CASE("file round trip is bit-exact through imaging") {
  const auto cfg = example("example3.ini", 0.004);
  TempDir tmp;
  const auto K = simulate(cfg, "A6_B5");
  const auto path = write_simulation(tmp.path, cfg, "A6_B5", K);
  CHECK(fs::exists(tmp.path / "A6_B5.K.json"));
  const auto back = matrix_from_file(cfg, "A6_B5", read_matrix_file(path));
  CHECK(back.provenance == Provenance::File);
  CHECK((back.entries.array() == K.entries.array()).all());

  const auto a = image(cfg, K, 1);
  const auto b = image(cfg, back, 3);
  CHECK(a.combined.values == b.combined.values);
  CHECK(a.tx.values == b.tx.values);
  CHECK(a.rx.values == b.rx.values);

  const auto files = write_images(tmp.path, cfg, "A6_B5", b, true);
  CHECK(files.size() >= 7);
  const auto table = read_map_file(map_path(tmp.path, "A6_B5", "F"));
  CHECK(table.values == b.combined.values);

  // rerunning the writers reproduces identical bytes
  const auto first = slurp(map_path(tmp.path, "A6_B5", "F"));
  write_images(tmp.path, cfg, "A6_B5", image(cfg, back, 2), false);
  CHECK(slurp(map_path(tmp.path, "A6_B5", "F")) == first);
}

TEST_CASE("matrix file checks") {
  const auto cfg = example("example1.ini");
  MatrixFile f;
  f.entries = Eigen::MatrixXcd::Ones(3, 4);
  f.frequency = 1e9;
  CHECK_THROWS_AS(matrix_from_file(cfg, "A1_B1", f), DimensionError);
  f.entries = Eigen::MatrixXcd::Ones(3, 3);
  f.frequency = 2e9;
  CHECK_THROWS_AS(matrix_from_file(cfg, "A1_B1", f), ValidationError);
  f.frequency = 1e9;
  f.entries.setZero();
  const auto zero = matrix_from_file(cfg, "A1_B1", f);
  CHECK_THROWS_AS(image(cfg, zero, 1), NumericalError);
}

TEST_CASE("theory check on sparse and interleaved splits") {
  const auto cfg = example("example3.ini");
  for (const char* split : {"A5_B5", "Astar_Bstar"}) {
    CAPTURE(split);
    const auto r = theory_check(cfg, split, 0.05, 2);
    CHECK(r.pass);
    CHECK(r.max_relative_deviation < 1e-6);
    CHECK(r.max_abs_deviation_rx < 1e-6);
    CHECK(r.max_abs_deviation_tx < 1e-6);
    CHECK(r.wavenumber == doctest::Approx(94.102851).epsilon(1e-7));
  }
  const auto strict = theory_check(cfg, "A5_B5", 0.0, 2);
  CHECK_FALSE(strict.pass);
  CHECK_THROWS_AS(theory_check(example("example4.ini"), "A1_B1", 0.05, 1), ValidationError);
}

TEST_CASE("arrange orders the bundled splits by cancellation") {
  const auto cfg = example("example3.ini");
  const auto rows = arrange(cfg, {"A5_B5", "A6_B5", "A7_B5", "Astar_Bstar"});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].split == "Astar_Bstar");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].total() <= rows[i].total());
  // receiver sets alone: A* < A7 < A6 < A5
  std::map<std::string, double> rx;
  for (const auto& r : rows) rx[r.split] = r.rx_score;
  CHECK(rx["Astar_Bstar"] < rx["A7_B5"]);
  CHECK(rx["A7_B5"] < rx["A6_B5"]);
  CHECK(rx["A6_B5"] < rx["A5_B5"]);
  TempDir tmp;
  const auto path = write_arrangement(tmp.path, cfg, rows);
  CHECK(fs::exists(path));
  CHECK(fs::exists(tmp.path / "Astar_Bstar.spectrum_rx.txt"));
}

TEST_CASE("evaluate scores maps against the configured truth") {
  const auto cfg = example("example1.ini");
  const auto grid = cfg.grid();
  const auto truth = truth_support(grid, cfg.anomalies);

  ImagingMap indicator{grid, std::vector<double>(grid.size(), 0.0)};
  for (std::size_t p = 0; p < grid.size(); ++p) indicator.values[p] = truth.members[p] ? 1.0 : 0.0;
  const auto perfect = evaluate(cfg, table_of(indicator));
  REQUIRE(perfect.size() == cfg.zetas.size());
  for (auto [z, j] : perfect) CHECK(j == doctest::Approx(100.0));

  auto bad = table_of(indicator);
  bad.points.pop_back();
  bad.values.pop_back();
  CHECK_THROWS_AS(evaluate(cfg, bad), DimensionError);
  auto moved = table_of(indicator);
  moved.points[5].x += 1e-4;
  CHECK_THROWS_AS(evaluate(cfg, moved), DimensionError);
  auto negative = table_of(indicator);
  negative.values[0] = -1.0;
  CHECK_THROWS_AS(evaluate(cfg, negative), ValidationError);

  TempDir tmp;
  const auto path = write_jaccard(tmp.path, "x", perfect);
  CHECK(slurp(path).rfind("zeta jaccard_percent\n", 0) == 0);
}
