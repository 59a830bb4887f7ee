// mwmusic: simulate Born data, build MUSIC maps, compare them with the
// Bessel-series prediction, score antenna arrangements and compute Jaccard
// curves, all driven by one experiment config.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "mwmusic/config.hpp"
#include "mwmusic/errors.hpp"
#include "mwmusic/parallel.hpp"
#include "mwmusic/pipeline.hpp"

namespace {

using namespace mwmusic;

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct Common {
  std::string config;
  std::vector<std::string> splits;
  std::string out = "out";
  unsigned workers = default_workers();
};

void add_common(CLI::App* cmd, Common& c, bool many_splits) {
  cmd->add_option("--config", c.config, "Experiment config (INI)")->required()->check(CLI::ExistingFile);
  auto* split = cmd->add_option("--split", c.splits, many_splits ? "Split names (default: all)" : "Split name");
  if (many_splits) {
    split->delimiter(',');
  } else {
    split->required()->expected(1);
  }
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd->add_option("--workers", c.workers, "Worker threads for grid sweeps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

int run_simulate(const Common& c) {
  const auto cfg = load_config(c.config);
  const auto& split = c.splits.front();
  const auto K = simulate(cfg, split);
  const auto path = write_simulation(c.out, cfg, split, K);
  std::printf("simulate %s: %zux%zu matrix -> %s\n", split.c_str(), K.rows(), K.cols(), path.c_str());
  return 0;
}

int run_image(const Common& c, std::string matrix, bool pgm) {
  const auto cfg = load_config(c.config);
  const auto& split = c.splits.front();
  if (matrix.empty()) matrix = matrix_path(c.out, split).string();
  const auto K = matrix_from_file(cfg, split, read_matrix_file(matrix));
  const auto res = image(cfg, K, c.workers);
  const auto files = write_images(c.out, cfg, split, res, pgm);
  const auto peak = res.combined.grid.point(res.combined.argmax());
  std::printf("image %s: rank %d, F argmax (%g, %g), %zu files in %s\n", split.c_str(), res.subspace.rank, peak.x,
              peak.y, files.size(), c.out.c_str());
  return 0;
}

int run_theory(const Common& c, double tolerance) {
  const auto cfg = load_config(c.config);
  const auto& split = c.splits.front();
  const auto r = theory_check(cfg, split, tolerance, c.workers);
  write_theory_report(c.out, r);
  std::printf("theory-check %s: P = %d, max relative deviation %.3e (tolerance %g), "
              "max |squared-norm deviation| rx %.3e tx %.3e -> %s\n",
              split.c_str(), r.truncation, r.max_relative_deviation, r.tolerance, r.max_abs_deviation_rx,
              r.max_abs_deviation_tx, r.pass ? "pass" : "FAIL");
  return r.pass ? 0 : kExitNumerical;
}

int run_arrange(const Common& c) {
  const auto cfg = load_config(c.config);
  std::vector<std::string> names = c.splits;
  if (names.empty()) {
    for (const auto& s : cfg.splits) names.push_back(s.name);
  }
  const auto rows = arrange(cfg, names);
  const auto path = write_arrangement(c.out, cfg, rows);
  std::printf("%-12s %12s %12s %12s\n", "split", "rx_score", "tx_score", "total");
  for (const auto& r : rows) {
    std::printf("%-12s %12.6f %12.6f %12.6f\n", r.split.c_str(), r.rx_score, r.tx_score, r.total());
  }
  std::printf("-> %s\n", path.c_str());
  return 0;
}

int run_evaluate(const Common& c, std::string map) {
  const auto cfg = load_config(c.config);
  const auto& split = c.splits.front();
  if (map.empty()) map = map_path(c.out, split, "F").string();
  const auto curve = evaluate(cfg, read_map_file(map));
  const auto path = write_jaccard(c.out, split, curve);
  double best = 0.0, at = 0.0;
  for (auto [z, j] : curve) {
    if (j > best) best = j, at = z;
  }
  std::printf("evaluate %s: peak Jaccard %.2f%% at zeta %.2f -> %s\n", split.c_str(), best, at, path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MUSIC microwave imaging experiments"};
  app.require_subcommand(1);

  Common sim_opts, img_opts, thy_opts, arr_opts, ev_opts;
  std::string matrix, map;
  bool pgm = false;
  double tolerance = 0.05;

  auto* sim = app.add_subcommand("simulate", "Write the Born scattering matrix of a split");
  add_common(sim, sim_opts, false);

  auto* img = app.add_subcommand("image", "Build F_tx, F_rx and F maps from a matrix file");
  add_common(img, img_opts, false);
  img->add_option("--matrix", matrix, "Matrix file (default: <out>/<split>.K.txt)");
  img->add_flag("--pgm", pgm, "Also write greyscale images of the raw maps");

  auto* thy = app.add_subcommand("theory-check", "Compare maps of far-field data with the series prediction");
  add_common(thy, thy_opts, false);
  thy->add_option("--tolerance", tolerance, "Maximum relative deviation")->capture_default_str();

  auto* arr = app.add_subcommand("arrange", "Rank splits by harmonic-cancellation score");
  add_common(arr, arr_opts, true);

  auto* ev = app.add_subcommand("evaluate", "Jaccard curve of a map against the configured anomalies");
  add_common(ev, ev_opts, false);
  ev->add_option("--map", map, "Map table (default: <out>/<split>.F.txt)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitValidation;
  }

  try {
    if (*sim) return run_simulate(sim_opts);
    if (*img) return run_image(img_opts, matrix, pgm);
    if (*thy) return run_theory(thy_opts, tolerance);
    if (*arr) return run_arrange(arr_opts);
    if (*ev) return run_evaluate(ev_opts, map);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitValidation;
}
