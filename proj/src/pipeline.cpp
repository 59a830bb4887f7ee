#include "mwmusic/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "mwmusic/errors.hpp"
#include "mwmusic/metrics.hpp"
#include "mwmusic/theory_oracle.hpp"

namespace mwmusic {
namespace {

using nlohmann::ordered_json;

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  if (!out) throw ValidationError("failed writing " + path.string());
}

void write_json(const fs::path& path, const ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

ordered_json split_json(const SplitSpec& s) {
  return {{"name", s.name}, {"tx", s.tx}, {"rx", s.rx}};
}

ordered_json medium_json(const MediumSpec& m) {
  const cplx k = wavenumber(m);
  return {{"eps", m.eps}, {"sigma", m.sigma}, {"mu", m.mu}, {"frequency", m.frequency},
          {"wavenumber", {k.real(), k.imag()}}};
}

ordered_json anomalies_json(const ExperimentConfig& cfg) {
  ordered_json out = ordered_json::array();
  for (std::size_t i = 0; i < cfg.anomalies.size(); ++i) {
    const auto& a = cfg.anomalies[i];
    out.push_back({{"id", cfg.anomaly_ids[i]},
                   {"center", {a.center.x, a.center.y}},
                   {"radius", a.radius},
                   {"eps", a.eps},
                   {"sigma", a.sigma}});
  }
  return out;
}

ImagingMap as_map(const RoiGrid& grid, std::vector<double> values, MapKind kind, double clamp) {
  return {grid, std::move(values), kind, false, clamp};
}

}  // namespace

fs::path matrix_path(const fs::path& out_dir, const std::string& split) { return out_dir / (split + ".K.txt"); }

fs::path map_path(const fs::path& out_dir, const std::string& split, const std::string& kind) {
  return out_dir / (split + "." + kind + ".txt");
}

ScatteringMatrix simulate(const ExperimentConfig& cfg, const std::string& split) {
  return born_scattering_matrix(cfg.split(split), cfg.medium, cfg.anomalies, cfg.imaging.field_model);
}

fs::path write_simulation(const fs::path& out_dir, const ExperimentConfig& cfg, const std::string& split,
                          const ScatteringMatrix& K) {
  ensure_dir(out_dir);
  const auto path = matrix_path(out_dir, split);
  write_matrix_file(path, K);
  ordered_json meta{{"kind", "scattering-matrix"},
                    {"split", split_json(cfg.split_spec(split))},
                    {"rows", K.rows()},
                    {"cols", K.cols()},
                    {"provenance", to_string(K.provenance)},
                    {"field_model", to_string(cfg.imaging.field_model)},
                    {"medium", medium_json(cfg.medium)},
                    {"anomalies", anomalies_json(cfg)}};
  write_json(out_dir / (split + ".K.json"), meta);
  return path;
}

ScatteringMatrix matrix_from_file(const ExperimentConfig& cfg, const std::string& split, const MatrixFile& file) {
  auto s = cfg.split(split);
  if (static_cast<std::size_t>(file.entries.rows()) != s.rx_count() ||
      static_cast<std::size_t>(file.entries.cols()) != s.tx_count()) {
    throw DimensionError("matrix is " + std::to_string(file.entries.rows()) + "x" +
                         std::to_string(file.entries.cols()) + " but split '" + split + "' needs " +
                         std::to_string(s.rx_count()) + "x" + std::to_string(s.tx_count()));
  }
  if (file.frequency != cfg.medium.frequency) {
    throw ValidationError("matrix frequency " + format_double(file.frequency) + " Hz differs from config " +
                          format_double(cfg.medium.frequency) + " Hz");
  }
  ScatteringMatrix K{file.entries, std::move(s), cfg.medium, Provenance::File};
  K.validate();
  return K;
}

ImagingResult image(const ExperimentConfig& cfg, const ScatteringMatrix& K, unsigned workers) {
  return imaging_maps(K, cfg.grid(), cfg.imaging_options(workers));
}

std::vector<fs::path> write_images(const fs::path& out_dir, const ExperimentConfig& cfg, const std::string& split,
                                   const ImagingResult& result, bool pgm) {
  ensure_dir(out_dir);
  std::vector<fs::path> written;
  const std::pair<const ImagingMap*, const char*> maps[] = {
      {&result.tx, "tx"}, {&result.rx, "rx"}, {&result.combined, ""}};
  ordered_json files = ordered_json::object();
  for (const auto& [map, suffix] : maps) {
    const std::string s = suffix;
    const std::string raw = s.empty() ? "F" : "F_" + s;
    const std::string norm = s.empty() ? "N" : "N_" + s;
    const auto normalized = normalize_map(*map);
    for (const auto& [m, name] : {std::pair{map, raw}, std::pair{&normalized, norm}}) {
      const auto path = map_path(out_dir, split, name);
      write_map_file(path, *m);
      written.push_back(path);
      files[name] = path.filename().string();
      if (pgm && !m->normalized) {
        const auto img = out_dir / (split + "." + name + ".pgm");
        write_pgm_file(img, *m);
        written.push_back(img);
      }
    }
  }
  const auto& grid = result.combined.grid;
  const Point2 peak = grid.point(result.combined.argmax());
  std::vector<double> tau(result.subspace.singular_values.data(),
                          result.subspace.singular_values.data() + result.subspace.singular_values.size());
  const auto opts = cfg.imaging_options(1);
  ordered_json meta{{"kind", "imaging-maps"},
                    {"maps", files},
                    {"clamp", opts.clamp},
                    {"threshold", opts.threshold},
                    {"field_model", to_string(opts.field_model)},
                    {"frequency", cfg.medium.frequency},
                    {"split", split_json(cfg.split_spec(split))},
                    {"grid", {{"radius", grid.radius()}, {"step", grid.step()}, {"points", grid.size()}}},
                    {"rank", result.subspace.rank},
                    {"singular_values", tau},
                    {"argmax", {peak.x, peak.y}},
                    {"max", result.combined.max()}};
  const auto meta_path = out_dir / (split + ".maps.json");
  write_json(meta_path, meta);
  written.push_back(meta_path);
  return written;
}

TheoryCheckReport theory_check(const ExperimentConfig& cfg, const std::string& split, double tolerance,
                               unsigned workers) {
  if (cfg.anomalies.size() != 1) {
    throw ValidationError("theory-check needs exactly one anomaly, config has " +
                          std::to_string(cfg.anomalies.size()));
  }
  if (!(tolerance >= 0.0)) throw ValidationError("tolerance must be non-negative");
  const auto s = cfg.split(split);
  const auto grid = cfg.grid();
  const auto& anomaly = cfg.anomalies.front();
  // The series identity needs unit-modulus plane waves, hence a real wavenumber.
  const cplx k{wavenumber(cfg.medium).real(), 0.0};

  const auto K = born_scattering_matrix(s, cfg.medium, cfg.anomalies, FieldModel::FarField, k);
  auto opts = cfg.imaging_options(workers);
  opts.field_model = FieldModel::FarField;
  opts.wavenumber = k;
  const auto res = imaging_maps(K, grid, opts);
  const auto pred = series_map(grid, anomaly.center, s, k, 1e-12, opts.clamp, workers);

  TheoryCheckReport r;
  r.split = split;
  r.tolerance = tolerance;
  r.truncation = pred.truncation;
  r.points = grid.size();
  r.flagged = pred.flagged;
  r.wavenumber = k.real();
  const double near = grid.step() * (1.0 + 1e-9);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    r.max_abs_deviation_rx = std::max(r.max_abs_deviation_rx, std::abs(res.rx_residual_sq[p] - (1.0 - pred.inner_rx_sq[p])));
    r.max_abs_deviation_tx = std::max(r.max_abs_deviation_tx, std::abs(res.tx_residual_sq[p] - (1.0 - pred.inner_tx_sq[p])));
    if (norm(grid.point(p) - anomaly.center) <= near) continue;
    r.max_relative_deviation = std::max(
        {r.max_relative_deviation, std::abs(res.rx.values[p] - pred.predicted_rx[p]) / pred.predicted_rx[p],
         std::abs(res.tx.values[p] - pred.predicted_tx[p]) / pred.predicted_tx[p]});
  }
  r.pass = r.max_relative_deviation <= tolerance;
  return r;
}

fs::path write_theory_report(const fs::path& out_dir, const TheoryCheckReport& r) {
  ensure_dir(out_dir);
  const auto path = out_dir / (r.split + ".theory.txt");
  std::string text;
  text += "split " + r.split + "\n";
  text += "wavenumber " + format_double(r.wavenumber) + "\n";
  text += "truncation " + std::to_string(r.truncation) + "\n";
  text += "points " + std::to_string(r.points) + "\n";
  text += "flagged " + std::to_string(r.flagged) + "\n";
  text += "max_relative_deviation " + format_double(r.max_relative_deviation) + "\n";
  text += "max_abs_deviation_rx " + format_double(r.max_abs_deviation_rx) + "\n";
  text += "max_abs_deviation_tx " + format_double(r.max_abs_deviation_tx) + "\n";
  text += "tolerance " + format_double(r.tolerance) + "\n";
  text += std::string("result ") + (r.pass ? "pass" : "fail") + "\n";
  write_text(path, text);
  return path;
}

std::vector<ArrangementRow> arrange(const ExperimentConfig& cfg, const std::vector<std::string>& splits) {
  if (splits.empty()) throw ValidationError("arrange needs at least one split");
  const cplx k = wavenumber(cfg.medium);
  const double D = 2.0 * cfg.grid_radius;
  std::vector<ArrangementRow> rows;
  for (const auto& name : splits) {
    const auto s = cfg.split(name);
    rows.push_back({name, arrangement_score(s.rx_angles(), k, D), arrangement_score(s.tx_angles(), k, D)});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ArrangementRow& a, const ArrangementRow& b) { return a.total() < b.total(); });
  return rows;
}

fs::path write_arrangement(const fs::path& out_dir, const ExperimentConfig& cfg,
                           const std::vector<ArrangementRow>& rows) {
  ensure_dir(out_dir);
  const cplx k = wavenumber(cfg.medium);
  const int order = truncation_order(k, 2.0 * cfg.grid_radius);
  std::string table = "rank split rx_score tx_score total\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    table += std::to_string(i + 1) + " " + r.split + " " + format_double(r.rx_score) + " " +
             format_double(r.tx_score) + " " + format_double(r.total()) + "\n";
    const auto s = cfg.split(r.split);
    for (const auto& [side, angles] : {std::pair{"rx", s.rx_angles()}, std::pair{"tx", s.tx_angles()}}) {
      const auto spec = arrangement_spectrum(angles, order);
      std::string text = "p |sum|\n";
      for (int p = -order; p <= order; ++p) text += std::to_string(p) + " " + format_double(spec.at(p)) + "\n";
      write_text(out_dir / (r.split + ".spectrum_" + side + ".txt"), text);
    }
  }
  const auto path = out_dir / "arrange.txt";
  write_text(path, table);
  return path;
}

std::vector<std::pair<double, double>> evaluate(const ExperimentConfig& cfg, const MapTable& table) {
  const auto grid = cfg.grid();
  if (table.points.size() != grid.size()) {
    throw DimensionError("map has " + std::to_string(table.points.size()) + " points, config grid has " +
                         std::to_string(grid.size()));
  }
  const double tol = 1e-9 * grid.step();
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (norm(table.points[p] - grid.point(p)) > tol) {
      throw DimensionError("map point " + std::to_string(p + 1) + " does not match the config grid");
    }
  }
  for (double v : table.values) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("map values must be finite and non-negative");
  }
  const auto normalized = normalize_map(as_map(grid, table.values, MapKind::Combined, cfg.imaging.clamp));
  return jaccard_curve(normalized, truth_support(grid, cfg.anomalies), cfg.zetas);
}

fs::path write_jaccard(const fs::path& out_dir, const std::string& split,
                       const std::vector<std::pair<double, double>>& curve) {
  ensure_dir(out_dir);
  const auto path = out_dir / (split + ".jaccard.txt");
  std::string text = "zeta jaccard_percent\n";
  for (auto [z, j] : curve) text += format_double(z) + " " + format_double(j) + "\n";
  write_text(path, text);
  return path;
}

}  // namespace mwmusic
