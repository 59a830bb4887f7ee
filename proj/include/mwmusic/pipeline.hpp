#pragma once
// Config-driven steps behind the command-line tool. Each step has an
// in-memory form and a writer; file names inside the output directory are
//   <split>.K.txt / .K.json             simulate
//   <split>.{F_tx,F_rx,F}.txt           image (raw maps)
//   <split>.{N_tx,N_rx,N}.txt           image (normalised maps)
//   <split>.maps.json, optional .pgm    image
//   <split>.theory.txt / .theory.json   theory-check
//   arrange.txt, <split>.spectrum_{rx,tx}.txt   arrange
//   <split>.jaccard.txt                 evaluate

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mwmusic/config.hpp"
#include "mwmusic/forward_model.hpp"
#include "mwmusic/imaging.hpp"

namespace mwmusic {

namespace fs = std::filesystem;

ScatteringMatrix simulate(const ExperimentConfig& cfg, const std::string& split);
fs::path write_simulation(const fs::path& out_dir, const ExperimentConfig& cfg, const std::string& split,
                          const ScatteringMatrix& K);
fs::path matrix_path(const fs::path& out_dir, const std::string& split);

/// Wraps a matrix read from disk; checks its size and frequency against the split.
ScatteringMatrix matrix_from_file(const ExperimentConfig& cfg, const std::string& split, const MatrixFile& file);

ImagingResult image(const ExperimentConfig& cfg, const ScatteringMatrix& K, unsigned workers);
std::vector<fs::path> write_images(const fs::path& out_dir, const ExperimentConfig& cfg, const std::string& split,
                                   const ImagingResult& result, bool pgm);
fs::path map_path(const fs::path& out_dir, const std::string& split, const std::string& kind);

struct TheoryCheckReport {
  std::string split;
  double tolerance = 0.0;
  double max_relative_deviation = 0.0;  // F maps, points beyond one grid step of the anomaly
  double max_abs_deviation_rx = 0.0;    // squared projection norms, all points
  double max_abs_deviation_tx = 0.0;
  int truncation = 0;
  std::size_t points = 0;
  std::size_t flagged = 0;
  double wavenumber = 0.0;  // real wavenumber used for data and series
  bool pass = false;
};

/// Far-field data at the real part of the background wavenumber, imaged and
/// compared against the series prediction. Single-anomaly configs only.
TheoryCheckReport theory_check(const ExperimentConfig& cfg, const std::string& split, double tolerance,
                               unsigned workers);
fs::path write_theory_report(const fs::path& out_dir, const TheoryCheckReport& report);

struct ArrangementRow {
  std::string split;
  double rx_score = 0.0;
  double tx_score = 0.0;
  double total() const { return rx_score + tx_score; }
};

/// Scores over a maximum distance of twice the grid radius, ascending by total.
std::vector<ArrangementRow> arrange(const ExperimentConfig& cfg, const std::vector<std::string>& splits);
fs::path write_arrangement(const fs::path& out_dir, const ExperimentConfig& cfg,
                           const std::vector<ArrangementRow>& rows);

/// Jaccard curve of a map table (normalised here) against the configured anomalies.
std::vector<std::pair<double, double>> evaluate(const ExperimentConfig& cfg, const MapTable& map);
fs::path write_jaccard(const fs::path& out_dir, const std::string& split,
                       const std::vector<std::pair<double, double>>& curve);

}  // namespace mwmusic
