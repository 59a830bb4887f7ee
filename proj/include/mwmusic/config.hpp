#pragma once
// Experiment configuration: an INI file with sections
//   [medium]   eps_r, sigma, frequency, mu_r (optional, default 1)
//   [array]    count, radius
//   [grid]     radius, step
//   [imaging]  threshold, clamp, field_model, test_field_model (optional)
//   [metric]   zeta (whitespace-separated list)
//   [anomaly:<id>]  x, y, radius, eps_r, sigma
//   [split:<name>]  tx, rx (1-based antenna numbers; "a-b" ranges allowed)

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mwmusic/forward_model.hpp"
#include "mwmusic/geometry.hpp"
#include "mwmusic/imaging.hpp"

namespace mwmusic {

struct SplitSpec {
  std::string name;
  std::vector<std::size_t> tx;  // 1-based
  std::vector<std::size_t> rx;  // 1-based
};

struct ImagingSettings {
  double threshold = 0.1;
  double clamp = 1e8;
  FieldModel field_model = FieldModel::ExactHankel;
  std::optional<FieldModel> test_field_model;  // defaults to field_model
};

struct ExperimentConfig {
  MediumSpec medium;
  std::size_t antenna_count = 16;
  double array_radius = 0.09;
  double grid_radius = 0.08;
  double grid_step = 0.001;
  ImagingSettings imaging;
  std::vector<double> zetas{0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95};
  std::vector<AnomalySpec> anomalies;
  std::vector<std::string> anomaly_ids;
  std::vector<SplitSpec> splits;

  AntennaArray array() const;
  RoiGrid grid() const;
  const SplitSpec& split_spec(const std::string& name) const;
  ArraySplit split(const std::string& name) const;
  ImagingOptions imaging_options(unsigned workers) const;
  /// Cross-field checks; throws ValidationError naming the offending field.
  void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Parses "1 3 5-7" into {1, 3, 5, 6, 7}.
std::vector<std::size_t> parse_index_list(const std::string& text);

}  // namespace mwmusic
