#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mwmusic/forward_model.hpp"
#include "mwmusic/geometry.hpp"
#include "mwmusic/imaging.hpp"

namespace mwmusic {

/// Membership flags over the points of one RoiGrid. The grid is identified
/// by (radius, step, point count); supports on different grids do not mix.
struct BinarySupport {
  double grid_radius = 0.0;
  double grid_step = 0.0;
  std::vector<unsigned char> members;

  std::size_t count() const;
  bool same_grid(const BinarySupport& other) const;
};

/// Grid points inside some anomaly disk. Warns when the support is empty.
BinarySupport truth_support(const RoiGrid& grid, std::span<const AnomalySpec> anomalies);

/// Points with normalised value >= zeta.
BinarySupport threshold_support(const ImagingMap& normalized, double zeta);

/// |a & b| / |a | b| * 100; 0 (with a warning) when both are empty.
double jaccard(const BinarySupport& a, const BinarySupport& b);

/// (zeta, jaccard percent) for each zeta, ascending.
std::vector<std::pair<double, double>> jaccard_curve(const ImagingMap& normalized, const BinarySupport& truth,
                                                     std::span<const double> zetas);

}  // namespace mwmusic
