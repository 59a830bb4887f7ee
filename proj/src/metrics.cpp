#include "mwmusic/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "mwmusic/errors.hpp"

namespace mwmusic {

std::size_t BinarySupport::count() const {
  return static_cast<std::size_t>(std::count(members.begin(), members.end(), 1));
}

bool BinarySupport::same_grid(const BinarySupport& other) const {
  return grid_radius == other.grid_radius && grid_step == other.grid_step && members.size() == other.members.size();
}

BinarySupport truth_support(const RoiGrid& grid, std::span<const AnomalySpec> anomalies) {
  BinarySupport out{grid.radius(), grid.step(), std::vector<unsigned char>(grid.size(), 0)};
  for (std::size_t p = 0; p < grid.size(); ++p) {
    for (const auto& a : anomalies) {
      if (norm(grid.point(p) - a.center) <= a.radius) {
        out.members[p] = 1;
        break;
      }
    }
  }
  if (out.count() == 0) warn("truth support is empty: no grid point lies inside an anomaly");
  return out;
}

BinarySupport threshold_support(const ImagingMap& normalized, double zeta) {
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw ValidationError("threshold zeta must lie in [0, 1]");
  if (!normalized.normalized) throw ValidationError("threshold_support needs a normalised map");
  BinarySupport out{normalized.grid.radius(), normalized.grid.step(),
                    std::vector<unsigned char>(normalized.values.size(), 0)};
  for (std::size_t p = 0; p < normalized.values.size(); ++p) out.members[p] = normalized.values[p] >= zeta ? 1 : 0;
  return out;
}

double jaccard(const BinarySupport& a, const BinarySupport& b) {
  if (!a.same_grid(b)) throw DimensionError("supports are defined on different grids");
  std::size_t both = 0, either = 0;
  for (std::size_t p = 0; p < a.members.size(); ++p) {
    both += (a.members[p] && b.members[p]) ? 1 : 0;
    either += (a.members[p] || b.members[p]) ? 1 : 0;
  }
  if (either == 0) {
    warn("Jaccard index of two empty sets; reporting 0");
    return 0.0;
  }
  return 100.0 * static_cast<double>(both) / static_cast<double>(either);
}

std::vector<std::pair<double, double>> jaccard_curve(const ImagingMap& normalized, const BinarySupport& truth,
                                                     std::span<const double> zetas) {
  if (!std::is_sorted(zetas.begin(), zetas.end())) throw ValidationError("zeta list must be sorted ascending");
  std::vector<std::pair<double, double>> out;
  out.reserve(zetas.size());
  for (double z : zetas) out.emplace_back(z, jaccard(threshold_support(normalized, z), truth));
  return out;
}

}  // namespace mwmusic
