#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mwmusic/forward_model.hpp"
#include "mwmusic/geometry.hpp"

namespace mwmusic {

/// Leading singular triplets of K: the signal subspace.
struct SubspaceSplit {
  Eigen::VectorXd singular_values;  // all of them, descending
  Eigen::MatrixXcd left_signal;     // N x rank
  Eigen::MatrixXcd right_signal;    // M x rank
  int rank = 0;
};

/// rank = #{j : tau_j >= threshold * tau_1}. Throws NumericalError for a
/// zero matrix.
SubspaceSplit subspace_split(const Eigen::MatrixXcd& K, double threshold = 0.1);

enum class Side { Left, Right };

/// |(I - sum_j s_j s_j^*) v| for unit v, s_j the signal vectors of `side`.
double noise_projection_norm(const SubspaceSplit& sub, const Eigen::VectorXcd& v, Side side);

struct TestVectors {
  Eigen::VectorXcd f;  // receivers: E(a_n, r), unit norm
  Eigen::VectorXcd g;  // transmitters: conj E(b_m, r), unit norm
};

TestVectors test_vectors(Point2 r, const ArraySplit& split, cplx k, FieldModel model);

enum class MapKind { Tx, Rx, Combined };

std::string to_string(MapKind kind);

struct ImagingMap {
  RoiGrid grid;
  std::vector<double> values;
  MapKind kind = MapKind::Combined;
  bool normalized = false;
  double peak_clamp = 1e8;

  std::size_t argmax() const;
  double max() const;
};

struct ImagingOptions {
  double threshold = 0.1;
  double clamp = 1e8;
  FieldModel field_model = FieldModel::ExactHankel;
  unsigned workers = 1;
  // Defaults to the medium's wavenumber.
  std::optional<cplx> wavenumber;
};

struct ImagingResult {
  ImagingMap tx;
  ImagingMap rx;
  ImagingMap combined;
  SubspaceSplit subspace;
  // Squared projection norms per grid point, before inversion and clamping.
  std::vector<double> rx_residual_sq;
  std::vector<double> tx_residual_sq;
};

/// F_rx = 1/|P_left f|, F_tx = 1/|P_right g|, F = (F_rx + F_tx)/2, each
/// capped at options.clamp.
ImagingResult imaging_maps(const ScatteringMatrix& K, const RoiGrid& grid, const ImagingOptions& options = {});

/// Divides by the map maximum; throws NumericalError if it is not positive.
ImagingMap normalize_map(const ImagingMap& map);

// Map table: header "x y value", one row per grid point in grid order.
void write_map(std::ostream& out, const ImagingMap& map);
void write_map_file(const std::filesystem::path& path, const ImagingMap& map);

struct MapTable {
  std::vector<Point2> points;
  std::vector<double> values;
};

MapTable read_map(std::istream& in);
MapTable read_map_file(const std::filesystem::path& path);

/// Binary greyscale image of a map over its grid's bounding box; cells
/// outside the disk are black. Grey levels follow log(value) between the
/// smallest positive value and the maximum.
void write_pgm_file(const std::filesystem::path& path, const ImagingMap& map);

}  // namespace mwmusic
