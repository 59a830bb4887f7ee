#include "mwmusic/imaging.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mwmusic/errors.hpp"
#include "mwmusic/parallel.hpp"

namespace mwmusic {
namespace {

double residual_sq(const Eigen::MatrixXcd& signal, const Eigen::VectorXcd& v) {
  const Eigen::VectorXcd r = v - signal * (signal.adjoint() * v);
  return r.squaredNorm();
}

double parse_number(const std::string& token) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ValidationError("malformed number '" + token + "' in map file");
  }
  return value;
}

}  // namespace

SubspaceSplit subspace_split(const Eigen::MatrixXcd& K, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ValidationError("signal threshold must lie in (0, 1)");
  if (K.size() == 0) throw DimensionError("scattering matrix is empty");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(K, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& tau = svd.singularValues();
  if (!(tau(0) > 0.0)) throw NumericalError("scattering matrix is zero; no signal subspace");
  int rank = 0;
  while (rank < tau.size() && tau(rank) >= threshold * tau(0)) ++rank;
  SubspaceSplit out;
  out.singular_values = tau;
  out.rank = rank;
  out.left_signal = svd.matrixU().leftCols(rank);
  out.right_signal = svd.matrixV().leftCols(rank);
  return out;
}

double noise_projection_norm(const SubspaceSplit& sub, const Eigen::VectorXcd& v, Side side) {
  const Eigen::MatrixXcd& s = side == Side::Left ? sub.left_signal : sub.right_signal;
  if (v.size() != s.rows()) {
    throw DimensionError("test vector has length " + std::to_string(v.size()) + ", expected " +
                         std::to_string(s.rows()));
  }
  if (std::abs(v.norm() - 1.0) > 1e-8) throw ValidationError("test vector must have unit norm");
  return std::sqrt(residual_sq(s, v));
}

TestVectors test_vectors(Point2 r, const ArraySplit& split, cplx k, FieldModel model) {
  const auto& array = split.full();
  TestVectors out;
  out.f.resize(static_cast<Eigen::Index>(split.rx_count()));
  out.g.resize(static_cast<Eigen::Index>(split.tx_count()));
  for (std::size_t n = 0; n < split.rx_count(); ++n) {
    out.f(static_cast<Eigen::Index>(n)) = model_field(model, array, split.rx_indices()[n], r, k);
  }
  for (std::size_t m = 0; m < split.tx_count(); ++m) {
    out.g(static_cast<Eigen::Index>(m)) = std::conj(model_field(model, array, split.tx_indices()[m], r, k));
  }
  out.f.normalize();
  out.g.normalize();
  return out;
}

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Tx: return "F_tx";
    case MapKind::Rx: return "F_rx";
    case MapKind::Combined: return "F";
  }
  return "unknown";
}

std::size_t ImagingMap::argmax() const {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

double ImagingMap::max() const { return values.empty() ? 0.0 : values[argmax()]; }

ImagingResult imaging_maps(const ScatteringMatrix& K, const RoiGrid& grid, const ImagingOptions& options) {
  K.validate();
  if (grid.empty()) throw ValidationError("imaging grid is empty");
  if (!(options.clamp > 0.0)) throw ValidationError("clamp must be positive");
  const cplx k = options.wavenumber.value_or(wavenumber(K.medium));
  auto sub = subspace_split(K.entries, options.threshold);

  const std::size_t count = grid.size();
  ImagingResult out{{grid, std::vector<double>(count), MapKind::Tx, false, options.clamp},
                    {grid, std::vector<double>(count), MapKind::Rx, false, options.clamp},
                    {grid, std::vector<double>(count), MapKind::Combined, false, options.clamp},
                    std::move(sub),
                    std::vector<double>(count),
                    std::vector<double>(count)};

  auto invert = [clamp = options.clamp](double residual_squared) {
    const double r = std::sqrt(std::max(residual_squared, 0.0));
    return (r == 0.0 || 1.0 / r > clamp) ? clamp : 1.0 / r;
  };

  parallel_for(count, options.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const auto tv = test_vectors(grid.point(p), K.split, k, options.field_model);
      const double rx_sq = residual_sq(out.subspace.left_signal, tv.f);
      const double tx_sq = residual_sq(out.subspace.right_signal, tv.g);
      out.rx_residual_sq[p] = rx_sq;
      out.tx_residual_sq[p] = tx_sq;
      const double f_rx = invert(rx_sq);
      const double f_tx = invert(tx_sq);
      out.rx.values[p] = f_rx;
      out.tx.values[p] = f_tx;
      out.combined.values[p] = std::min(0.5 * (f_rx + f_tx), options.clamp);
    }
  });
  return out;
}

ImagingMap normalize_map(const ImagingMap& map) {
  const double peak = map.max();
  if (!(peak > 0.0) || !std::isfinite(peak)) throw NumericalError("cannot normalise a map without a positive maximum");
  ImagingMap out = map;
  for (double& v : out.values) v /= peak;
  out.values[map.argmax()] = 1.0;
  out.normalized = true;
  return out;
}

void write_map(std::ostream& out, const ImagingMap& map) {
  out << "x y value\n";
  for (std::size_t p = 0; p < map.grid.size(); ++p) {
    const auto q = map.grid.point(p);
    out << format_double(q.x) << ' ' << format_double(q.y) << ' ' << format_double(map.values[p]) << '\n';
  }
}

void write_map_file(const std::filesystem::path& path, const ImagingMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_map(out, map);
}

MapTable read_map(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("map file is empty");
  if (line != "x y value") throw ValidationError("map header must be 'x y value'");
  MapTable out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string x, y, v, extra;
    if (!(row >> x >> y >> v) || (row >> extra)) throw ValidationError("malformed map line '" + line + "'");
    out.points.push_back({parse_number(x), parse_number(y)});
    out.values.push_back(parse_number(v));
  }
  return out;
}

MapTable read_map_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  return read_map(in);
}

void write_pgm_file(const std::filesystem::path& path, const ImagingMap& map) {
  const long half = map.grid.half_cells();
  const long side = 2 * half + 1;
  std::vector<unsigned char> pixels(static_cast<std::size_t>(side * side), 0);
  // log scale between the smallest positive value and the peak
  const double peak = map.max();
  double floor = peak;
  for (double v : map.values) {
    if (v > 0.0) floor = std::min(floor, v);
  }
  const double span = peak > 0.0 ? std::log(peak / floor) : 0.0;
  for (std::size_t p = 0; p < map.grid.size(); ++p) {
    const long i = map.grid.lattice_i(p) + half;
    const long row = half - map.grid.lattice_j(p);  // y up
    const double x = map.values[p];
    double v = 0.0;
    if (x > 0.0) v = span > 0.0 ? std::clamp(std::log(x / floor) / span, 0.0, 1.0) : 1.0;
    pixels[static_cast<std::size_t>(row * side + i)] = static_cast<unsigned char>(std::lround(255.0 * v));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "P5\n" << side << ' ' << side << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

}  // namespace mwmusic
