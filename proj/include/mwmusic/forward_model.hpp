#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <span>
#include <string>

#include "mwmusic/geometry.hpp"
#include "mwmusic/special_functions.hpp"

namespace mwmusic {

inline constexpr double kVacuumPermittivity = 8.854e-12;  // F/m
inline constexpr double kVacuumPermeability = 4.0 * std::numbers::pi * 1e-7;  // H/m

struct MediumSpec {
  double eps = kVacuumPermittivity;  // F/m
  double sigma = 0.0;                // S/m
  double mu = kVacuumPermeability;   // H/m
  double frequency = 1e9;            // Hz

  static MediumSpec relative(double eps_r, double sigma, double frequency, double mu = kVacuumPermeability) {
    return {eps_r * kVacuumPermittivity, sigma, mu, frequency};
  }
  double omega() const { return 2.0 * std::numbers::pi * frequency; }
  void validate() const;
};

struct AnomalySpec {
  Point2 center;
  double radius = 0.0;  // m
  double eps = 0.0;     // F/m
  double sigma = 0.0;   // S/m

  void validate() const;
};

enum class FieldModel { ExactHankel, FarField };
enum class Provenance { BornSynthetic, FarFieldSynthetic, File };

std::string to_string(FieldModel model);
FieldModel parse_field_model(const std::string& text);
std::string to_string(Provenance provenance);

/// Rows are receivers (A, size N), columns transmitters (B, size M).
struct ScatteringMatrix {
  Eigen::MatrixXcd entries;
  ArraySplit split;
  MediumSpec medium;
  Provenance provenance = Provenance::BornSynthetic;

  std::size_t rows() const { return static_cast<std::size_t>(entries.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(entries.cols()); }
  void validate() const;
};

/// Background wavenumber omega*sqrt(mu*(eps + i sigma/omega)) on the branch
/// with Re k > 0 and Im k <= 0, so that e^{-ikR} decays for R > 0.
cplx wavenumber(const MediumSpec& medium);

/// Contrast (eps* - eps_b)/eps_b + i (sigma* - sigma_b)/(omega eps_b).
cplx contrast(const MediumSpec& medium, const AnomalySpec& anomaly);

struct SmallAnomalyCheck {
  bool pass = false;
  double lhs = 0.0;         // 4 alpha (sqrt(eps*/eps_b) - 1), metres
  double wavelength = 0.0;  // 2 pi / Re k, metres
  double ratio = 0.0;       // lhs / wavelength; pass iff ratio < 1
};

SmallAnomalyCheck small_anomaly_check(const MediumSpec& medium, const AnomalySpec& anomaly);

/// (i/4) H_0^(2)(k |antenna - point|).
cplx incident_field(Point2 antenna, Point2 point, cplx k);

/// Far-field form (-1+i) e^{-ikR} / (4 sqrt(k pi R)) e^{ik theta.r} for an
/// antenna at angle `angle` on the circle of radius R.
cplx far_field_incident(double angle, Point2 point, cplx k, double radius);
cplx far_field_incident(const AntennaArray& array, std::size_t antenna, Point2 point, cplx k);

/// Incident field of one antenna under the chosen model.
cplx model_field(FieldModel model, const AntennaArray& array, std::size_t antenna, Point2 point, cplx k);

/// Born-approximate matrix: entry (n, m) is the sum over anomalies of
/// (i k^2 alpha^2 pi / (4 omega mu_b)) O E(a_n, r*) E(b_m, r*).
ScatteringMatrix born_scattering_matrix(const ArraySplit& split, const MediumSpec& medium,
                                        std::span<const AnomalySpec> anomalies, FieldModel model);

/// Same, with the wavenumber supplied by the caller (used to build
/// lossless far-field data for the series oracle).
ScatteringMatrix born_scattering_matrix(const ArraySplit& split, const MediumSpec& medium,
                                        std::span<const AnomalySpec> anomalies, FieldModel model, cplx k);

// Text interchange format:
//   N M frequency
//   n m re im        (N*M lines, 1-based, row-major)
// Doubles use the shortest representation that round-trips exactly.
struct MatrixFile {
  Eigen::MatrixXcd entries;
  double frequency = 0.0;
};

void write_matrix(std::ostream& out, const Eigen::MatrixXcd& entries, double frequency);
void write_matrix_file(const std::filesystem::path& path, const ScatteringMatrix& matrix);
MatrixFile read_matrix(std::istream& in);
MatrixFile read_matrix_file(const std::filesystem::path& path);

std::string format_double(double value);

}  // namespace mwmusic
