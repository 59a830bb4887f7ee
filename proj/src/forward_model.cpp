#include "mwmusic/forward_model.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "mwmusic/errors.hpp"

namespace mwmusic {
namespace {

constexpr cplx kI{0.0, 1.0};

double parse_double(const std::string& token, const char* what) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) throw ValidationError(std::string("malformed ") + what + ": '" + token + "'");
  return value;
}

}  // namespace

void MediumSpec::validate() const {
  if (!(eps > 0.0)) throw ValidationError("medium permittivity must be positive");
  if (!(sigma >= 0.0)) throw ValidationError("medium conductivity must be non-negative");
  if (!(mu > 0.0)) throw ValidationError("medium permeability must be positive");
  if (!(frequency > 0.0)) throw ValidationError("frequency must be positive");
}

void AnomalySpec::validate() const {
  if (!(radius > 0.0)) throw ValidationError("anomaly radius must be positive");
  if (!(eps > 0.0)) throw ValidationError("anomaly permittivity must be positive");
  if (!(sigma >= 0.0)) throw ValidationError("anomaly conductivity must be non-negative");
  if (!std::isfinite(center.x) || !std::isfinite(center.y)) throw ValidationError("anomaly center is not finite");
}

void ScatteringMatrix::validate() const {
  if (rows() != split.rx_count() || cols() != split.tx_count()) {
    throw DimensionError("scattering matrix is " + std::to_string(rows()) + "x" + std::to_string(cols()) +
                         " but the split has " + std::to_string(split.rx_count()) + " receivers and " +
                         std::to_string(split.tx_count()) + " transmitters");
  }
  if (!entries.allFinite()) throw NumericalError("scattering matrix has non-finite entries");
}

std::string to_string(FieldModel model) {
  return model == FieldModel::ExactHankel ? "exact-hankel" : "far-field";
}

FieldModel parse_field_model(const std::string& text) {
  if (text == "exact-hankel") return FieldModel::ExactHankel;
  if (text == "far-field") return FieldModel::FarField;
  throw ValidationError("unknown field model '" + text + "' (expected exact-hankel or far-field)");
}

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::BornSynthetic: return "born-synthetic";
    case Provenance::FarFieldSynthetic: return "far-field-synthetic";
    case Provenance::File: return "file";
  }
  return "unknown";
}

cplx wavenumber(const MediumSpec& medium) {
  medium.validate();
  const double w = medium.omega();
  const cplx k = w * std::sqrt(medium.mu * cplx{medium.eps, medium.sigma / w});
  // Principal root has Re k > 0, Im k >= 0; the decaying branch is its conjugate.
  return std::conj(k);
}

cplx contrast(const MediumSpec& medium, const AnomalySpec& anomaly) {
  return {(anomaly.eps - medium.eps) / medium.eps, (anomaly.sigma - medium.sigma) / (medium.omega() * medium.eps)};
}

SmallAnomalyCheck small_anomaly_check(const MediumSpec& medium, const AnomalySpec& anomaly) {
  SmallAnomalyCheck out;
  out.lhs = 4.0 * anomaly.radius * (std::sqrt(anomaly.eps / medium.eps) - 1.0);
  out.wavelength = 2.0 * std::numbers::pi / wavenumber(medium).real();
  out.ratio = out.lhs / out.wavelength;
  out.pass = out.lhs < out.wavelength;
  return out;
}

cplx incident_field(Point2 antenna, Point2 point, cplx k) {
  const double d = norm(antenna - point);
  if (d == 0.0) throw CoincidenceError("field point coincides with an antenna");
  return 0.25 * kI * hankel0_2(k * d);
}

cplx far_field_incident(double angle, Point2 point, cplx k, double radius) {
  if (!(radius > 0.0)) throw ValidationError("array radius must be positive");
  const Point2 dir{std::cos(angle), std::sin(angle)};
  const cplx pre = cplx{-1.0, 1.0} * std::exp(-kI * k * radius) / (4.0 * std::sqrt(k * std::numbers::pi * radius));
  return pre * std::exp(kI * k * dot(dir, point));
}

cplx far_field_incident(const AntennaArray& array, std::size_t antenna, Point2 point, cplx k) {
  return far_field_incident(array.angle(antenna), point, k, array.radius());
}

cplx model_field(FieldModel model, const AntennaArray& array, std::size_t antenna, Point2 point, cplx k) {
  return model == FieldModel::ExactHankel ? incident_field(array.position(antenna), point, k)
                                          : far_field_incident(array, antenna, point, k);
}

ScatteringMatrix born_scattering_matrix(const ArraySplit& split, const MediumSpec& medium,
                                        std::span<const AnomalySpec> anomalies, FieldModel model) {
  return born_scattering_matrix(split, medium, anomalies, model, wavenumber(medium));
}

ScatteringMatrix born_scattering_matrix(const ArraySplit& split, const MediumSpec& medium,
                                        std::span<const AnomalySpec> anomalies, FieldModel model, cplx k) {
  medium.validate();
  if (anomalies.empty()) throw ValidationError("at least one anomaly is required");
  for (const auto& a : anomalies) a.validate();
  for (std::size_t i = 0; i < anomalies.size(); ++i) {
    for (std::size_t j = i + 1; j < anomalies.size(); ++j) {
      if (norm(anomalies[i].center - anomalies[j].center) <= anomalies[i].radius + anomalies[j].radius) {
        throw OverlapError("anomalies " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " overlap");
      }
    }
  }
  const auto& array = split.full();
  for (const auto& a : anomalies) {
    for (auto p : array.positions()) {
      if (p == a.center) throw CoincidenceError("anomaly center coincides with an antenna");
    }
    const auto check = small_anomaly_check(medium, a);
    if (!check.pass) {
      warn("small-anomaly condition fails: 4*alpha*(sqrt(eps/eps_b)-1) = " + format_double(check.lhs) +
           " m >= wavelength " + format_double(check.wavelength) + " m");
    }
  }

  const std::size_t N = split.rx_count();
  const std::size_t M = split.tx_count();
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(M));
  Eigen::VectorXcd rx(static_cast<Eigen::Index>(N));
  Eigen::VectorXcd tx(static_cast<Eigen::Index>(M));
  for (const auto& a : anomalies) {
    const cplx scale = kI * k * k * a.radius * a.radius * std::numbers::pi / (4.0 * medium.omega() * medium.mu) *
                       contrast(medium, a);
    for (std::size_t n = 0; n < N; ++n) {
      rx(static_cast<Eigen::Index>(n)) = model_field(model, array, split.rx_indices()[n], a.center, k);
    }
    for (std::size_t m = 0; m < M; ++m) {
      tx(static_cast<Eigen::Index>(m)) = model_field(model, array, split.tx_indices()[m], a.center, k);
    }
    K += scale * rx * tx.transpose();
  }
  ScatteringMatrix out{std::move(K), split, medium,
                       model == FieldModel::ExactHankel ? Provenance::BornSynthetic : Provenance::FarFieldSynthetic};
  out.validate();
  return out;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

void write_matrix(std::ostream& out, const Eigen::MatrixXcd& entries, double frequency) {
  out << entries.rows() << ' ' << entries.cols() << ' ' << format_double(frequency) << '\n';
  for (Eigen::Index n = 0; n < entries.rows(); ++n) {
    for (Eigen::Index m = 0; m < entries.cols(); ++m) {
      out << n + 1 << ' ' << m + 1 << ' ' << format_double(entries(n, m).real()) << ' '
          << format_double(entries(n, m).imag()) << '\n';
    }
  }
}

void write_matrix_file(const std::filesystem::path& path, const ScatteringMatrix& matrix) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_matrix(out, matrix.entries, matrix.medium.frequency);
  if (!out) throw ValidationError("failed writing " + path.string());
}

MatrixFile read_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("matrix file is empty");
  std::istringstream head(line);
  long rows = 0, cols = 0;
  std::string freq;
  if (!(head >> rows >> cols >> freq) || rows <= 0 || cols <= 0) {
    throw ValidationError("matrix header must be 'N M frequency', got '" + line + "'");
  }
  MatrixFile out;
  out.frequency = parse_double(freq, "frequency");
  out.entries = Eigen::MatrixXcd::Zero(rows, cols);
  for (long n = 1; n <= rows; ++n) {
    for (long m = 1; m <= cols; ++m) {
      if (!std::getline(in, line)) throw ValidationError("matrix file truncated");
      std::istringstream row(line);
      long rn = 0, rm = 0;
      std::string re, im;
      if (!(row >> rn >> rm >> re >> im)) throw ValidationError("malformed matrix line '" + line + "'");
      if (rn != n || rm != m) {
        throw ValidationError("matrix entries out of order at line '" + line + "'");
      }
      out.entries(n - 1, m - 1) = {parse_double(re, "real part"), parse_double(im, "imaginary part")};
    }
  }
  return out;
}

MatrixFile read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  return read_matrix(in);
}

}  // namespace mwmusic
