#include "mwmusic/theory_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "mwmusic/errors.hpp"
#include "mwmusic/parallel.hpp"

namespace mwmusic {
namespace {

constexpr cplx kI{0.0, 1.0};
constexpr std::size_t kScoreSamples = 512;

// h[p + P] = sum_n e^{i p theta_n}, p = -P..P
std::vector<cplx> harmonic_sums(std::span<const double> angles, int order) {
  std::vector<cplx> h(static_cast<std::size_t>(2 * order + 1));
  for (int p = -order; p <= order; ++p) {
    cplx s{};
    for (double t : angles) s += std::polar(1.0, p * t);
    h[static_cast<std::size_t>(p + order)] = s;
  }
  return h;
}

// Evaluates the artifact sum from precomputed harmonic sums.
cplx artifact_from_harmonics(const std::vector<cplx>& h, int order, const std::vector<cplx>& j, double phi,
                             HarmonicForm form) {
  cplx total{};
  for (int p = 1; p <= order; ++p) {
    const cplx jp = j[static_cast<std::size_t>(p)];
    const cplx jm = (p % 2 ? -1.0 : 1.0) * jp;  // J_{-p}
    const cplx hp = h[static_cast<std::size_t>(order + p)];
    const cplx hm = h[static_cast<std::size_t>(order - p)];
    const cplx ip = std::pow(kI, p);
    if (form == HarmonicForm::Direct) {
      // i^p J_p e^{-i p phi} h_p  +  i^{-p} J_{-p} e^{i p phi} h_{-p}
      total += ip * jp * std::polar(1.0, -p * phi) * hp + std::conj(ip) * jm * std::polar(1.0, p * phi) * hm;
    } else {
      // (-i)^q J_q e^{i q phi} h_{-q}  +  (-i)^{-q} J_{-q} e^{-i q phi} h_q
      total += std::conj(ip) * jp * std::polar(1.0, p * phi) * hm + ip * jm * std::polar(1.0, -p * phi) * hp;
    }
  }
  return total;
}

}  // namespace

cplx artifact_term(Point2 r, Point2 r_star, std::span<const double> angles, cplx k, int order, HarmonicForm form) {
  if (order < 1) throw ValidationError("series order must be at least 1");
  const Point2 d = r - r_star;
  const double dist = norm(d);
  if (dist == 0.0) return {};
  const auto h = harmonic_sums(angles, order);
  const auto j = bessel_j_sequence(k * dist, order);
  return artifact_from_harmonics(h, order, j, std::atan2(d.y, d.x), form);
}

SeriesMapPrediction series_map(const RoiGrid& grid, Point2 r_star, const ArraySplit& split, cplx k, double tol,
                               double clamp, unsigned workers) {
  if (grid.empty()) throw ValidationError("grid is empty");
  double max_d = 0.0;
  for (auto p : grid.points()) max_d = std::max(max_d, norm(p - r_star));
  const int order = truncation_order(k, max_d, tol);

  const auto rx_angles = split.rx_angles();
  const auto tx_angles = split.tx_angles();
  const auto h_rx = harmonic_sums(rx_angles, order);
  const auto h_tx = harmonic_sums(tx_angles, order);
  const double N = static_cast<double>(rx_angles.size());
  const double M = static_cast<double>(tx_angles.size());

  const std::size_t count = grid.size();
  SeriesMapPrediction out{grid,
                          std::vector<double>(count),
                          std::vector<double>(count),
                          std::vector<double>(count),
                          std::vector<double>(count),
                          order,
                          r_star,
                          clamp,
                          0};
  auto invert = [clamp](double inner_sq) {
    const double rest = 1.0 - inner_sq;
    return rest <= 0.0 || 1.0 / std::sqrt(rest) > clamp ? clamp : 1.0 / std::sqrt(rest);
  };
  std::vector<unsigned char> flags(count, 0);
  parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const Point2 d = grid.point(p) - r_star;
      const double dist = norm(d);
      cplx inner_rx{1.0, 0.0}, inner_tx{1.0, 0.0};
      if (dist > 0.0) {
        const auto j = bessel_j_sequence(k * dist, order);
        const double phi = std::atan2(d.y, d.x);
        inner_rx = j[0] + artifact_from_harmonics(h_rx, order, j, phi, HarmonicForm::Direct) / N;
        inner_tx = j[0] + artifact_from_harmonics(h_tx, order, j, phi, HarmonicForm::Conjugate) / M;
      }
      out.inner_rx_sq[p] = std::norm(inner_rx);
      out.inner_tx_sq[p] = std::norm(inner_tx);
      out.predicted_rx[p] = invert(out.inner_rx_sq[p]);
      out.predicted_tx[p] = invert(out.inner_tx_sq[p]);
      flags[p] = (out.inner_rx_sq[p] > 1.0 + 1e-9 || out.inner_tx_sq[p] > 1.0 + 1e-9) ? 1 : 0;
    }
  });
  out.flagged = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
  return out;
}

ArrangementSpectrum arrangement_spectrum(std::span<const double> angles, int order) {
  if (angles.empty()) throw ValidationError("arrangement needs at least one angle");
  if (order < 1) throw ValidationError("harmonic order must be at least 1");
  ArrangementSpectrum out;
  out.angles.assign(angles.begin(), angles.end());
  out.order = order;
  for (const cplx& h : harmonic_sums(angles, order)) out.magnitudes.push_back(std::abs(h));
  out.magnitudes[static_cast<std::size_t>(order)] = static_cast<double>(angles.size());
  return out;
}

double arrangement_score(std::span<const double> angles, cplx k, double max_distance, double tol) {
  if (angles.empty()) throw ValidationError("arrangement needs at least one angle");
  const int order = truncation_order(k, max_distance, tol);
  const auto spectrum = arrangement_spectrum(angles, order);
  std::vector<double> weight(static_cast<std::size_t>(order) + 1, 0.0);
  for (std::size_t s = 0; s <= kScoreSamples; ++s) {
    const double d = max_distance * static_cast<double>(s) / static_cast<double>(kScoreSamples);
    const auto j = bessel_j_sequence(k * d, order);
    for (int p = 1; p <= order; ++p) {
      weight[static_cast<std::size_t>(p)] = std::max(weight[static_cast<std::size_t>(p)], std::abs(j[static_cast<std::size_t>(p)]));
    }
  }
  const double N = static_cast<double>(angles.size());
  double score = 0.0;
  for (int p = -order; p <= order; ++p) {
    if (p == 0) continue;
    const double h = spectrum.at(p);
    if (h < 1e-12 * N) continue;
    score += weight[static_cast<std::size_t>(std::abs(p))] * h;
  }
  return score / N;
}

}  // namespace mwmusic
