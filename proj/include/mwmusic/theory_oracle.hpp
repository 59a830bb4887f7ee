#pragma once

// Closed-form Bessel-series structure of the MUSIC maps for one anomaly
// under far-field illumination, and the harmonic-sum diagnostics that
// decide which antenna arrangements cancel the arrangement-dependent
// artifact terms.

#include <span>
#include <vector>

#include "mwmusic/geometry.hpp"
#include "mwmusic/special_functions.hpp"

namespace mwmusic {

// Direct:    sum_n sum_{0<|p|<=P} i^p J_p(k d) e^{i p (theta_n - phi)}
// Conjugate: sum_m sum_{0<|q|<=P} (-i)^q J_q(k d) e^{-i q (theta_m - phi)}
enum class HarmonicForm { Direct, Conjugate };

/// d = |r - r_star|, phi the polar angle of r - r_star. Exactly 0 at r = r_star.
cplx artifact_term(Point2 r, Point2 r_star, std::span<const double> angles, cplx k, int order,
                   HarmonicForm form = HarmonicForm::Direct);

struct SeriesMapPrediction {
  RoiGrid grid;
  std::vector<double> predicted_rx;  // (1 - |J_0 + E_rx/N|^2)^{-1/2}, clamped
  std::vector<double> predicted_tx;  // (1 - |J_0 + E_tx/M|^2)^{-1/2}, clamped
  std::vector<double> inner_rx_sq;   // |J_0 + E_rx/N|^2
  std::vector<double> inner_tx_sq;   // |J_0 + E_tx/M|^2
  int truncation = 0;
  Point2 anomaly_center;
  double clamp = 1e8;
  std::size_t flagged = 0;  // points where an inner magnitude exceeds 1 + 1e-9
};

/// Series prediction of F_rx and F_tx over the grid. The truncation order
/// comes from truncation_order(k, max_p |r_p - r_star|, tol).
SeriesMapPrediction series_map(const RoiGrid& grid, Point2 r_star, const ArraySplit& split, cplx k,
                               double tol = 1e-12, double clamp = 1e8, unsigned workers = 1);

struct ArrangementSpectrum {
  std::vector<double> angles;
  int order = 0;
  std::vector<double> magnitudes;  // |sum_n e^{i p theta_n}| for p = -order..order

  double at(int p) const { return magnitudes.at(static_cast<std::size_t>(p + order)); }
};

ArrangementSpectrum arrangement_spectrum(std::span<const double> angles, int order);

/// sum_{0<|p|<=P} w_p |sum_n e^{i p theta_n}| / N with w_p the maximum of
/// |J_p(k d)| over 0 <= d <= max_distance. Harmonic sums below 1e-12 * N
/// count as cancelled. Lower is better.
double arrangement_score(std::span<const double> angles, cplx k, double max_distance, double tol = 1e-12);

}  // namespace mwmusic
