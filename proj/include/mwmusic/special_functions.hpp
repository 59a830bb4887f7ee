#pragma once

// Integer-order Bessel functions of complex argument, the order-zero Hankel
// function of the second kind, and the Jacobi-Anger plane-wave expansion.
//
// J_n is computed by the ascending power series for |z| <= 2 and by Miller's
// backward recurrence (normalised with the generating function evaluated at
// t = -i or t = i, whichever sum is free of cancellation) otherwise. Y_0 and
// Y_1 come from Neumann series in J_n for |z| < 12 and from the Hankel
// asymptotic expansion beyond. Accuracy targets: J_n to 1e-10 relative for
// |z| <= 50, |n| <= 60; H_0^(2) to 1e-8 relative for 0.05 <= |z| <= 50.

#include <complex>
#include <vector>

namespace mwmusic {

using cplx = std::complex<double>;

inline constexpr double kMaxBesselArgument = 50.0;
inline constexpr double kHankelCrossover = 12.0;
inline constexpr int kDefaultOrderCap = 150;

struct TruncationPolicy {
  double absolute_tolerance = 1e-12;
  int max_order = kDefaultOrderCap;

  void validate() const;
};

cplx bessel_j(int order, cplx z);

/// J_0(z) .. J_max_order(z) from a single recurrence run.
std::vector<cplx> bessel_j_sequence(cplx z, int max_order);

cplx bessel_y0(cplx z);
cplx bessel_y1(cplx z);

/// H_0^(2)(z) = J_0(z) - i Y_0(z). Throws DomainError at z = 0.
cplx hankel0_2(cplx z);

// The two evaluation paths behind hankel0_2, exposed for cross-checking.
cplx hankel0_2_series(cplx z);
cplx hankel0_2_asymptotic(cplx z);

struct JacobiAngerSum {
  cplx value;
  int order;  // P: terms with |p| <= P were summed
};

/// Partial sum of e^{i x cos(theta)} = sum_p i^p J_p(x) e^{i p theta}.
/// P is the smallest order with |J_q(x)| below tolerance for every
/// q in [P, max_order]; ConvergenceError when J_max_order is not.
JacobiAngerSum jacobi_anger_sum(cplx x, double theta, const TruncationPolicy& policy = {});

/// Smallest P >= 1 such that |J_q(|k| * max_distance)| < tol for all
/// q in [P, cap]. Throws ConvergenceError when |J_cap| is still >= tol.
int truncation_order(cplx k, double max_distance, double tol = 1e-12, int cap = kDefaultOrderCap);

}  // namespace mwmusic
