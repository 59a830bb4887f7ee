#include "mwmusic/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mwmusic/errors.hpp"

namespace mwmusic {
namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kSeriesRadius = 2.0;
constexpr cplx kI{0.0, 1.0};

void check_argument(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw RangeError("Bessel argument is not finite");
  }
  if (std::abs(z) > kMaxBesselArgument) {
    throw RangeError("Bessel argument |z| = " + std::to_string(std::abs(z)) + " exceeds supported range " +
                     std::to_string(kMaxBesselArgument));
  }
}

// J_n(z) = (z/2)^n / n! * sum_k (-z^2/4)^k / (k! (n+1)_k)
cplx ascending_j(int n, cplx z) {
  cplx lead{1.0, 0.0};
  const cplx half = 0.5 * z;
  for (int j = 1; j <= n; ++j) lead *= half / static_cast<double>(j);
  if (lead == cplx{}) return lead;
  const cplx w = -0.25 * z * z;
  cplx term{1.0, 0.0};
  cplx sum{1.0, 0.0};
  for (int k = 1; k < 200; ++k) {
    term *= w / (static_cast<double>(k) * static_cast<double>(n + k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return lead * sum;
}

std::vector<cplx> miller_sequence(cplx z, int max_order) {
  const double az = std::abs(z);
  const double top = std::max(static_cast<double>(max_order), std::ceil(az));
  const int start = static_cast<int>(top + 30.0 + std::ceil(3.0 * std::sqrt(top)));
  std::vector<cplx> j(static_cast<std::size_t>(start) + 2, cplx{});
  j[static_cast<std::size_t>(start)] = cplx{1e-30, 0.0};
  const cplx two_over_z = 2.0 / z;
  constexpr double kRescale = 1e250;
  for (int n = start; n >= 1; --n) {
    const auto un = static_cast<std::size_t>(n);
    j[un - 1] = static_cast<double>(n) * two_over_z * j[un] - j[un + 1];
    if (std::abs(j[un - 1]) > kRescale) {
      for (std::size_t m = un - 1; m < j.size(); ++m) j[m] /= kRescale;
    }
  }
  // Generating function at t = -i gives e^{-iz}, at t = i gives e^{iz};
  // pick the one whose magnitude is at least 1.
  const bool upper = z.imag() >= 0.0;
  const cplx t = upper ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
  const cplx target = upper ? std::exp(-kI * z) : std::exp(kI * z);
  cplx sum = j[0];
  cplx tp{1.0, 0.0};
  for (std::size_t n = 1; n < j.size(); ++n) {
    tp *= t;
    sum += 2.0 * tp * j[n];
  }
  const cplx scale = target / sum;
  std::vector<cplx> out(static_cast<std::size_t>(max_order) + 1);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = j[n] * scale;
  return out;
}

// Coefficients a_k(nu) of the Hankel expansion; returns sum_k (s i)^k a_k / z^k
// truncated at the smallest term.
cplx hankel_tail(int nu, cplx z, double sign) {
  const double mu = 4.0 * nu * nu;
  const cplx step = cplx{0.0, sign} / z;
  cplx term{1.0, 0.0};
  cplx sum = term;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const cplx next = term * step * ((mu - odd * odd) / (8.0 * k));
    const double mag = std::abs(next);
    if (mag > last) break;
    term = next;
    sum += term;
    last = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

struct HankelPair {
  cplx h1;
  cplx h2;
};

HankelPair hankel_asymptotic(int nu, cplx z) {
  const cplx pre = std::sqrt(2.0 / (std::numbers::pi * z));
  const cplx omega = z - 0.5 * nu * std::numbers::pi - 0.25 * std::numbers::pi;
  return {pre * std::exp(kI * omega) * hankel_tail(nu, z, +1.0),
          pre * std::exp(-kI * omega) * hankel_tail(nu, z, -1.0)};
}

int neumann_order(cplx z) {
  const double az = std::abs(z);
  return static_cast<int>(std::ceil(az) + 25.0 + std::ceil(2.0 * std::sqrt(az)));
}

// Y_0 and Y_1 from Neumann series in J_n; valid for any nonzero z where the
// J sequence is accurate, well conditioned for moderate |z|.
void neumann_y01(cplx z, cplx& j0, cplx& y0, cplx& y1) {
  const int order = neumann_order(z);
  const auto j = bessel_j_sequence(z, order + 1);
  const cplx log_term = std::log(0.5 * z) + kEulerGamma;
  cplx s0{}, s1{};
  double sgn = -1.0;  // (-1)^k for k = 1
  for (int k = 1; 2 * k + 1 <= order + 1; ++k) {
    const auto uk = static_cast<std::size_t>(2 * k);
    s0 += sgn * j[uk] / static_cast<double>(k);
    s1 += sgn * (j[uk - 1] - j[uk + 1]) / static_cast<double>(k);
    sgn = -sgn;
  }
  const double two_pi = 2.0 / std::numbers::pi;
  j0 = j[0];
  y0 = two_pi * log_term * j[0] - 2.0 * two_pi * s0;
  y1 = two_pi * (log_term * j[1] - j[0] / z) + two_pi * s1;
}

}  // namespace

void TruncationPolicy::validate() const {
  if (!(absolute_tolerance > 0.0)) throw ValidationError("truncation tolerance must be positive");
  if (max_order < 1) throw ValidationError("truncation max_order must be at least 1");
}

std::vector<cplx> bessel_j_sequence(cplx z, int max_order) {
  if (max_order < 0) throw ValidationError("max_order must be non-negative");
  check_argument(z);
  std::vector<cplx> out(static_cast<std::size_t>(max_order) + 1, cplx{});
  if (z == cplx{}) {
    out[0] = 1.0;
    return out;
  }
  if (std::abs(z) <= kSeriesRadius) {
    for (int n = 0; n <= max_order; ++n) out[static_cast<std::size_t>(n)] = ascending_j(n, z);
    return out;
  }
  return miller_sequence(z, max_order);
}

cplx bessel_j(int order, cplx z) {
  const int n = order < 0 ? -order : order;
  const cplx v = bessel_j_sequence(z, n)[static_cast<std::size_t>(n)];
  return (order < 0 && (n % 2 != 0)) ? -v : v;
}

cplx bessel_y0(cplx z) {
  if (z == cplx{}) throw DomainError("Y_0 is singular at z = 0");
  if (std::abs(z) < kHankelCrossover) {
    cplx j0, y0, y1;
    neumann_y01(z, j0, y0, y1);
    return y0;
  }
  const auto h = hankel_asymptotic(0, z);
  return (h.h1 - h.h2) / (2.0 * kI);
}

cplx bessel_y1(cplx z) {
  if (z == cplx{}) throw DomainError("Y_1 is singular at z = 0");
  if (std::abs(z) < kHankelCrossover) {
    cplx j0, y0, y1;
    neumann_y01(z, j0, y0, y1);
    return y1;
  }
  const auto h = hankel_asymptotic(1, z);
  return (h.h1 - h.h2) / (2.0 * kI);
}

cplx hankel0_2_series(cplx z) {
  if (z == cplx{}) throw DomainError("H_0^(2) is singular at z = 0");
  cplx j0, y0, y1;
  neumann_y01(z, j0, y0, y1);
  return j0 - kI * y0;
}

cplx hankel0_2_asymptotic(cplx z) {
  if (z == cplx{}) throw DomainError("H_0^(2) is singular at z = 0");
  return hankel_asymptotic(0, z).h2;
}

cplx hankel0_2(cplx z) {
  if (z == cplx{}) throw DomainError("H_0^(2) is singular at z = 0");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw RangeError("Hankel argument is not finite");
  return std::abs(z) < kHankelCrossover ? hankel0_2_series(z) : hankel0_2_asymptotic(z);
}

JacobiAngerSum jacobi_anger_sum(cplx x, double theta, const TruncationPolicy& policy) {
  policy.validate();
  const auto j = bessel_j_sequence(x, policy.max_order);
  const double tol = policy.absolute_tolerance;
  if (std::abs(j.back()) >= tol) {
    throw ConvergenceError("Jacobi-Anger series not converged by order " + std::to_string(policy.max_order));
  }
  int order = policy.max_order;
  while (order > 1 && std::abs(j[static_cast<std::size_t>(order - 1)]) < tol) --order;
  cplx sum = j[0];
  cplx ip{1.0, 0.0};
  for (int p = 1; p <= order; ++p) {
    ip *= kI;
    sum += 2.0 * ip * j[static_cast<std::size_t>(p)] * std::cos(p * theta);
  }
  return {sum, order};
}

int truncation_order(cplx k, double max_distance, double tol, int cap) {
  if (!(max_distance >= 0.0)) throw ValidationError("max_distance must be non-negative");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  if (cap < 1) throw ValidationError("order cap must be at least 1");
  const double x = std::abs(k) * max_distance;
  const auto j = bessel_j_sequence(cplx{x, 0.0}, cap);
  if (std::abs(j.back()) >= tol) {
    throw ConvergenceError("truncation order exceeds cap " + std::to_string(cap) + " for |k|d = " +
                           std::to_string(x) + " and tol = " + std::to_string(tol));
  }
  int order = cap;
  while (order > 1 && std::abs(j[static_cast<std::size_t>(order - 1)]) < tol) --order;
  return order;
}

}  // namespace mwmusic
