#include "mwmusic/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include "mwmusic/errors.hpp"

namespace mwmusic {
namespace {

double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(a, two_pi);
  if (r < 0.0) r += two_pi;
  return r;
}

}  // namespace

AntennaArray::AntennaArray(double radius, std::vector<double> angles)
    : radius_(radius), angles_(std::move(angles)) {
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw ValidationError("antenna array radius must be positive, got " + std::to_string(radius_));
  }
  if (angles_.empty()) throw ValidationError("antenna array needs at least one antenna");
  std::vector<double> wrapped;
  wrapped.reserve(angles_.size());
  for (double a : angles_) wrapped.push_back(wrap_angle(a));
  std::sort(wrapped.begin(), wrapped.end());
  constexpr double kSame = 1e-12;
  for (std::size_t i = 0; i < wrapped.size(); ++i) {
    const double next = i + 1 < wrapped.size() ? wrapped[i + 1] : wrapped[0] + 2.0 * std::numbers::pi;
    if (wrapped.size() > 1 && next - wrapped[i] < kSame) {
      throw ValidationError("antenna angles must be distinct modulo 2*pi");
    }
  }
  positions_.reserve(angles_.size());
  for (double a : angles_) positions_.push_back({radius_ * std::cos(a), radius_ * std::sin(a)});
}

ArraySplit::ArraySplit(AntennaArray full, std::vector<std::size_t> tx, std::vector<std::size_t> rx)
    : full_(std::move(full)), tx_(std::move(tx)), rx_(std::move(rx)) {
  if (tx_.empty() || rx_.empty()) throw ValidationError("transmit and receive sets must be non-empty");
  auto check = [&](const std::vector<std::size_t>& idx, const char* what) {
    std::set<std::size_t> seen;
    for (std::size_t i : idx) {
      if (i >= full_.size()) {
        throw BoundsError(std::string(what) + " index " + std::to_string(i + 1) + " outside 1.." +
                          std::to_string(full_.size()));
      }
      if (!seen.insert(i).second) {
        throw ValidationError(std::string(what) + " index " + std::to_string(i + 1) + " repeated");
      }
    }
    return seen;
  };
  const auto tx_set = check(tx_, "transmit");
  const auto rx_set = check(rx_, "receive");
  for (std::size_t i : rx_set) {
    if (tx_set.count(i)) {
      throw OverlapError("antenna " + std::to_string(i + 1) + " is both transmitter and receiver");
    }
  }
}

std::vector<double> ArraySplit::tx_angles() const {
  std::vector<double> out;
  for (std::size_t i : tx_) out.push_back(full_.angle(i));
  return out;
}

std::vector<double> ArraySplit::rx_angles() const {
  std::vector<double> out;
  for (std::size_t i : rx_) out.push_back(full_.angle(i));
  return out;
}

RoiGrid::RoiGrid(double radius, double step) : radius_(radius), step_(step) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("grid radius must be positive");
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("grid step must be positive");
  if (step > radius) throw ValidationError("grid step must not exceed the grid radius");
  half_ = static_cast<long>(std::floor(radius / step + 1e-9));
  const long side = 2 * half_ + 1;
  mask_.assign(static_cast<std::size_t>(side * side), 0);
  const double r2 = radius * radius;
  for (long j = -half_; j <= half_; ++j) {
    for (long i = -half_; i <= half_; ++i) {
      const Point2 p{static_cast<double>(i) * step, static_cast<double>(j) * step};
      if (p.x * p.x + p.y * p.y <= r2) {
        mask_[static_cast<std::size_t>((j + half_) * side + (i + half_))] = 1;
        points_.push_back(p);
        lattice_.emplace_back(i, j);
      }
    }
  }
}

std::size_t RoiGrid::nearest(Point2 q) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < points_.size(); ++p) {
    const double d = norm(points_[p] - q);
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  return best;
}

AntennaArray uniform_circle_array(std::size_t count, double radius) {
  if (count == 0) throw ValidationError("antenna count must be at least 1");
  std::vector<double> angles;
  angles.reserve(count);
  const double S = static_cast<double>(count);
  for (std::size_t s = 1; s <= count; ++s) {
    angles.push_back(1.5 * std::numbers::pi - 2.0 * static_cast<double>(s - 1) * std::numbers::pi / S);
  }
  return AntennaArray(radius, std::move(angles));
}

ArraySplit split_array(const AntennaArray& array, std::span<const std::size_t> tx_one_based,
                       std::span<const std::size_t> rx_one_based) {
  auto to_zero = [&](std::span<const std::size_t> in, const char* what) {
    std::vector<std::size_t> out;
    out.reserve(in.size());
    for (std::size_t i : in) {
      if (i == 0 || i > array.size()) {
        throw BoundsError(std::string(what) + " index " + std::to_string(i) + " outside 1.." +
                          std::to_string(array.size()));
      }
      out.push_back(i - 1);
    }
    return out;
  };
  return ArraySplit(array, to_zero(tx_one_based, "transmit"), to_zero(rx_one_based, "receive"));
}

RoiGrid roi_grid(double radius, double step) { return RoiGrid(radius, step); }

}  // namespace mwmusic
