#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace mwmusic {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }

/// Antennas on a circle of radius `radius()` centred at the origin.
/// Position s is exactly radius * (cos angle_s, sin angle_s).
class AntennaArray {
 public:
  AntennaArray(double radius, std::vector<double> angles);

  double radius() const { return radius_; }
  std::size_t size() const { return angles_.size(); }
  std::span<const double> angles() const { return angles_; }
  std::span<const Point2> positions() const { return positions_; }
  double angle(std::size_t i) const { return angles_.at(i); }
  Point2 position(std::size_t i) const { return positions_.at(i); }

 private:
  double radius_;
  std::vector<double> angles_;
  std::vector<Point2> positions_;
};

/// Disjoint transmit (B) and receive (A) subsets of one array.
/// Indices are 0-based here; configs and reports use 1-based numbering.
class ArraySplit {
 public:
  ArraySplit(AntennaArray full, std::vector<std::size_t> tx, std::vector<std::size_t> rx);

  const AntennaArray& full() const { return full_; }
  std::span<const std::size_t> tx_indices() const { return tx_; }
  std::span<const std::size_t> rx_indices() const { return rx_; }
  std::size_t tx_count() const { return tx_.size(); }  // M
  std::size_t rx_count() const { return rx_.size(); }  // N

  Point2 tx_position(std::size_t m) const { return full_.position(tx_.at(m)); }
  Point2 rx_position(std::size_t n) const { return full_.position(rx_.at(n)); }
  double tx_angle(std::size_t m) const { return full_.angle(tx_.at(m)); }
  double rx_angle(std::size_t n) const { return full_.angle(rx_.at(n)); }
  std::vector<double> tx_angles() const;
  std::vector<double> rx_angles() const;

 private:
  AntennaArray full_;
  std::vector<std::size_t> tx_;
  std::vector<std::size_t> rx_;
};

/// Origin-centred square lattice clipped to a disk. Points are stored
/// row-major (y ascending, then x ascending) together with their lattice
/// coordinates so that maps can be rasterised.
class RoiGrid {
 public:
  RoiGrid(double radius, double step);

  double radius() const { return radius_; }
  double step() const { return step_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::span<const Point2> points() const { return points_; }
  Point2 point(std::size_t i) const { return points_.at(i); }

  // Bounding box is (2*half_cells()+1)^2 cells; mask() marks those in the disk.
  long half_cells() const { return half_; }
  std::span<const unsigned char> mask() const { return mask_; }
  // Lattice coordinates (i, j) of point p, with x = i*step, y = j*step.
  long lattice_i(std::size_t p) const { return lattice_.at(p).first; }
  long lattice_j(std::size_t p) const { return lattice_.at(p).second; }

  // Index of the grid point closest to q.
  std::size_t nearest(Point2 q) const;

 private:
  double radius_;
  double step_;
  long half_ = 0;
  std::vector<Point2> points_;
  std::vector<std::pair<long, long>> lattice_;
  std::vector<unsigned char> mask_;
};

/// theta_s = 3*pi/2 - 2*(s-1)*pi/S for s = 1..S.
AntennaArray uniform_circle_array(std::size_t count, double radius);

/// Indices are 1-based, as quoted in experiment configs.
ArraySplit split_array(const AntennaArray& array, std::span<const std::size_t> tx_one_based,
                       std::span<const std::size_t> rx_one_based);

RoiGrid roi_grid(double radius, double step);

}  // namespace mwmusic
