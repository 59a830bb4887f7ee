#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "mwmusic/errors.hpp"
#include "mwmusic/imaging.hpp"
#include "mwmusic/special_functions.hpp"
#include "reference_setup.hpp"

using namespace mwmusic;
using std::numbers::pi;

namespace {

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = {g(rng), g(rng)};
  return m;
}

Eigen::VectorXcd random_unit(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::VectorXcd v = random_matrix(rng, n, 1).col(0);
  return v.normalized();
}

// Rank-r matrix with singular values 1, 0.9, ..., plus optional noise floor.
Eigen::MatrixXcd low_rank(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, int r) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, cols);
  for (int j = 0; j < r; ++j) {
    m += (1.0 - 0.1 * j) * random_unit(rng, rows) * random_unit(rng, cols).adjoint();
  }
  return m;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(b[i]));
  return worst;
}

ScatteringMatrix single(const ArraySplit& split, FieldModel model) {
  const std::vector<AnomalySpec> an{ref::anomaly()};
  return born_scattering_matrix(split, ref::medium(), an, model);
}

ScatteringMatrix single_real_k(const ArraySplit& split, cplx k) {
  const std::vector<AnomalySpec> an{ref::anomaly()};
  return born_scattering_matrix(split, ref::medium(), an, FieldModel::FarField, k);
}

ImagingOptions far_options(cplx k) {
  ImagingOptions o;
  o.field_model = FieldModel::FarField;
  o.wavenumber = k;
  return o;
}

}  // namespace

TEST_CASE("subspace_split of a rank-1 Born matrix") {
  const auto K = single(ref::interleaved(), FieldModel::ExactHankel);
  const auto s = subspace_split(K.entries, 0.1);
  CHECK(s.rank == 1);
  CHECK(s.left_signal.cols() == 1);
  CHECK(s.right_signal.cols() == 1);
  CHECK(s.left_signal.rows() == 8);
  for (Eigen::Index j = 1; j < s.singular_values.size(); ++j) {
    CHECK(s.singular_values(j) <= s.singular_values(j - 1));
    CHECK(s.singular_values(j) >= 0.0);
  }
  // K = tau_1 U_1 V_1^*
  const Eigen::MatrixXcd rebuilt = s.singular_values(0) * s.left_signal * s.right_signal.adjoint();
  CHECK((rebuilt - K.entries).norm() < 1e-12 * K.entries.norm());
}

TEST_CASE("subspace_split of the two-anomaly matrix has rank 2") {
  const auto split = mwmusic::split_array(ref::array(), ref::b1(), ref::a4());
  const std::vector<AnomalySpec> an{ref::anomaly(), ref::second_anomaly()};
  const auto K = born_scattering_matrix(split, ref::medium(), an, FieldModel::ExactHankel);
  const auto s = subspace_split(K.entries, 0.1);
  CHECK(s.rank == 2);
  const Eigen::MatrixXcd gram = s.left_signal.adjoint() * s.left_signal;
  CHECK((gram - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-10);
  const Eigen::MatrixXcd gram_r = s.right_signal.adjoint() * s.right_signal;
  CHECK((gram_r - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-10);
}

TEST_CASE("subspace_split errors") {
  CHECK_THROWS_AS(subspace_split(Eigen::MatrixXcd::Zero(3, 4), 0.1), NumericalError);
  std::mt19937_64 rng(1);
  const auto m = random_matrix(rng, 3, 3);
  CHECK_THROWS_AS(subspace_split(m, 0.0), ValidationError);
  CHECK_THROWS_AS(subspace_split(m, 1.0), ValidationError);
  CHECK_THROWS_AS(subspace_split(Eigen::MatrixXcd(0, 0), 0.1), ValidationError);
}

TEST_CASE("subspace rank follows the threshold") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
  d(0, 0) = 1.0;
  d(1, 1) = 0.5;
  d(2, 2) = 0.05;
  CHECK(subspace_split(d, 0.1).rank == 2);
  CHECK(subspace_split(d, 0.04).rank == 3);
  CHECK(subspace_split(d, 0.5).rank == 2);
  CHECK(subspace_split(d, 0.6).rank == 1);
}

TEST_CASE("noise_projection_norm examples") {
  std::mt19937_64 rng(3);
  const auto s = subspace_split(low_rank(rng, 6, 5, 2), 0.1);
  REQUIRE(s.rank == 2);
  CHECK(noise_projection_norm(s, s.left_signal.col(0), Side::Left) < 1e-14);
  CHECK(noise_projection_norm(s, s.right_signal.col(1), Side::Right) < 1e-14);

  // orthogonal to the signal columns
  Eigen::VectorXcd v = random_unit(rng, 6);
  for (int j = 0; j < s.rank; ++j) v -= s.left_signal.col(j) * s.left_signal.col(j).dot(v);
  v.normalize();
  CHECK(noise_projection_norm(s, v, Side::Left) == doctest::Approx(1.0).epsilon(1e-14));

  // Gram-Schmidt residual oracle
  for (int t = 0; t < 20; ++t) {
    const Eigen::VectorXcd u = random_unit(rng, 6);
    Eigen::VectorXcd res = u;
    for (int j = 0; j < s.rank; ++j) res -= s.left_signal.col(j).dot(u) * s.left_signal.col(j);
    CHECK(noise_projection_norm(s, u, Side::Left) == doctest::Approx(res.norm()).epsilon(1e-12));
  }

  CHECK_THROWS_AS(noise_projection_norm(s, random_unit(rng, 5), Side::Left), DimensionError);
  CHECK_THROWS_AS(noise_projection_norm(s, random_unit(rng, 6), Side::Right), DimensionError);
  CHECK_THROWS_AS(noise_projection_norm(s, 2.0 * random_unit(rng, 6), Side::Left), ValidationError);
}

TEST_CASE("projector algebra on random SVD-derived subspaces") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(2, 12);
  for (int t = 0; t < 100; ++t) {
    const int n = dim(rng), m = dim(rng);
    const int r = 1 + t % std::min(n, m);
    const auto s = subspace_split(low_rank(rng, n, m, r), 0.05);
    for (const Eigen::MatrixXcd* sig : {&s.left_signal, &s.right_signal}) {
      const Eigen::MatrixXcd P =
          Eigen::MatrixXcd::Identity(sig->rows(), sig->rows()) - (*sig) * sig->adjoint();
      CHECK((P * P - P).norm() < 1e-10);
      CHECK((P.adjoint() - P).norm() < 1e-10);
    }
  }
}

TEST_CASE("test_vectors: unit norm and plane-wave magnitudes") {
  const auto split = ref::interleaved();
  const cplx k = wavenumber(ref::medium());
  const cplx kr{k.real(), 0.0};
  const Point2 r{-0.023, 0.041};
  const auto ff = test_vectors(r, split, kr, FieldModel::FarField);
  for (Eigen::Index n = 0; n < ff.f.size(); ++n) CHECK(std::abs(ff.f(n)) == doctest::Approx(1.0 / std::sqrt(8.0)));
  for (Eigen::Index m = 0; m < ff.g.size(); ++m) CHECK(std::abs(ff.g(m)) == doctest::Approx(1.0 / std::sqrt(8.0)));
  for (auto model : {FieldModel::FarField, FieldModel::ExactHankel}) {
    const auto tv = test_vectors(r, ref::clustered(), k, model);
    CHECK(std::abs(tv.f.norm() - 1.0) < 1e-12);
    CHECK(std::abs(tv.g.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("test_vectors match direct assembly of incident fields") {
  const auto split = ref::sparse();
  const cplx k = wavenumber(ref::medium());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int t = 0; t < 10; ++t) {
    const Point2 r{u(rng), u(rng)};
    const auto tv = test_vectors(r, split, k, FieldModel::ExactHankel);
    Eigen::VectorXcd f(4), g(4);
    for (std::size_t n = 0; n < 4; ++n) f(n) = incident_field(split.rx_position(n), r, k);
    for (std::size_t m = 0; m < 4; ++m) g(m) = std::conj(incident_field(split.tx_position(m), r, k));
    CHECK(std::abs(tv.f.dot(f)) / f.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(tv.g.dot(g)) / g.norm() == doctest::Approx(1.0).epsilon(1e-12));
    // same phase, not just parallel
    CHECK((tv.f - f / f.norm()).norm() < 1e-12);
    CHECK((tv.g - g / g.norm()).norm() < 1e-12);
  }
  CHECK_THROWS_AS(test_vectors(split.rx_position(0), split, k, FieldModel::ExactHankel), CoincidenceError);
}

TEST_CASE("anomaly centre on the grid hits the clamp on both sides") {
  const auto split = ref::interleaved();
  const cplx kr{wavenumber(ref::medium()).real(), 0.0};
  const auto grid = roi_grid(0.08, 0.002);
  const auto res = imaging_maps(single_real_k(split, kr), grid, far_options(kr));
  const auto idx = grid.nearest({0.01, 0.03});
  REQUIRE(grid.point(idx).x == doctest::Approx(0.01));
  CHECK(res.rx.values[idx] == 1e8);
  CHECK(res.tx.values[idx] == 1e8);
  CHECK(res.combined.values[idx] == 1e8);
  CHECK(res.combined.argmax() == idx);
}

TEST_CASE("interleaved split localises the anomaly with exact-hankel data") {
  const auto grid = roi_grid(0.08, 0.002);
  const auto res = imaging_maps(single(ref::interleaved(), FieldModel::ExactHankel), grid);
  const Point2 p = grid.point(res.combined.argmax());
  CHECK(norm(p - Point2{0.01, 0.03}) <= grid.step() * (1.0 + 1e-9));
}

TEST_CASE("interleaved far-field argmax is the grid point nearest an off-lattice anomaly") {
  const cplx kr{wavenumber(ref::medium()).real(), 0.0};
  const auto grid = roi_grid(0.08, 0.002);
  for (Point2 c : {Point2{0.0103, 0.0296}, Point2{-0.0251, 0.0118}, Point2{0.0007, -0.0412}}) {
    auto a = ref::anomaly();
    a.center = c;
    const std::vector<AnomalySpec> an{a};
    const auto K = born_scattering_matrix(ref::interleaved(), ref::medium(), an, FieldModel::FarField, kr);
    const auto res = imaging_maps(K, grid, far_options(kr));
    CHECK(res.combined.argmax() == grid.nearest(c));
  }
}

TEST_CASE("map values are at least 1 before clamping") {
  const auto grid = roi_grid(0.08, 0.004);
  for (const auto& split : {ref::interleaved(), ref::sparse(), ref::clustered()}) {
    const auto res = imaging_maps(single(split, FieldModel::ExactHankel), grid);
    for (std::size_t p = 0; p < grid.size(); ++p) {
      CHECK(res.rx_residual_sq[p] <= 1.0 + 1e-12);
      CHECK(res.tx_residual_sq[p] <= 1.0 + 1e-12);
      CHECK(res.rx.values[p] >= 1.0 - 1e-12);
      CHECK(res.tx.values[p] >= 1.0 - 1e-12);
      CHECK(res.combined.values[p] == doctest::Approx(0.5 * (res.rx.values[p] + res.tx.values[p])));
      CHECK(std::isfinite(res.combined.values[p]));
    }
  }
}

TEST_CASE("many antennas: F_rx approaches the J0-only profile away from the anomaly") {
  const auto arr = uniform_circle_array(64, ref::kArrayRadius);
  std::vector<std::size_t> tx, rx;
  for (std::size_t s = 1; s <= 64; ++s) (s % 2 ? tx : rx).push_back(s);
  const auto split = mwmusic::split_array(arr, tx, rx);
  const cplx kr{wavenumber(ref::medium()).real(), 0.0};
  const auto grid = roi_grid(0.08, 0.004);
  const auto res = imaging_maps(single_real_k(split, kr), grid, far_options(kr));
  const Point2 c = ref::anomaly().center;
  std::size_t compared = 0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double d = norm(grid.point(p) - c);
    if (d < 2.0 * grid.step()) continue;
    const double j0 = bessel_j(0, kr * d).real();
    const double want = 1.0 / std::sqrt(1.0 - j0 * j0);
    CHECK(std::abs(res.rx.values[p] - want) <= 0.1 * want);
    ++compared;
  }
  CHECK(compared > 1000);
}

TEST_CASE("maps are invariant to a global phase of K") {
  const auto grid = roi_grid(0.08, 0.002);
  for (const auto& split : {ref::interleaved(), ref::sparse()}) {
    auto K = single(split, FieldModel::ExactHankel);
    const auto base = imaging_maps(K, grid);
    for (double ph : {0.7, 2.0, -2.9}) {
      K.entries = single(split, FieldModel::ExactHankel).entries * std::polar(1.0, ph);
      const auto rot = imaging_maps(K, grid);
      CHECK(max_rel_diff(rot.rx.values, base.rx.values) < 1e-10);
      CHECK(max_rel_diff(rot.tx.values, base.tx.values) < 1e-10);
      CHECK(max_rel_diff(rot.combined.values, base.combined.values) < 1e-10);
    }
  }
}

TEST_CASE("permuting receivers together with K rows leaves maps unchanged") {
  const auto grid = roi_grid(0.08, 0.003);
  const std::vector<AnomalySpec> an{ref::anomaly(), ref::second_anomaly()};
  const auto arr = ref::array();
  const auto K = born_scattering_matrix(mwmusic::split_array(arr, ref::b1(), ref::a4()), ref::medium(), an,
                                        FieldModel::ExactHankel);
  const std::vector<std::size_t> perm_rx{5, 9, 1, 3, 8, 2, 7, 4, 6};
  const auto split_p = mwmusic::split_array(arr, ref::b1(), perm_rx);
  ScatteringMatrix Kp = K;
  Kp.split = split_p;
  for (std::size_t i = 0; i < perm_rx.size(); ++i) Kp.entries.row(i) = K.entries.row(perm_rx[i] - 1);
  const auto a = imaging_maps(K, grid);
  const auto b = imaging_maps(Kp, grid);
  CHECK(max_rel_diff(b.rx.values, a.rx.values) < 1e-10);
  CHECK(max_rel_diff(b.tx.values, a.tx.values) < 1e-10);
  CHECK(max_rel_diff(b.combined.values, a.combined.values) < 1e-10);
}

TEST_CASE("worker count does not change the maps") {
  const auto grid = roi_grid(0.08, 0.002);
  const auto K = single(ref::sparse(), FieldModel::ExactHankel);
  ImagingOptions one, many;
  many.workers = 5;
  const auto a = imaging_maps(K, grid, one);
  const auto b = imaging_maps(K, grid, many);
  CHECK(a.combined.values == b.combined.values);
  CHECK(a.rx.values == b.rx.values);
  CHECK(a.tx.values == b.tx.values);
}

TEST_CASE("clamp option and imaging errors") {
  const auto grid = roi_grid(0.08, 0.004);
  const auto K = single(ref::interleaved(), FieldModel::ExactHankel);
  ImagingOptions o;
  o.clamp = 5.0;
  const auto res = imaging_maps(K, grid, o);
  for (double v : res.combined.values) CHECK(v <= 5.0);
  CHECK(res.combined.max() == 5.0);
  CHECK(res.combined.peak_clamp == 5.0);
  o.clamp = 0.0;
  CHECK_THROWS_AS(imaging_maps(K, grid, o), ValidationError);

  auto Z = K;
  Z.entries.setZero();
  CHECK_THROWS_AS(imaging_maps(Z, grid), NumericalError);
}

TEST_CASE("normalize_map examples") {
  const auto grid = roi_grid(0.08, 0.02);
  ImagingMap m{grid, std::vector<double>(grid.size(), 3.5), MapKind::Combined, false, 1e8};
  const auto n = normalize_map(m);
  CHECK(n.normalized);
  for (double v : n.values) CHECK(v == 1.0);

  for (std::size_t i = 0; i < grid.size(); ++i) m.values[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
  m.values[5] = 4.0;
  const auto s = normalize_map(m);
  CHECK(s.argmax() == 5);
  CHECK(s.values[5] == 1.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i != 5) CHECK(s.values[i] == doctest::Approx(0.25 * m.values[i]));
    CHECK(s.values[i] <= 1.0);
    CHECK(s.values[i] >= 0.0);
  }

  ImagingMap z{grid, std::vector<double>(grid.size(), 0.0), MapKind::Rx, false, 1e8};
  CHECK_THROWS_AS(normalize_map(z), NumericalError);
}

TEST_CASE("map kinds print their names") {
  CHECK(to_string(MapKind::Tx) == "F_tx");
  CHECK(to_string(MapKind::Rx) == "F_rx");
  CHECK(to_string(MapKind::Combined) == "F");
}

TEST_CASE("map table round-trip is bit exact") {
  const auto grid = roi_grid(0.08, 0.004);
  const auto res = imaging_maps(single(ref::sparse(), FieldModel::ExactHankel), grid);
  std::stringstream ss;
  write_map(ss, res.combined);
  const std::string text = ss.str();
  CHECK(text.rfind("x y value\n", 0) == 0);
  const auto back = read_map(ss);
  REQUIRE(back.values.size() == grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    CHECK(back.values[p] == res.combined.values[p]);
    CHECK(back.points[p] == grid.point(p));
  }

  std::istringstream bad_header("a b c\n0 0 1\n");
  CHECK_THROWS_AS(read_map(bad_header), ValidationError);
  std::istringstream bad_line("x y value\n0 0\n");
  CHECK_THROWS_AS(read_map(bad_line), ValidationError);
  std::istringstream extra("x y value\n0 0 1 2\n");
  CHECK_THROWS_AS(read_map(extra), ValidationError);
}

TEST_CASE("pgm output has the bounding-box size") {
  const auto grid = roi_grid(0.08, 0.004);
  const auto res = imaging_maps(single(ref::interleaved(), FieldModel::ExactHankel), grid);
  const auto path = std::filesystem::temp_directory_path() / "mwmusic_test_map.pgm";
  write_pgm_file(path, res.combined);
  std::ifstream in(path, std::ios::binary);
  std::string magic;
  long w = 0, h = 0, maxv = 0;
  in >> magic >> w >> h >> maxv;
  in.get();
  CHECK(magic == "P5");
  CHECK(w == 2 * grid.half_cells() + 1);
  CHECK(h == w);
  CHECK(maxv == 255);
  std::vector<char> pix(static_cast<std::size_t>(w * h));
  in.read(pix.data(), static_cast<std::streamsize>(pix.size()));
  CHECK(in.gcount() == w * h);
  std::filesystem::remove(path);
}
