// Python bindings for the mwmusic core: forward model, MUSIC maps, the
// Bessel-series oracle, arrangement scores, Jaccard curves and the
// config-driven pipeline steps.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mwmusic/config.hpp"
#include "mwmusic/errors.hpp"
#include "mwmusic/forward_model.hpp"
#include "mwmusic/imaging.hpp"
#include "mwmusic/metrics.hpp"
#include "mwmusic/parallel.hpp"
#include "mwmusic/pipeline.hpp"
#include "mwmusic/special_functions.hpp"
#include "mwmusic/theory_oracle.hpp"

namespace py = pybind11;
using namespace mwmusic;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::array_t<double> grid_points(const RoiGrid& g) {
  py::array_t<double> out({static_cast<py::ssize_t>(g.size()), py::ssize_t{2}});
  auto a = out.mutable_unchecked<2>();
  for (std::size_t p = 0; p < g.size(); ++p) {
    a(p, 0) = g.point(p).x;
    a(p, 1) = g.point(p).y;
  }
  return out;
}

py::dict maps_dict(const ImagingResult& r) {
  py::dict d;
  d["F"] = to_array(r.combined.values);
  d["F_tx"] = to_array(r.tx.values);
  d["F_rx"] = to_array(r.rx.values);
  d["rx_residual_sq"] = to_array(r.rx_residual_sq);
  d["tx_residual_sq"] = to_array(r.tx_residual_sq);
  d["rank"] = r.subspace.rank;
  d["singular_values"] = r.subspace.singular_values;
  d["argmax"] = r.combined.argmax();
  return d;
}

FieldModel model_of(const std::string& s) { return parse_field_model(s); }

ImagingMap map_on(const RoiGrid& grid, const std::vector<double>& values, double clamp) {
  if (values.size() != grid.size()) {
    throw DimensionError("map has " + std::to_string(values.size()) + " values, grid has " +
                         std::to_string(grid.size()));
  }
  return ImagingMap{grid, values, MapKind::Combined, false, clamp};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "MUSIC-type microwave imaging core";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.attr("VACUUM_PERMITTIVITY") = kVacuumPermittivity;
  m.attr("VACUUM_PERMEABILITY") = kVacuumPermeability;

  py::class_<MediumSpec>(m, "Medium")
      .def(py::init([](double eps_r, double sigma, double frequency, double mu_r) {
             auto med = MediumSpec::relative(eps_r, sigma, frequency, mu_r * kVacuumPermeability);
             med.validate();
             return med;
           }),
           py::arg("eps_r"), py::arg("sigma"), py::arg("frequency"), py::arg("mu_r") = 1.0)
      .def_readonly("eps", &MediumSpec::eps)
      .def_readonly("sigma", &MediumSpec::sigma)
      .def_readonly("mu", &MediumSpec::mu)
      .def_readonly("frequency", &MediumSpec::frequency)
      .def_property_readonly("omega", &MediumSpec::omega);

  py::class_<AnomalySpec>(m, "Anomaly")
      .def(py::init([](double x, double y, double radius, double eps_r, double sigma) {
             AnomalySpec a{{x, y}, radius, eps_r * kVacuumPermittivity, sigma};
             a.validate();
             return a;
           }),
           py::arg("x"), py::arg("y"), py::arg("radius"), py::arg("eps_r"), py::arg("sigma"))
      .def_property_readonly("center", [](const AnomalySpec& a) { return std::pair{a.center.x, a.center.y}; })
      .def_readonly("radius", &AnomalySpec::radius)
      .def_readonly("eps", &AnomalySpec::eps)
      .def_readonly("sigma", &AnomalySpec::sigma);

  py::class_<ArraySplit>(m, "Split")
      .def(py::init([](std::size_t count, double radius, const std::vector<std::size_t>& tx,
                       const std::vector<std::size_t>& rx) {
             return split_array(uniform_circle_array(count, radius), tx, rx);
           }),
           py::arg("count"), py::arg("radius"), py::arg("tx"), py::arg("rx"),
           "Split of a uniform circular array; tx and rx are 1-based antenna numbers.")
      .def_property_readonly("tx_count", &ArraySplit::tx_count)
      .def_property_readonly("rx_count", &ArraySplit::rx_count)
      .def_property_readonly("tx_angles", &ArraySplit::tx_angles)
      .def_property_readonly("rx_angles", &ArraySplit::rx_angles);

  py::class_<RoiGrid>(m, "Grid")
      .def(py::init(&roi_grid), py::arg("radius"), py::arg("step"))
      .def_property_readonly("radius", &RoiGrid::radius)
      .def_property_readonly("step", &RoiGrid::step)
      .def("__len__", &RoiGrid::size)
      .def_property_readonly("points", &grid_points)
      .def("nearest", [](const RoiGrid& g, double x, double y) { return g.nearest({x, y}); });

  m.def("wavenumber", &wavenumber, py::arg("medium"));
  m.def("contrast", &contrast, py::arg("medium"), py::arg("anomaly"));
  m.def(
      "small_anomaly_check",
      [](const MediumSpec& med, const AnomalySpec& a) {
        const auto c = small_anomaly_check(med, a);
        py::dict d;
        d["pass"] = c.pass;
        d["lhs"] = c.lhs;
        d["wavelength"] = c.wavelength;
        d["ratio"] = c.ratio;
        return d;
      },
      py::arg("medium"), py::arg("anomaly"));

  m.def("bessel_j", py::overload_cast<int, cplx>(&bessel_j), py::arg("order"), py::arg("z"));
  m.def("hankel0_2", &hankel0_2, py::arg("z"));

  m.def(
      "born_matrix",
      [](const ArraySplit& split, const MediumSpec& med, const std::vector<AnomalySpec>& anomalies,
         const std::string& field_model) {
        return born_scattering_matrix(split, med, anomalies, model_of(field_model)).entries;
      },
      py::arg("split"), py::arg("medium"), py::arg("anomalies"), py::arg("field_model") = "exact-hankel",
      "Born-approximate scattering matrix, receivers by transmitters.");

  m.def(
      "imaging_maps",
      [](const Eigen::MatrixXcd& K, const ArraySplit& split, const MediumSpec& med, const RoiGrid& grid,
         double threshold, double clamp, const std::string& field_model, unsigned workers) {
        const ScatteringMatrix sm{K, split, med, Provenance::File};
        sm.validate();
        ImagingOptions o;
        o.threshold = threshold;
        o.clamp = clamp;
        o.field_model = model_of(field_model);
        o.workers = workers;
        const auto r = [&] {
          py::gil_scoped_release release;
          return imaging_maps(sm, grid, o);
        }();
        return maps_dict(r);
      },
      py::arg("K"), py::arg("split"), py::arg("medium"), py::arg("grid"), py::arg("threshold") = 0.1,
      py::arg("clamp") = 1e8, py::arg("field_model") = "exact-hankel", py::arg("workers") = 1);

  m.def(
      "series_map",
      [](const RoiGrid& grid, std::pair<double, double> r_star, const ArraySplit& split, cplx k, double tol,
         double clamp) {
        const auto s = series_map(grid, {r_star.first, r_star.second}, split, k, tol, clamp);
        py::dict d;
        d["F_rx"] = to_array(s.predicted_rx);
        d["F_tx"] = to_array(s.predicted_tx);
        d["inner_rx_sq"] = to_array(s.inner_rx_sq);
        d["inner_tx_sq"] = to_array(s.inner_tx_sq);
        d["truncation"] = s.truncation;
        d["flagged"] = s.flagged;
        return d;
      },
      py::arg("grid"), py::arg("r_star"), py::arg("split"), py::arg("k"), py::arg("tol") = 1e-12,
      py::arg("clamp") = 1e8);

  m.def(
      "arrangement_spectrum",
      [](const std::vector<double>& angles, int order) { return to_array(arrangement_spectrum(angles, order).magnitudes); },
      py::arg("angles"), py::arg("order"), "|sum_n exp(i p theta_n)| for p = -order..order.");
  m.def(
      "arrangement_score",
      [](const std::vector<double>& angles, cplx k, double max_distance, double tol) {
        return arrangement_score(angles, k, max_distance, tol);
      },
      py::arg("angles"), py::arg("k"), py::arg("max_distance"), py::arg("tol") = 1e-12);

  m.def(
      "jaccard_curve",
      [](const std::vector<double>& values, const RoiGrid& grid, const std::vector<AnomalySpec>& anomalies,
         const std::vector<double>& zetas) {
        const auto normalized = normalize_map(map_on(grid, values, 1e8));
        return jaccard_curve(normalized, truth_support(grid, anomalies), zetas);
      },
      py::arg("values"), py::arg("grid"), py::arg("anomalies"), py::arg("zetas"),
      "Normalises the map, thresholds it at each zeta and scores it against the anomaly discs (percent).");

  py::class_<ExperimentConfig>(m, "Config")
      .def_static("load", &load_config, py::arg("path"))
      .def_readonly("medium", &ExperimentConfig::medium)
      .def_readonly("anomalies", &ExperimentConfig::anomalies)
      .def_readonly("zetas", &ExperimentConfig::zetas)
      .def_property_readonly("splits",
                             [](const ExperimentConfig& c) {
                               std::vector<std::string> names;
                               for (const auto& s : c.splits) names.push_back(s.name);
                               return names;
                             })
      .def("grid", &ExperimentConfig::grid)
      .def("split", &ExperimentConfig::split, py::arg("name"))
      .def(
          "simulate", [](const ExperimentConfig& c, const std::string& split) { return simulate(c, split).entries; },
          py::arg("split"))
      .def(
          "image",
          [](const ExperimentConfig& c, const std::string& split, std::optional<Eigen::MatrixXcd> K,
             unsigned workers) {
            const auto sm = K ? matrix_from_file(c, split, MatrixFile{*K, c.medium.frequency}) : simulate(c, split);
            const auto r = [&] {
              py::gil_scoped_release release;
              return image(c, sm, workers);
            }();
            return maps_dict(r);
          },
          py::arg("split"), py::arg("K") = py::none(), py::arg("workers") = default_workers())
      .def(
          "theory_check",
          [](const ExperimentConfig& c, const std::string& split, double tolerance, unsigned workers) {
            const auto r = theory_check(c, split, tolerance, workers);
            py::dict d;
            d["pass"] = r.pass;
            d["max_relative_deviation"] = r.max_relative_deviation;
            d["max_abs_deviation_rx"] = r.max_abs_deviation_rx;
            d["max_abs_deviation_tx"] = r.max_abs_deviation_tx;
            d["truncation"] = r.truncation;
            d["wavenumber"] = r.wavenumber;
            return d;
          },
          py::arg("split"), py::arg("tolerance") = 0.05, py::arg("workers") = default_workers())
      .def(
          "arrange",
          [](const ExperimentConfig& c, std::optional<std::vector<std::string>> splits) {
            std::vector<std::string> names;
            if (splits) {
              names = *splits;
            } else {
              for (const auto& s : c.splits) names.push_back(s.name);
            }
            std::vector<std::tuple<std::string, double, double>> rows;
            for (const auto& r : arrange(c, names)) rows.emplace_back(r.split, r.rx_score, r.tx_score);
            return rows;
          },
          py::arg("splits") = py::none(), "(split, rx_score, tx_score) rows, ascending by total score.")
      .def(
          "evaluate",
          [](const ExperimentConfig& c, const std::vector<double>& values) {
            const auto grid = c.grid();
            MapTable t;
            t.values = values;
            // points mirror the config grid; evaluate rejects a length mismatch
            for (std::size_t p = 0; p < values.size(); ++p) {
              t.points.push_back(p < grid.size() ? grid.point(p) : Point2{});
            }
            return evaluate(c, t);
          },
          py::arg("values"), "Jaccard curve (zeta, percent) of a map on the config grid.");
}
