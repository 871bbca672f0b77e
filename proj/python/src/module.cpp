#include <iostream>
#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "romscale/calibrate.hpp"
#include "romscale/cli.hpp"
#include "romscale/error.hpp"
#include "romscale/experiment.hpp"
#include "romscale/lengthscale.hpp"
#include "romscale/pod.hpp"
#include "romscale/stats.hpp"
#include "romscale/testbed.hpp"

namespace py = pybind11;
using namespace romscale;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// keyword arguments become "key = value" config lines
KeyValueConfig config_from(const py::kwargs& kw) {
  std::ostringstream text;
  for (const auto& [k, v] : kw) text << py::str(k).cast<std::string>() << " = " << py::str(v).cast<std::string>() << '\n';
  return KeyValueConfig::parse(text.str());
}

RowMatrix stack(const std::vector<VelocityField>& fields) {
  RowMatrix out(static_cast<Eigen::Index>(fields.size()), static_cast<Eigen::Index>(fields.front().values().size()));
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const auto v = fields[k].values();
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = v[i];
  }
  return out;
}

Eigen::VectorXd to_vector(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

SnapshotSet periodic_set(const RowMatrix& snaps, double length) {
  const auto n = static_cast<std::size_t>(snaps.cols());
  const Grid g({n}, {length / static_cast<double>(n)}, {AxisKind::periodic});
  std::vector<double> times;
  std::vector<VelocityField> fields;
  for (Eigen::Index k = 0; k < snaps.rows(); ++k) {
    fields.emplace_back(g, 1, std::vector<double>(snaps.row(k).data(), snaps.row(k).data() + n));
    times.push_back(static_cast<double>(k));
  }
  return SnapshotSet(g, times, fields);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "POD-ROM closure lengthscales, Galerkin ROMs and their calibration";
  m.attr("__version__") = ROMSCALE_VERSION;

  static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
  static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_ArithmeticError);
  static py::exception<ShapeError> shape(m, "ShapeError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical, e.what());
    } catch (const ShapeError& e) {
      py::set_error(shape, e.what());
    }
  });

  m.def("delta2", py::overload_cast<double, double, double>(&delta2), py::arg("lambda_ratio"), py::arg("h"),
        py::arg("L"));
  m.def("invert_delta2", &invert_delta2, py::arg("delta2"), py::arg("h"), py::arg("L"));
  m.def("energy_ratio", py::overload_cast<const std::vector<double>&, std::size_t>(&energy_ratio),
        py::arg("eigenvalues"), py::arg("r"));

  m.def("u_rms", &u_rms, py::arg("R"), py::arg("u_tau"));
  m.def("r12", &r12, py::arg("R"), py::arg("u_tau"));
  m.def("friction_velocity", py::overload_cast<double, double, double>(&friction_velocity), py::arg("U_mean"),
        py::arg("nu"), py::arg("y_min"));

  m.def(
      "bisect_threshold",
      [](const std::function<bool(double)>& stable, double lo, double hi, double tol) {
        const SearchResult s = bisect_threshold(stable, lo, hi, tol);
        return py::make_tuple(s.value, s.evaluations);
      },
      py::arg("stable"), py::arg("lo"), py::arg("hi"), py::arg("tol"));
  m.def(
      "golden_section",
      [](const std::function<double(double)>& f, double lo, double hi, double tol) {
        const SearchResult s = golden_section(f, lo, hi, tol);
        return py::make_tuple(s.value, s.evaluations);
      },
      py::arg("f"), py::arg("lo"), py::arg("hi"), py::arg("tol"));

  m.def(
      "burgers_snapshots",
      [](const py::kwargs& kw) {
        const BurgersRun run = run_burgers(BurgersConfig::from_config(config_from(kw)));
        return py::make_tuple(run.snapshots.times(), stack(run.snapshots.snapshots()));
      },
      "Runs the Burgers testbed; keyword arguments are config keys. Returns (times, snapshots).");

  m.def(
      "pod",
      [](const RowMatrix& snapshots, double length, std::size_t r_max) {
        const PODBasis b = compute_pod(periodic_set(snapshots, length), r_max);
        return py::make_tuple(to_vector(b.mean_field().values()), stack(b.modes()), b.eigenvalues());
      },
      py::arg("snapshots"), py::arg("length") = 1.0, py::arg("r_max") = 0,
      "POD of scalar snapshots (rows) on a periodic 1D grid. Returns (mean, modes, eigenvalues).");

  py::class_<BurgersExperiment>(m, "BurgersExperiment")
      .def(py::init([](std::size_t r_ops, const py::kwargs& kw) {
             return new BurgersExperiment(BurgersConfig::from_config(config_from(kw)), r_ops);
           }),
           py::arg("r_ops") = 50)
      .def_property_readonly("h", &BurgersExperiment::h)
      .def_property_readonly("L", &BurgersExperiment::L)
      .def_property_readonly("U_ML", &BurgersExperiment::U_ML)
      .def_property_readonly("dt", &BurgersExperiment::dt)
      .def_property_readonly("eigenvalues", [](const BurgersExperiment& e) { return e.basis().eigenvalues(); })
      .def("delta1", &BurgersExperiment::delta1, py::arg("r"))
      .def("delta2", &BurgersExperiment::delta2, py::arg("r"));

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        py::gil_scoped_release release;
        return main_entry(args, std::cout, std::cerr);
      },
      py::arg("args"), "Runs the romscale command line tool and returns its exit code.");
}
