// Python bindings: configs, data, correlation, accuracies and the report set.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "otpml/config.hpp"
#include "otpml/dataset.hpp"
#include "otpml/error.hpp"
#include "otpml/eval.hpp"
#include "otpml/pipeline.hpp"
#include "otpml/stats.hpp"
#include "otpml/synth.hpp"

namespace py = pybind11;

namespace {

py::dict table_columns(const otpml::FeaturizedDataset& d) {
  py::dict out;
  for (const auto& spec : d.table().schema()) {
    const auto col = d.table().column(spec.name);
    out[py::str(spec.name)] = std::vector<double>(col.begin(), col.end());
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_otpml, m) {
  m.doc() = "Bus on-time-performance pipeline";

  static py::exception<otpml::Error> error_type(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const otpml::Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
      err.attr("kind") = std::string(otpml::kind_name(e.kind()));
      err.attr("model_error") = otpml::is_model_error(e.kind());
      PyErr_SetObject(error_type.ptr(), err.ptr());
    }
  });

  py::class_<otpml::RunConfig>(m, "Config")
      .def(py::init<>())
      .def_readwrite("test_fraction", &otpml::RunConfig::test_fraction)
      .def_readwrite("n_runs", &otpml::RunConfig::n_runs)
      .def_readwrite("base_seed", &otpml::RunConfig::base_seed)
      .def_readwrite("knn_k", &otpml::RunConfig::knn_k)
      .def_readwrite("forest_n_estimators", &otpml::RunConfig::forest_n_estimators)
      .def_readwrite("forest_threads", &otpml::RunConfig::forest_threads)
      .def_property(
          "n_rows", [](const otpml::RunConfig& c) { return c.generator.n_rows; },
          [](otpml::RunConfig& c, std::size_t n) { c.generator.n_rows = n; })
      .def("validate", &otpml::RunConfig::validate)
      .def("text", &otpml::to_config_text);

  m.def(
      "parse_config",
      [](const std::string& text, const std::vector<std::string>& overrides) {
        return otpml::parse_config(text, overrides);
      },
      py::arg("text") = "", py::arg("overrides") = std::vector<std::string>{});
  m.def(
      "load_config",
      [](const std::filesystem::path& path, const std::vector<std::string>& overrides) {
        return otpml::load_config(path, overrides);
      },
      py::arg("path"), py::arg("overrides") = std::vector<std::string>{});

  m.def(
      "load_data", [](const otpml::RunConfig& cfg) { return table_columns(otpml::load_input(cfg)); },
      "Featurized columns by name.");

  m.def("generate_csv", [](const otpml::RunConfig& cfg) {
    std::ostringstream out;
    otpml::write_csv(out, otpml::generate(cfg.generator).to_records());
    return out.str();
  });

  m.def("parse_csv", [](const std::string& text) {
    std::istringstream in(text);
    const auto records = otpml::clean(otpml::parse_csv(in));
    return table_columns(otpml::featurize(records));
  });

  m.def(
      "correlation",
      [](const otpml::RunConfig& cfg) {
        const auto d = otpml::load_input(cfg);
        const std::vector<std::string> names(otpml::kTelemetryColumns.begin(), otpml::kTelemetryColumns.end());
        const auto c = otpml::corr_matrix(d.table(), names);
        return py::make_tuple(c.names, c.values);
      },
      "(names, matrix) over the four telemetry columns.");

  m.def(
      "accuracies",
      [](const otpml::RunConfig& cfg) {
        const auto d = otpml::load_input(cfg);
        const auto results =
            otpml::repeated_mean_accuracies(otpml::model_suite(cfg), d, cfg.n_runs, cfg.base_seed, cfg.test_fraction);
        py::dict out;
        for (const auto& r : results) out[py::str(r.name)] = py::make_tuple(r.mean, r.per_run);
        return out;
      },
      "name -> (mean, per-run accuracies).");

  m.def(
      "run_pipeline",
      [](const otpml::RunConfig& cfg) {
        otpml::ReportBundle bundle;
        {
          py::gil_scoped_release release;
          bundle = otpml::run_pipeline(cfg);
        }
        py::dict out;
        for (const auto& a : bundle.artifacts) out[py::str(a.name)] = a.content;
        return out;
      },
      "file name -> report text.");
}
