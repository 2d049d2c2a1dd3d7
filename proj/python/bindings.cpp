#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "repscape/analysis.hpp"
#include "repscape/dataset.hpp"
#include "repscape/error.hpp"
#include "repscape/experiments.hpp"
#include "repscape/heatmap.hpp"
#include "repscape/service.hpp"
#include "repscape/synthetic.hpp"

namespace py = pybind11;
using namespace repscape;
using nlohmann::json;

namespace {

std::string synth(const std::string& preset, std::size_t rows, std::uint64_t seed) {
  return write_csv_text(generate_synthetic(mixture_preset(preset), rows, seed).data);
}

py::bytes render_ppm(const std::string& heatmap, std::size_t width, std::size_t height, unsigned threads) {
  const auto doc = heatmap_from_json(json::parse(heatmap));
  std::string ppm;
  {
    py::gil_scoped_release release;
    ppm = render_raster(doc, width, height, threads).to_ppm();
  }
  return py::bytes(ppm);
}

std::string compare(const std::string& csv, const std::vector<std::string>& sample_ids, std::size_t n_sites,
                    std::size_t trials, std::uint64_t seed, unsigned threads) {
  py::gil_scoped_release release;
  const auto a = prepare_analysis(ingest_csv_text(csv), {}, threads);
  SelectionConfig cfg;
  cfg.n_sites = n_sites;
  cfg.seed = seed;
  const auto given = resolve_samples(*a, {sample_ids, {}});
  return to_json(compare_methods(a, given, cfg, {}, trials, threads)).dump();
}

std::string sweep_centroids_json(const std::string& csv, const std::vector<std::size_t>& values, std::size_t trials,
                                 std::uint64_t seed, unsigned threads) {
  py::gil_scoped_release release;
  const auto a = prepare_analysis(ingest_csv_text(csv), {}, threads);
  SelectionConfig base;
  base.seed = seed;
  return to_json(sweep_centroids(a, values, base, {}, trials, threads)).dump();
}

}  // namespace

PYBIND11_MODULE(_repscape, m) {
  m.doc() = "Representativeness engine: PC1 projection, ideal-site selection and random baselines.";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object args = py::make_tuple(e.code(), std::string(e.what()));
      PyErr_SetObject(error.ptr(), args.ptr());
    }
  });

  py::class_<Service>(m, "Engine")
      .def(py::init([](unsigned threads) { return std::make_unique<Service>(ServiceOptions{threads}); }),
           py::arg("threads") = 1)
      .def(
          "add_dataset", [](Service& s, const std::string& csv) { return to_json(s.add_dataset(csv)).dump(); },
          py::arg("csv"))
      .def("remove_dataset", &Service::remove_dataset, py::arg("id"))
      .def(
          "handle", [](const Service& s, const std::string& id) { return to_json(s.handle(id)).dump(); },
          py::arg("id"))
      .def(
          "representativeness",
          [](Service& s, const std::string& id, const std::string& body) {
            const auto j = json::parse(body);
            py::gil_scoped_release release;
            return s.representativeness(id, j).dump();
          },
          py::arg("id"), py::arg("body"))
      .def(
          "ideal_sites",
          [](Service& s, const std::string& id, const std::string& body) {
            const auto j = json::parse(body);
            py::gil_scoped_release release;
            return s.ideal_sites(id, j).dump();
          },
          py::arg("id"), py::arg("body"))
      .def(
          "baseline",
          [](Service& s, const std::string& id, const std::string& body) {
            const auto j = json::parse(body);
            py::gil_scoped_release release;
            return s.baseline(id, j).dump();
          },
          py::arg("id"), py::arg("body"))
      .def(
          "histogram",
          [](Service& s, const std::string& id, const std::map<std::string, std::string>& query) {
            py::gil_scoped_release release;
            return s.histogram(id, query).dump();
          },
          py::arg("id"), py::arg("query"));

  m.def("synth", &synth, py::arg("preset") = "clustered", py::arg("rows") = 50000, py::arg("seed") = 0,
        "Synthetic region CSV from a named mixture preset.");
  m.def("render_ppm", &render_ppm, py::arg("heatmap"), py::arg("width") = 720, py::arg("height") = 360,
        py::arg("threads") = 1, "Binary PPM of a heat-map document given as JSON text.");
  m.def("compare", &compare, py::arg("csv"), py::arg("sample_ids"), py::arg("n_sites") = 0, py::arg("trials") = 1000,
        py::arg("seed") = 0, py::arg("threads") = 1, "Given sample vs. ideal sites vs. random baseline (heat-scale).");
  m.def("sweep_centroids", &sweep_centroids_json, py::arg("csv"), py::arg("values"), py::arg("trials") = 1000,
        py::arg("seed") = 0, py::arg("threads") = 1, "Ideal and mean-random R per centroid count.");
}
