#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qrmc/benchmark.hpp"
#include "qrmc/cosine_basis.hpp"
#include "qrmc/multi_index.hpp"
#include "qrmc/rng.hpp"
#include "qrmc/solver.hpp"
#include "qrmc/student.hpp"
#include "qrmc/table_io.hpp"

namespace py = pybind11;
using namespace qrmc;

namespace {

std::vector<double> as_vector(const py::array_t<double>& a) {
    auto r = a.unchecked<1>();
    std::vector<double> v(static_cast<std::size_t>(r.shape(0)));
    for (py::ssize_t i = 0; i < r.shape(0); ++i)
        v[static_cast<std::size_t>(i)] = r(i);
    return v;
}

RunConfig make_config(int steps, std::int64_t paths, double damping,
                      std::uint64_t seed, int workers, const std::string& mode,
                      const MultiIndexSet& gamma, const SamplingMeasure& measure) {
    return RunConfig{.steps = steps,
                     .paths = paths,
                     .damping = damping,
                     .seed = seed,
                     .workers = workers,
                     .memory_mode = memory_mode_from_string(mode),
                     .gamma = gamma,
                     .measure = measure};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quasi-regression Monte Carlo solver for decoupled Markovian "
              "BSDEs / semi-linear parabolic PDEs";

    py::class_<SamplingMeasure>(m, "Measure")
        .def(py::init<double, int, std::vector<double>>(), py::arg("mu"),
             py::arg("dim"), py::arg("center") = std::vector<double>{})
        .def_property_readonly("mu", &SamplingMeasure::mu)
        .def_property_readonly("dim", &SamplingMeasure::dim)
        .def_property_readonly("center", &SamplingMeasure::center)
        .def("pdf", &SamplingMeasure::pdf, py::arg("x"), py::arg("coord") = 0)
        .def("cdf", &SamplingMeasure::cdf, py::arg("x"), py::arg("coord") = 0)
        .def("inv_cdf", &SamplingMeasure::inv_cdf, py::arg("u"),
             py::arg("coord") = 0)
        .def(
            "sample",
            [](const SamplingMeasure& self, std::size_t n, std::uint64_t seed) {
                py::array_t<double> out(
                    {static_cast<py::ssize_t>(n), static_cast<py::ssize_t>(self.dim())});
                auto w = out.mutable_unchecked<2>();
                for (std::size_t i = 0; i < n; ++i) {
                    RngStream stream(seed, i);
                    for (int l = 0; l < self.dim(); ++l)
                        w(static_cast<py::ssize_t>(i), l) =
                            self.inv_cdf(stream.next_uniform(), l);
                }
                return out;
            },
            py::arg("n"), py::arg("seed"),
            "Draw n independent samples (one stream per row)");

    py::class_<MultiIndexSet>(m, "MultiIndexSet")
        .def_static("full", [](const std::vector<int>& deg) {
            return MultiIndexSet::full(deg);
        })
        .def_static("total", [](int dim, int degree) {
            return MultiIndexSet::total(dim, degree);
        })
        .def_static("hyperbolic", [](int dim, int degree) {
            return MultiIndexSet::hyperbolic(dim, degree);
        })
        .def_property_readonly("dim", &MultiIndexSet::dim)
        .def_property_readonly("kind",
                               [](const MultiIndexSet& s) { return to_string(s.kind()); })
        .def("__len__", &MultiIndexSet::size)
        .def("indices", [](const MultiIndexSet& s) {
            py::array_t<int> out({static_cast<py::ssize_t>(s.size()),
                                  static_cast<py::ssize_t>(s.dim())});
            auto w = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < s.size(); ++i) {
                auto row = s[i];
                for (int l = 0; l < s.dim(); ++l)
                    w(static_cast<py::ssize_t>(i), l) =
                        row[static_cast<std::size_t>(l)];
            }
            return out;
        })
        .def("is_downward_closed", &MultiIndexSet::is_downward_closed);

    m.def("cardinality_total", &cardinality_total, py::arg("dim"), py::arg("degree"));
    m.def("cardinality_hyperbolic", &cardinality_hyperbolic, py::arg("dim"),
          py::arg("degree"));
    m.def("christoffel", &christoffel_number, py::arg("gamma"));
    m.def("cosine_eval", &cosine_eval, py::arg("k"), py::arg("u"));
    m.def(
        "phi_eval",
        [](const std::vector<int>& k, const py::array_t<double>& x,
           const SamplingMeasure& measure) {
            const auto xv = as_vector(x);
            return phi_eval(k, xv, measure);
        },
        py::arg("k"), py::arg("x"), py::arg("measure"));
    m.def(
        "eval_series",
        [](const py::array_t<double>& coeffs, const py::array_t<double>& x,
           const SamplingMeasure& measure, const MultiIndexSet& gamma) {
            const auto cv = as_vector(coeffs);
            const auto xv = as_vector(x);
            return eval_series(cv, xv, BasisContext(measure, gamma));
        },
        py::arg("coeffs"), py::arg("x"), py::arg("measure"), py::arg("gamma"));

    py::class_<SinBenchmark>(m, "SinBenchmark")
        .def(py::init([](int dim, double kappa, double lambda, double horizon) {
                 return SinBenchmark{dim, kappa, lambda, horizon};
             }),
             py::arg("dim"), py::arg("kappa") = 0.6, py::arg("lambda") = 0.0,
             py::arg("horizon") = 1.0)
        .def_readonly("dim", &SinBenchmark::dim)
        .def_readonly("kappa", &SinBenchmark::kappa)
        .def_property_readonly("lam", &SinBenchmark::lambda_value)
        .def_readonly("horizon", &SinBenchmark::horizon);

    m.def(
        "exact_solution",
        [](double t, const py::array_t<double>& x, const SinBenchmark& bench) {
            return exact_solution(t, as_vector(x), bench);
        },
        py::arg("t"), py::arg("x"), py::arg("bench"));

    py::class_<TruncationStats>(m, "TruncationStats")
        .def_readonly("applications", &TruncationStats::applications)
        .def_readonly("clipped", &TruncationStats::clipped)
        .def("clip_fraction", &TruncationStats::clip_fraction);

    py::class_<CoefficientTable>(m, "CoefficientTable")
        .def_readonly("steps", &CoefficientTable::steps)
        .def_readonly("paths", &CoefficientTable::paths)
        .def_readonly("damping", &CoefficientTable::damping)
        .def_readonly("seed", &CoefficientTable::seed)
        .def_readonly("horizon", &CoefficientTable::horizon)
        .def_readonly("truncation", &CoefficientTable::truncation)
        .def("coefficients",
             [](const CoefficientTable& t, int i) {
                 if (!t.has_step(i))
                     throw py::index_error("step not computed");
                 const auto& c = t.coefficients[static_cast<std::size_t>(i)];
                 return py::array_t<double>(static_cast<py::ssize_t>(c.size()),
                                            c.data());
             })
        .def("evaluate",
             [](const CoefficientTable& t, int i, const py::array_t<double>& x) {
                 return evaluate_solution(t, i, as_vector(x));
             })
        .def("save", [](const CoefficientTable& t, const std::string& path) {
            save_table_json(t, path);
        })
        .def("to_json", &table_to_json);

    m.def("load_table", [](const std::string& path) { return load_table_json(path); });

    m.def(
        "solve",
        [](const SinBenchmark& bench, const MultiIndexSet& gamma,
           const SamplingMeasure& measure, int steps, std::int64_t paths,
           double damping, std::uint64_t seed, int workers,
           const std::string& memory_mode) {
            const auto config = make_config(steps, paths, damping, seed, workers,
                                            memory_mode, gamma, measure);
            const auto problem = make_problem(bench);
            py::gil_scoped_release release;
            return backward_solve(problem, config);
        },
        py::arg("bench"), py::arg("gamma"), py::arg("measure"), py::arg("steps"),
        py::arg("paths"), py::arg("damping") = 0.0, py::arg("seed") = 0,
        py::arg("workers") = 0, py::arg("memory_mode") = "store",
        "Backward-solve the benchmark problem and return the coefficient table");

    py::class_<MetricReport>(m, "MetricReport")
        .def_readonly("mse_max", &MetricReport::mse_max)
        .def_readonly("mse_av", &MetricReport::mse_av)
        .def_readonly("mse_max_undamped", &MetricReport::mse_max_undamped)
        .def_readonly("mse_av_undamped", &MetricReport::mse_av_undamped)
        .def_readonly("eval_points_per_step", &MetricReport::eval_points_per_step)
        .def_readonly("step_squared_error", &MetricReport::step_squared_error)
        .def_readonly("stat_error_indicator", &MetricReport::stat_error_indicator)
        .def("csv_row", &metric_csv_row)
        .def("to_json", &metric_to_json);

    m.def(
        "mse_metrics",
        [](const CoefficientTable& table, const SinBenchmark& bench,
           std::uint64_t eval_seed, int eval_points, int workers) {
            py::gil_scoped_release release;
            return mse_metrics(table, bench, eval_seed, eval_points, workers);
        },
        py::arg("table"), py::arg("bench"), py::arg("eval_seed"),
        py::arg("eval_points") = 1000, py::arg("workers") = 0);

    m.def(
        "confidence_interval",
        [](const std::vector<double>& values, double level) {
            return confidence_interval(values, level);
        },
        py::arg("values"), py::arg("level") = 0.99);
}
