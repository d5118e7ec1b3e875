#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rgpcm/dataset.hpp"
#include "rgpcm/em.hpp"
#include "rgpcm/experiment.hpp"
#include "rgpcm/init.hpp"
#include "rgpcm/selection.hpp"
#include "rgpcm/simulate.hpp"

namespace py = pybind11;
using namespace rgpcm;

namespace {

Matrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-d array");
    Matrix m(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
    const auto r = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i)
        for (py::ssize_t j = 0; j < a.shape(1); ++j)
            m(static_cast<int>(i), static_cast<int>(j)) = r(i, j);
    return m;
}

py::array_t<double> from_matrix(const Matrix& m) {
    py::array_t<double> a({m.rows(), m.cols()});
    auto w = a.mutable_unchecked<2>();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) w(i, j) = m(i, j);
    return a;
}

SymMatrix to_sym(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    return SymMatrix::from_matrix(to_matrix(a));
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
    std::vector<double> v(a.shape(0));
    const auto r = a.unchecked<1>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i) v[i] = r(i);
    return v;
}

ConstraintSpec make_constraint(const std::string& regime, double lower, double upper,
                               int schedule_len, double beta) {
    ConstraintSpec c;
    c.regime = parse_regime(regime);
    c.lower = lower;
    c.upper = upper;
    if (schedule_len > 0) c.schedule = ConstraintSchedule{schedule_len, beta};
    c.validate();
    return c;
}

EmConfig make_config(const std::string& regime, double lower, double upper, int schedule_len,
                     double beta, int max_iter, double tol, int inner_m) {
    EmConfig cfg;
    cfg.constraint = make_constraint(regime, lower, upper, schedule_len, beta);
    cfg.max_iter = max_iter;
    cfg.tol = tol;
    cfg.inner_m = inner_m;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Eigenvalue-constrained Gaussian mixture clustering (rGPCM family)";

    py::class_<FitReport>(m, "FitReport")
        .def_property_readonly("loglik", [](const FitReport& r) { return r.loglik; })
        .def_property_readonly("bic", [](const FitReport& r) { return r.bic; })
        .def_property_readonly("converged", [](const FitReport& r) { return r.converged; })
        .def_property_readonly("degenerate", [](const FitReport& r) { return r.degenerate; })
        .def_property_readonly("degeneracy_reason",
                               [](const FitReport& r) { return r.degeneracy_reason; })
        .def_property_readonly("iterations", [](const FitReport& r) { return r.iterations; })
        .def_property_readonly("structure",
                               [](const FitReport& r) { return r.model.structure().name(); })
        .def_property_readonly("G", [](const FitReport& r) { return r.model.G; })
        .def_property_readonly("labels",
                               [](const FitReport& r) { return py::cast(r.map_labels); })
        .def_property_readonly("loglik_trace",
                               [](const FitReport& r) { return py::cast(r.loglik_trace); })
        .def_property_readonly("weights",
                               [](const FitReport& r) { return py::cast(r.model.weights); })
        .def_property_readonly("means",
                               [](const FitReport& r) {
                                   Matrix mu(r.model.G, r.model.p);
                                   for (int g = 0; g < r.model.G; ++g)
                                       for (int j = 0; j < r.model.p; ++j)
                                           mu(g, j) = r.model.means[g][j];
                                   return from_matrix(mu);
                               })
        .def_property_readonly("covariances",
                               [](const FitReport& r) {
                                   py::list out;
                                   for (int g = 0; g < r.model.G; ++g)
                                       out.append(from_matrix(r.model.sigma(g).matrix()));
                                   return out;
                               })
        .def("__repr__", [](const FitReport& r) {
            return "<FitReport " + r.model.structure().name() + " G=" + std::to_string(r.model.G) +
                   " bic=" + std::to_string(r.bic) + ">";
        });

    m.def(
        "fit",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> data,
           const std::string& structure, int G,
           py::array_t<double, py::array::c_style | py::array::forcecast> init,
           const std::string& regime, double lower, double upper, int schedule_len, double beta,
           int max_iter, double tol, int inner_m) {
            const Matrix x = to_matrix(data);
            const Responsibilities r = Responsibilities::from_matrix(to_matrix(init), 1e-9);
            const EmConfig cfg =
                make_config(regime, lower, upper, schedule_len, beta, max_iter, tol, inner_m);
            return fit(x, CovarianceStructure::parse(structure), G, r, cfg);
        },
        py::arg("data"), py::arg("structure"), py::arg("G"), py::arg("init"),
        py::arg("regime") = "range", py::arg("lower") = 0.0,
        py::arg("upper") = std::numeric_limits<double>::infinity(), py::arg("schedule_len") = 0,
        py::arg("beta") = 1.0, py::arg("max_iter") = 1000, py::arg("tol") = 1e-8,
        py::arg("inner_m") = 1,
        "Constrained EM from an n x G responsibility matrix; returns a FitReport");

    m.def(
        "sweep",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> data,
           const std::vector<std::string>& structures, int g_min, int g_max,
           const std::string& init_kind, std::uint64_t seed, int restarts,
           const std::string& regime, double lower, double upper, int schedule_len, double beta,
           int max_iter, double tol, int inner_m) {
            const Matrix x = to_matrix(data);
            std::vector<CovarianceStructure> s;
            for (const auto& name : structures) s.push_back(CovarianceStructure::parse(name));
            InitSpec init;
            init.kind = parse_init_kind(init_kind);
            init.seed = seed;
            init.kmeans_restarts = restarts;
            const EmConfig cfg =
                make_config(regime, lower, upper, schedule_len, beta, max_iter, tol, inner_m);
            const SweepResult res = sweep(x, s, g_min, g_max, init, cfg);

            py::list cells;
            for (const auto& c : res.cells) {
                py::dict d;
                d["structure"] = c.structure.name();
                d["G"] = c.G;
                if (c.report)
                    d["report"] = py::cast(*c.report);
                else
                    d["error"] = c.error;
                cells.append(d);
            }
            py::dict out;
            out["cells"] = cells;
            if (res.best_cell()) {
                py::dict best;
                best["structure"] = res.best_cell()->structure.name();
                best["G"] = res.best_cell()->G;
                best["report"] = py::cast(*res.best_cell()->report);
                out["best"] = best;
            } else {
                out["best"] = py::none();
            }
            return out;
        },
        py::arg("data"), py::arg("structures"), py::arg("g_min"), py::arg("g_max"),
        py::arg("init") = "kmeans", py::arg("seed") = 0, py::arg("restarts") = 10,
        py::arg("regime") = "range", py::arg("lower") = 0.0,
        py::arg("upper") = std::numeric_limits<double>::infinity(), py::arg("schedule_len") = 0,
        py::arg("beta") = 1.0, py::arg("max_iter") = 1000, py::arg("tol") = 1e-8,
        py::arg("inner_m") = 1,
        "Fit every (structure, G) cell and select the lowest-BIC model");

    m.def(
        "kmeans_init",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> data, int G,
           std::uint64_t seed, int restarts) {
            return from_matrix(kmeans_init(to_matrix(data), G, seed, restarts).matrix());
        },
        py::arg("data"), py::arg("G"), py::arg("seed") = 0, py::arg("restarts") = 10);

    m.def(
        "random_init",
        [](int n, int G, std::uint64_t seed, const std::string& kind) {
            return from_matrix(random_init(n, G, seed, parse_init_kind(kind)).matrix());
        },
        py::arg("n"), py::arg("G"), py::arg("seed") = 0, py::arg("kind") = "random-partition");

    m.def(
        "ari",
        [](const std::vector<int>& a, const std::vector<int>& b) {
            return ari(Partition::from_labels(a), Partition::from_labels(b));
        },
        py::arg("labels1"), py::arg("labels2"), "Hubert-Arabie adjusted Rand index");

    m.def("bic", &bic, py::arg("loglik"), py::arg("m"), py::arg("n"));

    m.def(
        "count_free_params",
        [](const std::string& structure, int G, int p) {
            return total_free_params(CovarianceStructure::parse(structure), G, p);
        },
        py::arg("structure"), py::arg("G"), py::arg("p"),
        "Total free parameters (G-1) + G*p + covariance part");

    m.def(
        "schedule_bounds",
        [](double v, double beta) {
            const Bounds b = schedule_bounds(v, beta);
            return py::make_tuple(b.lower, b.upper);
        },
        py::arg("v"), py::arg("beta") = 1.0);

    m.def(
        "static_bounds_from_data",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> data) {
            const Bounds b = static_bounds_from_data(to_matrix(data));
            return py::make_tuple(b.lower, b.upper);
        },
        py::arg("data"),
        "Smallest and largest eigenvalue of the sample covariance of the data");

    m.def(
        "standardize",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> data) {
            Dataset d;
            d.values = to_matrix(data);
            for (int j = 0; j < d.values.cols(); ++j) d.columns.push_back(std::to_string(j));
            return from_matrix(standardize(d).values);
        },
        py::arg("data"), "Center and scale each column (n-1 denominator)");

    m.def(
        "eig_sym",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> a) {
            const EigenPairs e = eig_sym(to_sym(a));
            return py::make_tuple(py::cast(e.values), from_matrix(e.vectors.matrix()));
        },
        py::arg("matrix"), "Jacobi eigendecomposition; eigenvalues descending");

    m.def(
        "cholesky",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> a) {
            return from_matrix(cholesky(to_sym(a)));
        },
        py::arg("matrix"));

    m.def(
        "sample_mvn",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> mean,
           py::array_t<double, py::array::c_style | py::array::forcecast> sigma, int n,
           std::uint64_t seed) { return from_matrix(sample_mvn(to_vector(mean), to_sym(sigma), n, seed)); },
        py::arg("mean"), py::arg("sigma"), py::arg("n"), py::arg("seed") = 0);

    m.def(
        "sample_mvt",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> mean,
           py::array_t<double, py::array::c_style | py::array::forcecast> scale, double df, int n,
           std::uint64_t seed) {
            return from_matrix(sample_mvt(to_vector(mean), to_sym(scale), df, n, seed));
        },
        py::arg("mean"), py::arg("scale"), py::arg("df"), py::arg("n"), py::arg("seed") = 0);

    m.def(
        "simulate",
        [](const std::string& name, std::uint64_t seed) {
            const SimData d = generate(builtin_spec(name), seed);
            return py::make_tuple(from_matrix(d.x), py::cast(d.labels), py::cast(d.is_noise));
        },
        py::arg("name"), py::arg("seed") = 0,
        "Built-in study data: returns (data, labels, is_noise)");

    m.def("builtin_specs", &builtin_spec_names);
}
