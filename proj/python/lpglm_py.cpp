#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lpglm/errors.hpp"
#include "lpglm/pipeline.hpp"

namespace py = pybind11;
using namespace lpglm;

namespace {

LatentSpec make_latent(const std::string& kind, double sigma2, double rho) {
    switch (latent_kind_from_string(kind)) {
        case LatentKind::LNAR: return LatentSpec::lnar(sigma2, rho);
        case LatentKind::GAR: return LatentSpec::gar(sigma2, rho);
        case LatentKind::ARCH: return LatentSpec::arch(rho);
    }
    throw ConfigError("unknown latent kind");
}

Dataset make_dataset(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const std::string& family, double phi) {
    Dataset d{y, X, FamilySpec::make(family_from_string(family), phi)};
    d.validate();
    return d;
}

py::object to_python(const ordered_json& j) { return py::module_::import("json").attr("loads")(dump_json(j)); }

nlohmann::json from_python(const py::object& o) {
    return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_lpglm, m) {
    m.doc() = "Latent-process GLMs for time series";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_NotImplementedError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    m.attr("REPORT_SCHEMA_VERSION") = kReportSchemaVersion;

    m.def("bessel_i", &bessel_i, py::arg("order"), py::arg("x"));
    m.def("bessel_k", &bessel_k, py::arg("order"), py::arg("x"));
    m.def("log_bessel_i", &log_bessel_i, py::arg("order"), py::arg("x"));
    m.def("log_bessel_k", &log_bessel_k, py::arg("order"), py::arg("x"));

    m.def(
        "simulate_latent",
        [](const std::string& kind, double sigma2, double rho, std::size_t n, std::uint64_t seed) {
            Rng rng = substream(seed, 0);
            return simulate(make_latent(kind, sigma2, rho), n, rng);
        },
        py::arg("kind"), py::arg("sigma2"), py::arg("rho"), py::arg("n"), py::arg("seed"),
        "Stationary latent path of length n with unit mean.");

    m.def(
        "build_design",
        [](std::size_t n, bool trend, std::optional<double> trend_scale,
           const std::vector<std::pair<double, std::vector<int>>>& harmonics) {
            DesignSpec s;
            s.include_trend = trend;
            s.trend_scale = trend_scale;
            for (const auto& [period, ks] : harmonics) s.harmonics.push_back({period, ks});
            return build_design(n, s);
        },
        py::arg("n"), py::arg("trend") = true, py::arg("trend_scale") = py::none(),
        py::arg("harmonics") = std::vector<std::pair<double, std::vector<int>>>{});

    m.def(
        "fit",
        [](const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const std::string& family, double phi) {
            return to_python(to_json(fit(make_dataset(y, X, family, phi))));
        },
        py::arg("y"), py::arg("X"), py::arg("family") = "poisson", py::arg("phi") = 1.0,
        "GLM pseudo-likelihood fit; returns beta_hat, mu_hat and convergence details.");

    m.def(
        "estimate_latent",
        [](const Eigen::VectorXd& y, const Eigen::VectorXd& mu_hat, const std::string& family,
           const std::string& kind) {
            return to_python(to_json(estimate_latent(family_from_string(family), latent_kind_from_string(kind),
                                                     empirical_moment_sums(y, mu_hat))));
        },
        py::arg("y"), py::arg("mu_hat"), py::arg("family"), py::arg("kind"));

    m.def(
        "covariance",
        [](const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const std::string& family, const std::string& kind,
           double sigma2, double rho, double phi) {
            const Dataset d = make_dataset(y, X, family, phi);
            return to_python(to_json(estimate_omegas(d, fit(d), make_latent(kind, sigma2, rho), phi)));
        },
        py::arg("y"), py::arg("X"), py::arg("family"), py::arg("kind"), py::arg("sigma2"), py::arg("rho"),
        py::arg("phi") = 1.0, "Naive and sandwich covariance of the GLM estimator under the given latent process.");

    m.def(
        "bootstrap",
        [](const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const std::string& family, const std::string& kind,
           double sigma2, double rho, double phi, int replications, std::uint64_t seed) {
            const Dataset d = make_dataset(y, X, family, phi);
            const LatentSpec latent = make_latent(kind, sigma2, rho);
            BootstrapReport r;
            {
                py::gil_scoped_release release;
                r = parametric_bootstrap(d, fit(d), latent, phi, replications, seed);
            }
            return to_python(to_json(r));
        },
        py::arg("y"), py::arg("X"), py::arg("family"), py::arg("kind"), py::arg("sigma2"), py::arg("rho"),
        py::arg("phi") = 1.0, py::arg("replications") = 200, py::arg("seed") = 0);

    m.def(
        "predict",
        [](const Eigen::VectorXd& y, const Eigen::VectorXd& mu_hat, const std::string& family,
           std::optional<std::string> kind, double sigma2, double rho, double phi, std::size_t horizon,
           std::size_t arch_draws, std::uint64_t seed) {
            std::optional<LatentSpec> latent;
            if (kind) latent = make_latent(*kind, sigma2, rho);
            const PredictionOptions opt{horizon, arch_draws, seed};
            return to_python(
                to_json(in_sample_predictions(FamilySpec::make(family_from_string(family), phi), y, mu_hat, latent,
                                              phi, opt)));
        },
        py::arg("y"), py::arg("mu_hat"), py::arg("family") = "poisson", py::arg("kind") = py::none(),
        py::arg("sigma2") = 0.0, py::arg("rho") = 0.0, py::arg("phi") = 1.0, py::arg("horizon") = 1,
        py::arg("arch_draws") = 10000, py::arg("seed") = 0,
        "In-sample l-step predictions; kind=None gives the plain GLM baseline.");

    m.def(
        "analyze",
        [](const py::object& config, std::optional<Eigen::VectorXd> y) {
            const PipelineConfig cfg = config_from_json(from_python(config));
            cfg.validate();
            if (!y) {
                if (cfg.data_path.empty()) throw ConfigError("analyze needs y or a config with 'data'");
                return to_python(analyze(cfg, load_dataset(cfg.data_path, cfg)));
            }
            const Dataset d{*y, build_design(static_cast<std::size_t>(y->size()), cfg.design),
                            FamilySpec::make(cfg.family, 1.0)};
            d.validate();
            return to_python(analyze(cfg, d));
        },
        py::arg("config"), py::arg("y") = py::none(),
        "Full pipeline from a config dict; y overrides reading the CSV named in the config.");

    m.def(
        "simulate_series",
        [](const py::object& config) {
            const SimulatedSeries s = simulate_series(config_from_json(from_python(config)));
            py::dict out;
            out["y"] = s.y;
            out["mu"] = s.mu;
            out["nu"] = s.nu;
            return out;
        },
        py::arg("config"));

    m.def(
        "evaluate",
        [](const Eigen::VectorXd& predictions, const Eigen::VectorXd& observed) {
            return to_python(evaluation_json(predictions, observed));
        },
        py::arg("predictions"), py::arg("observed"));
}
