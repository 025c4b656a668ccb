#include "oqc/backhaul.hpp"
#include "oqc/cli.hpp"
#include "oqc/errors.hpp"
#include "oqc/numerics.hpp"
#include "oqc/scenarios.hpp"
#include "oqc/simulate.hpp"
#include "oqc/sir.hpp"
#include "oqc/wireless.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace oqc;

namespace {

sim::McSettings settings(std::uint64_t samples, std::uint64_t seed, double confidence, unsigned threads) {
    sim::McSettings s;
    s.samples = samples;
    s.seed = seed;
    s.confidence = confidence;
    s.threads = threads;
    return s;
}

sir::HcnConfig at_tier(sir::HcnConfig h, std::size_t k) {
    h.neighbor_tier = k;
    return h;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Overhead quality contour for inter-cell signaling in K-tier networks";

    // Exception hierarchy mirrors the C++ one; domain errors are ValueErrors.
    static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ValueError);
    static py::exception<ConfigError> config_error(m, "ConfigError", domain_error.ptr());
    static py::exception<UnboundedError> unbounded_error(m, "UnboundedError", domain_error.ptr());
    static py::exception<AccuracyError> accuracy_error(m, "AccuracyError", PyExc_ArithmeticError);
    static py::exception<BracketError> bracket_error(m, "BracketError", PyExc_ArithmeticError);
    static py::exception<InfeasibleError> infeasible_error(m, "InfeasibleError", PyExc_ValueError);
    static py::exception<SimulationError> simulation_error(m, "SimulationError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            py::set_error(config_error, e.what());
        } catch (const UnboundedError& e) {
            py::set_error(unbounded_error, e.what());
        } catch (const DomainError& e) {
            py::set_error(domain_error, e.what());
        } catch (const AccuracyError& e) {
            py::set_error(accuracy_error, e.what());
        } catch (const BracketError& e) {
            py::set_error(bracket_error, e.what());
        } catch (const InfeasibleError& e) {
            py::set_error(infeasible_error, e.what());
        } catch (const SimulationError& e) {
            py::set_error(simulation_error, e.what());
        }
    });

    // numerics
    m.def("reg_lower_gamma", &numerics::reg_lower_gamma, py::arg("shape"), py::arg("x"));
    m.def("inv_reg_lower_gamma", [](double s, double p) { return numerics::inv_reg_lower_gamma(s, p); },
          py::arg("shape"), py::arg("p"));

    // arrivals
    py::class_<ArrivalModel>(m, "ArrivalModel")
        .def_static("gamma", &ArrivalModel::gamma, py::arg("eta"), py::arg("shape"))
        .def_static("poisson", &ArrivalModel::poisson, py::arg("eta"))
        .def_static("deterministic", &ArrivalModel::deterministic, py::arg("eta"))
        .def_property_readonly("rate", &ArrivalModel::rate)
        .def_property_readonly("shape", &ArrivalModel::shape)
        .def_property_readonly("label", &ArrivalModel::label)
        .def("with_rate", &ArrivalModel::with_rate, py::arg("eta"))
        .def("survival", [](const ArrivalModel& a, double t) { return survival(a, t); }, py::arg("t"))
        .def("__repr__", [](const ArrivalModel& a) {
            std::ostringstream os;
            os << "ArrivalModel(" << a.label() << ", eta=" << a.rate() << ")";
            return os.str();
        });

    // backhaul
    py::class_<backhaul::BackhaulConfig>(m, "BackhaulConfig")
        .def(py::init<std::vector<double>, double>(), py::arg("rates_bps"), py::arg("packet_bits"))
        .def_static("equal", &backhaul::BackhaulConfig::equal, py::arg("servers"), py::arg("mean_rate_bps"),
                    py::arg("packet_bits"))
        .def_property_readonly("rates", &backhaul::BackhaulConfig::rates)
        .def_property_readonly("packet_bits", &backhaul::BackhaulConfig::packet_bits)
        .def_property_readonly("mean_rate", &backhaul::BackhaulConfig::mean_rate)
        .def("__len__", &backhaul::BackhaulConfig::size);

    m.def("hypoexp_coefficients", &backhaul::hypoexp_coefficients, py::arg("config"));
    m.def("delay_cdf", &backhaul::delay_cdf, py::arg("config"), py::arg("d"));
    m.def("backhaul_outage", &backhaul::outage, py::arg("config"), py::arg("arrival"), py::arg("d"));
    m.def(
        "backhaul_outage_lower_bound",
        [](const backhaul::BackhaulConfig& c, const ArrivalModel& a, double d) {
            const auto b = backhaul::outage_lower_bound(c, a, d);
            return py::dict(py::arg("deadline_only") = b.deadline_only, py::arg("outdated_only") = b.outdated_only,
                            py::arg("value") = b.value());
        },
        py::arg("config"), py::arg("arrival"), py::arg("d"));
    m.def("legacy_outage", &backhaul::legacy_outage, py::arg("config"), py::arg("eta"), py::arg("d"));
    m.def(
        "min_server_rate",
        [](std::size_t n, const ArrivalModel& a, double bits, double d, double target) {
            const auto r = backhaul::min_server_rate(n, a, bits, d, target);
            return py::dict(py::arg("feasible") = r.feasible, py::arg("mean_rate_bps") = r.mean_rate_bps,
                            py::arg("binding") = backhaul::to_string(r.binding),
                            py::arg("deadline_bound_bps") = r.deadline_bound_bps,
                            py::arg("outdating_bound_bps") = r.outdating_bound_bps, py::arg("note") = r.note);
        },
        py::arg("servers"), py::arg("arrival"), py::arg("packet_bits"), py::arg("d"), py::arg("target_pe"));

    // sir
    py::class_<sir::TierParams>(m, "TierParams")
        .def(py::init([](double density, double power_w, double alpha, double wall_loss_db) {
                 return sir::TierParams::with_wall_loss_db(density, power_w, alpha, wall_loss_db);
             }),
             py::arg("density"), py::arg("power_w"), py::arg("alpha"), py::arg("wall_loss_db") = 0.0)
        .def_readonly("density", &sir::TierParams::density)
        .def_readonly("power_w", &sir::TierParams::power_w)
        .def_readonly("alpha", &sir::TierParams::alpha)
        .def_property_readonly("wall_loss_db", &sir::TierParams::wall_loss_db);

    py::class_<sir::HcnConfig>(m, "HcnConfig")
        .def(py::init([](std::vector<sir::TierParams> tiers, std::size_t k) {
                 sir::HcnConfig h{std::move(tiers), k};
                 h.validate();
                 return h;
             }),
             py::arg("tiers"), py::arg("neighbor_tier") = 1)
        .def_readonly("tiers", &sir::HcnConfig::tiers)
        .def_readonly("neighbor_tier", &sir::HcnConfig::neighbor_tier)
        .def("with_equal_alpha", &sir::HcnConfig::with_equal_alpha, py::arg("alpha"))
        .def("at_tier", &at_tier, py::arg("k"));

    m.def("table1_hcn", &scenarios::table1_hcn);
    m.def("z_function", &sir::z_function, py::arg("beta"), py::arg("alpha"));
    m.def("zeta", &sir::zeta, py::arg("alpha"));
    m.def("association_probability", &sir::association_probability, py::arg("hcn"), py::arg("k"));
    m.def("sir_cdf", &sir::sir_cdf, py::arg("hcn"), py::arg("k"), py::arg("beta"));
    m.def("sir_cdf_equal_alpha", &sir::sir_cdf_equal_alpha, py::arg("beta"), py::arg("alpha"));
    m.def("mean_log_spectral_efficiency",
          [](const sir::HcnConfig& h, std::size_t k) { return sir::mean_log_spectral_efficiency(h, k); },
          py::arg("hcn"), py::arg("k"));

    // wireless
    m.def(
        "beta_of_deadline",
        [](double w, double bits, double x) { return wireless::beta_of_deadline({w, bits}, x); },
        py::arg("bandwidth_hz"), py::arg("packet_bits"), py::arg("x"));
    m.def(
        "wireless_outage",
        [](const sir::HcnConfig& h, double w, double bits, const ArrivalModel& a, double d) {
            return wireless::outage(h, {w, bits}, a, d);
        },
        py::arg("hcn"), py::arg("bandwidth_hz"), py::arg("packet_bits"), py::arg("arrival"), py::arg("d"));
    m.def(
        "wireless_outage_bounds",
        [](const sir::HcnConfig& h, double w, double bits, const ArrivalModel& a, double d) {
            const auto b = wireless::outage_bounds(h, {w, bits}, a, d);
            return py::make_tuple(b.lower, b.upper);
        },
        py::arg("hcn"), py::arg("bandwidth_hz"), py::arg("packet_bits"), py::arg("arrival"), py::arg("d"));
    m.def("min_bandwidth", &wireless::min_bandwidth, py::arg("alpha"), py::arg("packet_bits"), py::arg("d"),
          py::arg("target_pe"));
    m.def("min_bandwidth_deterministic", &wireless::min_bandwidth_deterministic, py::arg("alpha"),
          py::arg("packet_bits"), py::arg("d"), py::arg("eta"), py::arg("target_pe"));

    // Monte Carlo
    py::class_<sim::McEstimate>(m, "McEstimate")
        .def_readonly("mean", &sim::McEstimate::mean)
        .def_readonly("std_error", &sim::McEstimate::std_error)
        .def_readonly("n", &sim::McEstimate::n)
        .def_readonly("ci_low", &sim::McEstimate::ci_low)
        .def_readonly("ci_high", &sim::McEstimate::ci_high)
        .def_readonly("warning", &sim::McEstimate::warning)
        .def("contains", &sim::McEstimate::contains, py::arg("value"));

    m.def(
        "estimate_backhaul_outage",
        [](const backhaul::BackhaulConfig& c, const ArrivalModel& a, double d, std::uint64_t samples,
           std::uint64_t seed, double confidence, unsigned threads) {
            py::gil_scoped_release release;
            return sim::estimate_backhaul_outage(c, a, d, settings(samples, seed, confidence, threads));
        },
        py::arg("config"), py::arg("arrival"), py::arg("d"), py::arg("samples") = 100000, py::arg("seed") = 1,
        py::arg("confidence") = 0.99, py::arg("threads") = 0);
    m.def(
        "estimate_wireless_outage",
        [](const sir::HcnConfig& h, double w, double bits, const ArrivalModel& a, double d, std::uint64_t samples,
           std::uint64_t seed, double confidence, unsigned threads) {
            py::gil_scoped_release release;
            return sim::estimate_wireless_outage(h, {w, bits}, a, d, settings(samples, seed, confidence, threads));
        },
        py::arg("hcn"), py::arg("bandwidth_hz"), py::arg("packet_bits"), py::arg("arrival"), py::arg("d"),
        py::arg("samples") = 100000, py::arg("seed") = 1, py::arg("confidence") = 0.99, py::arg("threads") = 0);
    m.def(
        "estimate_association",
        [](const sir::HcnConfig& h, std::uint64_t samples, std::uint64_t seed, double confidence, unsigned threads) {
            py::gil_scoped_release release;
            return sim::estimate_association(h, settings(samples, seed, confidence, threads));
        },
        py::arg("hcn"), py::arg("samples") = 100000, py::arg("seed") = 1, py::arg("confidence") = 0.99,
        py::arg("threads") = 0);

    // scenarios
    m.def(
        "figure_rows",
        [](int id, std::optional<std::size_t> points) {
            scenarios::FigureOptions opt;
            opt.points = points;
            py::list rows;
            for (const auto& r : scenarios::figure_sweep(id, scenarios::SweepContext{}, opt))
                rows.append(py::dict(py::arg("x") = r.x, py::arg("series") = r.series,
                                     py::arg("pe_analytic") = r.pe_analytic, py::arg("pe_lb") = r.pe_lb));
            return rows;
        },
        py::arg("figure"), py::arg("points") = py::none());

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
