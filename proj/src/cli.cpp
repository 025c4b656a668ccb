#include "oqc/cli.hpp"

#include "oqc/backhaul.hpp"
#include "oqc/errors.hpp"
#include "oqc/run_config.hpp"
#include "oqc/scenarios.hpp"
#include "oqc/simulate.hpp"
#include "oqc/validation.hpp"
#include "oqc/wireless.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>

namespace oqc::cli {

namespace {

using nlohmann::json;

struct Flags {
    std::optional<std::string> config;
    std::optional<std::string> scenario;
    std::optional<std::size_t> n_cn;
    std::optional<std::size_t> n_ip;
    std::optional<std::size_t> servers;
    std::optional<double> mu_bar_pkts;
    std::optional<double> mu_bar_bps;
    std::vector<double> rates_bps;
    std::optional<double> packet_bits;
    std::optional<double> eta;
    std::optional<std::string> arrival;
    std::optional<double> shape;
    std::optional<double> deadline;
    std::optional<double> deadline_ratio;
    std::optional<double> bandwidth;
    std::optional<std::size_t> tier;
    std::optional<double> equal_alpha;
    std::optional<double> alpha;
    std::optional<double> target_pe;
    bool refine = false;
    bool mc = false;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<double> confidence;
    std::optional<double> radius_factor;
    std::optional<unsigned> threads;
    std::optional<std::string> output;
};

void add_model_flags(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "JSON run configuration");
    app->add_option("--scenario", f.scenario, "backhaul scenario I, II or III");
    app->add_option("--n-cn", f.n_cn, "core-network servers");
    app->add_option("--n-ip", f.n_ip, "IP-access servers");
    app->add_option("--N", f.servers, "number of backhaul servers (overrides the scenario)");
    app->add_option("--mu-bar-pkts", f.mu_bar_pkts, "mean server rate in packets/s (mu_bar / B)");
    app->add_option("--mu-bar-bps", f.mu_bar_bps, "mean server rate in bits/s");
    app->add_option("--rates", f.rates_bps, "explicit per-server rates in bits/s");
    app->add_option("--B", f.packet_bits, "overhead packet size in bits");
    app->add_option("--eta", f.eta, "overhead arrival rate in packets/s");
    app->add_option("--arrival", f.arrival, "deterministic, poisson or gamma");
    app->add_option("--shape", f.shape, "gamma shape M");
    app->add_option("--deadline", f.deadline, "delay requirement d in seconds");
    app->add_option("--deadline-ratio", f.deadline_ratio, "d as a multiple of E[T] = 1/eta");
    app->add_option("--bandwidth", f.bandwidth, "wireless overhead bandwidth in Hz");
    app->add_option("--tier", f.tier, "neighbor tier k (1-based)");
    app->add_option("--equal-alpha", f.equal_alpha, "set every tier's path-loss exponent");
    app->add_option("--threads", f.threads, "worker cap (default OQC_THREADS or all cores)");
}

void add_mc_flags(CLI::App* app, Flags& f, bool with_switch) {
    if (with_switch) app->add_flag("--mc", f.mc, "add Monte Carlo estimates");
    app->add_option("--samples", f.samples, "Monte Carlo samples");
    app->add_option("--seed", f.seed, "Monte Carlo seed");
    app->add_option("--confidence", f.confidence, "confidence level of the intervals");
    app->add_option("--radius-factor", f.radius_factor, "field window radius factor");
}

RunConfig resolve(const Flags& f) {
    RunConfig c = f.config ? RunConfig::load(*f.config) : RunConfig{};
    if (f.scenario) {
        scenarios::parse_variant(*f.scenario);
        c.scenario = *f.scenario;
    }
    if (f.n_cn) c.n_cn = *f.n_cn;
    if (f.n_ip) c.n_ip = *f.n_ip;
    if (f.packet_bits) {
        if (!(*f.packet_bits > 0.0)) throw ConfigError("--B must be positive");
        c.packet_bits = *f.packet_bits;
    }
    if (f.mu_bar_pkts && f.mu_bar_bps) throw ConfigError("give --mu-bar-pkts or --mu-bar-bps, not both");
    if (f.mu_bar_pkts) {
        c.mu_bar_bps = *f.mu_bar_pkts * c.packet_bits;
        c.rates_bps.reset();
    }
    if (f.mu_bar_bps) {
        c.mu_bar_bps = *f.mu_bar_bps;
        c.rates_bps.reset();
    }
    if (c.mu_bar_bps && !(*c.mu_bar_bps > 0.0)) throw ConfigError("server rate must be positive");
    if (!f.rates_bps.empty()) {
        c.rates_bps = f.rates_bps;
        c.mu_bar_bps.reset();
    }
    if (f.eta) {
        if (!(*f.eta > 0.0)) throw ConfigError("--eta must be positive");
        c.eta = *f.eta;
    }
    if (f.arrival) c.arrival_kind = *f.arrival;
    if (f.shape) {
        c.arrival_shape = *f.shape;
        if (!f.arrival) c.arrival_kind = "gamma";
    }
    scenarios::parse_arrival(c.arrival_kind, c.arrival_shape);
    if (f.deadline && f.deadline_ratio) throw ConfigError("give --deadline or --deadline-ratio, not both");
    if (f.deadline) {
        if (!(*f.deadline > 0.0)) throw ConfigError("--deadline must be positive");
        c.deadline_s = *f.deadline;
    }
    if (f.deadline_ratio) {
        if (!(*f.deadline_ratio > 0.0)) throw ConfigError("--deadline-ratio must be positive");
        c.deadline_ratio = *f.deadline_ratio;
        c.deadline_s.reset();
    }
    if (f.bandwidth) {
        if (!(*f.bandwidth > 0.0)) throw ConfigError("--bandwidth must be positive");
        c.bandwidth_hz = *f.bandwidth;
    }
    if (f.equal_alpha) c.hcn = c.hcn.with_equal_alpha(*f.equal_alpha);
    if (f.tier) {
        c.hcn.neighbor_tier = *f.tier;
        c.neighbor_tier_set = true;
    }
    if (!c.neighbor_tier_set) {
        c.hcn.neighbor_tier = scenarios::ScenarioId{scenarios::parse_variant(c.scenario), c.n_cn, c.n_ip}.neighbor_tier();
        c.hcn.neighbor_tier = std::min(c.hcn.neighbor_tier, c.hcn.size());
    }
    c.hcn.validate();
    if (f.samples) c.mc.samples = *f.samples;
    if (f.seed) c.mc.seed = *f.seed;
    if (f.confidence) c.mc.confidence = *f.confidence;
    if (f.radius_factor) c.mc.field_radius_factor = *f.radius_factor;
    if (f.threads) c.mc.threads = *f.threads;
    c.mc.validate();
    return c;
}

double require_eta(const RunConfig& c) {
    if (!c.eta) throw ConfigError("arrival rate required (--eta or overhead.arrival.eta_per_s)");
    return *c.eta;
}

double deadline_of(const RunConfig& c) { return c.deadline_s ? *c.deadline_s : c.deadline_ratio / require_eta(c); }

ArrivalModel arrival_of(const RunConfig& c) {
    return scenarios::parse_arrival(c.arrival_kind, c.arrival_shape).at(require_eta(c));
}

scenarios::ScenarioId scenario_of(const RunConfig& c) {
    return {scenarios::parse_variant(c.scenario), c.n_cn, c.n_ip};
}

backhaul::BackhaulConfig backhaul_of(const RunConfig& c, const Flags& f) {
    if (c.rates_bps) return backhaul::BackhaulConfig(*c.rates_bps, c.packet_bits);
    if (!c.mu_bar_bps) throw ConfigError("server rate required (--mu-bar-pkts, --mu-bar-bps, --rates or config)");
    if (f.servers) {
        if (*f.servers == 0) throw ConfigError("--N must be at least 1");
        return backhaul::BackhaulConfig::equal(*f.servers, *c.mu_bar_bps, c.packet_bits);
    }
    return scenarios::scenario_backhaul(scenario_of(c), *c.mu_bar_bps, c.packet_bits);
}

wireless::WirelessConfig wireless_of(const RunConfig& c) {
    if (!c.bandwidth_hz) throw ConfigError("bandwidth required (--bandwidth or wireless.bandwidth_hz)");
    return {*c.bandwidth_hz, c.packet_bits};
}

json estimate_json(const sim::McEstimate& e) {
    json j = {{"mean", e.mean},
              {"std_error", e.std_error},
              {"n", e.n},
              {"ci_low", e.ci_low},
              {"ci_high", e.ci_high}};
    if (e.warning) j["warning"] = *e.warning;
    return j;
}

json arrival_json(const ArrivalModel& a) {
    json j = {{"kind", a.label()}, {"eta_per_s", a.rate()}};
    if (a.kind() == ArrivalKind::Gamma) j["shape"] = a.shape();
    return j;
}

void write_rows(const std::vector<scenarios::SweepRow>& rows, const Flags& f, std::ostream& out) {
    if (f.output) {
        std::ofstream file(*f.output);
        if (!file) throw ConfigError("cannot write '" + *f.output + "'");
        scenarios::write_csv(file, rows);
    } else {
        scenarios::write_csv(out, rows);
    }
}

int cmd_outage(const std::string& channel, const Flags& f, std::ostream& out) {
    const RunConfig c = resolve(f);
    const ArrivalModel a = arrival_of(c);
    const double d = deadline_of(c);
    json j;
    j["channel"] = channel;
    if (channel == "backhaul") {
        const auto cfg = backhaul_of(c, f);
        const double pe = backhaul::outage(cfg, a, d);
        const auto lb = backhaul::outage_lower_bound(cfg, a, d);
        j["p_e"] = pe;
        j["lower_bound"] = lb.value();
        j["lower_bound_parts"] = {{"deadline_only", lb.deadline_only}, {"outdated_only", lb.outdated_only}};
        j["legacy_p_e"] = backhaul::legacy_outage(cfg, a.rate(), d);
        j["inputs"] = {{"servers", cfg.size()},
                       {"rates_bps", cfg.rates()},
                       {"rate_layout", backhaul::to_string(cfg.layout())},
                       {"B_bits", cfg.packet_bits()},
                       {"arrival", arrival_json(a)},
                       {"deadline_s", d}};
        if (f.mc) {
            const auto e = sim::estimate_backhaul_outage(cfg, a, d, c.mc);
            j["mc"] = estimate_json(e);
            j["mc"]["contains_analytic"] = e.contains(pe);
        }
    } else {
        const auto w = wireless_of(c);
        const double pe = wireless::outage(c.hcn, w, a, d);
        const auto b = wireless::outage_bounds(c.hcn, w, a, d);
        j["p_e"] = pe;
        j["lower_bound"] = b.lower;
        j["upper_bound"] = b.upper;
        j["inputs"] = {{"tier", c.hcn.neighbor_tier},
                       {"bandwidth_hz", w.bandwidth_hz},
                       {"B_bits", w.packet_bits},
                       {"arrival", arrival_json(a)},
                       {"deadline_s", d},
                       {"hcn", c.to_json()["hcn"]}};
        if (f.mc) {
            const auto e = sim::estimate_wireless_outage(c.hcn, w, a, d, c.mc);
            j["mc"] = estimate_json(e);
            j["mc"]["contains_analytic"] = e.contains(pe);
        }
    }
    out << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_design(const std::string& channel, const Flags& f, std::ostream& out) {
    if (!f.target_pe) throw ConfigError("--target-pe is required");
    const double target = *f.target_pe;
    if (!(target > 0.0 && target < 1.0)) throw DomainError("--target-pe must lie in (0, 1)");
    const RunConfig c = resolve(f);
    json j;
    j["channel"] = channel;
    j["target_pe"] = target;
    if (channel == "backhaul") {
        const ArrivalModel a = arrival_of(c);
        const double d = deadline_of(c);
        const std::size_t n = f.servers ? *f.servers : scenario_of(c).servers();
        if (n == 0) throw ConfigError("--N must be at least 1");
        const auto req = backhaul::min_server_rate(n, a, c.packet_bits, d, target);
        j["status"] = req.feasible ? "feasible" : "infeasible";
        j["servers"] = n;
        j["arrival"] = arrival_json(a);
        j["deadline_s"] = d;
        j["note"] = req.note;
        if (req.feasible) {
            j["mean_rate_bps"] = req.mean_rate_bps;
            j["mean_rate_pkts"] = req.mean_rate_bps / c.packet_bits;
            j["binding"] = backhaul::to_string(req.binding);
        }
        j["deadline_bound_bps"] = req.deadline_bound_bps;
        j["outdating_bound_bps"] = req.outdating_bound_bps ? json(*req.outdating_bound_bps) : json(nullptr);
    } else {
        const std::optional<double> alpha = f.alpha ? f.alpha : f.equal_alpha;
        if (!alpha) throw ConfigError("--alpha is required for wireless design");
        if (!c.deadline_s) throw ConfigError("--deadline is required for wireless design");
        const double w = wireless::min_bandwidth(*alpha, c.packet_bits, *c.deadline_s, target);
        j["status"] = "feasible";
        j["min_bandwidth_hz"] = w;
        j["binding"] = "closed-form necessary bound";
        j["deadline_s"] = *c.deadline_s;
        if (f.refine) {
            const double eta = c.eta ? *c.eta : 1.0 / *c.deadline_s;
            j["deterministic_exact_hz"] =
                wireless::min_bandwidth_deterministic(*alpha, c.packet_bits, *c.deadline_s, eta, target);
            j["refine_eta_per_s"] = eta;
        }
    }
    out << j.dump(2) << '\n';
    return kExitOk;
}

struct SweepFlags {
    std::string param = "eta";
    std::optional<double> from;
    std::optional<double> to;
    std::size_t points = 20;
    bool log = false;
    std::optional<std::string> channel;
    std::vector<std::string> arrivals;
};

scenarios::SweepContext context_of(const RunConfig& c, const Flags& f) {
    scenarios::SweepContext ctx;
    ctx.hcn = c.hcn;
    ctx.packet_bits = c.packet_bits;
    ctx.n_cn = c.n_cn;
    ctx.n_ip = c.n_ip;
    ctx.deadline_ratio = c.deadline_ratio;
    ctx.deadline_s = c.deadline_s;
    if (f.mc) ctx.mc = c.mc;
    ctx.threads = f.threads.value_or(0);
    return ctx;
}

std::vector<scenarios::ArrivalShape> arrival_shapes(const std::vector<std::string>& names, double shape) {
    std::vector<scenarios::ArrivalShape> out;
    for (const std::string& n : names) out.push_back(scenarios::parse_arrival(n, shape));
    return out;
}

int cmd_sweep(const SweepFlags& sf, const Flags& f, std::ostream& out) {
    const RunConfig c = resolve(f);
    scenarios::SweepSpec spec;
    if (sf.param == "eta") {
        spec.parameter = scenarios::SweepParameter::Eta;
    } else if (sf.param == "mu_bar") {
        spec.parameter = scenarios::SweepParameter::MuBar;
    } else if (sf.param == "W") {
        spec.parameter = scenarios::SweepParameter::Bandwidth;
    } else {
        throw ConfigError("--param must be eta, mu_bar or W");
    }
    if (!sf.from || !sf.to) throw ConfigError("--from and --to are required");
    spec.lo = *sf.from;
    spec.hi = *sf.to;
    spec.points = sf.points;
    spec.scale = sf.log ? scenarios::SweepScale::Log : scenarios::SweepScale::Linear;
    const std::string channel =
        sf.channel.value_or(spec.parameter == scenarios::SweepParameter::Bandwidth ? "wireless" : "backhaul");
    if (channel != "backhaul" && channel != "wireless") throw ConfigError("--channel must be backhaul or wireless");
    spec.channel = channel == "backhaul" ? scenarios::Channel::Backhaul : scenarios::Channel::Wireless;
    spec.variants = {scenarios::parse_variant(c.scenario)};
    spec.arrivals = sf.arrivals.empty() ? std::vector<scenarios::ArrivalShape>{scenarios::parse_arrival(
                                              c.arrival_kind, c.arrival_shape)}
                                        : arrival_shapes(sf.arrivals, c.arrival_shape);
    if (c.eta) spec.eta = *c.eta;
    if (c.mu_bar_bps) spec.mu_bar_pkts = *c.mu_bar_bps / c.packet_bits;
    if (c.bandwidth_hz) spec.bandwidth_hz = *c.bandwidth_hz;
    write_rows(scenarios::run_sweep(spec, context_of(c, f)), f, out);
    return kExitOk;
}

int cmd_figure(int figure, const SweepFlags& sf, const Flags& f, std::ostream& out) {
    if (figure < 2 || figure > 8) throw CLI::ValidationError("figure", "unknown figure " + std::to_string(figure));
    const RunConfig c = resolve(f);
    scenarios::FigureOptions opt;
    if (sf.from) opt.lo = *sf.from;
    if (sf.to) opt.hi = *sf.to;
    if (sf.points != 0) opt.points = sf.points;
    if (!sf.arrivals.empty()) opt.arrivals = arrival_shapes(sf.arrivals, c.arrival_shape);
    write_rows(scenarios::figure_sweep(figure, context_of(c, f), opt), f, out);
    return kExitOk;
}

int cmd_simulate(const std::string& what, const Flags& f, std::ostream& out, std::optional<double> beta) {
    const RunConfig c = resolve(f);
    json j;
    j["target"] = what;
    j["samples"] = c.mc.samples;
    j["seed"] = c.mc.seed;
    j["confidence"] = c.mc.confidence;
    if (what == "backhaul") {
        const auto cfg = backhaul_of(c, f);
        const ArrivalModel a = arrival_of(c);
        const double d = deadline_of(c);
        const double pe = backhaul::outage(cfg, a, d);
        const auto e = sim::estimate_backhaul_outage(cfg, a, d, c.mc);
        j["analytic"] = pe;
        j["mc"] = estimate_json(e);
        j["contains_analytic"] = e.contains(pe);
    } else if (what == "wireless") {
        const auto w = wireless_of(c);
        const ArrivalModel a = arrival_of(c);
        const double d = deadline_of(c);
        const double pe = wireless::outage(c.hcn, w, a, d);
        const auto e = sim::estimate_wireless_outage(c.hcn, w, a, d, c.mc);
        j["tier"] = c.hcn.neighbor_tier;
        j["analytic"] = pe;
        j["mc"] = estimate_json(e);
        j["contains_analytic"] = e.contains(pe);
    } else if (what == "association") {
        const auto est = sim::estimate_association(c.hcn, c.mc);
        json tiers = json::array();
        for (std::size_t k = 1; k <= c.hcn.size(); ++k) {
            const double exact = sir::association_probability(c.hcn, k);
            tiers.push_back({{"tier", k},
                             {"analytic", exact},
                             {"mc", estimate_json(est[k - 1])},
                             {"contains_analytic", est[k - 1].contains(exact)}});
        }
        j["tiers"] = tiers;
    } else if (what == "sir") {
        if (!beta) throw ConfigError("--beta is required for simulate sir");
        const std::size_t k = c.hcn.neighbor_tier;
        const double exact = sir::sir_cdf(c.hcn, k, *beta);
        const auto e = sim::estimate_sir_cdf(c.hcn, k, *beta, c.mc);
        j["tier"] = k;
        j["beta"] = *beta;
        j["analytic"] = exact;
        j["mc"] = estimate_json(e);
        j["contains_analytic"] = e.contains(exact);
    } else {
        throw ConfigError("simulate target must be backhaul, wireless, association or sir");
    }
    out << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_validate(const Flags& f, std::ostream& out, std::ostream& err) {
    const RunConfig c = resolve(f);
    validation::ValidationOptions opt;
    opt.samples = f.samples ? c.mc.samples : opt.samples;
    opt.seed = c.mc.seed;
    opt.confidence = c.mc.confidence;
    opt.threads = f.threads.value_or(0);
    const auto results = validation::run_validation(opt);
    json checks = json::array();
    bool all = true;
    for (const auto& r : results) {
        checks.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        if (!r.pass) {
            all = false;
            err << "FAILED " << r.name << ": " << r.detail << '\n';
        }
    }
    out << json{{"passed", all}, {"samples", opt.samples}, {"seed", opt.seed}, {"checks", checks}}.dump(2) << '\n';
    return all ? kExitOk : kExitValidationFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Overhead quality contour for inter-cell signaling in heterogeneous cellular networks", "oqc"};
    app.require_subcommand(1);
    Flags f;
    SweepFlags sf;
    std::string channel;
    std::string sim_target;
    std::optional<double> beta;
    int figure = 0;

    auto* outage = app.add_subcommand("outage", "outage probability of one channel");
    outage->add_option("channel", channel, "backhaul or wireless")->required()->check(CLI::IsMember({"backhaul", "wireless"}));
    add_model_flags(outage, f);
    add_mc_flags(outage, f, true);

    auto* design = app.add_subcommand("design", "minimum server rate or bandwidth for a target outage");
    design->add_option("channel", channel, "backhaul or wireless")->required()->check(CLI::IsMember({"backhaul", "wireless"}));
    add_model_flags(design, f);
    design->add_option("--target-pe", f.target_pe, "target outage probability")->required();
    design->add_option("--alpha", f.alpha, "common path-loss exponent (wireless)");
    design->add_flag("--refine", f.refine, "also invert the deterministic-arrival outage exactly (wireless)");

    auto* sweep = app.add_subcommand("sweep", "outage over a parameter range (CSV)");
    add_model_flags(sweep, f);
    add_mc_flags(sweep, f, true);
    sweep->add_option("--param", sf.param, "eta, mu_bar or W")->check(CLI::IsMember({"eta", "mu_bar", "W"}));
    sweep->add_option("--from", sf.from, "range start");
    sweep->add_option("--to", sf.to, "range end");
    sweep->add_option("--points", sf.points, "grid points");
    sweep->add_flag("--log", sf.log, "logarithmic grid");
    sweep->add_option("--channel", sf.channel, "backhaul or wireless");
    sweep->add_option("--arrivals", sf.arrivals, "arrival models to include");
    sweep->add_option("--output", f.output, "write CSV to a file instead of standard output");

    auto* fig = app.add_subcommand("figure", "reproduce a figure's curves (CSV)");
    fig->add_option("id", figure, "figure number 2..8")->required();
    add_model_flags(fig, f);
    add_mc_flags(fig, f, true);
    fig->add_option("--from", sf.from, "x-axis start");
    fig->add_option("--to", sf.to, "x-axis end");
    fig->add_option("--points", sf.points, "x-axis points");
    fig->add_option("--arrivals", sf.arrivals, "arrival models to include");
    fig->add_option("--output", f.output, "write CSV to a file instead of standard output");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate next to the analytic value");
    simulate->add_option("target", sim_target, "backhaul, wireless, association or sir")
        ->required()
        ->check(CLI::IsMember({"backhaul", "wireless", "association", "sir"}));
    add_model_flags(simulate, f);
    add_mc_flags(simulate, f, false);
    simulate->add_option("--beta", beta, "SIR threshold (sir target)");

    auto* validate = app.add_subcommand("validate", "run the Monte Carlo and identity self-checks");
    validate->add_option("--config", f.config, "JSON run configuration");
    validate->add_option("--threads", f.threads, "worker cap");
    add_mc_flags(validate, f, false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    if (sweep->parsed() && !sweep->count("--points")) sf.points = 20;
    if (fig->parsed() && !fig->count("--points")) sf.points = 0;

    try {
        if (outage->parsed()) return cmd_outage(channel, f, out);
        if (design->parsed()) return cmd_design(channel, f, out);
        if (sweep->parsed()) return cmd_sweep(sf, f, out);
        if (fig->parsed()) return cmd_figure(figure, sf, f, out);
        if (simulate->parsed()) return cmd_simulate(sim_target, f, out, beta);
        if (validate->parsed()) return cmd_validate(f, out, err);
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const AccuracyError& e) {
        err << "error: numerical method did not converge: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const BracketError& e) {
        err << "error: numerical method did not converge: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}

}  // namespace oqc::cli
