#include "oqc/scenarios.hpp"

#include "oqc/errors.hpp"
#include "oqc/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace oqc::scenarios {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_ratio(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", r);
    return buf;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Runs tasks[i]() for every i on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(n, threads > 0 ? threads : sim::default_threads()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    }
    if (error) std::rethrow_exception(error);
}

double deadline_for(const SweepContext& ctx, double eta) {
    return ctx.deadline_s ? *ctx.deadline_s : ctx.deadline_ratio / eta;
}

// One sweep point: analytic evaluation plus an optional Monte Carlo request.
struct Task {
    double x;
    std::string series;
    std::function<std::pair<double, std::optional<double>>()> analytic;
    // Backhaul MC request.
    std::optional<backhaul::BackhaulConfig> mc_backhaul;
    // Wireless MC request: index into the config list plus query.
    std::optional<std::size_t> mc_hcn;
    std::optional<sim::WirelessQuery> mc_query;
    std::optional<ArrivalModel> arrival;
    double deadline = 0.0;

    Task(double x_, std::string series_, std::function<std::pair<double, std::optional<double>>()> f)
        : x(x_), series(std::move(series_)), analytic(std::move(f)) {}
};

struct TaskList {
    std::vector<Task> tasks;
    std::vector<sir::HcnConfig> configs;

    std::size_t config_index(const sir::HcnConfig& h) {
        for (std::size_t i = 0; i < configs.size(); ++i) {
            const auto& c = configs[i];
            bool same = c.tiers.size() == h.tiers.size();
            for (std::size_t j = 0; same && j < c.tiers.size(); ++j) {
                same = c.tiers[j].density == h.tiers[j].density && c.tiers[j].power_w == h.tiers[j].power_w &&
                       c.tiers[j].alpha == h.tiers[j].alpha && c.tiers[j].wall_gain == h.tiers[j].wall_gain;
            }
            if (same) return i;
        }
        configs.push_back(h);
        return configs.size() - 1;
    }

    void add_backhaul(double x, std::string series, const backhaul::BackhaulConfig& c, const ArrivalModel& a,
                      double d) {
        Task t{x, std::move(series), [c, a, d] {
                   return std::pair<double, std::optional<double>>(backhaul::outage(c, a, d),
                                                                   backhaul::outage_lower_bound(c, a, d).value());
               }};
        t.mc_backhaul = c;
        t.arrival = a;
        t.deadline = d;
        tasks.push_back(std::move(t));
    }

    void add_wireless(double x, std::string series, sir::HcnConfig h, std::size_t tier,
                      const wireless::WirelessConfig& w, const ArrivalModel& a, double d) {
        h.neighbor_tier = tier;
        Task t{x, std::move(series), [h, w, a, d] {
                   return std::pair<double, std::optional<double>>(wireless::outage(h, w, a, d),
                                                                   wireless::outage_bounds(h, w, a, d).lower);
               }};
        t.mc_hcn = config_index(h);
        t.mc_query = sim::WirelessQuery{tier, w, a, d};
        tasks.push_back(std::move(t));
    }
};

std::vector<SweepRow> evaluate(TaskList& list, const SweepContext& ctx) {
    std::vector<SweepRow> rows(list.tasks.size());
    parallel_for(list.tasks.size(), ctx.threads, [&](std::size_t i) {
        const Task& t = list.tasks[i];
        const auto [pe, lb] = t.analytic();
        rows[i] = SweepRow{t.x, t.series, pe, lb, std::nullopt};
    });

    if (ctx.mc) {
        sim::McSettings s = *ctx.mc;
        if (ctx.threads > 0) s.threads = ctx.threads;
        std::map<std::size_t, std::vector<std::size_t>> wireless_by_config;
        for (std::size_t i = 0; i < list.tasks.size(); ++i) {
            const Task& t = list.tasks[i];
            if (t.mc_backhaul) {
                sim::McSettings point = s;
                point.seed = s.seed + 0x9e3779b97f4a7c15ull * (i + 1);
                rows[i].mc = sim::estimate_backhaul_outage(*t.mc_backhaul, *t.arrival, t.deadline, point);
            } else if (t.mc_hcn) {
                wireless_by_config[*t.mc_hcn].push_back(i);
            }
        }
        for (const auto& [cfg, indices] : wireless_by_config) {
            std::vector<sim::WirelessQuery> queries;
            for (std::size_t i : indices) queries.push_back(*list.tasks[i].mc_query);
            sim::McSettings batch = s;
            batch.seed = s.seed + 0x51ed270b27a1f3c9ull * (cfg + 1);
            const auto est = sim::estimate_wireless_outage(list.configs[cfg], queries, batch);
            for (std::size_t j = 0; j < indices.size(); ++j) rows[indices[j]].mc = est[j];
        }
    }

    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return a.series != b.series ? a.series < b.series : a.x < b.x;
    });
    return rows;
}

std::vector<Variant> all_variants() { return {Variant::I, Variant::II, Variant::III}; }

std::vector<ArrivalShape> default_arrivals() {
    return {{ArrivalKind::Deterministic, kInf}, {ArrivalKind::Poisson, 1.0}};
}

}  // namespace

sir::HcnConfig table1_hcn() {
    sir::HcnConfig h;
    h.tiers = {
        sir::TierParams{5e-7, 40.0, 3.0, 1.0},
        sir::TierParams{5e-6, 1.0, 3.5, 1.0},
        sir::TierParams::with_wall_loss_db(5e-5, 0.2, 4.0, 5.0),
    };
    h.neighbor_tier = 1;
    return h;
}

std::size_t ScenarioId::servers() const noexcept {
    switch (variant) {
        case Variant::I: return n_cn + 1;
        case Variant::II: return 1;
        case Variant::III: return 2 + n_cn + n_ip;
    }
    return 1;
}

std::size_t ScenarioId::neighbor_tier() const noexcept {
    switch (variant) {
        case Variant::I: return 1;
        case Variant::II: return 2;
        case Variant::III: return 3;
    }
    return 1;
}

std::string ScenarioId::name() const {
    switch (variant) {
        case Variant::I: return "I";
        case Variant::II: return "II";
        case Variant::III: return "III";
    }
    return "?";
}

Variant parse_variant(const std::string& s) {
    if (s == "I" || s == "1") return Variant::I;
    if (s == "II" || s == "2") return Variant::II;
    if (s == "III" || s == "3") return Variant::III;
    throw ConfigError("unknown scenario '" + s + "' (expected I, II or III)");
}

backhaul::BackhaulConfig scenario_backhaul(const ScenarioId& id, double mu_bar_bps, double packet_bits) {
    if (!(mu_bar_bps > 0.0)) throw DomainError("server rate must be positive");
    return backhaul::BackhaulConfig::equal(id.servers(), mu_bar_bps, packet_bits);
}

double overhead_capacity(const backhaul::BackhaulConfig& c) {
    double mean_delay = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) mean_delay += 1.0 / c.service_rate(i);
    return 1.0 / mean_delay;
}

double overhead_capacity(const sir::HcnConfig& h, const wireless::WirelessConfig& w, std::size_t tier) {
    w.validate();
    return w.bandwidth_hz / w.packet_bits * sir::mean_log_spectral_efficiency(sir::tabulated_sir_cdf(h, tier));
}

std::string to_string(Channel c) { return c == Channel::Backhaul ? "backhaul" : "wireless"; }

ChannelChoice preferred_channel(const backhaul::BackhaulConfig& b, const sir::HcnConfig& h,
                                const wireless::WirelessConfig& w, std::size_t tier, const ArrivalModel& a,
                                double d) {
    sir::HcnConfig hn = h;
    hn.neighbor_tier = tier;
    const double pb = backhaul::outage(b, a, d);
    const double pw = wireless::outage(hn, w, a, d);
    return {pw < pb ? Channel::Wireless : Channel::Backhaul, pb, pw};
}

double mixture_wireless_outage(const sir::HcnConfig& h, const wireless::WirelessConfig& w, const ArrivalModel& a,
                               double d) {
    double total = 0.0;
    for (std::size_t k = 1; k <= h.size(); ++k) {
        sir::HcnConfig hk = h;
        hk.neighbor_tier = k;
        total += sir::association_probability(h, k) * wireless::outage(hk, w, a, d);
    }
    return total;
}

double critical_capacity_ratio(const ScenarioId& id, const sir::HcnConfig& h, const wireless::WirelessConfig& w,
                               const ArrivalModel& a, double deadline_ratio, double packet_bits) {
    sir::HcnConfig hn = h;
    hn.neighbor_tier = id.neighbor_tier();
    const double d = deadline_ratio / a.rate();
    const double pw = wireless::outage(hn, w, a, d);
    const double r_wi = overhead_capacity(h, w, id.neighbor_tier());
    const double n = static_cast<double>(id.servers());
    auto gap = [&](double log_ratio) {
        const double mu_bar = std::exp(log_ratio) * r_wi * n * packet_bits;
        return backhaul::outage(scenario_backhaul(id, mu_bar, packet_bits), a, d) - pw;
    };
    const double lo = std::log(1e-4);
    const double hi = std::log(1e4);
    if (gap(lo) <= 0.0) return 0.0;
    if (gap(hi) > 0.0) return kInf;
    return std::exp(numerics::find_root(gap, lo, hi, {1e-10, 1e-14, 200}));
}

std::optional<double> critical_arrival_rate(const ScenarioId& id, const sir::HcnConfig& h,
                                            const wireless::WirelessConfig& w, ArrivalKind kind, double shape,
                                            double capacity_ratio, double deadline_ratio, double packet_bits,
                                            double eta_lo, double eta_hi) {
    if (!(eta_lo > 0.0 && eta_hi > eta_lo)) throw DomainError("critical_arrival_rate: need 0 < eta_lo < eta_hi");
    sir::HcnConfig hn = h;
    hn.neighbor_tier = id.neighbor_tier();
    const double r_wi = overhead_capacity(h, w, id.neighbor_tier());
    const double mu_bar = capacity_ratio * r_wi * static_cast<double>(id.servers()) * packet_bits;
    const auto cfg = scenario_backhaul(id, mu_bar, packet_bits);
    const ArrivalShape family{kind, shape};
    auto gap = [&](double log_eta) {
        const ArrivalModel a = family.at(std::exp(log_eta));
        const double d = deadline_ratio / a.rate();
        return backhaul::outage(cfg, a, d) - wireless::outage(hn, w, a, d);
    };
    constexpr int kScan = 48;
    const double lo = std::log(eta_lo);
    const double hi = std::log(eta_hi);
    double prev_x = lo;
    double prev = gap(lo);
    for (int i = 1; i <= kScan; ++i) {
        const double x = lo + (hi - lo) * i / kScan;
        const double g = gap(x);
        if ((prev <= 0.0) != (g <= 0.0)) return std::exp(numerics::find_root(gap, prev_x, x, {1e-10, 1e-14, 200}));
        prev_x = x;
        prev = g;
    }
    return std::nullopt;
}

ArrivalModel ArrivalShape::at(double eta) const {
    switch (kind) {
        case ArrivalKind::Deterministic: return ArrivalModel::deterministic(eta);
        case ArrivalKind::Poisson: return ArrivalModel::poisson(eta);
        case ArrivalKind::Gamma: break;
    }
    return ArrivalModel::gamma(eta, shape);
}

std::string ArrivalShape::label() const { return at(1.0).label(); }

ArrivalShape parse_arrival(const std::string& s, double shape) {
    if (s == "deterministic" || s == "det") return {ArrivalKind::Deterministic, kInf};
    if (s == "poisson") return {ArrivalKind::Poisson, 1.0};
    if (s == "gamma") {
        if (!(shape >= 1.0) || !std::isfinite(shape)) throw ConfigError("gamma arrivals need a finite shape >= 1");
        return {ArrivalKind::Gamma, shape};
    }
    throw ConfigError("unknown arrival model '" + s + "' (expected deterministic, poisson or gamma)");
}

void SweepSpec::validate() const {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("sweep range needs lo < hi");
    if (scale == SweepScale::Log && !(lo > 0.0)) throw ConfigError("log sweep needs a positive range");
    if (points < 2) throw ConfigError("sweep needs at least 2 points");
    if (arrivals.empty()) throw ConfigError("sweep needs at least one arrival model");
    if (variants.empty()) throw ConfigError("sweep needs at least one scenario");
    if (!(eta > 0.0) || !(mu_bar_pkts > 0.0) || !(bandwidth_hz > 0.0)) {
        throw ConfigError("fixed sweep parameters must be positive");
    }
    if (parameter == SweepParameter::MuBar && channel == Channel::Wireless) {
        throw ConfigError("server rate sweeps apply to the backhaul channel only");
    }
    if (parameter == SweepParameter::Bandwidth && channel == Channel::Backhaul) {
        throw ConfigError("bandwidth sweeps apply to the wireless channel only");
    }
}

std::vector<double> sweep_grid(double lo, double hi, std::size_t points, SweepScale scale) {
    if (points < 2) throw DomainError("sweep grid needs at least 2 points");
    std::vector<double> xs(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        xs[i] = scale == SweepScale::Log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                                         : lo + t * (hi - lo);
    }
    xs.front() = lo;
    xs.back() = hi;
    return xs;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SweepContext& ctx) {
    spec.validate();
    TaskList list;
    for (double x : sweep_grid(spec.lo, spec.hi, spec.points, spec.scale)) {
        const double eta = spec.parameter == SweepParameter::Eta ? x : spec.eta;
        const double mu_pkts = spec.parameter == SweepParameter::MuBar ? x : spec.mu_bar_pkts;
        const double w_hz = spec.parameter == SweepParameter::Bandwidth ? x : spec.bandwidth_hz;
        const double d = deadline_for(ctx, eta);
        for (Variant v : spec.variants) {
            const ScenarioId id{v, ctx.n_cn, ctx.n_ip};
            for (const ArrivalShape& shape : spec.arrivals) {
                const ArrivalModel a = shape.at(eta);
                const std::string series = id.name() + "/" + shape.label();
                if (spec.channel == Channel::Backhaul) {
                    list.add_backhaul(x, series, scenario_backhaul(id, mu_pkts * ctx.packet_bits, ctx.packet_bits),
                                      a, d);
                } else {
                    list.add_wireless(x, series, ctx.hcn, id.neighbor_tier(),
                                      wireless::WirelessConfig{w_hz, ctx.packet_bits}, a, d);
                }
            }
        }
    }
    return evaluate(list, ctx);
}

std::vector<SweepRow> figure_sweep(int figure, const SweepContext& ctx, const FigureOptions& opt) {
    const std::vector<ArrivalShape> arrivals = opt.arrivals.value_or(default_arrivals());
    auto grid = [&](double lo, double hi, std::size_t n) {
        return sweep_grid(opt.lo.value_or(lo), opt.hi.value_or(hi), opt.points.value_or(n), SweepScale::Log);
    };
    const double bits = ctx.packet_bits;
    const wireless::WirelessConfig w50{50000.0, bits};
    TaskList list;

    switch (figure) {
        case 2:
        case 3: {
            // Outage vs η at μ̄/B = 1000 (figure 2) or vs μ̄/B at η = 50 (figure 3).
            const bool vs_eta = figure == 2;
            for (double x : vs_eta ? grid(1.0, 1000.0, 31) : grid(100.0, 1e5, 31)) {
                const double eta = vs_eta ? x : 50.0;
                const double mu_pkts = vs_eta ? 1000.0 : x;
                for (Variant v : all_variants()) {
                    const ScenarioId id{v, ctx.n_cn, ctx.n_ip};
                    for (const ArrivalShape& shape : arrivals) {
                        list.add_backhaul(x, id.name() + "/" + shape.label(),
                                          scenario_backhaul(id, mu_pkts * bits, bits), shape.at(eta),
                                          deadline_for(ctx, eta));
                    }
                }
            }
            break;
        }
        case 4: {
            const ScenarioId id{Variant::II, ctx.n_cn, ctx.n_ip};
            const auto cfg = scenario_backhaul(id, 1000.0 * bits, bits);
            for (double eta : grid(10.0, 1000.0, 41)) {
                const double d = deadline_for(ctx, eta);
                for (const ArrivalShape& shape : arrivals) list.add_backhaul(eta, shape.label(), cfg, shape.at(eta), d);
                list.tasks.push_back(Task{eta, "legacy", [cfg, eta, d] {
                                              return std::pair<double, std::optional<double>>(
                                                  backhaul::legacy_outage(cfg, eta, d), std::nullopt);
                                          }});
            }
            break;
        }
        case 5:
        case 6: {
            // Wireless outage vs η at W = 50 kHz (figure 5) or vs W at η = 100 (figure 6).
            const bool vs_eta = figure == 5;
            for (double x : vs_eta ? grid(10.0, 1000.0, 31) : grid(1e4, 1e6, 31)) {
                const double eta = vs_eta ? x : 100.0;
                const wireless::WirelessConfig w{vs_eta ? 50000.0 : x, bits};
                for (Variant v : all_variants()) {
                    const ScenarioId id{v, ctx.n_cn, ctx.n_ip};
                    for (const ArrivalShape& shape : arrivals) {
                        list.add_wireless(x, id.name() + "/" + shape.label(), ctx.hcn, id.neighbor_tier(), w,
                                          shape.at(eta), deadline_for(ctx, eta));
                    }
                }
            }
            break;
        }
        case 7: {
            const sir::HcnConfig equal = ctx.hcn.with_equal_alpha(3.5);
            for (double eta : grid(10.0, 1000.0, 31)) {
                const double d = deadline_for(ctx, eta);
                for (const ArrivalShape& shape : arrivals) {
                    list.add_wireless(eta, "different/" + shape.label(), ctx.hcn, 2, w50, shape.at(eta), d);
                    list.add_wireless(eta, "equal/" + shape.label(), equal, 2, w50, shape.at(eta), d);
                }
            }
            break;
        }
        case 8: {
            // Scenario I: both channels over (η, capacity ratio R_Ba / R_Wi).
            const ScenarioId id{Variant::I, ctx.n_cn, ctx.n_ip};
            const double r_wi = overhead_capacity(ctx.hcn, w50, id.neighbor_tier());
            const double n = static_cast<double>(id.servers());
            for (double eta : grid(10.0, 1000.0, 21)) {
                const double d = deadline_for(ctx, eta);
                for (const ArrivalShape& shape : arrivals) {
                    const ArrivalModel a = shape.at(eta);
                    list.add_wireless(eta, shape.label() + "/wireless", ctx.hcn, id.neighbor_tier(), w50, a, d);
                    for (int r = 1; r <= 10; ++r) {
                        const double ratio = 0.1 * r;
                        list.add_backhaul(eta, shape.label() + "/ratio=" + format_ratio(ratio) + "/backhaul",
                                          scenario_backhaul(id, ratio * r_wi * n * bits, bits), a, d);
                    }
                }
            }
            break;
        }
        default: throw DomainError("unknown figure " + std::to_string(figure) + " (expected 2..8)");
    }
    return evaluate(list, ctx);
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kCsvHeader << '\n';
    for (const SweepRow& r : rows) {
        os << format_number(r.x) << ',' << r.series << ',' << format_number(r.pe_analytic) << ',';
        if (r.pe_lb) os << format_number(*r.pe_lb);
        os << ',';
        if (r.mc) os << format_number(r.mc->mean) << ',' << format_number(r.mc->ci_low) << ',' << format_number(r.mc->ci_high);
        else os << ",,";
        os << '\n';
    }
}

}  // namespace oqc::scenarios
