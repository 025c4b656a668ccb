#include "oqc/validation.hpp"

#include "oqc/backhaul.hpp"
#include "oqc/numerics.hpp"
#include "oqc/scenarios.hpp"
#include "oqc/simulate.hpp"
#include "oqc/sir.hpp"
#include "oqc/wireless.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace oqc::validation {

namespace {

using backhaul::BackhaulConfig;

double per_point_confidence(double family, std::size_t points) {
    return 1.0 - (1.0 - family) / static_cast<double>(points);
}

sim::McSettings mc_settings(const ValidationOptions& opt, double confidence) {
    sim::McSettings s;
    s.samples = opt.samples;
    s.seed = opt.seed;
    s.confidence = confidence;
    s.threads = opt.threads;
    return s;
}

std::vector<ArrivalModel> arrival_set(double eta) {
    return {ArrivalModel::deterministic(eta), ArrivalModel::poisson(eta), ArrivalModel::gamma(eta, 4.0)};
}

CheckResult backhaul_mc_grid(const ValidationOptions& opt) {
    CheckResult r{"backhaul_mc_grid", true, ""};
    const double conf = per_point_confidence(opt.confidence, 18);
    std::ostringstream misses;
    std::size_t i = 0;
    for (std::size_t n : {1, 3, 22}) {
        for (int kind = 0; kind < 3; ++kind) {
            for (double eta : {10.0, 100.0}) {
                const ArrivalModel a = arrival_set(eta)[kind];
                const auto cfg = BackhaulConfig::equal(n, 1000.0 * 30.0, 30.0);
                const double d = 0.3 / eta;
                sim::McSettings s = mc_settings(opt, conf);
                s.seed = opt.seed + 7919 * (++i);
                const double exact = backhaul::outage(cfg, a, d);
                const auto est = sim::estimate_backhaul_outage(cfg, a, d, s);
                if (!est.contains(exact)) {
                    r.pass = false;
                    misses << "N=" << n << " " << a.label() << " eta=" << eta << ": " << exact << " not in ["
                           << est.ci_low << ", " << est.ci_high << "]; ";
                }
            }
        }
    }
    r.detail = r.pass ? std::to_string(i) + " points inside the per-point CI" : misses.str();
    return r;
}

CheckResult wireless_mc_grid(const ValidationOptions& opt) {
    CheckResult r{"wireless_mc_grid", true, ""};
    sir::HcnConfig h = scenarios::table1_hcn();
    const wireless::WirelessConfig w{50000.0, 30.0};
    const double eta = 100.0;
    const double d = 0.3 / eta;
    std::vector<sim::WirelessQuery> queries;
    for (std::size_t k = 1; k <= 3; ++k) {
        queries.push_back({k, w, ArrivalModel::deterministic(eta), d});
        queries.push_back({k, w, ArrivalModel::poisson(eta), d});
    }
    const auto est = sim::estimate_wireless_outage(h, queries, mc_settings(opt, per_point_confidence(opt.confidence, 6)));
    std::ostringstream misses;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        h.neighbor_tier = queries[i].tier;
        const double exact = wireless::outage(h, w, queries[i].arrival, d);
        if (!est[i].contains(exact)) {
            r.pass = false;
            misses << "k=" << queries[i].tier << " " << queries[i].arrival.label() << ": " << exact << " not in ["
                   << est[i].ci_low << ", " << est[i].ci_high << "]; ";
        }
    }
    r.detail = r.pass ? "6 points inside the per-point CI" : misses.str();
    return r;
}

CheckResult association(const ValidationOptions& opt) {
    CheckResult r{"association", true, ""};
    const sir::HcnConfig h = scenarios::table1_hcn();
    double sum = 0.0;
    std::vector<double> exact;
    for (std::size_t k = 1; k <= h.size(); ++k) {
        exact.push_back(sir::association_probability(h, k));
        sum += exact.back();
    }
    const auto est = sim::estimate_association(h, mc_settings(opt, 0.99));
    std::ostringstream os;
    os << "sum=" << sum;
    if (std::abs(sum - 1.0) > 1e-6) r.pass = false;
    for (std::size_t k = 0; k < exact.size(); ++k) {
        const double z = std::abs(est[k].mean - exact[k]) / std::max(est[k].std_error, 1e-300);
        os << "; tier " << k + 1 << " " << exact[k] << " vs " << est[k].mean << " (" << z << " SE)";
        if (z > 3.0) r.pass = false;
    }
    r.detail = os.str();
    return r;
}

CheckResult hypoexp_identities(std::mt19937_64& rng) {
    CheckResult r{"hypoexp_identities", true, ""};
    std::uniform_int_distribution<int> count(2, 6);
    std::uniform_real_distribution<double> rate(500.0, 5000.0);
    std::uniform_real_distribution<double> shift(0.0, 3000.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> mu;
        const int n = count(rng);
        while (static_cast<int>(mu.size()) < n) {
            const double v = rate(rng) * 30.0;
            bool separated = true;
            for (double m : mu) separated = separated && std::abs(m - v) > 0.05 * v;
            if (separated) mu.push_back(v);
        }
        const BackhaulConfig c(mu, 30.0);
        const auto a = backhaul::hypoexp_coefficients(c);
        double sum = 0.0;
        for (double ai : a) sum += ai;
        worst = std::max(worst, std::abs(sum - 1.0));
        const double x = shift(rng);
        double lhs = 0.0;
        double rhs = 1.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double ri = c.service_rate(i);
            lhs += a[i] * ri / (ri + x);
            rhs *= ri / (ri + x);
        }
        worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    r.pass = worst <= 1e-9;
    r.detail = "worst relative residual " + std::to_string(worst);
    return r;
}

CheckResult gamma_round_trip(std::mt19937_64& rng) {
    CheckResult r{"gamma_round_trip", true, ""};
    std::uniform_real_distribution<double> shape(0.5, 60.0);
    std::uniform_real_distribution<double> prob(1e-6, 1.0 - 1e-6);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const double s = shape(rng);
        const double p = prob(rng);
        const double x = numerics::inv_reg_lower_gamma(s, p);
        worst = std::max(worst, std::abs(numerics::reg_lower_gamma(s, x) - p));
    }
    r.pass = worst <= 1e-8;
    r.detail = "worst |P(s, P^-1(s, p)) - p| = " + std::to_string(worst);
    return r;
}

CheckResult z_function_checks(std::mt19937_64& rng) {
    CheckResult r{"z_function", true, ""};
    std::uniform_real_distribution<double> log_beta(std::log(1e-4), std::log(1e4));
    std::uniform_real_distribution<double> alpha(2.2, 6.0);
    double worst = 0.0;
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double b = std::exp(log_beta(rng));
        const double exact = std::sqrt(b) * std::atan(std::sqrt(b));
        worst = std::max(worst, std::abs(sir::z_function(b, 4.0) - exact) / std::max(1.0, exact));
        const double al = alpha(rng);
        if (sir::z_function(b, al) < std::pow(b, 2.0 / al) * sir::z_asymptote_constant(al) - 1.0 - 1e-12) ++violations;
    }
    r.pass = worst <= 1e-9 && violations == 0;
    r.detail = "alpha=4 worst error " + std::to_string(worst) + ", asymptote violations " + std::to_string(violations);
    return r;
}

CheckResult equal_alpha_closed_form() {
    CheckResult r{"equal_alpha_closed_form", true, ""};
    double worst = 0.0;
    for (double al : {2.5, 3.0, 3.5, 4.0, 5.0}) {
        const sir::HcnConfig h = scenarios::table1_hcn().with_equal_alpha(al);
        for (std::size_t k = 1; k <= 3; ++k) {
            for (double b : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
                worst = std::max(worst, std::abs(sir::sir_cdf(h, k, b) - sir::sir_cdf_equal_alpha(b, al)));
            }
        }
    }
    r.pass = worst <= 1e-6;
    r.detail = "worst difference " + std::to_string(worst);
    return r;
}

CheckResult orderings_and_bounds() {
    CheckResult r{"orderings_and_bounds", true, ""};
    std::ostringstream bad;
    int points = 0;
    const sir::HcnConfig table1 = scenarios::table1_hcn();
    for (double eta : {5.0, 20.0, 50.0, 100.0, 300.0, 1000.0}) {
        const double d = 0.3 / eta;
        for (std::size_t n : {1, 3, 11, 22}) {
            const auto cfg = BackhaulConfig::equal(n, 1000.0 * 30.0, 30.0);
            const double det = backhaul::outage(cfg, ArrivalModel::deterministic(eta), d);
            for (double m : {1.0, 2.0, 4.0, 8.0}) {
                const ArrivalModel a = ArrivalModel::gamma(eta, m);
                const double pe = backhaul::outage(cfg, a, d);
                const double lb = backhaul::outage_lower_bound(cfg, a, d).value();
                ++points;
                if (det > pe + 1e-12 || lb > pe + 1e-12) {
                    r.pass = false;
                    bad << "backhaul N=" << n << " M=" << m << " eta=" << eta << "; ";
                }
            }
        }
        const wireless::WirelessConfig w{50000.0, 30.0};
        for (std::size_t k = 1; k <= 3; ++k) {
            sir::HcnConfig h = table1;
            h.neighbor_tier = k;
            const double det = wireless::outage(h, w, ArrivalModel::deterministic(eta), d);
            for (double m : {1.0, 2.0, 4.0, 8.0}) {
                const ArrivalModel a = ArrivalModel::gamma(eta, m);
                const double pe = wireless::outage(h, w, a, d);
                const auto b = wireless::outage_bounds(h, w, a, d);
                ++points;
                if (det > pe + 1e-9 || b.lower > pe + 1e-9 || b.upper < pe - 1e-9) {
                    r.pass = false;
                    bad << "wireless k=" << k << " M=" << m << " eta=" << eta << "; ";
                }
            }
        }
    }
    r.detail = r.pass ? std::to_string(points) + " grid points ordered and bounded" : bad.str();
    return r;
}

CheckResult equal_allocation(std::mt19937_64& rng) {
    CheckResult r{"equal_allocation_optimal", true, ""};
    std::uniform_real_distribution<double> unit(0.2, 1.0);
    const std::size_t n = 3;
    const double total = 3.0 * 1000.0 * 30.0;
    const double eta = 50.0;
    const double d = 0.3 / eta;
    int failures = 0;
    for (const ArrivalModel& a : arrival_set(eta)) {
        const double equal = backhaul::outage(BackhaulConfig::equal(n, total / n, 30.0), a, d);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> w(n);
            double sum = 0.0;
            for (double& v : w) sum += (v = unit(rng));
            std::vector<double> mu;
            for (double v : w) mu.push_back(total * v / sum);
            std::sort(mu.begin(), mu.end());
            bool separated = true;
            for (std::size_t i = 1; i < n; ++i) separated = separated && (mu[i] - mu[i - 1]) > 1e-3 * mu[i];
            if (!separated) continue;
            if (backhaul::outage(BackhaulConfig(mu, 30.0), a, d) < equal - 1e-12) ++failures;
        }
    }
    r.pass = failures == 0;
    r.detail = std::to_string(failures) + " unequal allocations beat the equal split";
    return r;
}

CheckResult server_rate_round_trip() {
    CheckResult r{"server_rate_round_trip", true, ""};
    double worst = 0.0;
    for (std::size_t n : {1, 3, 11, 22}) {
        for (double eta : {10.0, 100.0}) {
            for (double target : {0.01, 0.05, 0.1, 0.3}) {
                const ArrivalModel a = ArrivalModel::deterministic(eta);
                const double d = 0.3 / eta;
                const auto req = backhaul::min_server_rate(n, a, 30.0, d, target);
                const double pe = backhaul::outage(BackhaulConfig::equal(n, req.mean_rate_bps, 30.0), a, d);
                worst = std::max(worst, std::abs(pe - target) / target);
            }
        }
    }
    r.pass = worst <= 1e-6;
    r.detail = "worst relative error " + std::to_string(worst);
    return r;
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    std::vector<CheckResult> out;
    out.push_back(hypoexp_identities(rng));
    out.push_back(gamma_round_trip(rng));
    out.push_back(z_function_checks(rng));
    out.push_back(equal_alpha_closed_form());
    out.push_back(orderings_and_bounds());
    out.push_back(equal_allocation(rng));
    out.push_back(server_rate_round_trip());
    out.push_back(association(opt));
    out.push_back(backhaul_mc_grid(opt));
    out.push_back(wireless_mc_grid(opt));
    return out;
}

}  // namespace oqc::validation
