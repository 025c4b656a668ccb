#include "oqc/backhaul.hpp"

#include "oqc/errors.hpp"
#include "oqc/numerics.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>

namespace oqc::backhaul {

namespace {

constexpr double kRateResolution = 1e-9;

void check_deadline(double d) {
    if (!(d > 0.0)) throw DomainError("deadline must be positive");
}

// ln((Mη / (Mη + r))^M) = -M·log1p(r / (Mη)).
double log_outdating_factor(double m, double eta, double r) { return -m * std::log1p(r / (m * eta)); }

double erlang_density(std::size_t n, double r, double x) {
    if (x <= 0.0) return n == 1 ? r : 0.0;
    const double nn = static_cast<double>(n);
    return std::exp(nn * std::log(r) + (nn - 1.0) * std::log(x) - r * x - numerics::log_gamma(nn));
}

// P(D > d) without cancellation.
double delay_ccdf(const BackhaulConfig& c, double d) {
    if (d <= 0.0) return 1.0;
    if (std::isinf(d)) return 0.0;
    if (c.layout() == RateLayout::EqualRates) {
        const double r = c.mean_rate() / c.packet_bits();
        return numerics::reg_upper_gamma(static_cast<double>(c.size()), r * d);
    }
    const auto a = hypoexp_coefficients(c);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * std::exp(-c.service_rate(i) * d);
    return std::clamp(sum, 0.0, 1.0);
}

// Break points for quadratures that mix the interarrival law with an Erlang delay.
std::vector<double> mixing_breaks(const ArrivalModel& a, std::size_t n, double r) {
    std::vector<double> breaks;
    breaks.push_back(static_cast<double>(n - 1) / r);
    const double mean = 1.0 / a.rate();
    breaks.push_back(mean);
    if (a.kind() == ArrivalKind::Gamma) {
        const double sd = mean / std::sqrt(a.shape());
        for (double k : {-6.0, -3.0, -1.0, 1.0, 3.0, 6.0}) breaks.push_back(mean + k * sd);
    }
    return breaks;
}

double gamma_equal_rates_outage(const BackhaulConfig& c, const ArrivalModel& a, double d) {
    const std::size_t n = c.size();
    const double r = c.mean_rate() / c.packet_bits();
    // p_e = P(D > d) + ∫_0^d P(T < x) dP(D <= x)
    auto integrand = [&](double x) { return interarrival_cdf(a, x) * erlang_density(n, r, x); };
    const auto breaks = mixing_breaks(a, n, r);
    const double mixed = numerics::integrate(integrand, 0.0, d, breaks);
    return std::clamp(delay_ccdf(c, d) + mixed, 0.0, 1.0);
}

}  // namespace

BackhaulConfig::BackhaulConfig(std::vector<double> rates_bps, double packet_bits)
    : rates_(std::move(rates_bps)), packet_bits_(packet_bits), layout_(RateLayout::EqualRates) {
    if (rates_.empty()) throw ConfigError("backhaul needs at least one server");
    if (!(packet_bits_ > 0.0) || !std::isfinite(packet_bits_)) throw ConfigError("packet size B must be positive");
    for (double mu : rates_) {
        if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("server rates must be positive and finite");
    }
    if (rates_.size() == 1) return;

    std::vector<double> sorted = rates_;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.back() / sorted.front() - 1.0 <= kRateResolution) return;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if ((sorted[i] - sorted[i - 1]) / sorted[i] < kRateResolution) {
            std::ostringstream os;
            os << "server rates " << sorted[i - 1] << " and " << sorted[i]
               << " nearly coincide; make them equal or separate them by more than 1e-9 (relative)";
            throw ConfigError(os.str());
        }
    }
    layout_ = RateLayout::DistinctRates;
}

BackhaulConfig BackhaulConfig::equal(std::size_t servers, double mean_rate_bps, double packet_bits) {
    if (servers == 0) throw ConfigError("backhaul needs at least one server");
    return {std::vector<double>(servers, mean_rate_bps), packet_bits};
}

double BackhaulConfig::mean_rate() const noexcept {
    return std::accumulate(rates_.begin(), rates_.end(), 0.0) / static_cast<double>(rates_.size());
}

BackhaulConfig BackhaulConfig::shifted(double delta_bps) const {
    auto r = rates_;
    for (double& mu : r) mu += delta_bps;
    return {std::move(r), packet_bits_};
}

BackhaulConfig BackhaulConfig::scaled(double factor) const {
    auto r = rates_;
    for (double& mu : r) mu *= factor;
    return {std::move(r), packet_bits_};
}

double effective_rate(const SchedulingPolicy& p) {
    if (!(p.total_rate_bps > 0.0)) throw DomainError("total server rate must be positive");
    if (!(p.cross_traffic_bps >= 0.0)) throw DomainError("cross-traffic rate must be nonnegative");
    const double mu = p.kind == Scheduling::Preemptive ? p.total_rate_bps : p.total_rate_bps - p.cross_traffic_bps;
    if (!(mu > 0.0)) throw InfeasibleError("cross traffic leaves no rate for overhead packets");
    return mu;
}

std::vector<double> hypoexp_coefficients(const BackhaulConfig& c) {
    const auto& mu = c.rates();
    if (mu.size() == 1) return {1.0};
    if (c.layout() != RateLayout::DistinctRates) {
        throw ConfigError("hypoexponential coefficients need distinct rates; use the Erlang path for equal rates");
    }
    std::vector<double> a(mu.size(), 1.0);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t j = 0; j < mu.size(); ++j) {
            if (j != i) a[i] *= mu[j] / (mu[j] - mu[i]);
        }
    }
    return a;
}

double delay_cdf(const BackhaulConfig& c, double d) {
    if (!(d >= 0.0)) throw DomainError("delay_cdf: d must be nonnegative");
    if (d == 0.0) return 0.0;
    if (std::isinf(d)) return 1.0;
    if (c.layout() == RateLayout::EqualRates) {
        const double r = c.mean_rate() / c.packet_bits();
        return numerics::reg_lower_gamma(static_cast<double>(c.size()), r * d);
    }
    const auto a = hypoexp_coefficients(c);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum -= a[i] * std::expm1(-c.service_rate(i) * d);
    return std::clamp(sum, 0.0, 1.0);
}

double outage(const BackhaulConfig& c, const ArrivalModel& a, double d) {
    check_deadline(d);
    const double eta = a.rate();
    const double B = c.packet_bits();
    const double n = static_cast<double>(c.size());

    switch (a.kind()) {
        case ArrivalKind::Deterministic:
            return delay_ccdf(c, std::min(d, 1.0 / eta));

        case ArrivalKind::Poisson: {
            if (c.layout() == RateLayout::EqualRates) {
                const double r = c.mean_rate() / B;
                const double log_scale = -n * std::log1p(eta / r);
                const double cdf = std::isinf(d) ? 1.0 : numerics::reg_lower_gamma(n, (r + eta) * d);
                return std::clamp(1.0 - std::exp(log_scale) * cdf, 0.0, 1.0);
            }
            double log_scale = 0.0;
            for (double mu : c.rates()) log_scale -= std::log1p(eta * B / mu);
            const double cdf = delay_cdf(c.shifted(eta * B), d);
            return std::clamp(1.0 - std::exp(log_scale) * cdf, 0.0, 1.0);
        }

        case ArrivalKind::Gamma:
            break;
    }

    if (c.layout() == RateLayout::EqualRates) return gamma_equal_rates_outage(c, a, d);

    const double m = a.shape();
    const auto coeff = hypoexp_coefficients(c);
    const double survival_d = numerics::reg_upper_gamma(m, m * eta * d);
    double pe = 0.0;
    for (std::size_t i = 0; i < coeff.size(); ++i) {
        const double r = c.service_rate(i);
        const double late = survival_d * std::exp(-r * d);
        const double reach = std::isinf(d) ? 1.0 : numerics::reg_lower_gamma(m, (m * eta + r) * d);
        const double outdated = reach * std::exp(log_outdating_factor(m, eta, r));
        pe += coeff[i] * (late + outdated);
    }
    return std::clamp(pe, 0.0, 1.0);
}

LowerBound outage_lower_bound(const BackhaulConfig& c, const ArrivalModel& a, double d) {
    check_deadline(d);
    LowerBound lb{delay_ccdf(c, d), 0.0};
    const double eta = a.rate();

    if (a.kind() == ArrivalKind::Deterministic) {
        lb.outdated_only = delay_ccdf(c, 1.0 / eta);
        return lb;
    }

    const double m = a.shape();
    if (c.layout() == RateLayout::DistinctRates) {
        const auto coeff = hypoexp_coefficients(c);
        double sum = 0.0;
        for (std::size_t i = 0; i < coeff.size(); ++i) {
            sum += coeff[i] * std::exp(log_outdating_factor(m, eta, c.service_rate(i)));
        }
        lb.outdated_only = std::clamp(sum, 0.0, 1.0);
        return lb;
    }

    const std::size_t n = c.size();
    const double r = c.mean_rate() / c.packet_bits();
    if (a.has_integer_shape()) {
        // P(D <= T) = Σ_{k<M} C(k+N-1, N-1) p^k (1-p)^N with p = Mη/(Mη + r).
        const double log_p = -std::log1p(r / (m * eta));
        const double log_q = -std::log1p(m * eta / r);
        const double nn = static_cast<double>(n);
        double on_time = 0.0;
        for (int k = 0; k < static_cast<int>(m); ++k) {
            on_time += std::exp(numerics::log_binomial(k + nn - 1.0, nn - 1.0) + k * log_p + nn * log_q);
        }
        lb.outdated_only = std::clamp(1.0 - on_time, 0.0, 1.0);
        return lb;
    }

    auto integrand = [&](double x) { return interarrival_cdf(a, x) * erlang_density(n, r, x); };
    const auto breaks = mixing_breaks(a, n, r);
    lb.outdated_only = std::clamp(numerics::integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), breaks),
                                  0.0, 1.0);
    return lb;
}

double legacy_outage(const BackhaulConfig& c, double eta, double d) {
    check_deadline(d);
    if (!(eta > 0.0)) throw DomainError("legacy_outage: eta must be positive");
    double mean_delay = 0.0;
    for (double mu : c.rates()) mean_delay += c.packet_bits() / mu;
    const double budget = std::min(d, 1.0 / eta);
    // Relative slack of 1e-12 absorbs rounding in budgets such as 0.3/η.
    return mean_delay <= budget * (1.0 + 1e-12) ? 0.0 : 1.0;
}

ServerRateRequirement min_server_rate(std::size_t servers, const ArrivalModel& a, double packet_bits, double d,
                                      double target_pe) {
    if (servers == 0) throw DomainError("min_server_rate: need at least one server");
    if (!(target_pe > 0.0 && target_pe < 1.0)) throw DomainError("min_server_rate: target p_e must lie in (0, 1)");
    if (!(packet_bits > 0.0)) throw DomainError("min_server_rate: B must be positive");
    check_deadline(d);

    const double n = static_cast<double>(servers);
    const double quantile = numerics::inv_reg_lower_gamma(n, 1.0 - target_pe);
    ServerRateRequirement req;

    if (a.kind() == ArrivalKind::Deterministic) {
        req.deadline_bound_bps = packet_bits / std::min(d, 1.0 / a.rate()) * quantile;
        req.mean_rate_bps = req.deadline_bound_bps;
        req.note = "deterministic arrivals: exact inversion with deadline min(d, 1/eta)";
        return req;
    }

    req.deadline_bound_bps = packet_bits / d * quantile;
    req.mean_rate_bps = req.deadline_bound_bps;
    if (!a.has_integer_shape()) {
        req.note = "outdating bound needs an integer gamma shape; only the deadline bound applies";
        return req;
    }

    const double m = a.shape();
    const double root = std::pow(1.0 - target_pe, 1.0 / n);
    const double binom_root = std::exp(numerics::log_binomial(m + n - 1.0, n) / n);
    const double denom = binom_root - root;
    if (!(denom > 0.0)) {
        req.feasible = false;
        req.note = "outdating bound has a nonpositive denominator: target unreachable at any rate";
        return req;
    }
    const double outdating = m * a.rate() * packet_bits * root / denom;
    req.outdating_bound_bps = outdating;
    if (outdating > req.mean_rate_bps) {
        req.mean_rate_bps = outdating;
        req.binding = BindingBound::Outdating;
    }
    return req;
}

std::string to_string(RateLayout layout) {
    return layout == RateLayout::EqualRates ? "equal" : "distinct";
}

std::string to_string(BindingBound b) { return b == BindingBound::Deadline ? "deadline" : "outdating"; }

}  // namespace oqc::backhaul
