#include "oqc/wireless.hpp"

#include "oqc/errors.hpp"
#include "oqc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace oqc::wireless {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_deadline(double d) {
    if (!(d > 0.0)) throw DomainError("deadline must be positive");
}

void check_probability(double p, const char* what) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError(std::string(what) + " must lie in (0, 1)");
}

// Points where q(β(x)) f_T(x) changes shape quickly: the gamma peak and the
// SIR threshold transition around x = B/W.
std::vector<double> mixing_breaks(const WirelessConfig& w, const ArrivalModel& a) {
    std::vector<double> pts;
    const double eta = a.rate();
    const double m = a.shape();
    const double mean = 1.0 / eta;
    const double sd = mean / std::sqrt(m);
    pts.push_back(mean);
    if (m > 1.0) pts.push_back((m - 1.0) / (m * eta));
    for (double k : {1.0, 3.0, 6.0}) {
        pts.push_back(mean - k * sd);
        pts.push_back(mean + k * sd);
    }
    const double x0 = w.packet_bits / w.bandwidth_hz;
    for (double k : {0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 20.0}) pts.push_back(k * x0);
    return pts;
}

// ∫_0^upper q(β(x)) f_T(x) dx for arrivals with a density.
double mixed_sir_cdf(const sir::SirCdf& q, const WirelessConfig& w, const ArrivalModel& a, double upper) {
    auto f = [&](double x) {
        if (x == 0.0) return a.shape() == 1.0 ? a.rate() : 0.0;
        const double dens = interarrival_density(a, x);
        if (dens == 0.0) return 0.0;
        return q(beta_of_deadline(w, x)) * dens;
    };
    const std::vector<double> breaks = mixing_breaks(w, a);
    return numerics::integrate(f, 0.0, upper, breaks);
}

}  // namespace

void WirelessConfig::validate() const {
    if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) throw ConfigError("bandwidth must be positive");
    if (!(packet_bits > 0.0) || !std::isfinite(packet_bits)) throw ConfigError("packet size must be positive");
}

double beta_of_deadline(const WirelessConfig& w, double x) {
    w.validate();
    if (!(x > 0.0)) throw DomainError("beta_of_deadline: x must be positive");
    return std::expm1(w.packet_bits * std::numbers::ln2 / (w.bandwidth_hz * x));
}

double outage(const sir::SirCdf& q, const WirelessConfig& w, const ArrivalModel& a, double d) {
    w.validate();
    check_deadline(d);
    if (a.kind() == ArrivalKind::Deterministic) return q(beta_of_deadline(w, std::min(d, 1.0 / a.rate())));

    const double tail = std::isinf(d) ? 0.0 : survival(a, d) * q(beta_of_deadline(w, d));
    return std::clamp(tail + mixed_sir_cdf(q, w, a, d), 0.0, 1.0);
}

double outage(const sir::HcnConfig& h, const WirelessConfig& w, const ArrivalModel& a, double d) {
    h.validate();
    return outage(sir::tabulated_sir_cdf(h, h.neighbor_tier), w, a, d);
}

OutageBounds outage_bounds(const sir::SirCdf& q, const WirelessConfig& w, const ArrivalModel& a, double d) {
    w.validate();
    check_deadline(d);
    const double at_deadline = std::isinf(d) ? 0.0 : q(beta_of_deadline(w, d));
    double outdated = 0.0;
    if (a.kind() == ArrivalKind::Deterministic) {
        outdated = q(beta_of_deadline(w, 1.0 / a.rate()));
    } else {
        outdated = mixed_sir_cdf(q, w, a, kInf);
    }
    const double before = std::isinf(d) ? 1.0 : interarrival_cdf(a, d);
    const double after = std::isinf(d) ? 0.0 : survival(a, d);
    return {std::max(at_deadline, outdated), std::min(1.0, after * at_deadline + before)};
}

OutageBounds outage_bounds(const sir::HcnConfig& h, const WirelessConfig& w, const ArrivalModel& a, double d) {
    h.validate();
    return outage_bounds(sir::tabulated_sir_cdf(h, h.neighbor_tier), w, a, d);
}

double min_bandwidth(double alpha, double packet_bits, double d, double target_pe) {
    if (!(alpha > 2.0) || !std::isfinite(alpha)) throw DomainError("path-loss exponent must exceed 2");
    if (!(packet_bits > 0.0)) throw DomainError("packet size must be positive");
    check_deadline(d);
    check_probability(target_pe, "target outage");
    const double beta = sir::zeta(alpha) / std::pow(1.0 - target_pe, 0.5 * alpha);
    return packet_bits / (d * std::log2(1.0 + beta));
}

double min_bandwidth_deterministic(double alpha, double packet_bits, double d, double eta, double target_pe) {
    if (!(alpha > 2.0) || !std::isfinite(alpha)) throw DomainError("path-loss exponent must exceed 2");
    if (!(packet_bits > 0.0)) throw DomainError("packet size must be positive");
    if (!(eta > 0.0)) throw DomainError("arrival rate must be positive");
    check_deadline(d);
    check_probability(target_pe, "target outage");

    // Largest SIR threshold with q(β) <= target, then the bandwidth that makes
    // β(min(d, 1/η)) equal to it.
    auto g = [&](double log_beta) { return sir::sir_cdf_equal_alpha(std::exp(log_beta), alpha) - target_pe; };
    double lo = -1.0;
    double hi = 1.0;
    while (g(lo) > 0.0) lo -= 4.0;
    while (g(hi) < 0.0) hi += 4.0;
    const double beta = std::exp(numerics::find_root(g, lo, hi));
    const double x = std::min(d, 1.0 / eta);
    return packet_bits * std::numbers::ln2 / (x * std::log1p(beta));
}

}  // namespace oqc::wireless
