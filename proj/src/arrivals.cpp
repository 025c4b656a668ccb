#include "oqc/arrivals.hpp"

#include "oqc/errors.hpp"
#include "oqc/numerics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace oqc {

ArrivalModel::ArrivalModel(ArrivalKind kind, double rate, double shape)
    : kind_(kind), rate_(rate), shape_(shape) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("arrival rate must be positive and finite");
}

ArrivalModel ArrivalModel::gamma(double rate_eta, double shape_m) {
    if (!(shape_m >= 1.0) || !std::isfinite(shape_m)) throw DomainError("gamma arrival shape M must be finite and >= 1");
    return {ArrivalKind::Gamma, rate_eta, shape_m};
}

ArrivalModel ArrivalModel::poisson(double rate_eta) { return {ArrivalKind::Poisson, rate_eta, 1.0}; }

ArrivalModel ArrivalModel::deterministic(double rate_eta) {
    return {ArrivalKind::Deterministic, rate_eta, std::numeric_limits<double>::infinity()};
}

double ArrivalModel::shape() const noexcept { return shape_; }

bool ArrivalModel::has_integer_shape() const noexcept {
    return kind_ != ArrivalKind::Deterministic && shape_ == std::floor(shape_);
}

ArrivalModel ArrivalModel::with_rate(double rate_eta) const { return {kind_, rate_eta, shape_}; }

std::string ArrivalModel::label() const {
    switch (kind_) {
        case ArrivalKind::Poisson: return "poisson";
        case ArrivalKind::Deterministic: return "deterministic";
        case ArrivalKind::Gamma: break;
    }
    std::ostringstream os;
    os << "gamma(M=" << shape_ << ")";
    return os.str();
}

double mean_interarrival(const ArrivalModel& a) { return 1.0 / a.rate(); }

double survival(const ArrivalModel& a, double t) {
    if (!(t >= 0.0)) throw DomainError("survival: t must be nonnegative");
    const double eta = a.rate();
    switch (a.kind()) {
        case ArrivalKind::Poisson: return std::exp(-eta * t);
        case ArrivalKind::Deterministic: return t <= 1.0 / eta ? 1.0 : 0.0;
        case ArrivalKind::Gamma: break;
    }
    const double m = a.shape();
    return numerics::reg_upper_gamma(m, m * eta * t);
}

double interarrival_cdf(const ArrivalModel& a, double t) {
    if (!(t >= 0.0)) throw DomainError("interarrival_cdf: t must be nonnegative");
    const double eta = a.rate();
    switch (a.kind()) {
        case ArrivalKind::Poisson: return -std::expm1(-eta * t);
        case ArrivalKind::Deterministic: return t >= 1.0 / eta ? 1.0 : 0.0;
        case ArrivalKind::Gamma: break;
    }
    const double m = a.shape();
    return numerics::reg_lower_gamma(m, m * eta * t);
}

double interarrival_density(const ArrivalModel& a, double t) {
    if (!(t >= 0.0)) throw DomainError("interarrival_density: t must be nonnegative");
    const double eta = a.rate();
    switch (a.kind()) {
        case ArrivalKind::Poisson: return eta * std::exp(-eta * t);
        case ArrivalKind::Deterministic: throw DomainError("deterministic arrivals have no density");
        case ArrivalKind::Gamma: break;
    }
    const double m = a.shape();
    if (t == 0.0) return m == 1.0 ? eta : 0.0;
    const double rate = m * eta;
    return std::exp(m * std::log(rate) + (m - 1.0) * std::log(t) - rate * t - numerics::log_gamma(m));
}

double sample_interarrival(const ArrivalModel& a, Rng& rng) {
    const double eta = a.rate();
    switch (a.kind()) {
        case ArrivalKind::Deterministic: return 1.0 / eta;
        case ArrivalKind::Poisson: return std::exponential_distribution<double>(eta)(rng);
        case ArrivalKind::Gamma: break;
    }
    const double m = a.shape();
    return std::gamma_distribution<double>(m, 1.0 / (m * eta))(rng);
}

}  // namespace oqc
