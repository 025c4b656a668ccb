#pragma once

// Overhead packet interarrival time T: a renewal process with rate η whose
// interarrival time is Gamma(M, 1/(Mη)). Poisson (M = 1) and deterministic
// (M → ∞) arrivals are separate variants with their own closed forms.

#include <random>
#include <string>

namespace oqc {

using Rng = std::mt19937_64;

enum class ArrivalKind { Gamma, Poisson, Deterministic };

class ArrivalModel {
public:
    static ArrivalModel gamma(double rate_eta, double shape_m);
    static ArrivalModel poisson(double rate_eta);
    static ArrivalModel deterministic(double rate_eta);

    ArrivalKind kind() const noexcept { return kind_; }
    double rate() const noexcept { return rate_; }

    /// Gamma shape M. Poisson reports 1; Deterministic reports +infinity.
    double shape() const noexcept;

    /// True when the shape is a positive integer (Poisson included).
    bool has_integer_shape() const noexcept;

    ArrivalModel with_rate(double rate_eta) const;

    /// "deterministic", "poisson" or "gamma(M=4)".
    std::string label() const;

private:
    ArrivalModel(ArrivalKind kind, double rate, double shape);

    ArrivalKind kind_;
    double rate_;
    double shape_;
};

/// E[T] = 1/η for every variant.
double mean_interarrival(const ArrivalModel& a);

/// P(T >= t). Throws DomainError for negative t.
double survival(const ArrivalModel& a, double t);

/// P(T <= t). Deterministic arrivals give the step 1(t >= 1/η).
double interarrival_cdf(const ArrivalModel& a, double t);

/// Density of T; undefined (DomainError) for Deterministic arrivals.
double interarrival_density(const ArrivalModel& a, double t);

double sample_interarrival(const ArrivalModel& a, Rng& rng);

}  // namespace oqc
