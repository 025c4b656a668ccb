#pragma once

// Monte Carlo oracles for the closed forms: tandem-server delays and SIR drawn
// from a simulated Poisson field of base stations.
//
// Work is split into a fixed number of random streams seeded from (seed,
// stream index). Threads only decide which stream runs where, so estimates are
// identical for any thread count.

#include "oqc/arrivals.hpp"
#include "oqc/backhaul.hpp"
#include "oqc/sir.hpp"
#include "oqc/wireless.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace oqc::sim {

inline constexpr unsigned kStreams = 16;

struct McSettings {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    double confidence = 0.99;
    /// Per-tier window radius R_k = factor / sqrt(λ_k).
    double field_radius_factor = 15.0;
    /// Worker cap; 0 means default_threads().
    unsigned threads = 0;
    /// Add the mean interference of the field beyond the window.
    bool tail_correction = true;

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::optional<std::string> warning;

    bool contains(double value) const noexcept { return value >= ci_low && value <= ci_high; }
};

/// OQC_THREADS if set and positive, otherwise the hardware concurrency.
unsigned default_threads();

/// Binomial estimate with a Wilson score interval at `confidence`.
McEstimate proportion(std::uint64_t hits, std::uint64_t n, double confidence);

/// Proportion of `trial` successes over s.samples independent draws.
McEstimate estimate_proportion(const std::function<bool(Rng&)>& trial, const McSettings& s);

double sample_backhaul_delay(const backhaul::BackhaulConfig& c, Rng& rng);

/// P(D > min(T, d)) with D and T drawn independently.
McEstimate estimate_backhaul_outage(const backhaul::BackhaulConfig& c, const ArrivalModel& a, double d,
                                    const McSettings& s);

/// P(D <= d).
McEstimate estimate_delay_cdf(const backhaul::BackhaulConfig& c, double d, const McSettings& s);

struct SirSample {
    std::size_t tier;  ///< 1-based tier of the strongest long-term BS
    double sir;
};

/// One field realization seen from a receiver at the origin.
SirSample sample_sir(const sir::HcnConfig& h, const McSettings& s, Rng& rng);

struct WirelessQuery {
    std::size_t tier;  ///< 1-based neighbor tier to condition on
    wireless::WirelessConfig link;
    ArrivalModel arrival;
    double deadline;
};

/// Outage for each query, with s.samples accepted fields per query. Fields are
/// shared across queries; queries on the same tier see the same SIR draws.
/// When a tier's acceptance rate drops below 1e-3 the estimate stops early and
/// carries a warning.
std::vector<McEstimate> estimate_wireless_outage(const sir::HcnConfig& h, const std::vector<WirelessQuery>& queries,
                                                 const McSettings& s);

/// Single query conditioned on h.neighbor_tier.
McEstimate estimate_wireless_outage(const sir::HcnConfig& h, const wireless::WirelessConfig& w,
                                    const ArrivalModel& a, double d, const McSettings& s);

/// Frequency of each serving tier over s.samples fields.
std::vector<McEstimate> estimate_association(const sir::HcnConfig& h, const McSettings& s);

/// P(SIR <= β | tier k).
McEstimate estimate_sir_cdf(const sir::HcnConfig& h, std::size_t k, double beta, const McSettings& s);

/// E[log2(1 + SIR) | tier k] with a normal interval from the sample variance.
McEstimate estimate_mean_log_se(const sir::HcnConfig& h, std::size_t k, const McSettings& s);

}  // namespace oqc::sim
