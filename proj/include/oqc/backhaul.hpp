#pragma once

// Backhaul overhead signaling over N tandem exponential servers. The end-to-end
// delay D is hypoexponential (distinct server rates) or Erlang (equal rates);
// a packet is in outage when D exceeds the deadline or the next interarrival.

#include "oqc/arrivals.hpp"

#include <optional>
#include <string>
#include <vector>

namespace oqc::backhaul {

enum class RateLayout { EqualRates, DistinctRates };

/// Per-server overhead bit rates μ_i (bits/s) and packet size B (bits).
class BackhaulConfig {
public:
    /// Throws ConfigError when the rates are neither all equal nor pairwise
    /// separated (relative 1e-9).
    BackhaulConfig(std::vector<double> rates_bps, double packet_bits);

    static BackhaulConfig equal(std::size_t servers, double mean_rate_bps, double packet_bits);

    const std::vector<double>& rates() const noexcept { return rates_; }
    double packet_bits() const noexcept { return packet_bits_; }
    std::size_t size() const noexcept { return rates_.size(); }
    RateLayout layout() const noexcept { return layout_; }

    /// μ̄ = Σ μ_i / N.
    double mean_rate() const noexcept;
    /// Packet service rate μ_i / B of server i.
    double service_rate(std::size_t i) const { return rates_.at(i) / packet_bits_; }

    /// Copy with every rate shifted by `delta_bps`.
    BackhaulConfig shifted(double delta_bps) const;
    /// Copy with every rate multiplied by `factor`.
    BackhaulConfig scaled(double factor) const;

private:
    std::vector<double> rates_;
    double packet_bits_;
    RateLayout layout_;
};

enum class Scheduling { Preemptive, HighPriority, EqualPriority };

struct SchedulingPolicy {
    Scheduling kind = Scheduling::Preemptive;
    double total_rate_bps = 0.0;
    double cross_traffic_bps = 0.0;  ///< ν_rt or ν_d; ignored when preemptive
};

/// Rate left for overhead after cross traffic. Throws InfeasibleError if <= 0.
double effective_rate(const SchedulingPolicy& p);

/// a_i = Π_{j≠i} μ_j / (μ_j - μ_i). Requires DistinctRates (or N = 1).
std::vector<double> hypoexp_coefficients(const BackhaulConfig& c);

/// P(D <= d).
double delay_cdf(const BackhaulConfig& c, double d);

/// Outage probability p_e = 1 - P(D <= T, D <= d).
double outage(const BackhaulConfig& c, const ArrivalModel& a, double d);

struct LowerBound {
    double deadline_only;  ///< η → 0: 1 - P(D <= d)
    double outdated_only;  ///< d → ∞: P(D > T)
    double value() const noexcept { return deadline_only > outdated_only ? deadline_only : outdated_only; }
};

LowerBound outage_lower_bound(const BackhaulConfig& c, const ArrivalModel& a, double d);

/// Constant-delay, constant-interarrival model: 1 unless Σ B/μ_i <= min(d, 1/η).
double legacy_outage(const BackhaulConfig& c, double eta, double d);

enum class BindingBound { Deadline, Outdating };

struct ServerRateRequirement {
    bool feasible = true;
    double mean_rate_bps = 0.0;               ///< max of the applicable bounds
    BindingBound binding = BindingBound::Deadline;
    double deadline_bound_bps = 0.0;          ///< (B/d)·P^{-1}(N, 1 - p_e)
    std::optional<double> outdating_bound_bps;  ///< integer-shape arrivals only
    std::string note;
};

/// Smallest equal server rate μ̄ meeting `target_pe` with N servers.
ServerRateRequirement min_server_rate(std::size_t servers, const ArrivalModel& a, double packet_bits,
                                      double d, double target_pe);

std::string to_string(RateLayout layout);
std::string to_string(BindingBound b);

}  // namespace oqc::backhaul
