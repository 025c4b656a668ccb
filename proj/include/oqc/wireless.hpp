#pragma once

// Wireless overhead signaling: a packet of B bits sent over bandwidth W sees
// delay D = B / (W log2(1 + SIR)); outage is D > min(T, d).

#include "oqc/arrivals.hpp"
#include "oqc/sir.hpp"

namespace oqc::wireless {

struct WirelessConfig {
    double bandwidth_hz = 0.0;
    double packet_bits = 0.0;
    void validate() const;
};

/// SIR needed to deliver the packet within x seconds: 2^{B/(Wx)} - 1.
double beta_of_deadline(const WirelessConfig& w, double x);

/// Outage for the SIR distribution `q` of the chosen neighbor tier.
double outage(const sir::SirCdf& q, const WirelessConfig& w, const ArrivalModel& a, double d);
/// Outage conditioned on the neighbor tier `h.neighbor_tier`.
double outage(const sir::HcnConfig& h, const WirelessConfig& w, const ArrivalModel& a, double d);

struct OutageBounds {
    double lower;
    double upper;
};

/// max(q(β(d)), E[q(β(T))]) <= p_e <= P(T >= d) q(β(d)) + P(T < d).
OutageBounds outage_bounds(const sir::SirCdf& q, const WirelessConfig& w, const ArrivalModel& a, double d);
OutageBounds outage_bounds(const sir::HcnConfig& h, const WirelessConfig& w, const ArrivalModel& a, double d);

/// Closed-form bandwidth bound for equal path-loss exponents:
/// W >= B / (d log2(1 + ζ(α) / (1 - p_e)^{α/2})). Any W meeting the target
/// must be at least this large; it is not sufficient on its own.
double min_bandwidth(double alpha, double packet_bits, double d, double target_pe);

/// Exact smallest W for deterministic arrivals and equal exponents, found by
/// inverting q(β(min(d, 1/η))) = target_pe.
double min_bandwidth_deterministic(double alpha, double packet_bits, double d, double eta, double target_pe);

}  // namespace oqc::wireless
