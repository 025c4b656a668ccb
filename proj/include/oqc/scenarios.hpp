#pragma once

// Reference three-tier network, the backhaul topologies between a pico BS and
// its neighbor, overhead capacities, channel choice and figure sweeps.

#include "oqc/arrivals.hpp"
#include "oqc/backhaul.hpp"
#include "oqc/simulate.hpp"
#include "oqc/sir.hpp"
#include "oqc/wireless.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace oqc::scenarios {

/// Macro / pico / femto tiers; femto links carry a 5 dB wall loss.
sir::HcnConfig table1_hcn();

inline constexpr double kTable1PacketBits = 30.0;
inline constexpr std::size_t kTable1CoreServers = 10;
inline constexpr std::size_t kTable1IpServers = 10;

enum class Variant { I, II, III };

/// Neighbor in tier 1 (I), 2 (II) or 3 (III) of a pico BS.
struct ScenarioId {
    Variant variant = Variant::I;
    std::size_t n_cn = kTable1CoreServers;
    std::size_t n_ip = kTable1IpServers;

    std::size_t servers() const noexcept;
    std::size_t neighbor_tier() const noexcept;
    std::string name() const;
};

/// Parses "I", "II" or "III" (also "1", "2", "3").
Variant parse_variant(const std::string& s);

/// Equal-rate backhaul path of the scenario.
backhaul::BackhaulConfig scenario_backhaul(const ScenarioId& id, double mu_bar_bps, double packet_bits);

/// 1 / E[D] in packets per second.
double overhead_capacity(const backhaul::BackhaulConfig& c);
double overhead_capacity(const sir::HcnConfig& h, const wireless::WirelessConfig& w, std::size_t tier);

enum class Channel { Backhaul, Wireless };
std::string to_string(Channel c);

struct ChannelChoice {
    Channel preferred;
    double backhaul_pe;
    double wireless_pe;
};

/// Channel with strictly lower outage; ties go to the backhaul.
ChannelChoice preferred_channel(const backhaul::BackhaulConfig& b, const sir::HcnConfig& h,
                                const wireless::WirelessConfig& w, std::size_t tier, const ArrivalModel& a,
                                double d);

/// Σ_k A_k p_e(k): wireless outage averaged over the neighbor's tier.
double mixture_wireless_outage(const sir::HcnConfig& h, const wireless::WirelessConfig& w, const ArrivalModel& a,
                               double d);

/// Backhaul-to-wireless capacity ratio at which both channels have equal
/// outage, for the scenario path and d = deadline_ratio / η. Backhaul is
/// preferred above it.
double critical_capacity_ratio(const ScenarioId& id, const sir::HcnConfig& h, const wireless::WirelessConfig& w,
                               const ArrivalModel& a, double deadline_ratio, double packet_bits);

/// Arrival rate at which both channels have equal outage for a fixed capacity
/// ratio. Backhaul is preferred below it. Returns nullopt when one channel
/// wins over the whole range [eta_lo, eta_hi].
std::optional<double> critical_arrival_rate(const ScenarioId& id, const sir::HcnConfig& h,
                                            const wireless::WirelessConfig& w, ArrivalKind kind, double shape,
                                            double capacity_ratio, double deadline_ratio, double packet_bits,
                                            double eta_lo, double eta_hi);

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

enum class SweepParameter { Eta, MuBar, Bandwidth };
enum class SweepScale { Linear, Log };

/// Arrival family without a rate; the rate comes from the sweep.
struct ArrivalShape {
    ArrivalKind kind = ArrivalKind::Poisson;
    double shape = 1.0;  ///< used for Gamma only

    ArrivalModel at(double eta) const;
    std::string label() const;
};

ArrivalShape parse_arrival(const std::string& s, double shape);

struct SweepRow {
    double x = 0.0;
    std::string series;
    double pe_analytic = 0.0;
    std::optional<double> pe_lb;
    std::optional<sim::McEstimate> mc;
};

/// Fixed inputs shared by every point of a sweep.
struct SweepContext {
    sir::HcnConfig hcn = table1_hcn();
    double packet_bits = kTable1PacketBits;
    std::size_t n_cn = kTable1CoreServers;
    std::size_t n_ip = kTable1IpServers;
    double deadline_ratio = 0.3;     ///< d = ratio / η unless `deadline_s` is set
    std::optional<double> deadline_s;
    std::optional<sim::McSettings> mc;
    unsigned threads = 0;
};

struct SweepSpec {
    SweepParameter parameter = SweepParameter::Eta;
    double lo = 1.0;
    double hi = 1000.0;
    std::size_t points = 20;
    SweepScale scale = SweepScale::Log;
    std::vector<ArrivalShape> arrivals{{ArrivalKind::Poisson, 1.0}};
    Channel channel = Channel::Backhaul;
    std::vector<Variant> variants{Variant::II};
    /// Values of the parameters that are not swept.
    double eta = 100.0;
    double mu_bar_pkts = 1000.0;
    double bandwidth_hz = 50000.0;

    void validate() const;
};

std::vector<double> sweep_grid(double lo, double hi, std::size_t points, SweepScale scale);

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SweepContext& ctx);

/// Override knobs for figure_sweep; unset fields keep the figure's defaults.
struct FigureOptions {
    std::optional<std::size_t> points;
    std::optional<double> lo;
    std::optional<double> hi;
    std::optional<std::vector<ArrivalShape>> arrivals;
};

/// Rows reproducing figure 2..8. Throws DomainError for other ids.
std::vector<SweepRow> figure_sweep(int figure, const SweepContext& ctx, const FigureOptions& opt = {});

inline constexpr const char* kCsvHeader = "x,series,pe_analytic,pe_lb,pe_mc,mc_ci_low,mc_ci_high";

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace oqc::scenarios
