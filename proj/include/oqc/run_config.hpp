#pragma once

// JSON run configuration for the command-line tool. Unknown keys are rejected
// at every level; units are part of the key names. Missing sections fall back
// to the reference three-tier network and its backhaul topology.
//
// {
//   "hcn": {"tiers": [{"lambda_per_m2": 5e-7, "power_w": 40, "alpha": 3,
//                       "wall_loss_db": 0}, ...],
//           "neighbor_tier": 2},
//   "backhaul": {"scenario": "II", "n_cn": 10, "n_ip": 10, "mu_bar_bps": 30000}
//             | {"rates_bps": [30000, 45000]},
//   "overhead": {"B_bits": 30,
//                "arrival": {"eta_per_s": 100, "kind": "gamma", "shape": 4}},
//   "wireless": {"bandwidth_hz": 50000},
//   "deadline": {"seconds": 0.003} | {"ratio": 0.3},
//   "mc": {"samples": 100000, "seed": 1, "confidence": 0.99,
//          "field_radius_factor": 15, "tail_correction": true}
// }

#include "oqc/scenarios.hpp"
#include "oqc/simulate.hpp"
#include "oqc/sir.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace oqc::cli {

struct RunConfig {
    sir::HcnConfig hcn = scenarios::table1_hcn();
    bool neighbor_tier_set = false;

    std::string scenario = "II";
    std::size_t n_cn = scenarios::kTable1CoreServers;
    std::size_t n_ip = scenarios::kTable1IpServers;
    std::optional<double> mu_bar_bps;
    std::optional<std::vector<double>> rates_bps;

    double packet_bits = scenarios::kTable1PacketBits;
    std::optional<double> eta;
    std::string arrival_kind = "poisson";
    double arrival_shape = 1.0;

    std::optional<double> bandwidth_hz;

    std::optional<double> deadline_s;
    double deadline_ratio = 0.3;

    sim::McSettings mc;

    /// Throws ConfigError on any schema or range violation.
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig load(const std::string& path);

    nlohmann::json to_json() const;
};

}  // namespace oqc::cli
