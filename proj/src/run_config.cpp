#include "oqc/run_config.hpp"

#include "oqc/errors.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>

namespace oqc::cli {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    require_object(j, where);
    for (const auto& [key, value] : j.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

double number(const json& j, const char* key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return v.get<double>();
}

std::uint64_t count(const json& j, const char* key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw ConfigError(where + "." + key + ": expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

std::string text(const json& j, const char* key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
    return v.get<std::string>();
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
    RunConfig c;
    check_keys(j, {"hcn", "backhaul", "overhead", "wireless", "deadline", "mc"}, "config");

    if (j.contains("hcn")) {
        const json& h = j["hcn"];
        check_keys(h, {"tiers", "neighbor_tier"}, "hcn");
        if (h.contains("tiers")) {
            if (!h["tiers"].is_array() || h["tiers"].empty()) throw ConfigError("hcn.tiers: expected a nonempty array");
            c.hcn.tiers.clear();
            for (std::size_t i = 0; i < h["tiers"].size(); ++i) {
                const json& t = h["tiers"][i];
                const std::string where = "hcn.tiers[" + std::to_string(i) + "]";
                check_keys(t, {"lambda_per_m2", "power_w", "alpha", "wall_loss_db"}, where);
                for (const char* key : {"lambda_per_m2", "power_w", "alpha"}) {
                    if (!t.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
                }
                const double loss = t.contains("wall_loss_db") ? number(t, "wall_loss_db", where) : 0.0;
                c.hcn.tiers.push_back(sir::TierParams::with_wall_loss_db(
                    number(t, "lambda_per_m2", where), number(t, "power_w", where), number(t, "alpha", where), loss));
            }
        }
        if (h.contains("neighbor_tier")) {
            c.hcn.neighbor_tier = count(h, "neighbor_tier", "hcn");
            c.neighbor_tier_set = true;
        }
        c.hcn.validate();
    }

    if (j.contains("backhaul")) {
        const json& b = j["backhaul"];
        check_keys(b, {"scenario", "n_cn", "n_ip", "mu_bar_bps", "rates_bps"}, "backhaul");
        if (b.contains("scenario")) {
            c.scenario = text(b, "scenario", "backhaul");
            scenarios::parse_variant(c.scenario);
        }
        if (b.contains("n_cn")) c.n_cn = count(b, "n_cn", "backhaul");
        if (b.contains("n_ip")) c.n_ip = count(b, "n_ip", "backhaul");
        if (b.contains("mu_bar_bps")) {
            c.mu_bar_bps = number(b, "mu_bar_bps", "backhaul");
            if (!(*c.mu_bar_bps > 0.0)) throw ConfigError("backhaul.mu_bar_bps must be positive");
        }
        if (b.contains("rates_bps")) {
            if (!b["rates_bps"].is_array() || b["rates_bps"].empty()) {
                throw ConfigError("backhaul.rates_bps: expected a nonempty array");
            }
            std::vector<double> rates;
            for (const json& r : b["rates_bps"]) {
                if (!r.is_number() || !(r.get<double>() > 0.0)) {
                    throw ConfigError("backhaul.rates_bps: rates must be positive numbers");
                }
                rates.push_back(r.get<double>());
            }
            c.rates_bps = std::move(rates);
        }
        if (c.mu_bar_bps && c.rates_bps) throw ConfigError("backhaul: give mu_bar_bps or rates_bps, not both");
    }

    if (j.contains("overhead")) {
        const json& o = j["overhead"];
        check_keys(o, {"B_bits", "arrival"}, "overhead");
        if (o.contains("B_bits")) c.packet_bits = number(o, "B_bits", "overhead");
        if (!(c.packet_bits > 0.0)) throw ConfigError("overhead.B_bits must be positive");
        if (o.contains("arrival")) {
            const json& a = o["arrival"];
            check_keys(a, {"eta_per_s", "kind", "shape"}, "overhead.arrival");
            if (a.contains("eta_per_s")) {
                c.eta = number(a, "eta_per_s", "overhead.arrival");
                if (!(*c.eta > 0.0)) throw ConfigError("overhead.arrival.eta_per_s must be positive");
            }
            if (a.contains("kind")) c.arrival_kind = text(a, "kind", "overhead.arrival");
            if (a.contains("shape")) {
                c.arrival_shape = number(a, "shape", "overhead.arrival");
                if (!a.contains("kind")) c.arrival_kind = "gamma";
            }
            scenarios::parse_arrival(c.arrival_kind, c.arrival_shape);
        }
    }

    if (j.contains("wireless")) {
        const json& w = j["wireless"];
        check_keys(w, {"bandwidth_hz"}, "wireless");
        if (w.contains("bandwidth_hz")) {
            c.bandwidth_hz = number(w, "bandwidth_hz", "wireless");
            if (!(*c.bandwidth_hz > 0.0)) throw ConfigError("wireless.bandwidth_hz must be positive");
        }
    }

    if (j.contains("deadline")) {
        const json& d = j["deadline"];
        check_keys(d, {"seconds", "ratio"}, "deadline");
        if (d.contains("seconds") && d.contains("ratio")) throw ConfigError("deadline: give seconds or ratio, not both");
        if (d.contains("seconds")) {
            c.deadline_s = number(d, "seconds", "deadline");
            if (!(*c.deadline_s > 0.0)) throw ConfigError("deadline.seconds must be positive");
        }
        if (d.contains("ratio")) {
            c.deadline_ratio = number(d, "ratio", "deadline");
            if (!(c.deadline_ratio > 0.0)) throw ConfigError("deadline.ratio must be positive");
        }
    }

    if (j.contains("mc")) {
        const json& m = j["mc"];
        check_keys(m, {"samples", "seed", "confidence", "field_radius_factor", "tail_correction", "threads"}, "mc");
        if (m.contains("samples")) c.mc.samples = count(m, "samples", "mc");
        if (m.contains("seed")) c.mc.seed = count(m, "seed", "mc");
        if (m.contains("confidence")) c.mc.confidence = number(m, "confidence", "mc");
        if (m.contains("field_radius_factor")) c.mc.field_radius_factor = number(m, "field_radius_factor", "mc");
        if (m.contains("threads")) c.mc.threads = static_cast<unsigned>(count(m, "threads", "mc"));
        if (m.contains("tail_correction")) {
            if (!m["tail_correction"].is_boolean()) throw ConfigError("mc.tail_correction: expected a boolean");
            c.mc.tail_correction = m["tail_correction"].get<bool>();
        }
        c.mc.validate();
    }
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

nlohmann::json RunConfig::to_json() const {
    json tiers = json::array();
    for (const sir::TierParams& t : hcn.tiers) {
        tiers.push_back({{"lambda_per_m2", t.density},
                         {"power_w", t.power_w},
                         {"alpha", t.alpha},
                         {"wall_loss_db", t.wall_loss_db()}});
    }
    json j;
    j["hcn"] = {{"tiers", tiers}, {"neighbor_tier", hcn.neighbor_tier}};
    json b = {{"scenario", scenario}, {"n_cn", n_cn}, {"n_ip", n_ip}};
    if (mu_bar_bps) b["mu_bar_bps"] = *mu_bar_bps;
    if (rates_bps) b["rates_bps"] = *rates_bps;
    j["backhaul"] = b;
    json arrival = {{"kind", arrival_kind}};
    if (arrival_kind == "gamma") arrival["shape"] = arrival_shape;
    if (eta) arrival["eta_per_s"] = *eta;
    j["overhead"] = {{"B_bits", packet_bits}, {"arrival", arrival}};
    if (bandwidth_hz) j["wireless"] = {{"bandwidth_hz", *bandwidth_hz}};
    if (deadline_s) {
        j["deadline"] = {{"seconds", *deadline_s}};
    } else {
        j["deadline"] = {{"ratio", deadline_ratio}};
    }
    j["mc"] = {{"samples", mc.samples},
               {"seed", mc.seed},
               {"confidence", mc.confidence},
               {"field_radius_factor", mc.field_radius_factor},
               {"tail_correction", mc.tail_correction}};
    return j;
}

}  // namespace oqc::cli
