#include "oqc/simulate.hpp"

#include "oqc/errors.hpp"
#include "oqc/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace oqc::sim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Rng stream_rng(std::uint64_t seed, unsigned stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream, 0x6f7163u};
    return Rng(seq);
}

std::uint64_t stream_share(std::uint64_t n, unsigned stream) {
    return n / kStreams + (stream < n % kStreams ? 1 : 0);
}

// Runs work(stream, rng, partial) for every stream on up to s.threads workers.
template <class Partial, class Work>
std::vector<Partial> run_streams(const McSettings& s, Work work) {
    std::vector<Partial> out(kStreams);
    const unsigned workers = std::min(kStreams, s.threads > 0 ? s.threads : default_threads());
    std::atomic<unsigned> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const unsigned i = next.fetch_add(1);
            if (i >= kStreams) return;
            try {
                Rng rng = stream_rng(s.seed, i);
                work(i, rng, out[i]);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    }
    if (error) std::rethrow_exception(error);
    return out;
}

// Uniform on (0, 1].
inline double unit_open(Rng& rng) { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; }

inline double unit_exponential(Rng& rng) { return -std::log(unit_open(rng)); }

// (r²)^{-α/2}. Exponents on a 0.5 grid use square-root chains instead of pow.
class PathLoss {
public:
    explicit PathLoss(double alpha) : alpha_(alpha) {
        const double q = 2.0 * alpha;
        if (q == std::round(q) && q <= 64.0) quarter_steps_ = static_cast<int>(q);
    }

    double operator()(double r2) const {
        if (quarter_steps_ < 0) return std::pow(r2, -0.5 * alpha_);
        double v = 1.0;
        for (int i = 0; i < quarter_steps_ / 4; ++i) v *= r2;
        switch (quarter_steps_ % 4) {
            case 1: v *= std::sqrt(std::sqrt(r2)); break;
            case 2: v *= std::sqrt(r2); break;
            case 3: {
                const double s = std::sqrt(r2);
                v *= s * std::sqrt(s);
                break;
            }
            default: break;
        }
        return 1.0 / v;
    }

private:
    double alpha_;
    int quarter_steps_ = -1;
};

// Poisson field of every tier inside per-tier discs around the receiver.
class FieldSampler {
public:
    FieldSampler(const sir::HcnConfig& h, const McSettings& s) : settings_(s) {
        h.validate();
        for (const sir::TierParams& t : h.tiers) tiers_.push_back(Tier{t, PathLoss(t.alpha)});
    }

    SirSample draw(Rng& rng) {
        double scale = 1.0;
        for (int attempt = 0; attempt <= 3; ++attempt, scale *= 2.0) {
            if (draw_at(rng, scale)) return result_;
        }
        throw SimulationError("no base station inside the simulation window after 3 radius doublings");
    }

private:
    struct Tier {
        sir::TierParams params;
        PathLoss loss;
    };

    bool draw_at(Rng& rng, double scale) {
        power_.clear();
        tier_of_.clear();
        double tail = 0.0;
        for (std::size_t k = 0; k < tiers_.size(); ++k) {
            const sir::TierParams& p = tiers_[k].params;
            const double radius = scale * settings_.field_radius_factor / std::sqrt(p.density);
            const double r2_max = radius * radius;
            const double gain = p.power_w * p.wall_gain;
            const long count = std::poisson_distribution<long>(std::numbers::pi * p.density * r2_max)(rng);
            for (long i = 0; i < count; ++i) {
                power_.push_back(gain * tiers_[k].loss(unit_open(rng) * r2_max));
                tier_of_.push_back(k);
            }
            if (settings_.tail_correction) {
                tail += kTwoPi * p.density * gain * std::pow(radius, 2.0 - p.alpha) / (p.alpha - 2.0);
            }
        }
        if (power_.empty()) return false;

        const std::size_t serving =
            static_cast<std::size_t>(std::max_element(power_.begin(), power_.end()) - power_.begin());
        double signal = 0.0;
        double interference = tail;
        for (std::size_t i = 0; i < power_.size(); ++i) {
            const double received = unit_exponential(rng) * power_[i];
            if (i == serving) {
                signal = received;
            } else {
                interference += received;
            }
        }
        result_ = SirSample{tier_of_[serving] + 1, signal / interference};
        return true;
    }

    McSettings settings_;
    std::vector<Tier> tiers_;
    std::vector<double> power_;
    std::vector<std::size_t> tier_of_;
    SirSample result_{0, 0.0};
};

double z_value(double confidence) { return numerics::normal_quantile(0.5 * (1.0 + confidence)); }

McEstimate mean_estimate(double sum, double sum_sq, std::uint64_t n, double confidence) {
    McEstimate e;
    e.n = n;
    if (n == 0) return e;
    const double nd = static_cast<double>(n);
    e.mean = sum / nd;
    const double var = n > 1 ? std::max(0.0, (sum_sq - nd * e.mean * e.mean) / (nd - 1.0)) : 0.0;
    e.std_error = std::sqrt(var / nd);
    const double half = z_value(confidence) * e.std_error;
    e.ci_low = e.mean - half;
    e.ci_high = e.mean + half;
    return e;
}

// Draws fields on every stream until each tier flagged in `wanted` has its
// per-stream quota of accepted samples, calling visit(sample, rng, partial)
// for each accepted one.
struct ConditionedPartial {
    std::vector<std::uint64_t> accepted;
    std::vector<double> acc;  // visitor accumulators
    bool starved = false;
};

template <class Visit>
std::vector<ConditionedPartial> run_conditioned(const sir::HcnConfig& h, const std::vector<bool>& wanted,
                                                std::size_t slots, const McSettings& s, Visit visit) {
    constexpr std::uint64_t kMinAttempts = 10000;
    constexpr double kMinAcceptance = 1e-3;
    return run_streams<ConditionedPartial>(s, [&](unsigned stream, Rng& rng, ConditionedPartial& part) {
        FieldSampler field(h, s);
        const std::uint64_t quota = stream_share(s.samples, stream);
        part.accepted.assign(h.size(), 0);
        part.acc.assign(slots, 0.0);
        std::uint64_t attempts = 0;
        auto unfinished = [&] {
            for (std::size_t k = 0; k < h.size(); ++k) {
                if (wanted[k] && part.accepted[k] < quota) return true;
            }
            return false;
        };
        while (unfinished()) {
            const SirSample sample = field.draw(rng);
            ++attempts;
            const std::size_t k = sample.tier - 1;
            if (wanted[k] && part.accepted[k] < quota) {
                ++part.accepted[k];
                visit(sample, rng, part.acc);
            }
            if (attempts >= kMinAttempts) {
                for (std::size_t j = 0; j < h.size(); ++j) {
                    if (wanted[j] && part.accepted[j] < quota &&
                        static_cast<double>(part.accepted[j]) < kMinAcceptance * static_cast<double>(attempts)) {
                        part.starved = true;
                    }
                }
                if (part.starved) return;
            }
        }
    });
}

void check_tier(const sir::HcnConfig& h, std::size_t k) {
    if (k < 1 || k > h.size()) throw DomainError("tier index must lie in [1, K]");
}

}  // namespace

void McSettings::validate() const {
    if (samples < 1000) throw ConfigError("Monte Carlo needs at least 1000 samples");
    if (!(confidence > 0.5 && confidence < 1.0)) throw ConfigError("confidence must lie in (0.5, 1)");
    if (!(field_radius_factor > 0.0) || !std::isfinite(field_radius_factor)) {
        throw ConfigError("field radius factor must be positive");
    }
}

unsigned default_threads() {
    if (const char* env = std::getenv("OQC_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

McEstimate proportion(std::uint64_t hits, std::uint64_t n, double confidence) {
    McEstimate e;
    e.n = n;
    if (n == 0) {
        e.ci_high = 1.0;
        return e;
    }
    const double nd = static_cast<double>(n);
    const double p = static_cast<double>(hits) / nd;
    const double z = z_value(confidence);
    const double z2 = z * z;
    e.mean = p;
    e.std_error = std::sqrt(p * (1.0 - p) / nd);
    const double center = (p + z2 / (2.0 * nd)) / (1.0 + z2 / nd);
    const double half = z / (1.0 + z2 / nd) * std::sqrt(p * (1.0 - p) / nd + z2 / (4.0 * nd * nd));
    e.ci_low = std::clamp(std::min(center - half, p), 0.0, 1.0);
    e.ci_high = std::clamp(std::max(center + half, p), 0.0, 1.0);
    return e;
}

McEstimate estimate_proportion(const std::function<bool(Rng&)>& trial, const McSettings& s) {
    s.validate();
    const auto parts = run_streams<std::uint64_t>(s, [&](unsigned stream, Rng& rng, std::uint64_t& hits) {
        const std::uint64_t n = stream_share(s.samples, stream);
        for (std::uint64_t i = 0; i < n; ++i) hits += trial(rng) ? 1 : 0;
    });
    std::uint64_t hits = 0;
    for (std::uint64_t h : parts) hits += h;
    return proportion(hits, s.samples, s.confidence);
}

double sample_backhaul_delay(const backhaul::BackhaulConfig& c, Rng& rng) {
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) total += unit_exponential(rng) / c.service_rate(i);
    return total;
}

McEstimate estimate_backhaul_outage(const backhaul::BackhaulConfig& c, const ArrivalModel& a, double d,
                                    const McSettings& s) {
    if (!(d > 0.0)) throw DomainError("deadline must be positive");
    return estimate_proportion(
        [&](Rng& rng) {
            const double delay = sample_backhaul_delay(c, rng);
            const double t = sample_interarrival(a, rng);
            return delay > std::min(t, d);
        },
        s);
}

McEstimate estimate_delay_cdf(const backhaul::BackhaulConfig& c, double d, const McSettings& s) {
    if (!(d >= 0.0)) throw DomainError("delay threshold must be nonnegative");
    return estimate_proportion([&](Rng& rng) { return sample_backhaul_delay(c, rng) <= d; }, s);
}

SirSample sample_sir(const sir::HcnConfig& h, const McSettings& s, Rng& rng) {
    s.validate();
    FieldSampler field(h, s);
    return field.draw(rng);
}

std::vector<McEstimate> estimate_wireless_outage(const sir::HcnConfig& h, const std::vector<WirelessQuery>& queries,
                                                 const McSettings& s) {
    s.validate();
    h.validate();
    std::vector<bool> wanted(h.size(), false);
    for (const WirelessQuery& q : queries) {
        check_tier(h, q.tier);
        q.link.validate();
        if (!(q.deadline > 0.0)) throw DomainError("deadline must be positive");
        wanted[q.tier - 1] = true;
    }

    const auto parts = run_conditioned(h, wanted, queries.size(), s,
                                       [&](const SirSample& sample, Rng& rng, std::vector<double>& hits) {
        const double log_se = std::log2(1.0 + sample.sir);
        for (std::size_t i = 0; i < queries.size(); ++i) {
            const WirelessQuery& q = queries[i];
            if (q.tier != sample.tier) continue;
            const double delay = q.link.packet_bits / (q.link.bandwidth_hz * log_se);
            const double t = sample_interarrival(q.arrival, rng);
            if (delay > std::min(t, q.deadline)) hits[i] += 1.0;
        }
    });

    std::vector<McEstimate> out;
    bool starved = false;
    for (const auto& p : parts) starved = starved || p.starved;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        std::uint64_t hits = 0;
        std::uint64_t n = 0;
        for (const auto& p : parts) {
            hits += static_cast<std::uint64_t>(p.acc[i]);
            n += p.accepted[queries[i].tier - 1];
        }
        McEstimate e = proportion(hits, n, s.confidence);
        if (starved && n < s.samples) {
            e.warning = "tier acceptance below 1e-3; estimate uses " + std::to_string(n) + " of " +
                        std::to_string(s.samples) + " requested samples";
        }
        out.push_back(std::move(e));
    }
    return out;
}

McEstimate estimate_wireless_outage(const sir::HcnConfig& h, const wireless::WirelessConfig& w,
                                    const ArrivalModel& a, double d, const McSettings& s) {
    return estimate_wireless_outage(h, {WirelessQuery{h.neighbor_tier, w, a, d}}, s).front();
}

std::vector<McEstimate> estimate_association(const sir::HcnConfig& h, const McSettings& s) {
    s.validate();
    h.validate();
    const auto parts = run_streams<std::vector<std::uint64_t>>(
        s, [&](unsigned stream, Rng& rng, std::vector<std::uint64_t>& counts) {
            FieldSampler field(h, s);
            counts.assign(h.size(), 0);
            const std::uint64_t n = stream_share(s.samples, stream);
            for (std::uint64_t i = 0; i < n; ++i) ++counts[field.draw(rng).tier - 1];
        });
    std::vector<McEstimate> out;
    for (std::size_t k = 0; k < h.size(); ++k) {
        std::uint64_t hits = 0;
        for (const auto& c : parts) hits += c[k];
        out.push_back(proportion(hits, s.samples, s.confidence));
    }
    return out;
}

McEstimate estimate_sir_cdf(const sir::HcnConfig& h, std::size_t k, double beta, const McSettings& s) {
    s.validate();
    h.validate();
    check_tier(h, k);
    std::vector<bool> wanted(h.size(), false);
    wanted[k - 1] = true;
    const auto parts = run_conditioned(h, wanted, 1, s, [&](const SirSample& sample, Rng&, std::vector<double>& acc) {
        if (sample.sir <= beta) acc[0] += 1.0;
    });
    std::uint64_t hits = 0;
    std::uint64_t n = 0;
    for (const auto& p : parts) {
        hits += static_cast<std::uint64_t>(p.acc[0]);
        n += p.accepted[k - 1];
    }
    return proportion(hits, n, s.confidence);
}

McEstimate estimate_mean_log_se(const sir::HcnConfig& h, std::size_t k, const McSettings& s) {
    s.validate();
    h.validate();
    check_tier(h, k);
    std::vector<bool> wanted(h.size(), false);
    wanted[k - 1] = true;
    const auto parts = run_conditioned(h, wanted, 2, s, [&](const SirSample& sample, Rng&, std::vector<double>& acc) {
        const double v = std::log2(1.0 + sample.sir);
        acc[0] += v;
        acc[1] += v * v;
    });
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t n = 0;
    for (const auto& p : parts) {
        sum += p.acc[0];
        sum_sq += p.acc[1];
        n += p.accepted[k - 1];
    }
    return mean_estimate(sum, sum_sq, n, s.confidence);
}

}  // namespace oqc::sim
