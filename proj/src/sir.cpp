#include "oqc/sir.hpp"

#include "oqc/errors.hpp"
#include "oqc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>

namespace oqc::sir {

namespace {

constexpr double kPi = std::numbers::pi;

const numerics::QuadratureSpec kTight{1e-14, 1e-12, 60};
const numerics::QuadratureSpec kField{1e-13, 1e-10, 60};

void check_alpha(double alpha) {
    if (!(alpha > 2.0) || !std::isfinite(alpha)) throw DomainError("path-loss exponent must be finite and > 2");
}

void check_tier(const HcnConfig& h, std::size_t k) {
    if (k < 1 || k > h.size()) throw DomainError("tier index must lie in [1, K]");
}

// Per-tier exponent e_j = 2 α_k / α_j and log coefficient of the exclusion
// area, after scaling distances by 1/sqrt(π λ_k) so that tier k has e = 2 and
// coefficient 1.
struct FieldTerms {
    std::vector<double> exponent;
    std::vector<double> log_coeff;
};

FieldTerms field_terms(const HcnConfig& h, std::size_t k) {
    const TierParams& own = h.tiers[k - 1];
    const double own_gain = own.power_w * own.wall_gain;
    FieldTerms t;
    for (const TierParams& tier : h.tiers) {
        const double ratio = tier.alpha == own.alpha ? 1.0 : own.alpha / tier.alpha;
        const double p_hat = tier.power_w * tier.wall_gain / own_gain;
        t.exponent.push_back(2.0 * ratio);
        t.log_coeff.push_back(std::log(kPi * tier.density) + 2.0 / tier.alpha * std::log(p_hat) -
                              ratio * std::log(kPi * own.density));
    }
    return t;
}

// ∫_0^∞ 2y exp(-Σ_j w_j y^{e_j}) dy with w_j = exp(log_w[j]) and e_k = 2.
double exclusion_integral(const FieldTerms& t, std::span<const double> log_w, std::size_t k) {
    // Substitute y = s·z with s = w_k^{-1/2}; the tier-k term becomes z².
    const double log_s = -0.5 * log_w[k - 1];
    std::vector<double> log_omega(log_w.size());
    for (std::size_t j = 0; j < log_w.size(); ++j) log_omega[j] = log_w[j] + t.exponent[j] * log_s;
    auto integrand = [&](double z) {
        if (z == 0.0) return 0.0;
        const double log_z = std::log(z);
        double exponent = 0.0;
        for (std::size_t j = 0; j < log_omega.size(); ++j) exponent += std::exp(log_omega[j] + t.exponent[j] * log_z);
        return 2.0 * z * std::exp(-exponent);
    };
    return std::exp(2.0 * log_s) * numerics::integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), kField);
}

std::string cache_key(const HcnConfig& h, std::size_t k, double tolerance) {
    std::string key;
    auto append = [&key](double v) {
        char buf[sizeof(double)];
        std::memcpy(buf, &v, sizeof(double));
        key.append(buf, sizeof(double));
    };
    for (const TierParams& t : h.tiers) {
        append(t.density);
        append(t.power_w);
        append(t.alpha);
        append(t.wall_gain);
    }
    append(static_cast<double>(k));
    append(tolerance);
    return key;
}

}  // namespace

TierParams TierParams::with_wall_loss_db(double density, double power_w, double alpha, double wall_loss_db) {
    if (!(wall_loss_db >= 0.0)) throw ConfigError("wall loss in dB must be nonnegative");
    TierParams t{density, power_w, alpha, std::pow(10.0, -wall_loss_db / 10.0)};
    t.validate();
    return t;
}

double TierParams::wall_loss_db() const { return -10.0 * std::log10(wall_gain); }

void TierParams::validate() const {
    if (!(density > 0.0) || !std::isfinite(density)) throw ConfigError("tier density must be positive");
    if (!(power_w > 0.0) || !std::isfinite(power_w)) throw ConfigError("tier power must be positive");
    if (!(alpha > 2.0) || !std::isfinite(alpha)) throw ConfigError("tier path-loss exponent must exceed 2");
    if (!(wall_gain > 0.0 && wall_gain <= 1.0)) throw ConfigError("wall gain must lie in (0, 1]");
}

void HcnConfig::validate() const {
    if (tiers.empty()) throw ConfigError("network needs at least one tier");
    for (const TierParams& t : tiers) t.validate();
    if (neighbor_tier < 1 || neighbor_tier > tiers.size()) throw ConfigError("neighbor tier must lie in [1, K]");
}

HcnConfig HcnConfig::with_equal_alpha(double alpha) const {
    HcnConfig copy = *this;
    for (TierParams& t : copy.tiers) t.alpha = alpha;
    return copy;
}

bool HcnConfig::has_equal_alpha() const {
    return std::all_of(tiers.begin(), tiers.end(), [&](const TierParams& t) { return t.alpha == tiers.front().alpha; });
}

double z_asymptote_constant(double alpha) {
    check_alpha(alpha);
    const double x = 2.0 * kPi / alpha;
    return x / std::sin(x);
}

double z_function(double beta, double alpha) {
    check_alpha(alpha);
    if (!(beta >= 0.0)) throw DomainError("z_function: beta must be nonnegative");
    if (beta == 0.0) return 0.0;
    if (std::isinf(beta)) return beta;

    const double half = 0.5 * alpha;
    if (beta <= 1.0) {
        // u = β^{-2/α} w^{-1/m} with m = α/2 - 1 maps the tail onto [0, 1].
        const double m = half - 1.0;
        const double p = alpha / (alpha - 2.0);
        auto f = [&](double w) { return beta / (1.0 + beta * std::pow(w, p)); };
        return numerics::integrate(f, 0.0, 1.0, kTight) / m;
    }
    // Complete integral minus the head [0, β^{-2/α}], rescaled onto [0, 1].
    auto head = [&](double s) { return 1.0 / (1.0 + std::pow(s, half) / beta); };
    return std::pow(beta, 2.0 / alpha) * z_asymptote_constant(alpha) - numerics::integrate(head, 0.0, 1.0, kTight);
}

double association_probability(const HcnConfig& h, std::size_t k) {
    h.validate();
    check_tier(h, k);
    if (h.size() == 1) return 1.0;
    const FieldTerms t = field_terms(h, k);
    return std::clamp(exclusion_integral(t, t.log_coeff, k), 0.0, 1.0);
}

double sir_cdf(const HcnConfig& h, std::size_t k, double beta) {
    h.validate();
    check_tier(h, k);
    if (!(beta >= 0.0)) throw DomainError("sir_cdf: beta must be nonnegative");
    if (beta == 0.0) return 0.0;
    if (std::isinf(beta)) return 1.0;

    const FieldTerms t = field_terms(h, k);
    std::vector<double> log_w(t.log_coeff);
    for (std::size_t j = 0; j < h.size(); ++j) log_w[j] += std::log1p(z_function(beta, h.tiers[j].alpha));
    const double covered = exclusion_integral(t, log_w, k);
    const double assoc = h.size() == 1 ? 1.0 : exclusion_integral(t, t.log_coeff, k);
    return std::clamp(1.0 - covered / assoc, 0.0, 1.0);
}

double sir_cdf_equal_alpha(double beta, double alpha) {
    check_alpha(alpha);
    if (!(beta >= 0.0)) throw DomainError("sir_cdf_equal_alpha: beta must be nonnegative");
    if (std::isinf(beta)) return 1.0;
    const double z = z_function(beta, alpha);
    return z / (1.0 + z);
}

double zeta(double alpha) { return std::pow(z_asymptote_constant(alpha), -0.5 * alpha); }

double mean_log_spectral_efficiency(const SirCdf& cdf) {
    auto tail = [&](double t) {
        const double beta = std::expm1(t * std::numbers::ln2);
        return 1.0 - cdf(beta);
    };
    return numerics::integrate(tail, 0.0, std::numeric_limits<double>::infinity());
}

double mean_log_spectral_efficiency(const HcnConfig& h, std::size_t k) {
    return mean_log_spectral_efficiency(direct_sir_cdf(h, k));
}

SirCdf direct_sir_cdf(const HcnConfig& h, std::size_t k) {
    h.validate();
    check_tier(h, k);
    if (h.has_equal_alpha()) {
        const double alpha = h.tiers.front().alpha;
        return [alpha](double beta) { return sir_cdf_equal_alpha(beta, alpha); };
    }
    // Precompute the association integral once per evaluator.
    const FieldTerms t = field_terms(h, k);
    const double assoc = h.size() == 1 ? 1.0 : exclusion_integral(t, t.log_coeff, k);
    return [h, k, t, assoc](double beta) {
        if (!(beta >= 0.0)) throw DomainError("sir_cdf: beta must be nonnegative");
        if (beta == 0.0) return 0.0;
        if (std::isinf(beta)) return 1.0;
        std::vector<double> log_w(t.log_coeff);
        for (std::size_t j = 0; j < h.size(); ++j) log_w[j] += std::log1p(z_function(beta, h.tiers[j].alpha));
        return std::clamp(1.0 - exclusion_integral(t, log_w, k) / assoc, 0.0, 1.0);
    };
}

// ---------------------------------------------------------------------------
// SirCdfTable
// ---------------------------------------------------------------------------

SirCdfTable::SirCdfTable(const HcnConfig& h, std::size_t k, double tolerance) : config_(h), tier_(k) {
    if (!(tolerance > 0.0)) throw DomainError("SirCdfTable: tolerance must be positive");
    const SirCdf direct = direct_sir_cdf(h, k);

    // Uniform grid in ln β over [1e-8, 1e12]. Each pass checks every interval
    // midpoint; if any misses the tolerance the midpoints join the grid, which
    // halves the spacing without discarding earlier evaluations.
    const double lo = std::log(1e-8);
    const double hi = std::log(1e12);
    constexpr int kInitial = 161;
    constexpr int kMaxPasses = 5;
    for (int i = 0; i < kInitial; ++i) {
        const double x = lo + (hi - lo) * i / (kInitial - 1);
        log_beta_.push_back(x);
        value_.push_back(direct(std::exp(x)));
    }

    for (int pass = 0;; ++pass) {
        compute_slopes();
        std::vector<double> mid_x(log_beta_.size() - 1);
        std::vector<double> mid_y(mid_x.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < mid_x.size(); ++i) {
            mid_x[i] = 0.5 * (log_beta_[i] + log_beta_[i + 1]);
            mid_y[i] = direct(std::exp(mid_x[i]));
            worst = std::max(worst, std::abs(interpolate(mid_x[i]) - mid_y[i]));
        }
        max_error_ = worst;
        if (worst <= tolerance || pass == kMaxPasses) break;

        std::vector<double> x(2 * log_beta_.size() - 1);
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < log_beta_.size(); ++i) {
            x[2 * i] = log_beta_[i];
            y[2 * i] = value_[i];
            if (i < mid_x.size()) {
                x[2 * i + 1] = mid_x[i];
                y[2 * i + 1] = mid_y[i];
            }
        }
        log_beta_ = std::move(x);
        value_ = std::move(y);
    }
}

// Fritsch-Carlson monotone slopes (the PCHIP rule).
void SirCdfTable::compute_slopes() {
    const std::size_t n = log_beta_.size();
    slope_.assign(n, 0.0);
    std::vector<double> step(n - 1);
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        step[i] = log_beta_[i + 1] - log_beta_[i];
        delta[i] = (value_[i + 1] - value_[i]) / step[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) continue;
        const double w1 = 2.0 * step[i] + step[i - 1];
        const double w2 = step[i] + 2.0 * step[i - 1];
        slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
    auto endpoint = [](double h0, double h1, double d0, double d1) {
        const double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) return 0.0;
        if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return s;
    };
    slope_[0] = endpoint(step[0], step[1], delta[0], delta[1]);
    slope_[n - 1] = endpoint(step[n - 2], step[n - 3], delta[n - 2], delta[n - 3]);
}

double SirCdfTable::interpolate(double x) const {
    const auto it = std::upper_bound(log_beta_.begin(), log_beta_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - log_beta_.begin());
    i = std::clamp<std::size_t>(i, 1, log_beta_.size() - 1) - 1;
    const double h = log_beta_[i + 1] - log_beta_[i];
    const double t = (x - log_beta_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * value_[i] + h10 * h * slope_[i] + h01 * value_[i + 1] + h11 * h * slope_[i + 1];
}

double SirCdfTable::operator()(double beta) const {
    if (!(beta >= 0.0)) throw DomainError("sir_cdf: beta must be nonnegative");
    if (beta == 0.0) return 0.0;
    if (std::isinf(beta)) return 1.0;
    const double x = std::log(beta);
    if (x < log_beta_.front() || x > log_beta_.back()) return sir_cdf(config_, tier_, beta);
    return std::clamp(interpolate(x), 0.0, 1.0);
}

std::shared_ptr<const SirCdfTable> cached_sir_cdf_table(const HcnConfig& h, std::size_t k) {
    static std::shared_mutex mutex;
    static std::map<std::string, std::shared_ptr<const SirCdfTable>> cache;
    constexpr double kTolerance = 1e-7;

    const std::string key = cache_key(h, k, kTolerance);
    {
        std::shared_lock lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto table = std::make_shared<const SirCdfTable>(h, k, kTolerance);
    std::unique_lock lock(mutex);
    auto [it, inserted] = cache.emplace(key, std::move(table));
    return it->second;
}

SirCdf tabulated_sir_cdf(const HcnConfig& h, std::size_t k) {
    auto table = cached_sir_cdf_table(h, k);
    return [table](double beta) { return (*table)(beta); };
}

}  // namespace oqc::sir
