#pragma once

// SIR of the wireless overhead channel in a K-tier network where each tier is
// an independent Poisson point process, the receiving BS coordinates with the
// BS it hears strongest on average, and every link sees unit-mean Rayleigh
// fading. Thermal noise is neglected.

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace oqc::sir {

struct TierParams {
    double density = 0.0;    ///< λ_k, base stations per m²
    double power_w = 0.0;    ///< P_k
    double alpha = 0.0;      ///< path-loss exponent α_k > 2
    double wall_gain = 1.0;  ///< L_k in (0, 1]

    static TierParams with_wall_loss_db(double density, double power_w, double alpha, double wall_loss_db);
    double wall_loss_db() const;
    void validate() const;
};

/// Tier list plus the (1-based) tier of the coordinating neighbor.
struct HcnConfig {
    std::vector<TierParams> tiers;
    std::size_t neighbor_tier = 1;

    std::size_t size() const noexcept { return tiers.size(); }
    void validate() const;
    /// Copy with every path-loss exponent replaced by `alpha`.
    HcnConfig with_equal_alpha(double alpha) const;
    bool has_equal_alpha() const;
};

/// Z(β, α) = β^{2/α} ∫_{β^{-2/α}}^∞ du / (1 + u^{α/2}).
double z_function(double beta, double alpha);

/// ∫_0^∞ du / (1 + u^{α/2}) = (2π/α) csc(2π/α).
double z_asymptote_constant(double alpha);

/// Probability that the neighbor belongs to tier k (1-based).
double association_probability(const HcnConfig& h, std::size_t k);

/// q_k{β} = P(SIR <= β | neighbor in tier k).
double sir_cdf(const HcnConfig& h, std::size_t k, double beta);

/// Closed form 1 - 1/(1 + Z(β, α)) valid when all tiers share α.
double sir_cdf_equal_alpha(double beta, double alpha);

/// ζ(α) = ((2π/α) csc(2π/α))^{-α/2}.
double zeta(double alpha);

using SirCdf = std::function<double(double)>;

/// E[log2(1 + SIR)] = ∫_0^∞ (1 - q{2^t - 1}) dt for an arbitrary SIR CDF.
double mean_log_spectral_efficiency(const SirCdf& cdf);
double mean_log_spectral_efficiency(const HcnConfig& h, std::size_t k);

/// Direct evaluation of q_k; every call runs the quadratures.
SirCdf direct_sir_cdf(const HcnConfig& h, std::size_t k);

/// q_k tabulated on a log-β grid with monotone cubic interpolation. Grid
/// midpoints are checked against direct evaluation and the grid is halved
/// until the interpolation error is below `tolerance`. Outside the grid the table falls
/// back to direct evaluation.
class SirCdfTable {
public:
    SirCdfTable(const HcnConfig& h, std::size_t k, double tolerance = 1e-7);

    double operator()(double beta) const;
    std::size_t grid_size() const noexcept { return log_beta_.size(); }
    double max_checked_error() const noexcept { return max_error_; }

private:
    double interpolate(double log_beta) const;
    void compute_slopes();

    HcnConfig config_;
    std::size_t tier_;
    std::vector<double> log_beta_;
    std::vector<double> value_;
    std::vector<double> slope_;
    double max_error_ = 0.0;
};

/// Shared table for (h, k), built once per process and reused across threads.
std::shared_ptr<const SirCdfTable> cached_sir_cdf_table(const HcnConfig& h, std::size_t k);

/// Tabulated q_k backed by the shared cache.
SirCdf tabulated_sir_cdf(const HcnConfig& h, std::size_t k);

}  // namespace oqc::sir
