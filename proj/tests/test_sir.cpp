#include "oracles.hpp"
#include "oqc/errors.hpp"
#include "oqc/scenarios.hpp"
#include "oqc/sir.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace oqc;
using namespace oqc::sir;

namespace {

constexpr double kPi = std::numbers::pi;

/// C_α - ∫_0^c du/(1+u^{α/2}) with c = β^{-2/α}, the tail by Simpson.
double z_oracle(double beta, double alpha) {
    const double c_alpha = (2 * kPi / alpha) / std::sin(2 * kPi / alpha);
    const double c = std::pow(beta, -2.0 / alpha);
    const double head = oracle::simpson([&](double u) { return 1.0 / (1.0 + std::pow(u, alpha / 2)); }, 0.0, c, 40000);
    return std::pow(beta, 2.0 / alpha) * (c_alpha - head);
}

/// 2πλ_k ∫ x exp(-π Σ_j λ_j P̂_j^{2/α_j} w_j x^{2α_k/α_j}) dx with weights w_j,
/// on a Simpson grid in x·sqrt(πλ_k).
double field_integral(const HcnConfig& h, std::size_t k, const std::vector<double>& w) {
    const auto& tk = h.tiers[k - 1];
    const double s = 1.0 / std::sqrt(kPi * tk.density);
    auto f = [&](double t) {
        const double x = s * t;
        double e = 0.0;
        for (std::size_t j = 0; j < h.size(); ++j) {
            const auto& tj = h.tiers[j];
            const double phat = tj.power_w * tj.wall_gain / (tk.power_w * tk.wall_gain);
            e += kPi * tj.density * std::pow(phat, 2.0 / tj.alpha) * w[j] * std::pow(x, 2.0 * tk.alpha / tj.alpha);
        }
        return 2 * kPi * tk.density * x * std::exp(-e) * s;
    };
    return oracle::simpson(f, 0.0, 9.0, 60000);
}

double assoc_oracle(const HcnConfig& h, std::size_t k) { return field_integral(h, k, std::vector<double>(h.size(), 1.0)); }

double q_oracle(const HcnConfig& h, std::size_t k, double beta) {
    std::vector<double> w;
    for (const auto& t : h.tiers) w.push_back(1.0 + z_oracle(beta, t.alpha));
    return 1.0 - field_integral(h, k, w) / assoc_oracle(h, k);
}

HcnConfig random_config(std::mt19937_64& rng, bool equal_alpha) {
    std::uniform_int_distribution<int> kd(1, 3);
    std::uniform_real_distribution<double> ld(std::log(1e-7), std::log(1e-4)), pd(0.1, 50.0), ad(2.5, 4.5),
        wd(0.0, 10.0);
    HcnConfig h;
    const int k = kd(rng);
    const double a0 = ad(rng);
    for (int i = 0; i < k; ++i)
        h.tiers.push_back(TierParams::with_wall_loss_db(std::exp(ld(rng)), pd(rng), equal_alpha ? a0 : ad(rng), wd(rng)));
    h.neighbor_tier = std::uniform_int_distribution<int>(1, k)(rng);
    return h;
}

}  // namespace

TEST_CASE("Z function examples") {
    CHECK(z_function(0.0, 3.0) == 0.0);
    CHECK(z_function(0.0, 4.0) == 0.0);
    CHECK(z_function(1.0, 4.0) == doctest::Approx(kPi / 4).epsilon(1e-12));
    CHECK(z_function(4.0, 4.0) == doctest::Approx(2 * std::atan(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(z_function(1.0, 2.0), DomainError);
    CHECK_THROWS_AS(z_function(-1.0, 3.0), DomainError);
}

TEST_CASE("Z(beta, 4) matches the arctan form") {
    for (double lb = -8; lb <= 8; lb += 0.25) {
        const double b = std::pow(10.0, lb);
        CHECK(std::abs(z_function(b, 4.0) - oracle::z4(b)) <= 1e-9 * std::max(1.0, oracle::z4(b)));
    }
}

TEST_CASE("Z matches a Simpson oracle for other exponents") {
    for (double alpha : {2.5, 3.0, 3.5, 5.0})
        for (double beta : {0.01, 0.1, 1.0, 10.0, 100.0}) {
            CAPTURE(alpha);
            CAPTURE(beta);
            CHECK(z_function(beta, alpha) == doctest::Approx(z_oracle(beta, alpha)).epsilon(1e-8));
        }
}

TEST_CASE("Z is nondecreasing and obeys the lower bound") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> lb(-4, 6), ad(2.05, 8.0);
    for (int i = 0; i < 100; ++i) {
        const double beta = std::pow(10.0, lb(rng)), alpha = ad(rng);
        const double bound = std::pow(beta, 2 / alpha) * z_asymptote_constant(alpha) - 1.0;
        CHECK(z_function(beta, alpha) >= bound);
        CHECK(z_function(beta * 1.1, alpha) >= z_function(beta, alpha));
    }
    CHECK(z_asymptote_constant(4.0) == doctest::Approx(kPi / 2).epsilon(1e-14));
}

TEST_CASE("equal-alpha closed form examples") {
    CHECK(sir_cdf_equal_alpha(1.0, 4.0) == doctest::Approx(1 - 1 / (1 + kPi / 4)).epsilon(1e-12));
    CHECK(sir_cdf_equal_alpha(1.0, 4.0) == doctest::Approx(0.4399).epsilon(2e-4));
    CHECK(sir_cdf_equal_alpha(0.0, 3.0) == 0.0);
    CHECK(sir_cdf_equal_alpha(100.0, 4.0) == doctest::Approx(1 - 1 / (1 + 10 * std::atan(10.0))).epsilon(1e-12));
    CHECK(sir_cdf_equal_alpha(100.0, 4.0) == doctest::Approx(0.9366).epsilon(2e-4));
    CHECK_THROWS_AS(sir_cdf_equal_alpha(1.0, 1.5), DomainError);
}

TEST_CASE("zeta") {
    CHECK(zeta(4.0) == doctest::Approx(std::pow(kPi / 2, -2)).epsilon(1e-14));
    CHECK(zeta(4.0) == doctest::Approx(0.4053).epsilon(1e-4));
    CHECK(zeta(3.0) == doctest::Approx(std::pow(4 * kPi / (3 * std::sqrt(3.0)), -1.5)).epsilon(1e-14));
    CHECK(zeta(3.0) == doctest::Approx(0.265894).epsilon(1e-5));
    CHECK(std::isfinite(zeta(40.0)));
    CHECK(zeta(40.0) > 0.0);
    CHECK_THROWS_AS(zeta(2.0), DomainError);
}

TEST_CASE("configuration") {
    const auto t = TierParams::with_wall_loss_db(1e-5, 1.0, 3.0, 5.0);
    CHECK(t.wall_gain == doctest::Approx(std::pow(10.0, -0.5)));
    CHECK(t.wall_loss_db() == doctest::Approx(5.0));
    HcnConfig h{{TierParams{1e-5, 1.0, 2.0, 1.0}}, 1};
    CHECK_THROWS_AS(h.validate(), ConfigError);
    HcnConfig h2{{TierParams{1e-5, 1.0, 3.0, 1.0}}, 2};
    CHECK_THROWS_AS(h2.validate(), ConfigError);
    CHECK_THROWS_AS((TierParams{1e-5, 1.0, 3.0, 1.5}.validate()), ConfigError);
}

TEST_CASE("association examples") {
    const HcnConfig one{{TierParams{1e-5, 1.0, 3.5, 1.0}}, 1};
    CHECK(association_probability(one, 1) == 1.0);
    const HcnConfig two{{TierParams{1e-6, 1.0, 4.0, 1.0}, TierParams{4e-6, 1.0, 4.0, 1.0}}, 1};
    CHECK(association_probability(two, 1) == doctest::Approx(0.2).epsilon(1e-8));
    CHECK(association_probability(two, 2) == doctest::Approx(0.8).epsilon(1e-8));
}

TEST_CASE("association on the reference network") {
    const auto h = scenarios::table1_hcn();
    double sum = 0.0;
    for (std::size_t k = 1; k <= 3; ++k) {
        const double a = association_probability(h, k);
        CHECK(a == doctest::Approx(assoc_oracle(h, k)).epsilon(1e-7));
        sum += a;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-6);
    CHECK(association_probability(h, 1) == doctest::Approx(0.760863).epsilon(1e-5));
}

TEST_CASE("association sums to one on random configurations") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 40; ++i) {
        const auto h = random_config(rng, i % 2 == 0);
        double sum = 0.0;
        for (std::size_t k = 1; k <= h.size(); ++k) sum += association_probability(h, k);
        CHECK(std::abs(sum - 1.0) <= 1e-6);
    }
}

TEST_CASE("equal-alpha association closed form") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 20; ++i) {
        const auto h = random_config(rng, true);
        const double a = h.tiers[0].alpha;
        double denom = 0.0;
        for (const auto& t : h.tiers) denom += t.density * std::pow(t.power_w * t.wall_gain, 2 / a);
        for (std::size_t k = 1; k <= h.size(); ++k) {
            const auto& t = h.tiers[k - 1];
            CHECK(association_probability(h, k) ==
                  doctest::Approx(t.density * std::pow(t.power_w * t.wall_gain, 2 / a) / denom).epsilon(1e-8));
        }
    }
}

TEST_CASE("sir cdf basics") {
    const auto h = scenarios::table1_hcn();
    CHECK(sir_cdf(h, 2, 0.0) == 0.0);
    CHECK(sir_cdf(h, 2, 1e12) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK_THROWS_AS(sir_cdf(h, 4, 1.0), DomainError);
    CHECK_THROWS_AS(sir_cdf(h, 1, -1.0), DomainError);
}

TEST_CASE("general integral equals the equal-alpha closed form") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 15; ++i) {
        const auto h = random_config(rng, true);
        for (std::size_t k = 1; k <= h.size(); ++k)
            for (double b : {0.1, 1.0, 10.0})
                CHECK(std::abs(sir_cdf(h, k, b) - sir_cdf_equal_alpha(b, h.tiers[0].alpha)) <= 1e-6);
    }
}

TEST_CASE("sir cdf on the reference network against the Simpson oracle") {
    const auto h = scenarios::table1_hcn();
    for (std::size_t k = 1; k <= 3; ++k)
        for (double b : {0.01, 0.1, 1.0, 10.0, 100.0}) {
            CAPTURE(k);
            CAPTURE(b);
            CHECK(std::abs(sir_cdf(h, k, b) - q_oracle(h, k, b)) <= 1e-7);
        }
}

TEST_CASE("sir cdf is nondecreasing on a log grid") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 10; ++i) {
        const auto h = random_config(rng, false);
        const std::size_t k = h.neighbor_tier;
        double prev = 0.0;
        for (int g = 0; g < 20; ++g) {
            const double b = std::pow(10.0, -3 + 6.0 * g / 19);
            const double q = sir_cdf(h, k, b);
            CHECK(q >= prev - 1e-12);
            CHECK(q <= 1.0);
            prev = q;
        }
    }
}

TEST_CASE("equal-alpha sir cdf is invariant under common rescaling") {
    auto h = scenarios::table1_hcn().with_equal_alpha(3.5);
    auto g = h;
    for (auto& t : g.tiers) {
        t.density *= 7.3;
        t.power_w *= 0.04;
    }
    for (std::size_t k = 1; k <= 3; ++k)
        for (double b : {0.05, 1.0, 20.0}) CHECK(std::abs(sir_cdf(h, k, b) - sir_cdf(g, k, b)) <= 1e-6);
}

TEST_CASE("tabulated cdf tracks direct evaluation") {
    const auto h = scenarios::table1_hcn();
    for (std::size_t k = 1; k <= 3; ++k) {
        const auto table = cached_sir_cdf_table(h, k);
        CHECK(table->max_checked_error() <= 1e-7);
        CHECK(table.get() == cached_sir_cdf_table(h, k).get());
        std::mt19937_64 rng(k);
        std::uniform_real_distribution<double> lb(-6, 8);
        for (int i = 0; i < 30; ++i) {
            const double b = std::pow(10.0, lb(rng));
            CHECK(std::abs((*table)(b) - sir_cdf(h, k, b)) <= 1e-6);
        }
        CHECK(tabulated_sir_cdf(h, k)(1.0) == doctest::Approx(sir_cdf(h, k, 1.0)).epsilon(1e-6));
    }
}

TEST_CASE("mean log spectral efficiency") {
    // Equal α = 4: depends only on α, evaluated here by Simpson in t on [0, 60].
    const double oracle4 = oracle::simpson([](double t) { return 1.0 - oracle::q4(std::exp2(t) - 1.0); }, 0.0, 60.0);
    const HcnConfig a{{TierParams{1e-6, 40, 4, 1}, TierParams{1e-5, 1, 4, 1}}, 2};
    const HcnConfig b{{TierParams{3e-4, 2, 4, 1}}, 1};
    CHECK(mean_log_spectral_efficiency(a, 2) == doctest::Approx(oracle4).epsilon(1e-6));
    CHECK(mean_log_spectral_efficiency(b, 1) == doctest::Approx(oracle4).epsilon(1e-6));

    // q ≡ 0 means no interference; the integral diverges.
    CHECK_THROWS_AS(mean_log_spectral_efficiency([](double) { return 0.0; }), AccuracyError);

    const auto h = scenarios::table1_hcn();
    CHECK(mean_log_spectral_efficiency(h, 1) == doctest::Approx(1.29274).epsilon(1e-4));
}
