#include "oracles.hpp"
#include "oqc/arrivals.hpp"
#include "oqc/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace oqc;

TEST_CASE("mean interarrival is 1/eta for every variant") {
    CHECK(mean_interarrival(ArrivalModel::poisson(50)) == doctest::Approx(0.02));
    CHECK(mean_interarrival(ArrivalModel::gamma(50, 7)) == doctest::Approx(0.02));
    CHECK(mean_interarrival(ArrivalModel::deterministic(100)) == doctest::Approx(0.01));
}

TEST_CASE("survival examples") {
    CHECK(survival(ArrivalModel::poisson(100), 0.01) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(survival(ArrivalModel::deterministic(100), 0.02) == 0.0);
    CHECK(survival(ArrivalModel::deterministic(100), 0.01) == 1.0);
    const double erlang4 = std::exp(-4.0) * (1 + 4 + 8 + 32.0 / 3);
    CHECK(survival(ArrivalModel::gamma(100, 4), 0.01) == doctest::Approx(erlang4).epsilon(1e-12));
    CHECK(erlang4 == doctest::Approx(0.4335).epsilon(1e-3));
    CHECK_THROWS_AS(survival(ArrivalModel::poisson(1), -1e-3), DomainError);
}

TEST_CASE("invalid models are rejected") {
    CHECK_THROWS_AS(ArrivalModel::poisson(0.0), DomainError);
    CHECK_THROWS_AS(ArrivalModel::gamma(10.0, 0.5), DomainError);
    CHECK_THROWS_AS(ArrivalModel::deterministic(-1.0), DomainError);
}

TEST_CASE("labels and shapes") {
    CHECK(ArrivalModel::poisson(1).label() == "poisson");
    CHECK(ArrivalModel::deterministic(1).label() == "deterministic");
    CHECK(ArrivalModel::gamma(1, 4).label() == "gamma(M=4)");
    CHECK(ArrivalModel::poisson(1).shape() == 1.0);
    CHECK(std::isinf(ArrivalModel::deterministic(1).shape()));
    CHECK(ArrivalModel::gamma(1, 4).has_integer_shape());
    CHECK_FALSE(ArrivalModel::gamma(1, 2.5).has_integer_shape());
    CHECK(ArrivalModel::gamma(1, 4).with_rate(7).rate() == 7.0);
}

TEST_CASE("survival properties") {
    const double eta = 20.0;
    for (double t = 0.0; t < 0.3; t += 0.003) {
        CHECK(std::abs(survival(ArrivalModel::gamma(eta, 1), t) - survival(ArrivalModel::poisson(eta), t)) <= 1e-12);
        CHECK(survival(ArrivalModel::gamma(eta, 3), t + 0.003) <= survival(ArrivalModel::gamma(eta, 3), t));
    }
    CHECK(survival(ArrivalModel::gamma(eta, 2.5), 0.0) == 1.0);
    // Large shape approaches the deterministic step away from t = 1/η.
    const auto big = ArrivalModel::gamma(eta, 256);
    const auto det = ArrivalModel::deterministic(eta);
    for (double u = 0.0; u < 3.0; u += 0.05) {
        if (std::abs(u - 1.0) < 0.2) continue;
        CHECK(std::abs(survival(big, u / eta) - survival(det, u / eta)) <= 0.05);
    }
}

TEST_CASE("cdf and density") {
    const auto g = ArrivalModel::gamma(10, 4);
    CHECK(interarrival_cdf(g, 0.1) + survival(g, 0.1) == doctest::Approx(1.0));
    const double dens = oracle::simpson([&](double t) { return interarrival_density(g, t); }, 0.0, 0.1);
    CHECK(dens == doctest::Approx(interarrival_cdf(g, 0.1)).epsilon(1e-8));
    CHECK(interarrival_cdf(ArrivalModel::deterministic(10), 0.1) == 1.0);
    CHECK(interarrival_cdf(ArrivalModel::deterministic(10), 0.0999) == 0.0);
    CHECK_THROWS_AS(interarrival_density(ArrivalModel::deterministic(10), 0.1), DomainError);
}

TEST_CASE("sampling moments") {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) CHECK(sample_interarrival(ArrivalModel::deterministic(10), rng) == 0.1);

    const int n = 1000000;
    double sum = 0.0;
    const auto p = ArrivalModel::poisson(10);
    for (int i = 0; i < n; ++i) sum += sample_interarrival(p, rng);
    CHECK(std::abs(sum / n - 0.1) <= 3 * 0.1 / 1000);

    const auto g = ArrivalModel::gamma(10, 4);
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = sample_interarrival(g, rng);
        s1 += t;
        s2 += t * t;
    }
    const double mean = s1 / n, var = s2 / n - mean * mean;
    CHECK(var == doctest::Approx(0.0025).epsilon(0.01));
}

TEST_CASE("empirical survival matches analytic within 3 binomial SE") {
    Rng rng(5);
    const double eta = 10.0;
    const int n = 100000;
    for (const auto& a : {ArrivalModel::poisson(eta), ArrivalModel::gamma(eta, 4), ArrivalModel::gamma(eta, 2.5)}) {
        std::vector<double> draws(n);
        for (auto& t : draws) t = sample_interarrival(a, rng);
        for (double u : {0.5, 1.0, 2.0}) {
            const double t = u / eta;
            int hits = 0;
            for (double x : draws) hits += x >= t;
            const double p = survival(a, t);
            const double se = std::sqrt(p * (1 - p) / n);
            CAPTURE(a.label());
            CAPTURE(u);
            CHECK(std::abs(double(hits) / n - p) <= 3 * se);
        }
    }
}
