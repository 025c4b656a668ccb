#pragma once

// Special functions, adaptive quadrature and bracketed root finding shared by
// the analytic modules. Everything here is a pure function.

#include <functional>
#include <initializer_list>
#include <span>

namespace oqc::numerics {

using RealFn = std::function<double(double)>;

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_depth = 50;  ///< maximum bisection depth of any subinterval

    /// Throws DomainError when a field breaks its invariant.
    void validate() const;
};

struct RootSpec {
    double x_tol = 1e-12;  ///< bracket width, relative to max(1, |x|)
    double f_tol = 1e-12;
    int max_iter = 200;

    void validate() const;
};

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(shape, x) = γ(shape, x) / Γ(shape).
double reg_lower_gamma(double shape, double x);

/// Complement Q(shape, x) = 1 - P(shape, x), evaluated without cancellation.
double reg_upper_gamma(double shape, double x);

/// y >= 0 with P(shape, y) = p. Throws UnboundedError for p == 1.
double inv_reg_lower_gamma(double shape, double p, const RootSpec& spec = {});

/// ln C(n, k) for real n >= k >= 0 via log-gamma.
double log_binomial(double n, double k);

/// ∫_a^b f. `b` may be +infinity; the tail is mapped onto [0, 1) with
/// x = a + t / (1 - t). Throws AccuracyError (carrying the best estimate) when
/// a subinterval reaches `max_depth` before the tolerance is met.
double integrate(const RealFn& f, double a, double b, const QuadratureSpec& spec = {});

/// Same as integrate() but splits [a, b] at the given interior points first.
/// Points outside (a, b) are ignored.
double integrate(const RealFn& f, double a, double b, std::span<const double> breaks,
                 const QuadratureSpec& spec = {});

/// Brent's method on a bracket [lo, hi] with f(lo)·f(hi) <= 0.
double find_root(const RealFn& f, double lo, double hi, const RootSpec& spec = {});

/// Standard normal quantile Φ^{-1}(p), 0 < p < 1.
double normal_quantile(double p);

}  // namespace oqc::numerics
