#include "oqc/numerics.hpp"

#include "oqc/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

namespace oqc::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// ---------------------------------------------------------------------------
// Gauss-Kronrod 21-point rule (QUADPACK qk21 abscissae and weights).
// Odd indices of kXgk are the 10-point Gauss nodes.
// ---------------------------------------------------------------------------
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525197502, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651146};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    int depth;
};

struct ByError {
    bool operator()(const Segment& lhs, const Segment& rhs) const { return lhs.error < rhs.error; }
};

double checked(const RealFn& f, double x) {
    const double y = f(x);
    if (!std::isfinite(y)) {
        std::ostringstream os;
        os << "integrand is not finite at x = " << x;
        throw AccuracyError(os.str(), std::numeric_limits<double>::quiet_NaN());
    }
    return y;
}

Segment gauss_kronrod(const RealFn& f, double a, double b, int depth) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = checked(f, center);
    double kronrod = fc * kWgk[10];
    double gauss = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double sum = checked(f, center - dx) + checked(f, center + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss), depth};
}

double integrate_finite(const RealFn& f, double a, double b, const QuadratureSpec& spec) {
    std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
    Segment whole = gauss_kronrod(f, a, b, 0);
    double total = whole.value;
    double total_error = whole.error;
    heap.push(whole);

    constexpr std::size_t kMaxSegments = 20000;
    while (total_error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        const bool too_narrow = !(mid > worst.a && mid < worst.b);
        if (worst.depth >= spec.max_depth || too_narrow || heap.size() >= kMaxSegments) {
            std::ostringstream os;
            os << "quadrature did not converge on [" << a << ", " << b << "]: estimated error "
               << total_error << " after " << heap.size() << " subintervals";
            throw AccuracyError(os.str(), total);
        }
        heap.pop();
        const Segment left = gauss_kronrod(f, worst.a, mid, worst.depth + 1);
        const Segment right = gauss_kronrod(f, mid, worst.b, worst.depth + 1);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);

        // Re-sum occasionally; the running totals drift after many updates.
        if (heap.size() % 64 == 0) {
            auto copy = heap;
            total = 0.0;
            total_error = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                total_error += copy.top().error;
                copy.pop();
            }
        }
    }
    return total;
}

// ln(x^a e^{-x} / Γ(a)), evaluated so that large a does not lose digits.
double log_gamma_prefix(double a, double x) {
    if (a < 20.0) return a * std::log(x) - x - log_gamma(a);
    const double t = (x - a) / a;
    const double inv = 1.0 / a;
    const double inv2 = inv * inv;
    // Stirling remainder lnΓ(a) - [(a - 1/2) ln a - a + ln(2π)/2].
    const double stirling =
        inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    return a * (std::log1p(t) - t) + 0.5 * std::log(a) - 0.5 * std::log(2.0 * std::numbers::pi) -
           stirling;
}

void check_gamma_args(double shape, double x) {
    if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("incomplete gamma: shape must be positive");
    if (!(x >= 0.0) || std::isnan(x)) throw DomainError("incomplete gamma: x must be nonnegative");
}

// P(a, x) by its power series; valid for x < a + 1.
double lower_series(double a, double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n < 200000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (term < sum * kEps) break;
    }
    return std::exp(log_gamma_prefix(a, x)) * sum / a;
}

// Q(a, x) by Lentz's continued fraction; valid for x >= a + 1.
double upper_fraction(double a, double x) {
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 200000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return std::exp(log_gamma_prefix(a, x)) * h;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0)) throw DomainError("QuadratureSpec: abs_tol must be positive");
    if (!(rel_tol > 0.0)) throw DomainError("QuadratureSpec: rel_tol must be positive");
    if (max_depth < 10) throw DomainError("QuadratureSpec: max_depth must be at least 10");
}

void RootSpec::validate() const {
    if (!(x_tol > 0.0)) throw DomainError("RootSpec: x_tol must be positive");
    if (!(f_tol > 0.0)) throw DomainError("RootSpec: f_tol must be positive");
    if (max_iter < 1) throw DomainError("RootSpec: max_iter must be positive");
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma: argument must be positive and finite");
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

double reg_lower_gamma(double shape, double x) {
    check_gamma_args(shape, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < shape + 1.0) return std::clamp(lower_series(shape, x), 0.0, 1.0);
    return std::clamp(1.0 - upper_fraction(shape, x), 0.0, 1.0);
}

double reg_upper_gamma(double shape, double x) {
    check_gamma_args(shape, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < shape + 1.0) return std::clamp(1.0 - lower_series(shape, x), 0.0, 1.0);
    return std::clamp(upper_fraction(shape, x), 0.0, 1.0);
}

double inv_reg_lower_gamma(double shape, double p, const RootSpec& spec) {
    if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("inv_reg_lower_gamma: shape must be positive");
    if (!(p >= 0.0) || p > 1.0) throw DomainError("inv_reg_lower_gamma: p must lie in [0, 1)");
    if (p == 1.0) throw UnboundedError("inv_reg_lower_gamma: p = 1 has no finite inverse");
    if (p == 0.0) return 0.0;

    const double a = shape;
    const double q = 1.0 - p;
    // Residual P(a, x) - p, taken from the tail that carries the digits.
    auto residual = [&](double x) {
        return p <= 0.5 ? reg_lower_gamma(a, x) - p : q - reg_upper_gamma(a, x);
    };

    // Initial guess (Wilson-Hilferty for a > 1, small-x series otherwise).
    double x;
    if (a > 1.0) {
        const double pp = p < 0.5 ? p : q;
        const double t = std::sqrt(-2.0 * std::log(pp));
        double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
        if (p < 0.5) z = -z;
        x = std::max(1e-3, a * std::pow(1.0 - 1.0 / (9.0 * a) - z / (3.0 * std::sqrt(a)), 3));
    } else {
        const double t = 1.0 - a * (0.253 + a * 0.12);
        x = p < t ? std::pow(p / t, 1.0 / a) : 1.0 - std::log1p(-(p - t) / (1.0 - t));
    }

    // Halley iterations on the density.
    bool converged = false;
    for (int it = 0; it < 60 && x > 0.0 && std::isfinite(x); ++it) {
        const double err = residual(x);
        const double density = std::exp(log_gamma_prefix(a, x)) / x;
        if (density == 0.0 || !std::isfinite(density)) break;
        const double u = err / density;
        const double step = u / (1.0 - 0.5 * std::min(1.0, u * ((a - 1.0) / x - 1.0)));
        double next = x - step;
        if (next <= 0.0) next = 0.5 * x;
        if (std::abs(next - x) <= 4 * kEps * next) {
            x = next;
            converged = true;
            break;
        }
        x = next;
    }
    RootSpec inner = spec;
    inner.f_tol = std::min(spec.f_tol, 1e-13 * std::min(p, q));
    if (converged && std::abs(residual(x)) <= std::max(inner.f_tol, 64 * kEps * std::min(p, q))) return x;

    // Safeguarded fallback on an explicit bracket.
    double lo = 0.0;
    double hi = std::max(1.0, a);
    while (residual(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw AccuracyError("inv_reg_lower_gamma: bracket search overflowed", lo);
    }
    return find_root(residual, lo, hi, inner);
}

double log_binomial(double n, double k) {
    if (!(k >= 0.0) || !(n >= k)) throw DomainError("log_binomial: need n >= k >= 0");
    if (k == 0.0 || k == n) return 0.0;
    return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

double integrate(const RealFn& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (std::isnan(a) || std::isnan(b)) throw DomainError("integrate: NaN limit");
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a, spec);
    if (std::isinf(a)) throw DomainError("integrate: lower limit must be finite");
    if (std::isinf(b)) {
        auto mapped = [&](double t) {
            const double s = 1.0 - t;
            return f(a + t / s) / (s * s);
        };
        return integrate_finite(mapped, 0.0, 1.0, spec);
    }
    return integrate_finite(f, a, b, spec);
}

double integrate(const RealFn& f, double a, double b, std::span<const double> breaks,
                 const QuadratureSpec& spec) {
    if (a > b) return -integrate(f, b, a, breaks, spec);
    std::vector<double> cuts{a};
    for (double x : breaks) {
        if (x > a && x < b) cuts.push_back(x);
    }
    std::sort(cuts.begin() + 1, cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(b);

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        try {
            total += integrate(f, cuts[i], cuts[i + 1], spec);
        } catch (const AccuracyError& e) {
            throw AccuracyError(e.what(), total + e.best_estimate());
        }
    }
    return total;
}

double find_root(const RealFn& f, double lo, double hi, const RootSpec& spec) {
    spec.validate();
    double a = lo;
    double b = hi;
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (std::isnan(fa) || std::isnan(fb) || (fa > 0.0) == (fb > 0.0)) {
        std::ostringstream os;
        os << "find_root: no sign change on [" << lo << ", " << hi << "] (f = " << fa << ", " << fb << ")";
        throw BracketError(os.str());
    }

    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (int it = 0; it < spec.max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * kEps * std::abs(b) + 0.5 * spec.x_tol * std::max(1.0, std::abs(b));
        const double m = 0.5 * (c - b);
        if (std::abs(fb) <= spec.f_tol || std::abs(m) <= tol) return b;

        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p;
            double q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
        if (std::isnan(fb)) throw DomainError("find_root: function returned NaN");
    }
    throw AccuracyError("find_root: iteration limit reached", b);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");
    // Acklam's rational approximation followed by one Halley step.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace oqc::numerics
