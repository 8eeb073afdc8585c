#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "orthocone/errors.hpp"

namespace orthocone {

using complex = std::complex<double>;

inline constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599343819;

// value = mantissa * exp(log_scale)
struct ScaledValue {
    double mantissa = 0.0;
    double log_scale = 0.0;

    double value() const { return mantissa == 0.0 ? 0.0 : mantissa * std::exp(log_scale); }

    // Moves the binary exponent of the mantissa into log_scale; |mantissa| lands in [1/2, 1).
    ScaledValue normalized() const {
        if (mantissa == 0.0) return {0.0, 0.0};
        int e = 0;
        double m = std::frexp(mantissa, &e);
        return {m, log_scale + e * std::numbers::ln2};
    }
};

inline double phi_real(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// e^{x^2/2} Phi(-x) for x >= 0; bounded by 1/2 and ~ 1/(sqrt(2 pi) x) at infinity.
inline double mills_scaled(double x) {
    if (x < 0.0) throw NonPositiveArgument("mills_scaled needs x >= 0");
    if (x < 25.0) return std::exp(0.5 * x * x) * 0.5 * std::erfc(x / std::numbers::sqrt2);
    // Laplace continued fraction for the Mills ratio, converged to double well before 60 levels at x >= 25.
    double v = x;
    for (int n = 60; n >= 1; --n) v = x + n / v;
    return inv_sqrt_2pi / v;
}

namespace detail {

// Sum_{n>=0} a^{2n+1} / ((2n+1) 2^n n!) for a >= 0; all terms positive.
inline double imag_phi_series(double a) {
    double p = a, s = 0.0;
    const double a2 = a * a;
    for (int n = 0; n < 400; ++n) {
        double term = p / (2 * n + 1);
        s += term;
        if (term < 1e-18 * s) break;
        p *= a2 / (2.0 * (n + 1));
    }
    return s;
}

// Dawson's integral F(x) = e^{-x^2} int_0^x e^{t^2} dt via its J-fraction, x > 0.
inline double dawson_cf(double x) {
    const double z2 = x * x;
    double v = 161.0 + 2.0 * z2;
    for (int n = 80; n >= 1; --n) v = (2 * n - 1) + 2.0 * z2 - 4.0 * n * z2 / v;
    return x / v;
}

}  // namespace detail

// d~(a) = e^{-a^2/2} D(a), with D(a) = (1/sqrt(2 pi)) int_0^a e^{t^2/2} dt. Odd, bounded.
inline double dawson_scaled(double a) {
    const double s = std::fabs(a);
    double r;
    if (s <= 4.0) {
        r = detail::imag_phi_series(s) * std::exp(-0.5 * s * s) * inv_sqrt_2pi;
    } else if (s < 1e8) {
        r = detail::dawson_cf(s / std::numbers::sqrt2) / std::sqrt(std::numbers::pi);
    } else {
        r = inv_sqrt_2pi / s * (1.0 + 1.0 / (s * s));
    }
    return a < 0 ? -r : r;
}

// D(a) = Im Phi(ia) in scaled form; log_scale is always a^2/2.
inline ScaledValue imag_part_D(double a) {
    return {dawson_scaled(a), 0.5 * a * a};
}

// Taylor partial sum of Phi on C. Test-grade: loses digits as |z| grows off the imaginary axis.
inline complex phi_complex(complex z, int n_terms = 300) {
    if (std::abs(z) > 8.0) throw DomainTooLarge("phi_complex series requires |z| <= 8");
    using cld = std::complex<long double>;
    const cld zz(z.real(), z.imag());
    const cld mz2 = -zz * zz;
    cld p = zz, s = 0.0L;
    for (int n = 0; n < n_terms; ++n) {
        s += p / static_cast<long double>(2 * n + 1);
        p *= mz2 / static_cast<long double>(2 * (n + 1));
        if (std::abs(p) < 1e-30L && n > 2) break;
    }
    s *= static_cast<long double>(inv_sqrt_2pi);
    return {0.5 + static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

inline constexpr double phi_bound_constant = 2.0;

// |Phi(z)| <= C max{1, e^{-Re(z^2)/2}}.
inline double phi_modulus_bound(complex z) {
    const double re_z2 = z.real() * z.real() - z.imag() * z.imag();
    return phi_bound_constant * std::max(1.0, std::exp(-0.5 * re_z2));
}

// Phi(-x) <= e^{-x^2/2} / (sqrt(2 pi) x)
inline double mills_upper(double x) {
    if (!(x > 0.0)) throw NonPositiveArgument("mills_upper requires x > 0");
    // Past ~37 the value is subnormal and rounding can undercut Phi(-x); pad by a few units of the last place.
    return std::exp(-0.5 * x * x) * inv_sqrt_2pi / x + 4 * std::numeric_limits<double>::denorm_min();
}

}  // namespace orthocone
