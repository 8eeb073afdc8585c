#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "orthocone/errors.hpp"
#include "orthocone/gram.hpp"
#include "orthocone/quadrature.hpp"
#include "orthocone/specfun.hpp"

namespace orthocone {

enum class Branch {
    AllPositiveL0Pos,
    AllPositiveL0Neg,
    OneNegative,
    LimitRectangularBeta,
    LimitRectangularGamma,
    Degenerate,
};

inline const char* to_string(Branch b) {
    switch (b) {
        case Branch::AllPositiveL0Pos: return "AllPositiveL0Pos";
        case Branch::AllPositiveL0Neg: return "AllPositiveL0Neg";
        case Branch::OneNegative: return "OneNegative";
        case Branch::LimitRectangularBeta: return "LimitRectangularBeta";
        case Branch::LimitRectangularGamma: return "LimitRectangularGamma";
        case Branch::Degenerate: return "Degenerate";
    }
    return "?";
}

struct AngleResult {
    double value = 0.0;
    double err_estimate = 0.0;
    Branch branch = Branch::Degenerate;
};

namespace detail {

// Mantissa of Phi(i s a) = e^{a^2/2} (e^{-a^2/2}/2 + i s d~(a)).
inline complex imag_axis_mantissa(double a, int s) {
    return {0.5 * std::exp(-0.5 * a * a), s * dawson_scaled(a)};
}

inline double clamp_probability(double v) { return std::clamp(v, 0.0, 1.0); }

inline double inverse_sqrt_scale(double lambda) { return 1.0 / std::sqrt(std::fabs(lambda)); }

inline std::vector<double> merge_breaks(std::vector<double> b, const std::vector<double>& extra) {
    const double Y = b.back();
    for (double x : extra)
        if (x > 0.0 && x < Y) b.push_back(x);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

}  // namespace detail

// Case lambda_j > 0 for all j, with lambda0 > 0 or lambda0 < -sum(lambda).
inline AngleResult g_all_positive(double lambda0, const std::vector<double>& lambdas,
                                  const std::vector<int>& eps, const QuadratureConfig& q = {}) {
    double sum = 0.0;
    for (double l : lambdas) {
        if (!(l > 0.0)) throw InvalidParams("g_all_positive needs every lambda_j > 0");
        sum += l;
    }
    if (eps.size() != lambdas.size()) throw InvalidParams("eps and lambdas differ in length");
    if (lambda0 == 0.0) throw ZeroParameter("lambda0 is zero");
    if (!(lambda0 > 0.0 || lambda0 < -sum)) throw InvalidParams("sum condition violated");
    const std::size_t d = lambdas.size();
    const Branch br = lambda0 > 0 ? Branch::AllPositiveL0Pos : Branch::AllPositiveL0Neg;
    if (d == 0) return {1.0, 0.0, Branch::Degenerate};
    if (d == 1) return {0.5, 0.0, br};

    std::vector<double> b(d);
    for (std::size_t j = 0; j < d; ++j) b[j] = std::sqrt(lambdas[j] / std::fabs(lambda0));
    const double bmax = *std::max_element(b.begin(), b.end());

    if (lambda0 > 0) {
        auto f = [&](double x) {
            double p = 1.0, m = 1.0;
            for (std::size_t j = 0; j < d; ++j) {
                const double a = eps[j] * b[j] * x;
                p *= phi_real(a);
                m *= phi_real(-a);
            }
            return (p + m) * inv_sqrt_2pi * std::exp(-0.5 * x * x);
        };
        const double Y = truncation_point(-1.0, q.abs_tol, q);
        auto r = integrate(f, geometric_breaks(std::min(1.0, 1.0 / bmax), Y), q);
        const double tail = 2.0 * inv_sqrt_2pi * gaussian_tail(-1.0, Y);
        return {detail::clamp_probability(r.value), r.error + tail, br};
    }

    // rho = sum b_j^2 - 1 < 0 is the net Gaussian rate of the folded integrand.
    const double rho = (lambda0 + sum) / (-lambda0);
    auto f = [&](double x) {
        complex m = 1.0;
        for (std::size_t j = 0; j < d; ++j) m *= detail::imag_axis_mantissa(b[j] * x, eps[j]);
        return 2.0 * inv_sqrt_2pi * m.real() * std::exp(0.5 * rho * x * x);
    };
    const double Y = truncation_point(rho, q.abs_tol, q);
    const double smin = std::min({1.0, 1.0 / bmax, 1.0 / std::sqrt(-rho)});
    auto r = integrate(f, geometric_breaks(smin, Y), q);
    const double tail = 2.0 * inv_sqrt_2pi * gaussian_tail(rho, Y);
    return {detail::clamp_probability(r.value), r.error + tail, br};
}

// Case lambda0 > 0 and exactly one lambda_k < 0 with lambda0 + sum(lambda) < 0.
inline AngleResult g_one_negative(double lambda0, const std::vector<double>& lambdas,
                                  const std::vector<int>& eps, const QuadratureConfig& q = {}) {
    if (!(lambda0 > 0.0)) throw InvalidParams("g_one_negative needs lambda0 > 0");
    if (eps.size() != lambdas.size()) throw InvalidParams("eps and lambdas differ in length");
    const std::size_t d = lambdas.size();
    std::size_t k = d;
    double S = lambda0;
    for (std::size_t j = 0; j < d; ++j) {
        if (lambdas[j] == 0.0) throw ZeroParameter("lambda is zero");
        if (lambdas[j] < 0) {
            if (k != d) throw InvalidParams("more than one negative parameter");
            k = j;
        }
        S += lambdas[j];
    }
    if (k == d) throw InvalidParams("g_one_negative needs exactly one negative lambda");
    if (!(S < 0)) throw InvalidParams("sum condition violated");
    if (d == 1) return {0.5, 0.0, Branch::OneNegative};

    const double pref = std::sqrt(lambda0 / (2.0 * std::numbers::pi));
    const double tol = q.abs_tol / (2.0 * pref);
    const double lk = -lambdas[k];
    std::vector<double> a, s;
    double scale = std::min(detail::inverse_sqrt_scale(lambda0), detail::inverse_sqrt_scale(lk));
    scale = std::min(scale, detail::inverse_sqrt_scale(S));
    for (std::size_t j = 0; j < d; ++j) {
        if (j == k) continue;
        a.push_back(std::sqrt(lambdas[j]));
        s.push_back(eps[k] * eps[j]);
        scale = std::min(scale, 1.0 / a.back());
    }

    auto f1 = [&](double y) {
        double p = std::exp(-0.5 * lambda0 * y * y);
        for (std::size_t j = 0; j < a.size(); ++j) p *= phi_real(s[j] * a[j] * y);
        return p;
    };
    const double Y1 = truncation_point(-lambda0, tol, q);
    auto r1 = integrate(f1, geometric_breaks(scale, Y1), tol, q.rel_tol, q.max_depth);

    const double sk = std::sqrt(lk);
    auto f2 = [&](double y) {
        complex m = 1.0;
        for (std::size_t j = 0; j < a.size(); ++j) m *= detail::imag_axis_mantissa(a[j] * y, s[j]);
        return 2.0 * std::exp(0.5 * S * y * y) * mills_scaled(sk * y) * m.imag();
    };
    const double Y2 = truncation_point(S, tol, q);
    auto r2 = integrate(f2, geometric_breaks(scale, Y2), tol, q.rel_tol, q.max_depth);

    const double tails = gaussian_tail(-lambda0, Y1) + gaussian_tail(S, Y2);
    return {detail::clamp_probability(pref * (r1.value + r2.value)),
            pref * (r1.error + r2.error + tails), Branch::OneNegative};
}

// g_d(params) = P[eps_j eta_j <= 0 for all j], eta ~ N(0, 1/lambda0 + delta_ij/lambda_i).
inline AngleResult g(const ConeParams& p, const QuadratureConfig& q = {}) {
    auto c = validate(p);
    if (!c.valid()) throw InvalidParams(c.reason);
    if (p.dim() == 0) return {1.0, 0.0, Branch::Degenerate};
    if (c.kind == CaseKind::A || c.negative_index == 0) return g_all_positive(p.lambda0, p.lambdas, p.eps, q);
    return g_one_negative(p.lambda0, p.lambdas, p.eps, q);
}

inline AngleResult g(double lambda0, const std::vector<double>& lambdas, const std::vector<int>& eps,
                     const QuadratureConfig& q = {}) {
    return g(ConeParams{lambda0, lambdas, eps}, q);
}

namespace detail {

inline void check_shifted_inputs(const std::vector<double>& lambdas, double r, const std::vector<double>& t,
                                 const std::vector<int>& eps) {
    if (t.size() != lambdas.size() || eps.size() != lambdas.size())
        throw InvalidParams("lambdas, thresholds and eps differ in length");
    double sum = 0.0;
    for (double l : lambdas) {
        if (!(l > 0.0)) throw InvalidParams("shifted_orthant needs every lambda_j > 0");
        sum += l;
    }
    if (!(r > -1.0 / sum)) throw InvalidParams("shifted_orthant needs r > -1/sum(lambda)");
}

inline bool all_zero(const std::vector<double>& t) {
    return std::all_of(t.begin(), t.end(), [](double x) { return x == 0.0; });
}

// Shared evaluation of P[eps_j eta_j >= t_j] for cov r + delta_ij/lambda_i.
// full_line integrates the single product over [-Y, Y]; otherwise the folded two-product form over [0, Y].
inline QuadResult shifted_orthant_impl(const std::vector<double>& lambdas, double r, const std::vector<double>& t,
                                       const std::vector<int>& eps, const QuadratureConfig& q, bool full_line) {
    check_shifted_inputs(lambdas, r, t, eps);
    const std::size_t d = lambdas.size();
    if (d == 0) return {1.0, 0.0};
    double sum = 0.0;
    for (double l : lambdas) sum += l;
    std::vector<double> sl(d);
    for (std::size_t j = 0; j < d; ++j) sl[j] = std::sqrt(lambdas[j]);

    if (r == 0.0) {
        double p = 1.0;
        for (std::size_t j = 0; j < d; ++j) p *= phi_real(-t[j] * sl[j]);
        return {p, 0.0};
    }

    const double rho = r > 0 ? -1.0 : -(1.0 + r * sum);
    const double Y = truncation_point(rho, q.abs_tol, q);
    const double sr = std::sqrt(std::fabs(r));
    double smin = std::min(1.0, 1.0 / std::sqrt(std::fabs(rho)));
    for (double l : sl) smin = std::min(smin, 1.0 / (sr * l));
    std::vector<double> extra;
    if (r > 0)
        for (std::size_t j = 0; j < d; ++j) extra.push_back(std::fabs(t[j]) / sr);

    std::function<double(double)> f;
    if (r > 0) {
        f = [&](double x) {
            double p = 1.0, m = 1.0;
            for (std::size_t j = 0; j < d; ++j) {
                p *= phi_real((eps[j] * sr * x - t[j]) * sl[j]);
                m *= phi_real((-eps[j] * sr * x - t[j]) * sl[j]);
            }
            const double w = inv_sqrt_2pi * std::exp(-0.5 * x * x);
            return full_line ? p * w : (p + m) * w;
        };
    } else if (all_zero(t)) {
        // Phi(i eps c x) in scaled form; folded sum is twice the real part.
        f = [&, rho](double x) {
            complex m = 1.0;
            for (std::size_t j = 0; j < d; ++j) m *= imag_axis_mantissa(sr * sl[j] * x, eps[j]);
            return (full_line ? 1.0 : 2.0) * inv_sqrt_2pi * m.real() * std::exp(0.5 * rho * x * x);
        };
    } else {
        double zmax = 0.0;
        for (std::size_t j = 0; j < d; ++j)
            zmax = std::max(zmax, std::hypot(t[j] * sl[j], sr * sl[j] * Y));
        if (zmax > 8.0)
            throw DomainTooLarge("r < 0 with nonzero thresholds needs Phi at |z| = " + std::to_string(zmax) +
                                 " > 8");
        f = [&](double x) {
            complex p = 1.0;
            for (std::size_t j = 0; j < d; ++j) p *= phi_complex({-t[j] * sl[j], eps[j] * sr * sl[j] * x});
            return (full_line ? 1.0 : 2.0) * p.real() * inv_sqrt_2pi * std::exp(-0.5 * x * x);
        };
    }

    auto brk = merge_breaks(geometric_breaks(smin, Y), extra);
    QuadResult res = integrate(f, brk, q);
    const double tail_mag = r > 0 ? 2.0 : 2.0 * std::pow(phi_bound_constant, static_cast<double>(d));
    double tail = tail_mag * inv_sqrt_2pi * gaussian_tail(rho, Y);
    if (full_line) {
        std::vector<double> neg;
        for (auto it = brk.rbegin(); it != brk.rend(); ++it) neg.push_back(-*it);
        QuadResult left = integrate(f, neg, q);
        res.value += left.value;
        res.error += left.error;
        tail *= 2.0;
    }
    res.error += tail;
    return res;
}

}  // namespace detail

// P[eps_j eta_j >= t_j for all j] with Cov(eta) = r + delta_ij/lambda_i, r > -1/sum(lambda).
inline double shifted_orthant(const std::vector<double>& lambdas, double r, const std::vector<double>& t,
                              const std::vector<int>& eps, const QuadratureConfig& q = {}) {
    return detail::shifted_orthant_impl(lambdas, r, t, eps, q, false).value;
}

// Same probability through the full-line single-product integral.
inline double shifted_orthant_full_line(const std::vector<double>& lambdas, double r, const std::vector<double>& t,
                                        const std::vector<int>& eps, const QuadratureConfig& q = {}) {
    return detail::shifted_orthant_impl(lambdas, r, t, eps, q, true).value;
}

// Relative offset from r = -1/sum(lambda) used in place of the boundary value itself.
inline constexpr double boundary_offset = 1e-8;

// P[eps_j (Z_j - Z) >= t_j] with Z_j ~ N(0, 1/lambda_j) independent and Z their lambda-weighted mean.
// Evaluated at r slightly above the boundary; the limit error is not quantified.
inline double centered_deviation_orthant(const std::vector<double>& lambdas, const std::vector<double>& t,
                                         const std::vector<int>& eps, const QuadratureConfig& q = {}) {
    double sum = 0.0;
    for (double l : lambdas) sum += l;
    return shifted_orthant(lambdas, -(1.0 - boundary_offset) / sum, t, eps, q);
}

// lim_{lambda_1 -> -inf} g_d(lambda0; lambda_1, rest; eps), eps of length rest.size() + 1.
inline AngleResult g_limit_lambda1_to_minus_inf(double lambda0, const std::vector<double>& rest,
                                                const std::vector<int>& eps, const QuadratureConfig& q = {}) {
    if (!(lambda0 > 0.0)) throw InvalidParams("limit needs lambda0 > 0");
    if (eps.size() != rest.size() + 1) throw InvalidParams("eps must have one more entry than the rest list");
    for (double l : rest)
        if (!(l > 0.0)) throw InvalidParams("limit needs positive remaining lambdas");
    if (rest.empty()) return {0.5, 0.0, Branch::LimitRectangularGamma};
    std::vector<double> b;
    double bmax = 0.0;
    for (double l : rest) {
        b.push_back(std::sqrt(l / lambda0));
        bmax = std::max(bmax, b.back());
    }
    auto f = [&](double x) {
        double p = inv_sqrt_2pi * std::exp(-0.5 * x * x);
        for (std::size_t j = 0; j < b.size(); ++j) p *= phi_real(eps[0] * eps[j + 1] * b[j] * x);
        return p;
    };
    const double Y = truncation_point(-1.0, q.abs_tol, q);
    auto r = integrate(f, geometric_breaks(std::min(1.0, 1.0 / bmax), Y), q);
    return {detail::clamp_probability(r.value), r.error + inv_sqrt_2pi * gaussian_tail(-1.0, Y),
            Branch::LimitRectangularGamma};
}

// lim_{lambda_1 -> -inf} g_d(-lambda0 - lambda_1; lambda_1, rest; eps), valid for lambda0 > sum(rest).
inline AngleResult g_limit_rectangular(double lambda0, const std::vector<double>& rest, const std::vector<int>& eps,
                                       const QuadratureConfig& q = {}) {
    if (eps.size() != rest.size() + 1) throw InvalidParams("eps must have one more entry than the rest list");
    double sr = 0.0;
    for (double l : rest) {
        if (!(l > 0.0)) throw InvalidParams("limit needs positive remaining lambdas");
        sr += l;
    }
    if (!(lambda0 > sr)) throw InvalidParams("limit needs lambda0 > sum of the remaining lambdas");
    const std::size_t d = rest.size() + 1;
    const double base = std::ldexp(1.0, -static_cast<int>(d));
    if (rest.empty()) return {0.5, 0.0, Branch::LimitRectangularBeta};

    std::vector<double> a;
    std::vector<int> s;
    double scale = std::min(1.0 / std::sqrt(lambda0), 1.0 / std::sqrt(lambda0 - sr));
    for (std::size_t j = 0; j < rest.size(); ++j) {
        a.push_back(std::sqrt(rest[j]));
        s.push_back(eps[0] * eps[j + 1]);
        scale = std::min(scale, 1.0 / a.back());
    }
    const double rho = sr - lambda0;
    // Im prod / y tends to 2^{2-d} sum_j s_j a_j / sqrt(2 pi) as y -> 0.
    double lim0 = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) lim0 += s[j] * a[j];
    lim0 *= std::ldexp(1.0, 2 - static_cast<int>(d)) * inv_sqrt_2pi / std::numbers::pi;
    auto f = [&](double y) {
        if (y == 0.0) return lim0;
        complex m = 1.0;
        for (std::size_t j = 0; j < a.size(); ++j) m *= detail::imag_axis_mantissa(a[j] * y, s[j]);
        return m.imag() * std::exp(0.5 * rho * y * y) / (std::numbers::pi * y);
    };
    const double Y = truncation_point(rho, q.abs_tol, q);
    auto r = integrate(f, geometric_breaks(scale, Y), q);
    const double tail = gaussian_tail(rho, Y) / (std::numbers::pi * Y);
    return {detail::clamp_probability(base + r.value), r.error + tail, Branch::LimitRectangularBeta};
}

}  // namespace orthocone
