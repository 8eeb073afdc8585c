#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "orthocone/errors.hpp"

namespace orthocone {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 30;
    // Extra nats of decay demanded beyond ln(1/abs_tol) when choosing the truncation point.
    double truncation_safety = 40.0;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

inline constexpr std::array<double, 8> gk15_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk15_wk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (x[1], x[3], x[5], x[7]).
inline constexpr std::array<double, 4> g7_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    int depth;
};

template <class F>
Panel gk15(F& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * gk15_wk[7];
    double g = fc * g7_w[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * gk15_x[i];
        const double s = f(c - dx) + f(c + dx);
        k += gk15_wk[i] * s;
        if (i % 2 == 1) g += g7_w[i / 2] * s;
    }
    return {a, b, k * h, std::fabs((k - g) * h), depth};
}

}  // namespace detail

// Globally adaptive G7-K15 over the panels delimited by `breaks` (sorted, at least two).
// Panels are bisected largest-error first; the sum is taken in left-endpoint order.
template <class F>
QuadResult integrate(F&& f, const std::vector<double>& breaks, double abs_tol, double rel_tol,
                     int max_depth) {
    auto cmp = [](const detail::Panel& x, const detail::Panel& y) {
        return x.error < y.error || (x.error == y.error && x.a > y.a);
    };
    std::priority_queue<detail::Panel, std::vector<detail::Panel>, decltype(cmp)> open(cmp);
    std::vector<detail::Panel> done;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        auto p = detail::gk15(f, breaks[i], breaks[i + 1], 0);
        total += p.value;
        err += p.error;
        open.push(p);
    }
    const std::size_t panel_cap = 200000;
    while (!open.empty() && err > std::max(abs_tol, rel_tol * std::fabs(total))) {
        auto p = open.top();
        open.pop();
        if (p.depth >= max_depth || done.size() + open.size() > panel_cap) {
            done.push_back(p);
            continue;
        }
        const double m = 0.5 * (p.a + p.b);
        auto l = detail::gk15(f, p.a, m, p.depth + 1);
        auto r = detail::gk15(f, m, p.b, p.depth + 1);
        total += l.value + r.value - p.value;
        err += l.error + r.error - p.error;
        open.push(l);
        open.push(r);
    }
    while (!open.empty()) {
        done.push_back(open.top());
        open.pop();
    }
    std::sort(done.begin(), done.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    QuadResult out;
    for (const auto& p : done) {
        out.value += p.value;
        out.error += p.error;
    }
    if (!std::isfinite(out.value) || out.error > std::max(abs_tol, rel_tol * std::fabs(out.value)))
        throw QuadratureFailure("tolerance not met within max_depth (estimated error " +
                                std::to_string(out.error) + ")");
    return out;
}

template <class F>
QuadResult integrate(F&& f, const std::vector<double>& breaks, const QuadratureConfig& q) {
    return integrate(f, breaks, q.abs_tol, q.rel_tol, q.max_depth);
}

// Truncation point Y for an integrand dominated by e^{rho y^2/2}, rho < 0.
inline double truncation_point(double rho, double abs_tol, const QuadratureConfig& q) {
    const double L = std::log(1.0 / abs_tol) + q.truncation_safety;
    return std::sqrt(2.0 * L / std::fabs(rho));
}

// Upper bound of int_Y^inf e^{rho y^2/2} dy.
inline double gaussian_tail(double rho, double Y) {
    const double r = std::fabs(rho);
    return std::exp(-0.5 * r * Y * Y) / (r * Y);
}

// Breakpoints 0 < s < 2s < 4s < ... < Y so that features at every scale >= s get their own panel.
inline std::vector<double> geometric_breaks(double smallest_scale, double Y) {
    std::vector<double> b{0.0};
    double s = std::min(smallest_scale, Y);
    if (!(s > 0.0)) s = Y;
    while (s < Y) {
        b.push_back(s);
        s *= 2.0;
    }
    b.push_back(Y);
    return b;
}

}  // namespace orthocone
