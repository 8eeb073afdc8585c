#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <vector>

#include "orthocone/cones.hpp"
#include "orthocone/errors.hpp"
#include "orthocone/gfun.hpp"

namespace orthocone {

// The random polytope [g_1/tau_1, ..., g_n/tau_n] in R^d with g_i standard Gaussian.
struct GaussianPolytopeSpec {
    std::size_t d = 2;
    std::size_t n = 3;
    std::vector<double> tau;
};

struct ExpectedFVector {
    std::vector<double> values;  // E f_0, ..., E f_{d-1}
    std::vector<double> errors;
};

inline constexpr double default_g_budget = 1e7;

namespace detail {

inline void check_spec(const GaussianPolytopeSpec& s) {
    if (s.d < 1) throw InvalidParams("d must be at least 1");
    if (s.n < s.d + 1) throw InvalidParams("need n >= d + 1 points");
    if (s.tau.size() != s.n) throw InvalidParams("tau must have n entries");
    for (double t : s.tau)
        if (!(t > 0.0) || !std::isfinite(t)) throw NonPositiveTau("tau values must be positive and finite");
}

inline double binom(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(r);
}

// Calls f(idx) for every m-subset of {0..n-1} in lexicographic order.
template <class F>
void for_each_combination(std::size_t n, std::size_t m, F&& f) {
    if (m > n) return;
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    while (true) {
        f(static_cast<const std::vector<std::size_t>&>(idx));
        std::size_t i = m;
        while (i > 0 && idx[i - 1] == n - m + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// g with all eps = +1 is symmetric in the lambdas, so results are cached under the sorted list.
class GCache {
public:
    explicit GCache(const QuadratureConfig& q) : q_(q) {}

    AngleResult operator()(double lambda0, std::vector<double> lambdas) {
        std::sort(lambdas.begin(), lambdas.end());
        std::vector<double> key{lambda0};
        key.insert(key.end(), lambdas.begin(), lambdas.end());
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        auto r = g(lambda0, lambdas, std::vector<int>(lambdas.size(), 1), q_);
        cache_.emplace(std::move(key), r);
        return r;
    }

private:
    QuadratureConfig q_;
    std::map<std::vector<double>, AngleResult> cache_;
};

}  // namespace detail

// Number of g terms in the face-count double sum, summed over all k.
inline double f_vector_term_count(const GaussianPolytopeSpec& s) {
    double terms = 0.0;
    for (std::size_t m = s.d;; m -= 2) {
        double inner = 1.0;
        for (std::size_t k = 0; k + 1 <= m && k < s.d; ++k) inner += detail::binom(m, k + 1);
        terms += detail::binom(s.n, m) * inner;
        if (m < 3) break;
    }
    return terms;
}

// E f_k = 2 sum_s sum_{|H| = d-2s} gamma(H,T) sum_{F in H, |F| = k+1} beta(F,H), T = [e_i/tau_i].
inline ExpectedFVector expected_f_vector(const GaussianPolytopeSpec& s, const QuadratureConfig& q = {},
                                         double budget = default_g_budget) {
    detail::check_spec(s);
    if (f_vector_term_count(s) > budget)
        throw CombinatorialBudgetExceeded("face-count sum exceeds the g-evaluation budget");
    detail::GCache gc(q);
    std::vector<double> t2(s.n);
    for (std::size_t i = 0; i < s.n; ++i) t2[i] = s.tau[i] * s.tau[i];

    ExpectedFVector out{std::vector<double>(s.d, 0.0), std::vector<double>(s.d, 0.0)};
    for (std::size_t m = s.d;; m -= 2) {
        // H ranges over (m-1)-faces of T, m = d - 2s >= k + 1.
        detail::for_each_combination(s.n, m, [&](const std::vector<std::size_t>& H) {
            std::vector<bool> inH(s.n, false);
            double sumH = 0.0;
            for (auto i : H) inH[i] = true, sumH += t2[i];
            std::vector<double> comp;
            for (std::size_t i = 0; i < s.n; ++i)
                if (!inH[i]) comp.push_back(t2[i]);
            const auto gamma = gc(sumH, comp);
            for (std::size_t k = 0; k + 1 <= m && k < s.d; ++k) {
                double beta = 0.0, beta_err = 0.0;
                // Enumerate H \ F (size m-k-1) directly.
                detail::for_each_combination(m, m - k - 1, [&](const std::vector<std::size_t>& R) {
                    std::vector<double> rest;
                    for (auto r : R) rest.push_back(t2[H[r]]);
                    const auto b = rest.empty() ? AngleResult{1.0, 0.0, Branch::Degenerate} : gc(-sumH, rest);
                    beta += b.value;
                    beta_err += b.err_estimate;
                });
                out.values[k] += 2.0 * gamma.value * beta;
                out.errors[k] += 2.0 * (gamma.err_estimate * beta + gamma.value * beta_err);
            }
        });
        if (m < 3) break;
    }
    return out;
}

// Intrinsic volumes V_0..V_d of the simplex [e_0/tau_0, ..., e_d/tau_d].
inline IntrinsicVolumeVector simplex_intrinsic_volumes(const std::vector<double>& tau, const QuadratureConfig& q = {}) {
    if (tau.size() < 2) throw InvalidParams("need at least two tau values");
    for (double t : tau)
        if (!(t > 0.0) || !std::isfinite(t)) throw NonPositiveTau("tau values must be positive and finite");
    const std::size_t d = tau.size() - 1;
    if (d > 20) throw CombinatorialBudgetExceeded("intrinsic volumes enumerate 2^(d+1) faces; d > 20");
    detail::GCache gc(q);
    IntrinsicVolumeVector out{std::vector<double>(d + 1, 0.0), std::vector<double>(d + 1, 0.0)};
    double kfact = 1.0;
    for (std::size_t k = 0; k <= d; ++k) {
        if (k > 0) kfact *= static_cast<double>(k);
        detail::for_each_combination(d + 1, k + 1, [&](const std::vector<std::size_t>& I) {
            std::vector<bool> in(d + 1, false);
            double sum = 0.0, prod = 1.0;
            for (auto i : I) in[i] = true, sum += tau[i] * tau[i], prod *= tau[i];
            std::vector<double> rest;
            for (std::size_t i = 0; i <= d; ++i)
                if (!in[i]) rest.push_back(tau[i] * tau[i]);
            const auto gamma = rest.empty() ? AngleResult{1.0, 0.0, Branch::Degenerate} : gc(sum, rest);
            const double vol = std::sqrt(sum) / (kfact * prod);
            out.values[k] += vol * gamma.value;
            out.errors[k] += vol * gamma.err_estimate;
        });
    }
    return out;
}

// 2^{d/2} Gamma((d+1)/2) / sqrt(pi): E Vol_d(GK) = this * V_d(K).
inline double gaussian_projection_constant(std::size_t d) {
    return std::pow(2.0, 0.5 * static_cast<double>(d)) * std::tgamma(0.5 * static_cast<double>(d + 1)) /
           std::sqrt(std::numbers::pi);
}

inline QuadResult expected_volume(const GaussianPolytopeSpec& s, const QuadratureConfig& q = {},
                                   double budget = default_g_budget) {
    detail::check_spec(s);
    if (detail::binom(s.n, s.d + 1) > budget)
        throw CombinatorialBudgetExceeded("volume sum exceeds the g-evaluation budget");
    detail::GCache gc(q);
    double dfact = std::tgamma(static_cast<double>(s.d) + 1.0);
    double total = 0.0, err = 0.0;
    detail::for_each_combination(s.n, s.d + 1, [&](const std::vector<std::size_t>& I) {
        std::vector<bool> in(s.n, false);
        double sum = 0.0, prod = 1.0;
        for (auto i : I) in[i] = true, sum += s.tau[i] * s.tau[i], prod *= s.tau[i];
        std::vector<double> rest;
        for (std::size_t i = 0; i < s.n; ++i)
            if (!in[i]) rest.push_back(s.tau[i] * s.tau[i]);
        const auto gamma = rest.empty() ? AngleResult{1.0, 0.0, Branch::Degenerate} : gc(sum, rest);
        const double vol = std::sqrt(sum) / prod;
        total += vol * gamma.value;
        err += vol * gamma.err_estimate;
    });
    const double c = gaussian_projection_constant(s.d) / dfact;
    return {c * total, c * err};
}

}  // namespace orthocone
