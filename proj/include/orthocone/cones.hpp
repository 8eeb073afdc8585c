#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "orthocone/errors.hpp"
#include "orthocone/gfun.hpp"
#include "orthocone/gram.hpp"

namespace orthocone {

struct OrthocentricCone {
    ConeParams params;

    OrthocentricCone() = default;
    explicit OrthocentricCone(ConeParams p) : params(std::move(p)) { require_valid(params); }
    OrthocentricCone(double lambda0, std::vector<double> lambdas, std::vector<int> eps)
        : OrthocentricCone(ConeParams{lambda0, std::move(lambdas), std::move(eps)}) {}

    std::size_t dim() const { return params.dim(); }
    bool operator==(const OrthocentricCone&) const = default;
};

struct IntrinsicVolumeVector {
    std::vector<double> values;  // indexed 0..d
    std::vector<double> errors;
};

namespace detail {

inline OrthocentricCone checked_intermediate(ConeParams p) {
    auto c = validate(p);
    if (!c.valid()) throw InvalidIntermediateParams(c.reason);
    return OrthocentricCone(std::move(p));
}

inline std::vector<bool> subset_mask(std::size_t d, const std::vector<std::size_t>& I) {
    std::vector<bool> in(d, false);
    for (auto i : I) {
        if (i >= d) throw InvalidSubset("index out of range");
        if (in[i]) throw InvalidSubset("repeated index");
        in[i] = true;
    }
    return in;
}

}  // namespace detail

// C(-lambda0 - sum lambda; lambda; eps sgn lambda)
inline OrthocentricCone polar(const OrthocentricCone& c) {
    ConeParams p = c.params;
    p.lambda0 = -c.params.total();
    for (std::size_t i = 0; i < p.dim(); ++i) p.eps[i] *= sign_of(p.lambdas[i]);
    return OrthocentricCone(std::move(p));
}

// Face spanned by the generators indexed by I (0-based).
inline OrthocentricCone face(const OrthocentricCone& c, const std::vector<std::size_t>& I) {
    if (I.empty()) throw EmptySubset("face needs a nonempty index set");
    auto in = detail::subset_mask(c.dim(), I);
    ConeParams p{c.params.lambda0, {}, {}};
    for (std::size_t i = 0; i < c.dim(); ++i)
        if (in[i]) p.lambdas.push_back(c.params.lambdas[i]), p.eps.push_back(c.params.eps[i]);
    return detail::checked_intermediate(std::move(p));
}

struct TangentNormal {
    OrthocentricCone tangent_pointed;
    OrthocentricCone normal;
};

// Pointed part of the tangent cone and the normal cone at the face indexed by I.
inline TangentNormal tangent_normal_at_face(const OrthocentricCone& c, const std::vector<std::size_t>& I) {
    if (I.empty() || I.size() >= c.dim()) throw InvalidSubset("face index set must be proper and nonempty");
    auto in = detail::subset_mask(c.dim(), I);
    ConeParams t{c.params.lambda0, {}, {}}, n{-c.params.total(), {}, {}};
    for (std::size_t i = 0; i < c.dim(); ++i) {
        const double l = c.params.lambdas[i];
        if (in[i]) {
            t.lambda0 += l;
        } else {
            t.lambdas.push_back(l);
            t.eps.push_back(c.params.eps[i]);
            n.lambdas.push_back(l);
            n.eps.push_back(c.params.eps[i] * sign_of(l));
        }
    }
    return {detail::checked_intermediate(std::move(t)), detail::checked_intermediate(std::move(n))};
}

inline AngleResult solid_angle(const OrthocentricCone& c, const QuadratureConfig& q = {}) {
    return g(polar(c).params, q);
}

// Subset sum over all 2^d faces; each term is g_k(...) * g_{d-k}(...).
inline IntrinsicVolumeVector conic_intrinsic_volumes(const OrthocentricCone& c, const QuadratureConfig& q = {}) {
    const std::size_t d = c.dim();
    if (d > 20) throw CombinatorialBudgetExceeded("conic intrinsic volumes enumerate 2^d subsets; d > 20");
    const auto& P = c.params;
    IntrinsicVolumeVector out{std::vector<double>(d + 1, 0.0), std::vector<double>(d + 1, 0.0)};
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        ConeParams a{-P.lambda0, {}, {}}, b{P.lambda0, {}, {}};
        std::size_t k = 0;
        for (std::size_t i = 0; i < d; ++i) {
            const double l = P.lambdas[i];
            if (mask >> i & 1) {
                ++k;
                a.lambda0 -= l;
                b.lambda0 += l;
                a.lambdas.push_back(l);
                a.eps.push_back(P.eps[i] * sign_of(l));
            } else {
                b.lambdas.push_back(l);
                b.eps.push_back(P.eps[i]);
            }
        }
        for (const auto* t : {&a, &b})
            if (auto v = validate(*t); !v.valid()) throw InvalidIntermediateParams(v.reason);
        const auto ga = g(a, q), gb = g(b, q);
        out.values[k] += ga.value * gb.value;
        out.errors[k] += ga.err_estimate * gb.value + ga.value * gb.err_estimate;
    }
    return out;
}

}  // namespace orthocone
