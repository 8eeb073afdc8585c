#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "orthocone/cones.hpp"
#include "orthocone/errors.hpp"
#include "orthocone/gfun.hpp"

namespace orthocone {

using VertexSet = std::vector<Eigen::VectorXd>;

enum class SimplexClass { Acute, Rectangular, Obtuse, NotOrthocentric };

inline const char* to_string(SimplexClass c) {
    switch (c) {
        case SimplexClass::Acute: return "Acute";
        case SimplexClass::Rectangular: return "Rectangular";
        case SimplexClass::Obtuse: return "Obtuse";
        case SimplexClass::NotOrthocentric: return "NotOrthocentric";
    }
    return "?";
}

// Canonical vertex order:
//   acute        e_0/tau_0, ..., e_d/tau_d                      (tau has d+1 entries)
//   obtuse       w, e_1/tau_1, ..., e_d/tau_d, orthocenter e_0/tau_0  (tau has d+1 entries, tau_0 first)
//   rectangular  0, e_1/tau_1, ..., e_d/tau_d                   (tau has d entries)
// Position 0 is the special vertex for the obtuse and rectangular classes.
struct CanonicalSimplex {
    SimplexClass cls = SimplexClass::Acute;
    std::vector<double> tau;

    std::size_t dim() const { return cls == SimplexClass::Rectangular ? tau.size() : tau.size() - 1; }
};

struct SimplexClassification {
    SimplexClass verdict = SimplexClass::NotOrthocentric;
    // Input index of the vertex at the orthocenter (rectangular) or with negative mu (obtuse).
    int special_index = -1;
    Eigen::VectorXd orthocenter;
    double c = 0.0;
    std::vector<double> mu;             // per input vertex; +inf at a rectangular corner
    std::vector<double> canonical_tau;  // in canonical order
    std::vector<std::size_t> permutation;  // canonical position -> input vertex index
    double residual = 0.0;              // relative to diameter times the largest |v_i - w|
    bool boundary_warning = false;

    CanonicalSimplex canonical() const { return {verdict, canonical_tau}; }
};

namespace detail {

inline void check_tau(const std::vector<double>& tau, std::size_t min_size) {
    if (tau.size() < min_size) throw InvalidParams("too few tau values");
    for (double t : tau)
        if (!(t > 0.0) || !std::isfinite(t)) throw NonPositiveTau("tau values must be positive and finite");
}

inline double sum_sq(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

}  // namespace detail

inline VertexSet build_acute(const std::vector<double>& tau) {
    detail::check_tau(tau, 2);
    const auto n = static_cast<Eigen::Index>(tau.size());
    VertexSet V;
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        v(i) = 1.0 / tau[i];
        V.push_back(v);
    }
    return V;
}

inline VertexSet build_obtuse(const std::vector<double>& tau) {
    detail::check_tau(tau, 2);
    const auto n = static_cast<Eigen::Index>(tau.size());
    const double s = detail::sum_sq(tau);
    VertexSet V;
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = tau[i] / s;
    V.push_back(w);
    for (Eigen::Index i = 1; i < n; ++i) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        v(i) = 1.0 / tau[i];
        V.push_back(v);
    }
    return V;
}

inline VertexSet build_rectangular(const std::vector<double>& tau) {
    detail::check_tau(tau, 1);
    const auto d = static_cast<Eigen::Index>(tau.size());
    VertexSet V{Eigen::VectorXd::Zero(d)};
    for (Eigen::Index i = 0; i < d; ++i) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
        v(i) = 1.0 / tau[i];
        V.push_back(v);
    }
    return V;
}

// [nu H, e_1/tau_1, ..., e_d/tau_d] with H = sum tau_i e_i / sum tau_i^2; orthocenter -nu/(1-nu) H.
inline VertexSet build_nu_family(double nu, const std::vector<double>& tau) {
    if (nu == 1.0) throw NuEqualsOne("nu = 1 collapses the simplex");
    VertexSet V = build_rectangular(tau);
    const double s = detail::sum_sq(tau);
    for (std::size_t i = 0; i < tau.size(); ++i) V[0](static_cast<Eigen::Index>(i)) = nu * tau[i] / s;
    return V;
}

inline double nu_family_obtuseness(double nu, const std::vector<double>& tau) {
    return nu * (2.0 - nu) / ((1.0 - nu) * (1.0 - nu) * detail::sum_sq(tau));
}

inline SimplexClassification classify(const VertexSet& V, double tol = 1e-9) {
    if (V.size() < 3) throw InvalidParams("classification needs d >= 2 (at least three vertices)");
    const std::size_t n = V.size();
    const auto N = V[0].size();
    for (const auto& v : V)
        if (v.size() != N) throw DegenerateVertices("vertices have different dimensions");
    const auto d = static_cast<Eigen::Index>(n - 1);
    if (N < d) throw DegenerateVertices("ambient dimension smaller than d");

    Eigen::MatrixXd E(N, d);
    for (Eigen::Index i = 0; i < d; ++i) E.col(i) = V[i + 1] - V[0];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(E);
    const auto& sv = svd.singularValues();
    if (!(sv(d - 1) > 1e-10 * sv(0))) throw DegenerateVertices("vertices are affinely dependent");

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) scale = std::max(scale, (V[i] - V[j]).squaredNorm());

    // Altitude system <w - v_i, v_j - v_r> = 0 for j != i, r, with r the first index other than i.
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = i == 0 ? 1 : 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || j == r) continue;
            const Eigen::VectorXd u = V[j] - V[r];
            rows.push_back(E.transpose() * u);
            rhs.push_back(u.dot(V[i] - V[0]));
        }
    }
    Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), d);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        A.row(static_cast<Eigen::Index>(k)) = rows[k].transpose();
        b(static_cast<Eigen::Index>(k)) = rhs[k];
    }
    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);

    SimplexClassification out;
    out.orthocenter = V[0] + E * x;
    const Eigen::VectorXd& w = out.orthocenter;

    // Rounding in the products below grows with |w - v_i|, which is unbounded for flat obtuse simplices.
    double far2 = scale;
    for (const auto& v : V) far2 = std::max(far2, (v - w).squaredNorm());
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                if (j == i || k == i) continue;
                res = std::max(res, std::fabs((w - V[i]).dot(V[j] - V[k])));
            }
    out.residual = res / std::sqrt(scale * far2);

    double csum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) csum += (V[i] - w).dot(V[j] - w), ++pairs;
    out.c = csum / static_cast<double>(pairs);
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dev = std::max(dev, std::fabs((V[i] - w).dot(V[j] - w) - out.c));
    out.residual = std::max(out.residual, dev / far2);
    if (out.residual > tol) return out;

    std::vector<double> r2(n);
    std::size_t nearest = 0;
    for (std::size_t i = 0; i < n; ++i) {
        r2[i] = (V[i] - w).squaredNorm();
        if (r2[i] < r2[nearest]) nearest = i;
    }
    const bool c_zero = std::fabs(out.c) <= tol * scale;
    const bool at_vertex = std::sqrt(r2[nearest]) <= tol * std::sqrt(scale);

    auto set_rectangular = [&] {
        out.verdict = SimplexClass::Rectangular;
        out.special_index = static_cast<int>(nearest);
        out.mu.assign(n, 0.0);
        out.permutation = {nearest};
        out.canonical_tau.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (i == nearest) {
                out.mu[i] = std::numeric_limits<double>::infinity();
                continue;
            }
            const double l2 = (V[i] - V[nearest]).squaredNorm();
            out.mu[i] = 1.0 / l2;
            out.permutation.push_back(i);
            out.canonical_tau.push_back(1.0 / std::sqrt(l2));
        }
    };

    if (c_zero && at_vertex) {
        set_rectangular();
        return out;
    }
    out.boundary_warning = c_zero || at_vertex;

    out.mu.resize(n);
    std::vector<std::size_t> negative;
    for (std::size_t i = 0; i < n; ++i) {
        out.mu[i] = 1.0 / (r2[i] - out.c);
        if (r2[i] - out.c < 0) negative.push_back(i);
    }
    if (out.c < 0) {
        out.verdict = SimplexClass::Acute;
        out.permutation.resize(n);
        std::iota(out.permutation.begin(), out.permutation.end(), std::size_t{0});
        for (double m : out.mu) out.canonical_tau.push_back(std::sqrt(m));
        return out;
    }
    if (negative.size() != 1) {
        // c > 0 but not exactly one vertex inside the critical sphere: only possible at the rectangular boundary.
        if (at_vertex || c_zero) {
            set_rectangular();
            out.boundary_warning = true;
        }
        return out;
    }
    out.verdict = SimplexClass::Obtuse;
    out.special_index = static_cast<int>(negative[0]);
    out.permutation = {negative[0]};
    out.canonical_tau = {std::sqrt(1.0 / out.c)};
    for (std::size_t i = 0; i < n; ++i) {
        if (i == negative[0]) continue;
        out.permutation.push_back(i);
        out.canonical_tau.push_back(std::sqrt(out.mu[i]));
    }
    return out;
}

// Replaces vertex i by the orthocenter; for oblique simplices the result is orthocentric with orthocenter v_i.
inline VertexSet egervary_swap(const VertexSet& V, const SimplexClassification& c, std::size_t i) {
    VertexSet out = V;
    out.at(i) = c.orthocenter;
    return out;
}

// Vertices of a face, given as canonical positions 0..d.
struct FaceSelector {
    std::vector<std::size_t> vertices;

    // Obtuse/rectangular face through the special vertex and canonical vertices 1..k.
    static FaceSelector with_special(std::size_t k) {
        FaceSelector f;
        for (std::size_t i = 0; i <= k; ++i) f.vertices.push_back(i);
        return f;
    }
    // Obtuse/rectangular face on canonical vertices 1..k+1.
    static FaceSelector without_special(std::size_t k) {
        FaceSelector f;
        for (std::size_t i = 1; i <= k + 1; ++i) f.vertices.push_back(i);
        return f;
    }
    // Acute face on vertices 0..k.
    static FaceSelector leading(std::size_t k) { return with_special(k); }
};

namespace detail {

struct FaceSplit {
    std::size_t d, k;
    std::vector<bool> in;  // canonical positions 0..d
    bool has_special;
};

inline FaceSplit split_face(const CanonicalSimplex& s, const FaceSelector& f) {
    if (s.cls == SimplexClass::NotOrthocentric) throw InvalidParams("simplex is not orthocentric");
    check_tau(s.tau, s.cls == SimplexClass::Rectangular ? 2 : 3);
    const std::size_t d = s.dim();
    if (f.vertices.empty()) throw FaceOutOfRange("face needs at least one vertex");
    std::vector<bool> in(d + 1, false);
    for (auto v : f.vertices) {
        if (v > d) throw FaceOutOfRange("vertex index " + std::to_string(v) + " exceeds d");
        if (in[v]) throw FaceOutOfRange("repeated vertex index");
        in[v] = true;
    }
    return {d, f.vertices.size() - 1, in, in[0]};
}

inline double tau2(const CanonicalSimplex& s, std::size_t pos) {
    const double t = s.cls == SimplexClass::Rectangular ? s.tau[pos - 1] : s.tau[pos];
    return t * t;
}

// mu in canonical order for the oblique classes.
inline std::vector<double> canonical_mu(const CanonicalSimplex& s) {
    std::vector<double> mu;
    for (double t : s.tau) mu.push_back(t * t);
    if (s.cls == SimplexClass::Obtuse) mu[0] = -sum_sq(s.tau);
    return mu;
}

struct AngleParams {
    ConeParams beta, gamma;
};

inline AngleParams oblique_angle_params(const CanonicalSimplex& s, const FaceSplit& f) {
    const auto mu = canonical_mu(s);
    double sum_all = 0.0, sum_face = 0.0;
    for (std::size_t i = 0; i <= f.d; ++i) {
        sum_all += mu[i];
        if (f.in[i]) sum_face += mu[i];
    }
    // tangent C(sum_F mu; mu_rest; +), normal C(-sum mu; mu_rest; sgn mu_rest)
    ConeParams tangent{sum_face, {}, {}}, normal{-sum_all, {}, {}};
    for (std::size_t i = 0; i <= f.d; ++i) {
        if (f.in[i]) continue;
        tangent.lambdas.push_back(mu[i]);
        tangent.eps.push_back(1);
        normal.lambdas.push_back(mu[i]);
        normal.eps.push_back(sign_of(mu[i]));
    }
    return {tangent, normal};
}

}  // namespace detail

struct FaceCones {
    std::variant<OrthocentricCone, Eigen::MatrixXd> tangent_pointed;
    std::variant<OrthocentricCone, Eigen::MatrixXd> normal;
};

// Oblique classes give orthocentric cones; rectangular faces give explicit Gram matrices.
inline FaceCones tangent_normal_cones(const CanonicalSimplex& s, const FaceSelector& face) {
    const auto f = detail::split_face(s, face);
    if (s.cls != SimplexClass::Rectangular) {
        auto p = detail::oblique_angle_params(s, f);
        return {detail::checked_intermediate(p.beta), detail::checked_intermediate(p.gamma)};
    }
    const auto m = static_cast<Eigen::Index>(f.d - f.k);
    if (f.has_special || m == 0) {
        Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
        return {I, I};
    }
    std::vector<double> rest;
    double sum_face = 0.0, sum_all = 0.0;
    for (std::size_t i = 1; i <= f.d; ++i) {
        const double t2 = detail::tau2(s, i);
        sum_all += t2;
        if (f.in[i]) sum_face += t2;
        else rest.push_back(std::sqrt(t2));
    }
    Eigen::MatrixXd W = Eigen::MatrixXd::Identity(m, m), M(m, m);
    W(0, 0) = sum_all;
    M(0, 0) = 1.0;
    for (Eigen::Index j = 1; j < m; ++j) {
        W(0, j) = W(j, 0) = -rest[j - 1];
        M(0, j) = M(j, 0) = rest[j - 1];
        for (Eigen::Index l = 1; l < m; ++l) M(j, l) = rest[j - 1] * rest[l - 1] + (j == l ? sum_face : 0.0);
    }
    return {M, W};
}

namespace detail {

inline AngleResult rectangular_angle(const CanonicalSimplex& s, const FaceSplit& f, bool internal,
                                     const QuadratureConfig& q) {
    if (f.k == f.d) return {1.0, 0.0, Branch::Degenerate};
    if (f.has_special) return {std::ldexp(1.0, -static_cast<int>(f.d - f.k)), 0.0, Branch::Degenerate};
    std::vector<double> rest;
    double sum_face = 0.0, sum_all = 0.0;
    for (std::size_t i = 1; i <= f.d; ++i) {
        const double t2 = tau2(s, i);
        sum_all += t2;
        if (f.in[i]) sum_face += t2;
        else rest.push_back(t2);
    }
    if (internal) {
        std::vector<int> eps(rest.size() + 1, 1);
        eps[0] = -1;
        return g_limit_rectangular(sum_all, rest, eps, q);
    }
    return g_limit_lambda1_to_minus_inf(sum_face, rest, std::vector<int>(rest.size() + 1, 1), q);
}

inline AngleResult simplex_angle(const CanonicalSimplex& s, const FaceSelector& face, bool internal,
                                 const QuadratureConfig& q) {
    const auto f = split_face(s, face);
    if (s.cls == SimplexClass::Rectangular) return rectangular_angle(s, f, internal, q);
    if (f.k == f.d) return {1.0, 0.0, Branch::Degenerate};
    auto p = oblique_angle_params(s, f);
    // beta = alpha(tangent) = g(polar params of the tangent), gamma likewise for the normal cone
    const auto& cone = internal ? p.beta : p.gamma;
    return solid_angle(checked_intermediate(cone), q);
}

}  // namespace detail

inline AngleResult internal_angle(const CanonicalSimplex& s, const FaceSelector& face, const QuadratureConfig& q = {}) {
    return detail::simplex_angle(s, face, true, q);
}

inline AngleResult external_angle(const CanonicalSimplex& s, const FaceSelector& face, const QuadratureConfig& q = {}) {
    return detail::simplex_angle(s, face, false, q);
}

inline AngleResult internal_angle(const SimplexClassification& c, const FaceSelector& face,
                                  const QuadratureConfig& q = {}) {
    return internal_angle(c.canonical(), face, q);
}

inline AngleResult external_angle(const SimplexClassification& c, const FaceSelector& face,
                                  const QuadratureConfig& q = {}) {
    return external_angle(c.canonical(), face, q);
}

// Canonical face selector for a face given by input vertex indices of a classified simplex.
inline FaceSelector face_from_input(const SimplexClassification& c, const std::vector<std::size_t>& input) {
    FaceSelector f;
    for (auto v : input) {
        auto it = std::find(c.permutation.begin(), c.permutation.end(), v);
        if (it == c.permutation.end()) throw FaceOutOfRange("vertex " + std::to_string(v) + " not in the simplex");
        f.vertices.push_back(static_cast<std::size_t>(it - c.permutation.begin()));
    }
    std::sort(f.vertices.begin(), f.vertices.end());
    return f;
}

}  // namespace orthocone
