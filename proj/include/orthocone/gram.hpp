#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orthocone/errors.hpp"

namespace orthocone {

// C_d(lambda0; lambdas; eps): the cone pos(eps_1 v_1, ..., eps_d v_d) with
// <v_i, v_j> = 1/lambda0 + delta_ij / lambda_i.
struct ConeParams {
    double lambda0 = 1.0;
    std::vector<double> lambdas;
    std::vector<int> eps;

    std::size_t dim() const { return lambdas.size(); }
    double total() const {
        double s = lambda0;
        for (double l : lambdas) s += l;
        return s;
    }
    bool operator==(const ConeParams&) const = default;
};

enum class CaseKind { A, B, Invalid };

struct CaseLabel {
    CaseKind kind = CaseKind::Invalid;
    // Position of the negative parameter in (lambda0, lambda_1, ..., lambda_d); 0 means lambda0.
    int negative_index = -1;
    std::string reason;
    bool boundary = false;

    bool valid() const { return kind != CaseKind::Invalid; }
};

inline int sign_of(double x) { return x < 0 ? -1 : 1; }

inline CaseLabel validate(double lambda0, const std::vector<double>& lambdas,
                          const std::vector<int>& eps) {
    if (eps.size() != lambdas.size()) return {CaseKind::Invalid, -1, "eps and lambdas differ in length"};
    for (int e : eps)
        if (e != 1 && e != -1) return {CaseKind::Invalid, -1, "eps entries must be +1 or -1"};
    if (!std::isfinite(lambda0)) return {CaseKind::Invalid, -1, "non-finite lambda0"};
    if (lambda0 == 0.0) throw ZeroParameter("lambda0 is zero");
    int negatives = 0, where = -1;
    double sum = lambda0, mag = std::fabs(lambda0);
    if (lambda0 < 0) negatives = 1, where = 0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double l = lambdas[i];
        if (!std::isfinite(l)) return {CaseKind::Invalid, -1, "non-finite lambda"};
        if (l == 0.0) throw ZeroParameter("lambda_" + std::to_string(i + 1) + " is zero");
        if (l < 0) ++negatives, where = static_cast<int>(i) + 1;
        sum += l;
        mag += std::fabs(l);
    }
    if (negatives == 0) return {CaseKind::A, -1, ""};
    if (negatives > 1) return {CaseKind::Invalid, -1, "more than one negative parameter"};
    if (std::fabs(sum) <= 1e-12 * mag) return {CaseKind::Invalid, where, "sum condition on the boundary", true};
    if (sum > 0) return {CaseKind::Invalid, where, "sum condition violated"};
    return {CaseKind::B, where, ""};
}

inline CaseLabel validate(const ConeParams& p) { return validate(p.lambda0, p.lambdas, p.eps); }

inline void require_valid(const ConeParams& p) {
    auto c = validate(p);
    if (!c.valid()) throw InvalidParams(c.reason);
}

inline Eigen::MatrixXd gram(const ConeParams& p) {
    require_valid(p);
    const auto d = static_cast<Eigen::Index>(p.dim());
    Eigen::MatrixXd G = Eigen::MatrixXd::Constant(d, d, 1.0 / p.lambda0);
    for (Eigen::Index i = 0; i < d; ++i) G(i, i) += 1.0 / p.lambdas[i];
    return G;
}

// Gram matrix of the signed generators eps_i v_i.
inline Eigen::MatrixXd signed_gram(const ConeParams& p) {
    Eigen::MatrixXd G = gram(p);
    for (Eigen::Index i = 0; i < G.rows(); ++i)
        for (Eigen::Index j = 0; j < G.cols(); ++j) G(i, j) *= p.eps[i] * p.eps[j];
    return G;
}

// det of the Gram submatrix on I: (lambda0 + sum_I lambda) / (lambda0 prod_I lambda).
inline double principal_minor(const ConeParams& p, const std::vector<std::size_t>& I) {
    if (I.empty()) throw EmptySubset("principal_minor needs a nonempty index set");
    double num = p.lambda0, den = p.lambda0;
    for (auto i : I) {
        if (i >= p.dim()) throw InvalidSubset("index out of range");
        num += p.lambdas[i];
        den *= p.lambdas[i];
    }
    return num / den;
}

inline Eigen::MatrixXd gram_inverse(const ConeParams& p) {
    require_valid(p);
    const auto d = static_cast<Eigen::Index>(p.dim());
    const double s = p.total();
    Eigen::MatrixXd H(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            H(i, j) = -p.lambdas[i] * p.lambdas[j] / s + (i == j ? p.lambdas[i] : 0.0);
    return H;
}

// Unsigned generators v_1..v_d as the columns of a (d+1) x d matrix; coordinate 0 is e_0.
inline Eigen::MatrixXd realize_generators(const ConeParams& p) {
    auto c = validate(p);
    if (!c.valid()) throw InvalidParams(c.reason);
    const auto d = static_cast<Eigen::Index>(p.dim());
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(d + 1, d);
    const double s = p.total();
    if (c.kind == CaseKind::A) {
        for (Eigen::Index i = 0; i < d; ++i) {
            V(i + 1, i) = 1.0 / std::sqrt(p.lambdas[i]);
            V(0, i) = -1.0 / std::sqrt(p.lambda0);
        }
    } else if (c.negative_index == 0) {
        // v_i = u + e_i/sqrt(lambda_i), u = (sqrt(-s) e_0 + sum_j sqrt(lambda_j) e_j) / lambda0, |u|^2 = -1/lambda0
        Eigen::VectorXd u(d + 1);
        u(0) = std::sqrt(-s) / p.lambda0;
        for (Eigen::Index j = 0; j < d; ++j) u(j + 1) = std::sqrt(p.lambdas[j]) / p.lambda0;
        for (Eigen::Index i = 0; i < d; ++i) {
            V.col(i) = u;
            V(i + 1, i) += 1.0 / std::sqrt(p.lambdas[i]);
        }
    } else {
        const Eigen::Index k = c.negative_index - 1;
        const double r0 = 1.0 / std::sqrt(p.lambda0);
        for (Eigen::Index i = 0; i < d; ++i) {
            if (i == k) continue;
            V(i + 1, i) = 1.0 / std::sqrt(p.lambdas[i]);
            V(k + 1, i) = -r0;
        }
        // v_k = (sqrt(-s) e_0 + sqrt(lambda0) e_k + sum_{j != k} sqrt(lambda_j) e_j) / (-lambda_k) - e_k/sqrt(lambda0)
        const double inv = 1.0 / (-p.lambdas[k]);
        V(0, k) = std::sqrt(-s) * inv;
        for (Eigen::Index j = 0; j < d; ++j)
            V(j + 1, k) = (j == k ? std::sqrt(p.lambda0) : std::sqrt(p.lambdas[j])) * inv;
        V(k + 1, k) -= r0;
    }
    return V;
}

// Signed generators eps_i v_i; their positive hull is the cone.
inline Eigen::MatrixXd cone_generators(const ConeParams& p) {
    Eigen::MatrixXd V = realize_generators(p);
    for (Eigen::Index i = 0; i < V.cols(); ++i) V.col(i) *= p.eps[i];
    return V;
}

}  // namespace orthocone
