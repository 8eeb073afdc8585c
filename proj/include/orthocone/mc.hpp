#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "orthocone/errors.hpp"
#include "orthocone/gram.hpp"
#include "orthocone/rng.hpp"

namespace orthocone::mc {

// std_error is the sample standard deviation over sqrt(n_samples).
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;

    double z_score(double exact) const {
        if (std_error > 0) return (mean - exact) / std_error;
        return mean == exact ? 0.0 : std::numeric_limits<double>::infinity();
    }
};

struct McOptions {
    std::uint64_t n_samples = 1000000;
    RngStream rng{};
    unsigned jobs = 1;
};

namespace detail {

// Samples are cut into fixed chunks; chunk c draws from substream c, so the result does not depend on `jobs`.
inline constexpr std::uint64_t mc_chunk = 1u << 16;

struct Moments {
    std::vector<double> sum, sumsq;
};

// sampler_factory() returns a callable s(engine, sample_index, out) filling `width` values per sample.
template <class Factory>
std::vector<McEstimate> run_mc(const McOptions& o, std::size_t width, Factory&& sampler_factory) {
    if (o.n_samples < 2) throw InvalidParams("need at least two samples");
    const std::uint64_t chunks = (o.n_samples + mc_chunk - 1) / mc_chunk;
    if (chunks > 0xffffffffull) throw InvalidParams("too many samples");
    std::vector<Moments> acc(chunks, Moments{std::vector<double>(width, 0.0), std::vector<double>(width, 0.0)});

    auto work = [&](std::uint64_t first, std::uint64_t step) {
        auto sampler = sampler_factory();
        std::vector<double> out(width);
        for (std::uint64_t c = first; c < chunks; c += step) {
            PhiloxEngine eng(o.rng, static_cast<std::uint32_t>(c));
            const std::uint64_t lo = c * mc_chunk, hi = std::min(o.n_samples, lo + mc_chunk);
            auto& m = acc[c];
            for (std::uint64_t i = lo; i < hi; ++i) {
                sampler(eng, i, out);
                for (std::size_t j = 0; j < width; ++j) m.sum[j] += out[j], m.sumsq[j] += out[j] * out[j];
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(o.jobs, static_cast<unsigned>(chunks)));
    if (jobs == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(work, t, jobs);
        for (auto& t : pool) t.join();
    }

    std::vector<McEstimate> est(width);
    const double n = static_cast<double>(o.n_samples);
    for (std::size_t j = 0; j < width; ++j) {
        double s = 0.0, s2 = 0.0;
        for (const auto& m : acc) s += m.sum[j], s2 += m.sumsq[j];
        const double mean = s / n;
        const double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1.0));
        est[j] = {mean, std::sqrt(var / n), o.n_samples, o.rng.seed, o.rng.stream_index};
    }
    return est;
}

// Orthonormal-basis factorization V = Q R of d independent generators; R is d x d upper triangular.
struct GeneratorFrame {
    Eigen::MatrixXd R;
};

inline GeneratorFrame generator_frame(const Eigen::MatrixXd& V) {
    const auto d = V.cols();
    if (d < 1 || V.rows() < d) throw SingularGenerators("need d >= 1 generators in dimension >= d");
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(V);
    Eigen::MatrixXd R = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
    double big = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) big = std::max(big, std::fabs(R(i, i)));
    for (Eigen::Index i = 0; i < d; ++i)
        if (!(std::fabs(R(i, i)) > 1e-12 * big)) throw SingularGenerators("generators are linearly dependent");
    return {R};
}

}  // namespace detail

inline McEstimate orthant_probability(const ConeParams& p, const McOptions& o) {
    const Eigen::MatrixXd G = gram(p);
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) throw CholeskyFailure("covariance is not positive definite");
    const Eigen::MatrixXd L = llt.matrixL();
    const auto d = G.rows();
    return detail::run_mc(o, 1, [&] {
        return [&, z = Eigen::VectorXd(d)](PhiloxEngine& e, std::uint64_t, std::vector<double>& out) mutable {
            for (Eigen::Index i = 0; i < d; ++i) z(i) = e.normal();
            const Eigen::VectorXd eta = L * z;
            bool hit = true;
            for (Eigen::Index i = 0; i < d && hit; ++i) hit = p.eps[i] * eta(i) <= 0.0;
            out[0] = hit ? 1.0 : 0.0;
        };
    })[0];
}

// P[xi in pos(V)] for xi standard Gaussian in span(V); columns of V are the generators.
inline McEstimate solid_angle(const Eigen::MatrixXd& V, const McOptions& o) {
    const auto frame = detail::generator_frame(V);
    const auto d = V.cols();
    return detail::run_mc(o, 1, [&] {
        return [&, z = Eigen::VectorXd(d)](PhiloxEngine& e, std::uint64_t, std::vector<double>& out) mutable {
            for (Eigen::Index i = 0; i < d; ++i) z(i) = e.normal();
            // coordinates in the generator basis: R x = z
            frame.R.triangularView<Eigen::Upper>().solveInPlace(z);
            out[0] = (z.array() >= 0.0).all() ? 1.0 : 0.0;
        };
    })[0];
}

// Solid angle of a cone given only by the Gram matrix of its generators.
inline McEstimate solid_angle_from_gram(const Eigen::MatrixXd& G, const McOptions& o) {
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) throw CholeskyFailure("Gram matrix is not positive definite");
    return solid_angle(Eigen::MatrixXd(llt.matrixU()), o);
}

struct NnlsResult {
    Eigen::VectorXd coef;
    int iterations = 0;
};

// Lawson-Hanson active set for min ||A c - b|| s.t. c >= 0, A square and invertible.
// Works on the normal equations H = A^T A, h = A^T b; the passive set never exceeds d.
inline NnlsResult nnls(const Eigen::MatrixXd& H, const Eigen::VectorXd& h, double tol, int max_iter) {
    const auto d = h.size();
    Eigen::VectorXd c = Eigen::VectorXd::Zero(d), s(d);
    std::vector<bool> passive(d, false);
    int iter = 0;
    auto solve_passive = [&] {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index i = 0; i < d; ++i)
            if (passive[i]) idx.push_back(i);
        const auto m = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd Hp(m, m);
        Eigen::VectorXd hp(m);
        for (Eigen::Index a = 0; a < m; ++a) {
            hp(a) = h(idx[a]);
            for (Eigen::Index b = 0; b < m; ++b) Hp(a, b) = H(idx[a], idx[b]);
        }
        const Eigen::VectorXd sp = Hp.llt().solve(hp);
        s.setZero();
        for (Eigen::Index a = 0; a < m; ++a) s(idx[a]) = sp(a);
    };
    while (true) {
        const Eigen::VectorXd w = h - H * c;
        Eigen::Index j = -1;
        for (Eigen::Index i = 0; i < d; ++i)
            if (!passive[i] && w(i) > tol && (j < 0 || w(i) > w(j))) j = i;
        if (j < 0) break;
        passive[j] = true;
        while (true) {
            if (++iter > max_iter) throw ProjectionNonConvergence("active-set iteration cap reached");
            solve_passive();
            bool feasible = true;
            for (Eigen::Index i = 0; i < d; ++i)
                if (passive[i] && s(i) <= 0.0) feasible = false;
            if (feasible) {
                c = s;
                break;
            }
            double alpha = 1.0;
            for (Eigen::Index i = 0; i < d; ++i)
                if (passive[i] && s(i) <= 0.0) alpha = std::min(alpha, c(i) / (c(i) - s(i)));
            c += alpha * (s - c);
            for (Eigen::Index i = 0; i < d; ++i)
                if (passive[i] && c(i) <= tol) passive[i] = false, c(i) = 0.0;
        }
    }
    return {c, iter};
}

// Frequencies of the face dimension of the metric projection onto pos(V), k = 0..d.
inline std::vector<McEstimate> conic_intrinsic_volumes(const Eigen::MatrixXd& V, const McOptions& o) {
    const auto frame = detail::generator_frame(V);
    const auto d = V.cols();
    const Eigen::MatrixXd H = frame.R.transpose() * frame.R;
    const int cap = static_cast<int>(3 * d * d);
    const double rscale = frame.R.norm();
    return detail::run_mc(o, static_cast<std::size_t>(d) + 1, [&] {
        return [&, z = Eigen::VectorXd(d)](PhiloxEngine& e, std::uint64_t i, std::vector<double>& out) mutable {
            for (Eigen::Index j = 0; j < d; ++j) z(j) = e.normal();
            const Eigen::VectorXd h = frame.R.transpose() * z;
            const double tol = 1e-12 * rscale * (z.norm() + 1.0);
            const auto r = nnls(H, h, tol, cap);
            int k = 0;
            for (Eigen::Index j = 0; j < d; ++j) k += r.coef(j) > 0.0;
            if (i % 100 == 0) {
                // KKT: residual gradient <= 0 everywhere and = 0 on the support
                const Eigen::VectorXd w = h - H * r.coef;
                const double kkt = 1e-8 * rscale * (z.norm() + 1.0);
                for (Eigen::Index j = 0; j < d; ++j)
                    if (w(j) > kkt || (r.coef(j) > 0.0 && std::fabs(w(j)) > kkt))
                        throw ProjectionNonConvergence("projection fails the optimality check");
            }
            std::fill(out.begin(), out.end(), 0.0);
            out[static_cast<std::size_t>(k)] = 1.0;
        };
    });
}

using Point2 = std::pair<double, double>;

// Convex hull by monotone chain; nearly collinear boundary points are dropped.
inline std::vector<Point2> convex_hull_2d(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max({scale, std::fabs(p.first), std::fabs(p.second)});
    const double eps = 1e-14 * scale * scale;
    auto cross = [](const Point2& o, const Point2& a, const Point2& b) {
        return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
    };
    std::vector<Point2> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= eps) --k;
        h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= eps) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

inline double polygon_area(const std::vector<Point2>& h) {
    double a = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const auto& p = h[i];
        const auto& q = h[(i + 1) % h.size()];
        a += p.first * q.second - q.first * p.second;
    }
    return 0.5 * std::fabs(a);
}

struct PlanarHullStats {
    McEstimate f0, f1, area;
};

// Hulls of [g_1/tau_1, ..., g_n/tau_n] in the plane; replicates with fewer than three hull vertices are redrawn.
inline PlanarHullStats empirical_hull_stats_2d(const std::vector<double>& tau, const McOptions& o) {
    if (tau.size() < 3) throw InvalidParams("need n >= 3 points");
    for (double t : tau)
        if (!(t > 0.0)) throw NonPositiveTau("tau values must be positive");
    auto est = detail::run_mc(o, 2, [&] {
        return [&, pts = std::vector<Point2>(tau.size())](PhiloxEngine& e, std::uint64_t,
                                                          std::vector<double>& out) mutable {
            std::vector<Point2> h;
            do {
                for (std::size_t i = 0; i < tau.size(); ++i) {
                    const double x = e.normal(), y = e.normal();
                    pts[i] = {x / tau[i], y / tau[i]};
                }
                h = convex_hull_2d(pts);
            } while (h.size() < 3);
            out[0] = static_cast<double>(h.size());
            out[1] = polygon_area(h);
        };
    });
    return {est[0], est[0], est[1]};
}

inline std::pair<McEstimate, McEstimate> empirical_f_vector_2d(const std::vector<double>& tau, const McOptions& o) {
    auto s = empirical_hull_stats_2d(tau, o);
    return {s.f0, s.f1};
}

inline McEstimate empirical_volume_2d(const std::vector<double>& tau, const McOptions& o) {
    return empirical_hull_stats_2d(tau, o).area;
}

}  // namespace orthocone::mc
