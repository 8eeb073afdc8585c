#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "orthocone/cones.hpp"
#include "orthocone/mc.hpp"

using namespace orthocone;

namespace {

mc::McOptions opts(std::uint64_t n, std::uint64_t seed, unsigned jobs = 1, std::uint64_t stream = 0) {
    mc::McOptions o;
    o.n_samples = n;
    o.rng = {seed, stream};
    o.jobs = jobs;
    return o;
}

}  // namespace

TEST(OrthantProbability, MatchesSheppard) {
    std::mt19937_64 rng(61);
    std::uint64_t seed = 100;
    for (auto r : {oracle::Regime::A, oracle::Regime::BLambda0, oracle::Regime::BLambdaK}) {
        const auto p = oracle::random_params(rng, 2, r);
        const auto est = mc::orthant_probability(p, opts(200000, seed++, 2));
        EXPECT_LT(std::fabs(est.z_score(oracle::orthant2(p))), 4.5);
        EXPECT_EQ(est.n_samples, 200000u);
    }
    EXPECT_THROW(mc::orthant_probability({1.0, {-1, 1}, {1, 1}}, opts(100, 1)), InvalidParams);
}

TEST(OrthantProbability, IndependentOfJobCount) {
    const ConeParams p{2.0, {1, 3, 0.5}, {1, -1, 1}};
    const auto a = mc::orthant_probability(p, opts(300000, 5, 1));
    const auto b = mc::orthant_probability(p, opts(300000, 5, 7));
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
}

TEST(OrthantProbability, PooledStreamsAgree) {
    const ConeParams p{1.0, {1, 1, 1}, {1, 1, 1}};
    double pooled = 0.0;
    for (std::uint64_t s = 0; s < 4; ++s) pooled += mc::orthant_probability(p, opts(100000, 9, 2, s)).mean / 4;
    EXPECT_NEAR(pooled, 0.25, 6 * std::sqrt(0.25 * 0.75 / 400000));
    EXPECT_NE(mc::orthant_probability(p, opts(100000, 9, 1, 0)).mean, mc::orthant_probability(p, opts(100000, 9, 1, 1)).mean);
}

TEST(SolidAngle, OrthantAndWedge) {
    const auto q = mc::solid_angle(Eigen::MatrixXd::Identity(3, 3), opts(200000, 3, 2));
    EXPECT_LT(std::fabs(q.z_score(0.125)), 4.5);
    const auto w = mc::solid_angle_from_gram((Eigen::MatrixXd(2, 2) << 2, 1, 1, 2).finished(), opts(200000, 4, 2));
    EXPECT_LT(std::fabs(w.z_score(1.0 / 6.0)), 4.5);
    // generators in a higher ambient space
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(5, 2);
    V(0, 0) = 1;
    V(0, 1) = 1;
    V(3, 1) = 1;
    EXPECT_LT(std::fabs(mc::solid_angle(V, opts(200000, 5, 2)).z_score(0.125)), 4.5);
}

TEST(SolidAngle, Errors) {
    Eigen::MatrixXd V(3, 2);
    V << 1, 2, 0, 0, 0, 0;
    EXPECT_THROW(mc::solid_angle(V, opts(100, 1)), SingularGenerators);
    EXPECT_THROW(mc::solid_angle_from_gram((Eigen::MatrixXd(2, 2) << 1, 2, 2, 1).finished(), opts(100, 1)),
                 CholeskyFailure);
    EXPECT_THROW(mc::solid_angle(Eigen::MatrixXd::Identity(2, 2), opts(1, 1)), InvalidParams);
}

TEST(Nnls, SatisfiesKktConditions) {
    std::mt19937_64 rng(62);
    std::normal_distribution<double> nd;
    for (int it = 0; it < 200; ++it) {
        const int d = 2 + it % 5;
        Eigen::MatrixXd A(d, d);
        Eigen::VectorXd b(d);
        for (int i = 0; i < d; ++i) {
            b(i) = nd(rng);
            for (int j = 0; j < d; ++j) A(i, j) = nd(rng) + (i == j ? 2.0 : 0.0);
        }
        const Eigen::MatrixXd H = A.transpose() * A;
        const Eigen::VectorXd h = A.transpose() * b;
        const auto r = mc::nnls(H, h, 1e-12, 3 * d * d);
        const Eigen::VectorXd grad = H * r.coef - h;
        for (int i = 0; i < d; ++i) {
            EXPECT_GE(r.coef(i), 0.0);
            EXPECT_GE(grad(i), -1e-9 * (1 + h.norm()));
            if (r.coef(i) > 0) EXPECT_NEAR(grad(i), 0.0, 1e-9 * (1 + h.norm()));
        }
    }
}

TEST(ConicIntrinsicVolumes, OrthantIsBinomialAndSumsToOne) {
    const auto est = mc::conic_intrinsic_volumes(Eigen::MatrixXd::Identity(3, 3), opts(200000, 6, 2));
    const double ref[] = {0.125, 0.375, 0.375, 0.125};
    double s = 0.0;
    for (int k = 0; k <= 3; ++k) {
        EXPECT_LT(std::fabs(est[k].z_score(ref[k])), 4.5);
        s += est[k].mean;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(PlanarHull, HullBasics) {
    const auto h = mc::convex_hull_2d({{0, 0}, {1, 0}, {0, 1}, {0.2, 0.2}, {1, 1}, {0.5, 0.0}});
    EXPECT_EQ(h.size(), 4u);
    EXPECT_NEAR(mc::polygon_area(h), 1.0, 1e-15);
    std::mt19937_64 rng(63);
    std::normal_distribution<double> nd;
    for (int it = 0; it < 200; ++it) {
        std::vector<mc::Point2> pts;
        for (int i = 0; i < 8; ++i) pts.push_back({nd(rng), nd(rng)});
        const double a = mc::polygon_area(mc::convex_hull_2d(pts));
        pts.push_back({nd(rng), nd(rng)});
        EXPECT_GE(mc::polygon_area(mc::convex_hull_2d(pts)), a - 1e-12);
    }
}

TEST(PlanarHull, TrianglesAndScaling) {
    const auto s3 = mc::empirical_hull_stats_2d({1.0, 2.0, 0.5}, opts(20000, 7, 2));
    EXPECT_EQ(s3.f0.mean, 3.0);
    EXPECT_EQ(s3.f0.std_error, 0.0);
    const auto a = mc::empirical_volume_2d({1.0, 1.0, 1.0, 1.0}, opts(20000, 8, 2));
    const auto b = mc::empirical_volume_2d({2.0, 2.0, 2.0, 2.0}, opts(20000, 8, 2));
    EXPECT_NEAR(b.mean, a.mean / 4.0, 1e-12 * a.mean);
    const auto four = mc::empirical_volume_2d({1.0, 1.0, 1.0, 1.0}, opts(100000, 9, 2));
    const auto three = mc::empirical_volume_2d({1.0, 1.0, 1.0}, opts(100000, 9, 2));
    EXPECT_GT(four.mean, three.mean);
    EXPECT_LT(std::fabs(three.z_score(std::sqrt(3.0) / 2.0)), 4.5);
    EXPECT_THROW(mc::empirical_volume_2d({1.0, 1.0}, opts(100, 1)), InvalidParams);
    EXPECT_THROW(mc::empirical_volume_2d({1.0, -1.0, 1.0}, opts(100, 1)), NonPositiveTau);
}
