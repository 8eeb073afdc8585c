#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "orthocone/gfun.hpp"
#include "orthocone/mc.hpp"

using namespace orthocone;
using oracle::Regime;

namespace {

constexpr Regime all_regimes[] = {Regime::A, Regime::BLambda0, Regime::BLambdaK};

mc::McOptions mc_opts(std::uint64_t n, std::uint64_t seed) {
    mc::McOptions o;
    o.n_samples = n;
    o.rng = {seed, 0};
    o.jobs = 4;
    return o;
}

}  // namespace

TEST(G, TrivialDimensions) {
    EXPECT_EQ(g(1.0, {}, {}).value, 1.0);
    EXPECT_NEAR(g(1.0, {2.0}, {1}).value, 0.5, 1e-12);
    EXPECT_NEAR(g(-3.0, {2.0}, {-1}).value, 0.5, 1e-12);
}

TEST(G, OrthantProxyAndSymmetricTriple) {
    EXPECT_NEAR(g(1e12, {1, 1}, {1, 1}).value, 0.25, 1e-6);
    // correlation 1/2 in every pair: 1/8 + 3 asin(1/2) / (4 pi) = 1/4
    EXPECT_NEAR(g(1.0, {1, 1, 1}, {1, 1, 1}).value, 0.25, 1e-10);
    // solid angle of the 60-degree wedge lives at the polar parameters
    EXPECT_NEAR(g(-3.0, {1, 1}, {1, 1}).value, 1.0 / 6.0, 1e-10);
    EXPECT_NEAR(g(1.0, {1, 1}, {1, 1}).value, 1.0 / 3.0, 1e-10);
}

TEST(G, BivariateMatchesSheppard) {
    std::mt19937_64 rng(101);
    for (auto r : all_regimes)
        for (int it = 0; it < 100; ++it) {
            const auto p = oracle::random_params(rng, 2, r);
            EXPECT_NEAR(g(p).value, oracle::orthant2(p), 1e-9) << p.lambda0;
        }
}

TEST(G, TrivariateMatchesArcsineFormula) {
    std::mt19937_64 rng(202);
    for (auto r : all_regimes)
        for (int it = 0; it < 100; ++it) {
            const auto p = oracle::random_params(rng, 3, r);
            EXPECT_NEAR(g(p).value, oracle::orthant3(p), 1e-9) << p.lambda0;
        }
}

TEST(G, SignPatternsSumToOne) {
    std::mt19937_64 rng(303);
    for (std::size_t d = 1; d <= 4; ++d)
        for (auto r : all_regimes)
            for (int it = 0; it < 5; ++it) {
                auto p = oracle::random_params(rng, d, r, false);
                double total = 0.0;
                for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
                    for (std::size_t i = 0; i < d; ++i) p.eps[i] = (mask >> i & 1) ? -1 : 1;
                    total += g(p).value;
                }
                EXPECT_NEAR(total, 1.0, d * 1e-9);
            }
}

TEST(G, PermutationSymmetryWithNegativeEntry) {
    std::mt19937_64 rng(404);
    for (int it = 0; it < 30; ++it) {
        auto p = oracle::random_params(rng, 4, Regime::BLambdaK);
        const double v = g(p).value;
        std::vector<std::size_t> idx{0, 1, 2, 3};
        std::shuffle(idx.begin(), idx.end(), rng);
        ConeParams q{p.lambda0, {}, {}};
        for (auto i : idx) q.lambdas.push_back(p.lambdas[i]), q.eps.push_back(p.eps[i]);
        EXPECT_NEAR(g(q).value, v, 1e-10);
    }
}

TEST(G, AgreesWithMonteCarloInHigherDimensions) {
    std::mt19937_64 rng(505);
    std::uint64_t seed = 1;
    for (std::size_t d = 4; d <= 6; ++d)
        for (auto r : all_regimes) {
            const auto p = oracle::random_params(rng, d, r);
            const auto est = mc::orthant_probability(p, mc_opts(400000, seed++));
            const auto exact = g(p);
            EXPECT_LT(std::fabs(est.z_score(exact.value)), 4.5) << "d " << d << " value " << exact.value;
        }
}

TEST(G, ExtremeParametersStayFinite) {
    for (std::size_t d = 2; d <= 5; ++d) {
        std::vector<double> l(d, 1.0);
        l[0] = -1e6;
        std::vector<int> e(d, 1);
        const auto r = g(1e-3, l, e);
        EXPECT_TRUE(std::isfinite(r.value));
        EXPECT_GE(r.value, 0.0);
        EXPECT_LE(r.value, 1.0);
        EXPECT_LT(r.err_estimate, 1e-6);
    }
}

TEST(G, RejectsInvalidInput) {
    EXPECT_THROW(g(1.0, {-1, 1}, {1, 1}), InvalidParams);
    EXPECT_THROW(g(1.0, {1, 1}, {1}), InvalidParams);
    EXPECT_THROW(g(0.0, {1, 1}, {1, 1}), ZeroParameter);
}

TEST(ShiftedOrthant, ReducesToG) {
    std::mt19937_64 rng(606);
    for (int it = 0; it < 20; ++it) {
        const auto p = oracle::random_params(rng, 3, Regime::A);
        std::vector<int> flipped;
        for (int e : p.eps) flipped.push_back(-e);
        // P[eps eta >= 0] = P[-eps eta <= 0]
        EXPECT_NEAR(shifted_orthant(p.lambdas, 1.0 / p.lambda0, {0, 0, 0}, flipped), g(p).value, 1e-9);
    }
    EXPECT_NEAR(shifted_orthant({1.0}, 0.0, {1.0}, {1}), phi_real(-1.0), 1e-10);
    EXPECT_NEAR(shifted_orthant({4.0}, 0.75, {-0.5}, {-1}), phi_real(0.5), 1e-10);
}

TEST(ShiftedOrthant, FoldedAndFullLineAgree) {
    std::mt19937_64 rng(707);
    std::uniform_real_distribution<double> tt(-1.0, 1.0);
    for (int it = 0; it < 40; ++it) {
        const auto p = oracle::random_params(rng, 3, Regime::A);
        double sum = 0.0;
        for (double l : p.lambdas) sum += l;
        const double r = (it % 2 == 0) ? 1.0 / p.lambda0 : -0.5 / sum;
        std::vector<double> t = {tt(rng), tt(rng), tt(rng)};
        if (r < 0) t = {0, 0, 0};
        EXPECT_NEAR(shifted_orthant(p.lambdas, r, t, p.eps), shifted_orthant_full_line(p.lambdas, r, t, p.eps), 1e-9);
    }
}

TEST(ShiftedOrthant, MonotoneInThresholds) {
    const std::vector<double> l{1.0, 2.0, 0.5};
    double prev = 1.0;
    for (double t = -2.0; t <= 2.0; t += 0.25) {
        const double v = shifted_orthant(l, 0.7, {t, 0.1, -0.3}, {1, 1, 1});
        EXPECT_LE(v, prev + 1e-12);
        prev = v;
    }
}

TEST(ShiftedOrthant, MatchesMonteCarloWithShifts) {
    // eta = sqrt(r) Z0 + Z_j / sqrt(lambda_j); sample it directly
    const std::vector<double> l{1.0, 2.0, 0.5};
    const std::vector<double> t{0.3, -0.4, 0.2};
    const std::vector<int> e{1, -1, 1};
    const double r = 0.8;
    const double exact = shifted_orthant(l, r, t, e);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd;
    const int n = 400000;
    int hit = 0;
    for (int i = 0; i < n; ++i) {
        const double z0 = std::sqrt(r) * nd(rng);
        bool ok = true;
        for (int j = 0; j < 3; ++j) ok = ok && e[j] * (z0 + nd(rng) / std::sqrt(l[j])) >= t[j];
        hit += ok;
    }
    const double p = static_cast<double>(hit) / n;
    EXPECT_LT(std::fabs(p - exact), 4.5 * std::sqrt(p * (1 - p) / n) + 1e-9);
}

TEST(ShiftedOrthant, NegativeShiftedTargetsAreOutOfDomain) {
    EXPECT_THROW(shifted_orthant({1.0, 1.0}, -0.25, {3.0, 3.0}, {1, 1}), DomainTooLarge);
}

TEST(CenteredDeviation, MatchesMonteCarloAtZeroThresholds) {
    const std::vector<double> l{1.0, 2.0, 3.0};
    for (const std::vector<int>& e : {std::vector<int>{1, -1, 1}, std::vector<int>{1, 1, -1}}) {
        const double exact = centered_deviation_orthant(l, {0, 0, 0}, e);
        std::mt19937_64 rng(10);
        std::normal_distribution<double> nd;
        const int n = 400000;
        int hit = 0;
        for (int i = 0; i < n; ++i) {
            double z[3], zbar = 0.0;
            for (int j = 0; j < 3; ++j) z[j] = nd(rng) / std::sqrt(l[j]), zbar += l[j] * z[j] / 6.0;
            bool ok = true;
            for (int j = 0; j < 3; ++j) ok = ok && e[j] * (z[j] - zbar) >= 0.0;
            hit += ok;
        }
        const double p = static_cast<double>(hit) / n;
        EXPECT_LT(std::fabs(p - exact), 4.5 * std::sqrt(p * (1 - p) / n) + 1e-6);
    }
}

TEST(CenteredDeviation, NonzeroThresholdsLeaveTheSeriesDomain) {
    EXPECT_THROW(centered_deviation_orthant({1.0, 2.0, 3.0}, {-0.2, 0.1, -0.3}, {1, -1, 1}), DomainTooLarge);
}

TEST(CenteredDeviation, ZeroThresholdsMatchThePolarOrthant) {
    // With t = 0 it is the degenerate orthant probability of the centered vector; its 2D value is exact.
    const std::vector<double> l{1.0, 3.0};
    // Z1 - Zbar and Z2 - Zbar are perfectly anticorrelated: P[both >= 0] = 0, P[opposite signs] = 1/2
    EXPECT_NEAR(centered_deviation_orthant(l, {0, 0}, {1, 1}), 0.0, 1e-3);
    EXPECT_NEAR(centered_deviation_orthant(l, {0, 0}, {1, -1}), 0.5, 1e-3);
}

TEST(Limits, LambdaOneToMinusInfinity) {
    EXPECT_EQ(g_limit_lambda1_to_minus_inf(1.0, {}, {1}).value, 0.5);
    EXPECT_NEAR(g_limit_lambda1_to_minus_inf(1.0, {1.0}, {1, 1}).value, 0.375, 1e-12);
    EXPECT_NEAR(g_limit_lambda1_to_minus_inf(1.0, {1.0}, {1, 1}).value, g(1.0, {-1e8, 1.0}, {1, 1}).value, 1e-3);
    std::mt19937_64 rng(808);
    for (int it = 0; it < 20; ++it) {
        const auto rest = oracle::random_tau(rng, 3, 0.5, 3.0);
        const double l0 = 0.5 + it * 0.1;
        std::vector<int> e{1, it % 2 ? -1 : 1, 1, -1};
        std::vector<double> l{-1e8};
        l.insert(l.end(), rest.begin(), rest.end());
        EXPECT_NEAR(g_limit_lambda1_to_minus_inf(l0, rest, e).value, g(l0, l, e).value, 1e-3);
    }
    EXPECT_THROW(g_limit_lambda1_to_minus_inf(-1.0, {1.0}, {1, 1}), InvalidParams);
}

TEST(Limits, Rectangular) {
    EXPECT_EQ(g_limit_rectangular(1.0, {}, {1}).value, 0.5);
    EXPECT_NEAR(g_limit_rectangular(2.0, {1.0}, {-1, 1}).value, 0.125, 1e-12);
    EXPECT_NEAR(g_limit_rectangular(2.0, {1.0}, {1, 1}).value, 0.375, 1e-12);
    std::mt19937_64 rng(909);
    for (int it = 0; it < 20; ++it) {
        const auto rest = oracle::random_tau(rng, 3, 0.5, 2.0);
        double sr = 0.0;
        for (double x : rest) sr += x;
        const double l0 = sr + 0.2 + 0.3 * it;
        std::vector<int> e{-1, 1, it % 2 ? -1 : 1, 1};
        const double l1 = -1e8;
        std::vector<double> l{l1};
        l.insert(l.end(), rest.begin(), rest.end());
        EXPECT_NEAR(g_limit_rectangular(l0, rest, e).value, g(-l0 - l1, l, e).value, 1e-3);
    }
    EXPECT_THROW(g_limit_rectangular(1.0, {2.0}, {1, 1}), InvalidParams);
}
