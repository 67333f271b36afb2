#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "qc/counter.hpp"

using namespace qc;

namespace
{
    std::int64_t dot(const IntVec &a, const IntVec &b)
    {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += a[i] * b[i];
        return s;
    }

    // Gram determinant of up to 3 vectors.
    std::int64_t gram_det(const std::vector<IntVec> &B)
    {
        const std::size_t k = B.size();
        std::vector<std::vector<std::int64_t>> G(k, std::vector<std::int64_t>(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                G[i][j] = dot(B[i], B[j]);
        if (k == 1)
            return G[0][0];
        if (k == 2)
            return G[0][0] * G[1][1] - G[0][1] * G[1][0];
        return G[0][0] * (G[1][1] * G[2][2] - G[1][2] * G[2][1]) - G[0][1] * (G[1][0] * G[2][2] - G[1][2] * G[2][0]) +
               G[0][2] * (G[1][0] * G[2][1] - G[1][1] * G[2][0]);
    }
} // namespace

TEST(Counter, HyperplaneSolutionAndBoxCheck)
{
    const IntVec x{1, 2, 2};
    const auto s = solve_hyperplane_lattice(x, 3);
    ASSERT_TRUE(s);
    EXPECT_EQ(dot(x, s->particular), 3);
    ASSERT_EQ(s->basis.size(), 2u);
    for (const auto &b : s->basis)
        EXPECT_EQ(dot(x, b), 0);
    EXPECT_EQ(gram_det(s->basis), 9); // (|x|/g)^2

    // every box point on the hyperplane is p + B k for integer k
    std::set<IntVec> coset;
    for (std::int64_t a = -30; a <= 30; ++a)
        for (std::int64_t b = -30; b <= 30; ++b)
        {
            IntVec y = s->particular;
            for (std::size_t i = 0; i < 3; ++i)
                y[i] += a * s->basis[0][i] + b * s->basis[1][i];
            coset.insert(y);
        }
    for (std::int64_t a = -6; a <= 6; ++a)
        for (std::int64_t b = -6; b <= 6; ++b)
            for (std::int64_t c = -6; c <= 6; ++c)
            {
                const IntVec y{a, b, c};
                EXPECT_EQ(dot(x, y) == 3, coset.count(y) == 1) << a << " " << b << " " << c;
            }
}

TEST(Counter, HyperplaneDivisibilityObstruction)
{
    EXPECT_FALSE(solve_hyperplane_lattice({2, 4}, 1));
    EXPECT_THROW(solve_hyperplane_lattice({0, 0}, 1), ArgumentError);
}

TEST(Counter, HyperplaneAxisCase)
{
    const auto s = solve_hyperplane_lattice({1, 0, 0}, 5);
    ASSERT_TRUE(s);
    EXPECT_EQ(s->particular, (IntVec{5, 0, 0}));
    std::set<IntVec> basis;
    for (auto b : s->basis)
    {
        if (std::accumulate(b.begin(), b.end(), std::int64_t{0}) < 0)
            for (auto &e : b)
                e = -e;
        basis.insert(b);
    }
    EXPECT_EQ(basis, (std::set<IntVec>{{0, 1, 0}, {0, 0, 1}}));
}

TEST(Counter, CovolumeRandom)
{
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<std::int64_t> cd(-9, 9);
    for (int k = 0; k < 50; ++k)
    {
        IntVec x{cd(rng), cd(rng), cd(rng)};
        if (x == IntVec{0, 0, 0})
            continue;
        const std::int64_t g = std::gcd(std::gcd(std::abs(x[0]), std::abs(x[1])), std::abs(x[2]));
        const auto s = solve_hyperplane_lattice(x, g);
        ASSERT_TRUE(s);
        EXPECT_EQ(gram_det(s->basis) * g * g, dot(x, x));
    }
}

TEST(Counter, ZeroWeight)
{
    EXPECT_EQ(enumerate_N_L(WeightFunction::zero(3), LatticeSpec(2.0, 0.0), 1e-12).value_d(), 0.0);
    EXPECT_EQ(brute_force_N_L(WeightFunction::zero(2), LatticeSpec(2.0, 0.0), 3), 0.0);
}

TEST(Counter, ThetaSum)
{
    const auto r = enumerate_N_L(WeightFunction::gaussian(1, 1.0), LatticeSpec(1.0, 0.0), 1e-16);
    EXPECT_NEAR(r.value_d(), 1.1728697, 1e-6);
}

TEST(Counter, MatchesBruteForceD3)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    const LatticeSpec s(2.0, 0.0);
    const double e = enumerate_N_L(g, s, 1e-14).value_d();
    const double b = brute_force_N_L(g, s, 12);
    EXPECT_NEAR(e, b, 1e-9);
}

TEST(Counter, MatchesBruteForceRandomConfigs)
{
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> dd(2, 3), ld(1, 3), td(0, 1), wd(0, 2);
    for (int k = 0; k < 5; ++k)
    {
        const int d1 = dd(rng);
        const double L = ld(rng);
        const std::int64_t t = td(rng);
        const WeightFunction w = wd(rng) == 0   ? WeightFunction::product_bump(d1, 1.0)
                                 : wd(rng) == 1 ? WeightFunction::gaussian(d1, 1.0)
                                                : WeightFunction::gaussian(d1, 1.5);
        const auto spec = LatticeSpec::from_shift(L, t);
        const double e = enumerate_N_L(w, spec, 1e-14).value_d();
        const double b = brute_force_N_L(w, spec, static_cast<std::int64_t>(std::ceil(3.5 * L)));
        EXPECT_NEAR(e, b, 1e-9) << "d1=" << d1 << " L=" << L << " t=" << t << " " << w.spec_string();
    }
}

TEST(Counter, ScalingIdentity)
{
    const auto g = WeightFunction::gaussian(2, 1.0);
    for (double L : {2.0, 3.0})
    {
        const auto a = enumerate_N_L(g, LatticeSpec::from_shift(L, 1), 1e-14).value_d();
        const auto b = enumerate_N_L(g.rescaled(L), LatticeSpec::from_shift(1.0, 1), 1e-14).value_d();
        EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, a));
    }
}

TEST(Counter, OrderIndependent)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    CountOptions rev;
    rev.reverse_order = true;
    const double a = enumerate_N_L(g, LatticeSpec(3.0, 0.0), 1e-12).value_d();
    const double b = enumerate_N_L(g, LatticeSpec(3.0, 0.0), 1e-12, rev).value_d();
    EXPECT_NEAR(a, b, 1e-12 * a);
}

TEST(Counter, TailBehaviour)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    const LatticeSpec s(3.0, 0.0);
    const auto coarse = enumerate_N_L(g, s, 1e-6), fine = enumerate_N_L(g, s, 1e-10);
    EXPECT_LE(fine.tail_estimate, coarse.tail_estimate);
    CountOptions wide;
    wide.radius = coarse.truncation_radius * 1.25;
    const auto w = enumerate_N_L(g, s, 1e-6, wide);
    EXPECT_LE(std::abs(w.value_d() - coarse.value_d()), 2.0 * coarse.tail_estimate);
}

TEST(Counter, CompactSupportHasNoTail)
{
    const auto r = enumerate_N_L(WeightFunction::product_bump(3, 1.0), LatticeSpec(2.0, 0.0), 1e-12);
    EXPECT_EQ(r.tail_estimate, 0.0);
}

TEST(Counter, BudgetEnforced)
{
    CountOptions tiny;
    tiny.budget = 1000;
    EXPECT_THROW(enumerate_N_L(WeightFunction::gaussian(3, 1.0), LatticeSpec(8.0, 0.0), 1e-12, tiny), CapabilityError);
    EXPECT_THROW(brute_force_N_L(WeightFunction::gaussian(3, 1.0), LatticeSpec(2.0, 0.0), 100), CapabilityError);
}
