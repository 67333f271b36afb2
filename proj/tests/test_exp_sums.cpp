#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qc/exp_sums.hpp"

using namespace qc;

namespace
{
    const QuadraticFormF0 F3(3);
    const std::vector<std::int64_t> Z6(6, 0);
} // namespace

TEST(ExpSums, RamanujanValues)
{
    EXPECT_EQ(ramanujan(1, 17), 1);
    EXPECT_EQ(ramanujan(7, 0), 6);
    EXPECT_EQ(ramanujan(6, 1), 1);
    EXPECT_EQ(ramanujan(4, 6), -2);
}

TEST(ExpSums, RamanujanMatchesDirectSum)
{
    for (std::int64_t q = 1; q <= 30; ++q)
        for (std::int64_t n = -10; n <= 10; ++n)
        {
            double s = 0.0;
            for (std::int64_t a = 1; a <= q; ++a)
                if (std::gcd(a, q) == 1)
                    s += std::cos(2.0 * std::numbers::pi * static_cast<double>(a * n) / static_cast<double>(q));
            EXPECT_NEAR(s, ramanujan(q, n).get_d(), 1e-9) << q << " " << n;
        }
}

TEST(ExpSums, NaiveSmallValues)
{
    EXPECT_NEAR(S_q_naive(F3, 1, Z6, 0).value.real(), 1.0, 1e-12);
    EXPECT_NEAR(S_q_naive(F3, 2, Z6, 0).value.real(), 8.0, 1e-9);
    const std::vector<std::int64_t> c{1, 0, 0, 1, 0, 0};
    EXPECT_NEAR(std::abs(S_q_naive(F3, 4, c, 0).value), 0.0, 1e-9);
}

TEST(ExpSums, NaiveAgreesWithBrute)
{
    const QuadraticFormF0 f2(2);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> cd(-5, 5);
    for (std::int64_t q = 1; q <= 8; ++q)
        for (std::int64_t t : {0, 1, 3})
        {
            std::vector<std::int64_t> c(4);
            for (auto &v : c)
                v = cd(rng);
            const auto a = S_q_naive(f2, q, c, t).value, b = S_q_brute(f2, q, c, t).value;
            EXPECT_NEAR(std::abs(a - b), 0.0, 1e-8) << q;
        }
}

TEST(ExpSums, FactoredCZeroIsExact)
{
    for (std::int64_t q = 1; q <= 20; ++q)
    {
        const auto v = S_q_factored(F3, q, Z6, 0);
        ASSERT_TRUE(v.exact);
        EXPECT_EQ(*v.exact, nt::pow(q, 3) * nt::euler_phi(q));
        EXPECT_NEAR(S_q_naive(F3, q, Z6, 0).value.real(), v.exact->get_d(), 1e-8 * v.exact->get_d());
    }
    const auto v = S_q_factored(F3, 4, Z6, 6);
    ASSERT_TRUE(v.exact);
    EXPECT_EQ(*v.exact, -128);
}

TEST(ExpSums, FactoredMatchesNaiveRandom)
{
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::int64_t> cd(-20, 20);
    for (std::int64_t q = 1; q <= 20; ++q)
        for (std::int64_t t : {0, 1, -1, 6, -6})
            for (int k = 0; k < 10; ++k)
            {
                std::vector<std::int64_t> c(6);
                for (auto &v : c)
                    v = cd(rng);
                const auto a = S_q_naive(F3, q, c, t), b = S_q_factored(F3, q, c, t);
                EXPECT_LE(std::abs(a.value - b.value), 1e-8 * std::max(1.0, std::abs(b.value)));
                EXPECT_LE(std::abs(b.value.imag()), 1e-6 * (1.0 + std::abs(b.value.real())));
            }
}

TEST(ExpSums, TwistedMultiplicativity)
{
    const std::int64_t q = 12, qq = 7;
    const std::int64_t qb = nt::mod_inverse(q, qq), qqb = nt::mod_inverse(qq, q);
    for (const std::vector<std::int64_t> &c :
         {std::vector<std::int64_t>{1, 2, 3, 4, 5, 6}, std::vector<std::int64_t>{3, 0, -1, 0, 0, 0}})
    {
        std::vector<std::int64_t> c1(6), c2(6);
        for (std::size_t i = 0; i < 6; ++i)
        {
            c1[i] = nt::mulmod(qqb, nt::mod(c[i], q), q);
            c2[i] = nt::mulmod(qb, nt::mod(c[i], qq), qq);
        }
        for (std::int64_t t : {0, 1, 5})
        {
            const auto whole = S_q_factored(F3, q * qq, c, t).value;
            const auto prod = S_q_factored(F3, q, c1, t).value * S_q_factored(F3, qq, c2, t).value;
            EXPECT_LE(std::abs(whole - prod), 1e-9 * std::pow(84.0, 4.0));
        }
    }
}

TEST(ExpSums, NaiveCapacity)
{
    EXPECT_THROW(S_q_naive(F3, 65, Z6, 0), CapabilityError);
    EXPECT_THROW(S_q_naive(F3, 0, Z6, 0), ArgumentError);
}

TEST(ExpSums, SigmaPExactRationals)
{
    const auto s2 = sigma_p(2, 6, 0, 1e-12);
    EXPECT_NEAR(s2.value.get_d(), 7.0 / 6.0, 1e-12);
    const auto s3 = sigma_p(3, 6, 0, 1e-20);
    EXPECT_NEAR(s3.value.get_d(), 13.0 / 12.0, 1e-18);
    EXPECT_GE(s3.tail, 0.0);
    // t != 0: finitely many nonzero terms, so the sum is exact
    const auto s5 = sigma_p(2, 6, 4, 1e-20);
    EXPECT_EQ(s5.tail, 0.0);
}

TEST(ExpSums, ClosedFormLocalFactor)
{
    EXPECT_EQ(remark5_sigma_p(2, 3), Rational(9, 8));
    for (std::int64_t p : {101, 1009, 10007})
    {
        const double v = to_high(remark5_sigma_p(p, 3)).get_d();
        EXPECT_GT(v, 1.0);
        EXPECT_LE(v - 1.0, 2.0 * std::pow(static_cast<double>(p), -2.0));
    }
}

TEST(ExpSums, LocalDensityValues)
{
    EXPECT_EQ(local_density(2, 1, 3, 0), Rational(9, 8)); // 36 / 2^5
    EXPECT_EQ(local_density(3, 1, 1, 0), Rational(5, 3));
}

TEST(ExpSums, LocalDensityMatchesBruteResidueCount)
{
    // literal count of x.y = t mod p^k for d1 = 2
    for (auto [p, k] : std::vector<std::pair<std::int64_t, int>>{{2, 1}, {2, 2}, {3, 1}, {5, 1}})
        for (std::int64_t t : {0, 1})
        {
            std::int64_t q = 1;
            for (int i = 0; i < k; ++i)
                q *= p;
            std::int64_t count = 0;
            for (std::int64_t a = 0; a < q; ++a)
                for (std::int64_t b = 0; b < q; ++b)
                    for (std::int64_t c = 0; c < q; ++c)
                        for (std::int64_t d = 0; d < q; ++d)
                            count += ((a * c + b * d - t) % q + q) % q == 0;
            Rational expect(count, nt::pow(q, 3));
            expect.canonicalize();
            EXPECT_EQ(local_density(p, k, 2, t), expect) << p << "^" << k << " t=" << t;
        }
}

TEST(ExpSums, TruncatedSeriesEqualsDensity)
{
    Rational s(0);
    for (int l = 0; l <= 2; ++l)
    {
        const std::int64_t q = 1LL << l;
        s += Rational(*S_q_factored(F3, q, Z6, 0).exact, nt::pow(2, 6UL * l));
        s.canonicalize();
    }
    EXPECT_EQ(s, local_density(2, 2, 3, 0));
}

TEST(ExpSums, EulerProductClosedFormValues)
{
    const auto r3 = sigma_euler(10000, 6, 0, 1e-20, SigmaVariant::Remark5);
    const auto r4 = sigma_euler(10000, 8, 0, 1e-20, SigmaVariant::Remark5);
    EXPECT_NEAR(r3.value_d(), 1.305, 1e-3);
    EXPECT_NEAR(r4.value_d(), 1.100, 1e-3);
    EXPECT_THROW(sigma_euler(100, 6, 1, 1e-20, SigmaVariant::Remark5), CapabilityError);
}

TEST(ExpSums, EulerAndDirichletAgree)
{
    const auto e = sigma_euler(10000, 6, 0);
    const auto dsum = sigma_dirichlet(100000, 6, 0);
    EXPECT_LE(std::abs(e.value_d() - dsum.value_d()), e.tail_bound + dsum.tail_bound);
    // definitional product at t = 0 is zeta(2)/zeta(3)
    EXPECT_NEAR(e.value_d(), 1.3684327776, e.tail_bound);
}

TEST(ExpSums, DirichletTrivialCutoff)
{
    EXPECT_EQ(sigma_dirichlet(1, 6, 0).value_d(), 1.0);
    EXPECT_EQ(sigma_dirichlet(1, 8, 5).value_d(), 1.0);
}

TEST(ExpSums, DirichletTailShrinks)
{
    const double a = sigma_dirichlet(2000, 6, 0).value_d(), b = sigma_dirichlet(4000, 6, 0).value_d(),
                 c = sigma_dirichlet(8000, 6, 0).value_d();
    EXPECT_GE(std::abs(a - b) / std::abs(b - c), 2.0 * 0.8);
}
