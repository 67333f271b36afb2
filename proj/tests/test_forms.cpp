#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qc/forms.hpp"

using namespace qc;

TEST(Forms, EvalHandValue)
{
    const QuadraticFormF0 f(3);
    const std::vector<double> z{1, 2, 3, 4, 5, 6};
    EXPECT_DOUBLE_EQ(eval_F0(f, z), 32.0);
}

TEST(Forms, EvalZeroAndOrthogonal)
{
    EXPECT_DOUBLE_EQ(eval_F0(QuadraticFormF0(2), std::vector<double>{0, 0, 0, 0}), 0.0);
    EXPECT_DOUBLE_EQ(eval_F0(QuadraticFormF0(3), std::vector<double>{1, 0, 0, 0, 1, 0}), 0.0);
}

TEST(Forms, IntegerEvalIsExact)
{
    const QuadraticFormF0 f(2);
    const std::vector<std::int64_t> z{3000000000LL, 1, 3000000000LL, 1};
    const __int128 v = eval_F0(f, z);
    EXPECT_TRUE(v == static_cast<__int128>(9000000000000000000LL) + 1);
}

TEST(Forms, WrongDimensionRejected)
{
    EXPECT_THROW(eval_F0(QuadraticFormF0(3), std::vector<double>{1, 2, 3}), ArgumentError);
    EXPECT_THROW(QuadraticFormF0(0), ArgumentError);
}

TEST(Forms, GradientSwapsHalves)
{
    const QuadraticFormF0 f(2);
    const auto g = grad_F0(f, std::vector<double>{1, 2, 3, 4});
    EXPECT_EQ(g, (std::vector<double>{3, 4, 1, 2}));
    const auto g0 = grad_F0(f, std::vector<double>{0, 0, 0, 0});
    for (double v : g0)
        EXPECT_EQ(v, 0.0);
}

TEST(Forms, GradientPreservesNorm)
{
    const QuadraticFormF0 f(3);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (int k = 0; k < 100; ++k)
    {
        std::vector<double> z(6);
        for (auto &v : z)
            v = nd(rng);
        const auto g = grad_F0(f, z);
        double a = 0, b = 0;
        for (int i = 0; i < 6; ++i)
        {
            a += z[i] * z[i];
            b += g[i] * g[i];
        }
        EXPECT_NEAR(std::sqrt(a), std::sqrt(b), 1e-14);
    }
}

TEST(Forms, LatticeSpecIntegrality)
{
    const LatticeSpec s(4.0, 0.25);
    EXPECT_EQ(s.t(), 4);
    EXPECT_THROW(LatticeSpec(3.0, 0.1), ArgumentError);
    EXPECT_THROW(LatticeSpec(0.5, 0.0), ArgumentError);
    EXPECT_EQ(LatticeSpec::from_shift(3.0, 7).t(), 7);
}
