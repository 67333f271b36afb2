#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qc/weights.hpp"

using namespace qc;

namespace
{
    std::vector<double> unit(int d, int k, double s = 1.0)
    {
        std::vector<double> z(static_cast<std::size_t>(d), 0.0);
        z[static_cast<std::size_t>(k)] = s;
        return z;
    }
} // namespace

TEST(Weights, BumpProfile)
{
    EXPECT_NEAR(w0(0.0), std::exp(-1.0), 1e-15);
    EXPECT_EQ(w0(1.0), 0.0);
    EXPECT_EQ(w0(-1.0), 0.0);
    EXPECT_EQ(w0(2.0), 0.0);
}

TEST(Weights, GaussianValues)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    EXPECT_DOUBLE_EQ(eval(g, std::vector<double>(6, 0.0)), 1.0);
    EXPECT_NEAR(eval(g, unit(6, 4)), 0.0432139182637723, 1e-15);
}

TEST(Weights, ProductBumpVanishesOutsideSupport)
{
    const auto b = WeightFunction::product_bump(2, 1.5);
    const double R = *b.support_radius();
    std::vector<double> z{0.1, R, 0.0, 0.2};
    EXPECT_EQ(eval(b, z), 0.0);
    z[1] = 2 * R;
    EXPECT_EQ(eval(b, z), 0.0);
    EXPECT_GT(eval(b, std::vector<double>(4, 0.0)), 0.0);
}

TEST(Weights, AppendixVanishesNearYZero)
{
    const auto w = WeightFunction::appendix_example(3);
    std::vector<double> z(6, 0.0);
    EXPECT_EQ(eval(w, z), 0.0);
    z[3] = 0.5; // |y|^2 = 0.25 lies inside supp g
    EXPECT_GT(eval(w, z), 0.0);
}

TEST(Weights, AppendixRejectsOriginInSupport)
{
    EXPECT_THROW(WeightFunction::appendix_example(3, {0.0, 0.5}, {0.0, 0.2}), ArgumentError);
}

TEST(Weights, GaussianFirstDerivative)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    const std::vector<int> a{1, 0, 0, 0, 0, 0};
    EXPECT_NEAR(eval_partial(g, std::vector<double>(6, 0.0), a), 0.0, 1e-15);
    EXPECT_NEAR(eval_partial(g, unit(6, 0), a), -2.0 * std::numbers::pi * std::exp(-std::numbers::pi), 1e-14);
}

TEST(Weights, FiniteDifferenceMatchesAnalytic)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ud(-0.6, 0.6);
    std::uniform_int_distribution<int> id(0, 5);
    const std::vector<WeightFunction> ws{WeightFunction::gaussian(3, 1.0), WeightFunction::product_bump(3, 1.0),
                                         WeightFunction::appendix_example(3),
                                         WeightFunction::shifted_gaussian(3, 0.7, {0.2, 0, 0, 0, -0.1, 0.3})};
    for (int k = 0; k < 100; ++k)
    {
        const auto &w = ws[static_cast<std::size_t>(k) % ws.size()];
        std::vector<double> z(6);
        for (auto &v : z)
            v = ud(rng);
        std::vector<int> a(6, 0);
        a[static_cast<std::size_t>(id(rng))] += 1;
        a[static_cast<std::size_t>(id(rng))] += 1;
        const double an = eval_partial(w, z, a), fd = eval_partial_fd(w, z, a);
        EXPECT_NEAR(an, fd, 1e-6 * std::max(1.0, std::abs(an))) << "case " << k;
    }
}

TEST(Weights, DerivativeOrderCap)
{
    const auto g = WeightFunction::gaussian(2, 1.0);
    const std::vector<int> a{5, 0, 0, 0};
    EXPECT_THROW(eval_partial(g, std::vector<double>(4, 0.1), a), CapabilityError);
}

TEST(Weights, DecayRadius)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    EXPECT_NEAR(decay_radius(g, 1e-12, 0), std::sqrt(std::log(1e12) / std::numbers::pi), 1e-10);
    EXPECT_GE(decay_radius(g, 1e-13, 4), decay_radius(g, 1e-12, 4));
    const auto b = WeightFunction::product_bump(3, 2.0);
    EXPECT_DOUBLE_EQ(decay_radius(b, 1e-3, 0), *b.support_radius());
    EXPECT_DOUBLE_EQ(decay_radius(b, 1e-30, 5), *b.support_radius());
}

TEST(Weights, NormBoundValues)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    EXPECT_NEAR(norm_bound(g, 0, 0), 1.0, 1e-12);
    EXPECT_THROW(norm_bound(g, 3, 0), CapabilityError);
}

TEST(Weights, NormBoundDominatesSampling)
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd(0.0, 1.0);
    const std::vector<WeightFunction> ws{WeightFunction::gaussian(2, 1.0), WeightFunction::product_bump(2, 1.0),
                                         WeightFunction::appendix_example(2),
                                         WeightFunction::shifted_gaussian(2, 1.0, {0.5, 0, 0, -0.5})};
    const std::vector<std::vector<int>> alphas{{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {2, 0, 0, 0}, {0, 1, 1, 0}};
    for (const auto &w : ws)
        for (int n1 = 0; n1 <= 2; ++n1)
        {
            const double n2 = 3.0;
            const double bound = norm_bound(w, n1, n2);
            double sup = 0.0;
            for (int k = 0; k < 100000; ++k)
            {
                std::vector<double> z(4);
                for (auto &v : z)
                    v = nd(rng);
                const double jb = japanese_bracket(z);
                for (const auto &a : alphas)
                {
                    int ord = 0;
                    for (int x : a)
                        ord += x;
                    if (ord > n1)
                        continue;
                    sup = std::max(sup, std::abs(eval_partial(w, z, a)) * std::pow(jb, n2));
                }
            }
            EXPECT_GE(bound, sup) << w.spec_string() << " n1=" << n1;
        }
}

TEST(Weights, NormBoundMonotone)
{
    for (const auto &w : {WeightFunction::gaussian(3, 1.0), WeightFunction::product_bump(3, 1.0),
                          WeightFunction::appendix_example(3)})
        for (double n2 : {0.0, 2.0, 5.0})
            EXPECT_LE(norm_bound(w, 0, 0), norm_bound(w, 1, n2));
}

TEST(Weights, SpecParsing)
{
    EXPECT_EQ(parse_weight_spec("gaussian:a=2", 3).a(), 2.0);
    EXPECT_EQ(parse_weight_spec("zero", 3).is_zero(), true);
    EXPECT_EQ(parse_weight_spec("appendix-example", 3).family(), WeightFamily::AppendixExample);
    EXPECT_EQ(parse_weight_spec("bump:scale=1.5", 2).family(), WeightFamily::ProductBump);
    const auto s = parse_weight_spec("gaussian:a=1:shift=0.1,0,0,0,0,0.2", 3);
    EXPECT_EQ(s.family(), WeightFamily::ShiftedGaussian);
    EXPECT_THROW(parse_weight_spec("gaussian:a=abc", 3), ArgumentError);
    EXPECT_THROW(parse_weight_spec("triangle", 3), ArgumentError);
    EXPECT_THROW(parse_weight_spec("gaussian:a=1:shift=0.1,0", 3), ArgumentError);
}

TEST(Weights, RescaledEvaluatesAtScaledPoint)
{
    const auto g = WeightFunction::gaussian(2, 1.0);
    const auto gL = g.rescaled(4.0);
    const std::vector<double> u{1, 2, -1, 3};
    std::vector<double> z(u);
    for (auto &v : z)
        v /= 4.0;
    EXPECT_DOUBLE_EQ(eval(gL, u), eval(g, z));
}
