#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "qc/sing_integral.hpp"

using namespace qc;

namespace
{
    const double kPi = std::numbers::pi;
    double gauss_closed(double t) { return 4.0 * kPi * std::abs(t) * boost::math::cyl_bessel_k(1, 2.0 * kPi * std::abs(t)); }
} // namespace

TEST(SingIntegral, ZeroWeight)
{
    const auto z = WeightFunction::zero(3);
    EXPECT_EQ(I_x_projection(z, 0.5), 0.0);
    EXPECT_EQ(I_y_projection(z, 0.5), 0.0);
    EXPECT_EQ(sigma_infty(z, 0.0).value, 0.0);
}

TEST(SingIntegral, GaussianAtZero)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    EXPECT_NEAR(sigma_infty(g, 0.0).value, 2.0, 1e-6);
    EXPECT_NEAR(gaussian_I_closed(3, 1.0, 0.0), 2.0, 1e-15);
}

TEST(SingIntegral, GaussianBesselClosedForm)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    for (double t : {1.0, -1.0, 0.3, 2.5})
        EXPECT_NEAR(I_x_projection(g, t), gauss_closed(t), 1e-6) << t;
    const auto g2 = WeightFunction::gaussian(2, 1.0);
    EXPECT_NEAR(I_x_projection(g2, 0.7), kPi * std::exp(-2.0 * kPi * 0.7), 1e-6);
}

TEST(SingIntegral, ProjectionsAgree)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    for (double t : {0.0, 0.5, 1.0})
        EXPECT_NEAR(I_x_projection(g, t), I_y_projection(g, t), 2e-6);
    const auto s = WeightFunction::shifted_gaussian(3, 1.0, {0.3, -0.2, 0.1, 0.2, 0.1, -0.3});
    EXPECT_NEAR(I_x_projection(s, 0.3), I_y_projection(s, 0.3), 2e-6);
    const auto a = WeightFunction::appendix_example(3);
    EXPECT_NEAR(I_x_projection(a, 0.1), I_y_projection(a, 0.1), 2e-6);
}

TEST(SingIntegral, ContinuityAtZero)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    EXPECT_NEAR(sigma_infty(g, 1e-3).value, sigma_infty(g, 0.0).value, 5e-3);
}

TEST(SingIntegral, BoundedByWeightNorm)
{
    for (const auto &w : {WeightFunction::gaussian(3, 1.0), WeightFunction::appendix_example(3),
                          WeightFunction::product_bump(3, 1.0)})
        for (double m : {0.0, 0.5})
        {
            // |I(m)| <= C_d ||w||_{0,d-1}, with C_d = 100 as a loose constant
            EXPECT_LE(std::abs(sigma_infty(w, m).value), 100.0 * norm_bound(w, 0, 5.0)) << w.spec_string();
        }
}

TEST(SingIntegral, RefinementCrossCheck)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    const auto r = sigma_infty(g, 1.0, {}, true);
    EXPECT_NEAR(r.value, gauss_closed(1.0), 1e-7);
}

TEST(SingIntegral, FirstDerivativeMatchesClosedForm)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    EXPECT_NEAR(I_derivative_fd(g, 1.0, 1, 0.01), gaussian_I_derivative_closed(1.0, 1.0), 1e-4);
}

TEST(SingIntegral, FirstDerivativeBounded)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    for (double t : {0.5, 0.75, 1.0})
        EXPECT_LE(std::abs(I_derivative_fd(g, t, 1, 0.01)), 20.0 * (1.0 + t));
}

TEST(SingIntegral, DerivativeArgumentChecks)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    EXPECT_THROW(I_derivative_fd(g, 1.0, 4, 0.01), ArgumentError);
    EXPECT_THROW(I_derivative_fd(g, 0.0, 1, 0.01), ArgumentError);
    EXPECT_THROW(I_derivative_fd(g, 0.1, 1, 0.5), ArgumentError);
}

TEST(SingIntegral, CoareaZeroPhi)
{
    const auto r = coarea_check(WeightFunction::gaussian(2, 1.0), [](double) { return 0.0; }, -1.0, 1.0);
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_EQ(r.rhs, 0.0);
}

TEST(SingIntegral, CoareaBumpAcrossConePoint)
{
    const auto r = coarea_check(WeightFunction::gaussian(2, 1.0), [](double t) { return w0(t); }, -1.0, 1.0);
    EXPECT_LE(std::abs(r.lhs - r.rhs), 1e-4 * (1.0 + std::abs(r.lhs)));
}

TEST(SingIntegral, CoareaSmoothRegime)
{
    const auto r = coarea_check(WeightFunction::gaussian(3, 1.0), [](double t) { return w0(2.0 * t - 5.0); }, 2.0, 3.0);
    EXPECT_LE(std::abs(r.lhs - r.rhs), 1e-5);
}

TEST(SingIntegral, SmearedSigmaZeroWeight)
{
    const auto z = WeightFunction::zero(3);
    IFunctionGrid grid{{-1.0, 1.0}, {0.0, 0.0}, {}};
    EXPECT_EQ(smeared_sigma(z, 0.0, 0.1, grid), 0.0);
}

TEST(SingIntegral, SmearedSigmaApproachesSigmaInfty)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    const auto grid = make_smear_grid(g, 0.0, 0.05);
    double prev = 1e300;
    for (double x : {0.2, 0.1, 0.05})
    {
        const double err = std::abs(smeared_sigma(g, 0.0, x, grid) - 2.0);
        EXPECT_LT(err, prev) << x;
        prev = err;
    }
}

TEST(SingIntegral, SmearedSigmaRate)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    const auto grid = make_smear_grid(g, 0.0, 0.1);
    const double x = 0.1;
    const double C = std::abs(smeared_sigma(g, 0.0, x, grid) - 2.0) / std::pow(x, 1.0 - kSmearGamma1);
    EXPECT_TRUE(std::isfinite(C));
    EXPECT_LT(C, 10.0);
}

TEST(SingIntegral, SmearedSigmaRejectsShortGrid)
{
    const auto g = WeightFunction::gaussian(3, 1.0);
    const auto grid = make_i_grid(g, graded_grid(0.0, 0.2, 0.001));
    EXPECT_THROW(smeared_sigma(g, 0.0, 0.5, grid), ArgumentError);
}

TEST(SingIntegral, QuadratureConfigValidation)
{
    QuadratureConfig c;
    c.radial_order = 2;
    EXPECT_THROW(c.validate(), ArgumentError);
    QuadratureConfig d;
    d.r_min_factor = 0.0;
    EXPECT_THROW(d.validate(), ArgumentError);
}
