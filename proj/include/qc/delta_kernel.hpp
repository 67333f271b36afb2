#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/interpolators/barycentric_rational.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "errors.hpp"
#include "number_theory.hpp"
#include "quadrature.hpp"
#include "summation.hpp"
#include "weights.hpp"

namespace qc
{

    /// c0 = integral of w0 over [-1, 1], computed once.
    inline double c0()
    {
        static const double value = [] {
            // tanh-sinh suits the flat endpoints of the bump
            double err = 0.0, l1 = 0.0;
            const double v = boost::math::quadrature::tanh_sinh<double>().integrate([](double x) { return w0(x); }, -1.0, 1.0,
                                                                                    1e-15, &err, &l1);
            if (!(err < 1e-12))
                throw InternalError("c0: quadrature did not reach 1e-12");
            return v;
        }();
        return value;
    }

    /// omega(x) = (4/c0) w0(4x - 3), a probability density on (1/2, 1).
    inline double omega(double x)
    {
        return 4.0 / c0() * w0(4.0 * x - 3.0);
    }

    inline constexpr double kMinKernelX = 1e-6;

    namespace detail
    {
        inline void check_kernel_x(double x)
        {
            if (!(x > 0.0))
                throw ArgumentError("h: x must be > 0");
            if (x < kMinKernelX)
                throw CapabilityError("h: x below 1e-6 exceeds the term-count cap");
        }
    } // namespace detail

    inline double h1(double x)
    {
        detail::check_kernel_x(x);
        // j ranges over the open window (1/(2x), 1/x).
        const auto lo = static_cast<std::int64_t>(std::floor(0.5 / x)) + 1;
        const auto hi = static_cast<std::int64_t>(std::ceil(1.0 / x)) - 1;
        CompensatedSum<double> s;
        for (std::int64_t j = lo; j <= hi; ++j)
        {
            const double xj = x * static_cast<double>(j);
            s += omega(xj) / xj;
        }
        return s.value();
    }

    inline double h2(double x, double y)
    {
        detail::check_kernel_x(x);
        const double a = std::abs(y);
        if (a == 0.0)
            return 0.0;
        const auto lo = static_cast<std::int64_t>(std::floor(a / x)) + 1;
        const auto hi = static_cast<std::int64_t>(std::ceil(2.0 * a / x)) - 1;
        CompensatedSum<double> s;
        for (std::int64_t j = lo; j <= hi; ++j)
        {
            const double xj = x * static_cast<double>(j);
            s += omega(a / xj) / xj;
        }
        return s.value();
    }

    inline double h(double x, double y)
    {
        return h1(x) - h2(x, y);
    }

    struct DeltaKernelConfig
    {
        double Q;
        double c0 = qc::c0();
        std::optional<double> cQ;

        explicit DeltaKernelConfig(double Q_) : Q(Q_)
        {
            if (!(Q_ > 1.0))
                throw ArgumentError("delta kernel: Q must be > 1");
        }
    };

    namespace detail
    {
        // Q^-2 sum_q c_q(n) h(q/Q, n/Q^2) over the window where h can be nonzero.
        inline double raw_delta_sum(std::int64_t n, double Q)
        {
            const double y = static_cast<double>(n) / (Q * Q);
            const double xmax = std::max(1.0, 2.0 * std::abs(y));
            const auto qmax = static_cast<std::int64_t>(std::floor(Q * xmax));
            CompensatedSum<double> s;
            for (std::int64_t q = 1; q <= qmax; ++q)
            {
                const double hv = h(static_cast<double>(q) / Q, y);
                if (hv != 0.0)
                    s += static_cast<double>(nt::ramanujan(q, n)) * hv;
            }
            return s.value() / (Q * Q);
        }
    } // namespace detail

    /// c_Q making the identity exact at n = 0; also stored in cfg.
    inline double calibrate_cQ(DeltaKernelConfig &cfg)
    {
        const double r0 = detail::raw_delta_sum(0, cfg.Q);
        if (!(r0 > 0.0))
            throw InternalError("calibrate_cQ: R(0) <= 0");
        cfg.cQ = 1.0 / r0;
        return *cfg.cQ;
    }

    inline DeltaKernelConfig make_delta_config(double Q)
    {
        DeltaKernelConfig cfg(Q);
        calibrate_cQ(cfg);
        return cfg;
    }

    /// c_Q Q^-2 sum_q sum*_a e_q(an) h(q/Q, n/Q^2); approximates delta(n).
    inline double delta_sum(std::int64_t n, const DeltaKernelConfig &cfg)
    {
        if (!cfg.cQ)
            throw ArgumentError("delta_sum: c_Q not calibrated");
        return *cfg.cQ * detail::raw_delta_sum(n, cfg.Q);
    }

    /// Real function sampled on an ascending grid; evaluated by rational
    /// barycentric interpolation and taken as 0 outside [front, back].
    class SampledFunction
    {
    public:
        SampledFunction(std::vector<double> t, std::vector<double> v, std::size_t order = 3)
        {
            if (t.size() != v.size() || t.size() < 2)
                throw ArgumentError("sampled function: need >= 2 matching samples");
            if (!std::is_sorted(t.begin(), t.end()) || std::adjacent_find(t.begin(), t.end()) != t.end())
                throw ArgumentError("sampled function: grid must be strictly ascending");
            for (double x : v)
                if (!std::isfinite(x))
                    throw ArgumentError("sampled function: non-finite sample");
            lo_ = t.front();
            hi_ = t.back();
            t_ = t;
            v_ = v;
            all_zero_ = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
            interp_.emplace(std::move(t), std::move(v), std::min(order, t_.size() - 1));
        }

        double operator()(double x) const
        {
            if (x < lo_ || x > hi_ || all_zero_)
                return 0.0;
            return (*interp_)(x);
        }

        double lower() const noexcept { return lo_; }
        double upper() const noexcept { return hi_; }
        const std::vector<double> &nodes() const noexcept { return t_; }
        const std::vector<double> &values() const noexcept { return v_; }

        /// Nodes inside the closed interval [a, b].
        std::size_t nodes_in(double a, double b) const
        {
            return static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), b) -
                                            std::lower_bound(t_.begin(), t_.end(), a));
        }

        /// Integral of the interpolant over the grid span.
        double integral() const
        {
            CompensatedSum<double> s;
            for (std::size_t i = 0; i + 1 < t_.size(); ++i)
                s += gauss_integrate(*this, t_[i], t_[i + 1], 6);
            return s.value();
        }

    private:
        double lo_{}, hi_{};
        bool all_zero_{false};
        std::vector<double> t_, v_;
        std::optional<boost::math::barycentric_rational<double>> interp_;
    };

    inline constexpr std::size_t kMinNodesPerShell = 8;

    /// Integral of f(y) h(x, y) dy over the span of the grid. The h2 part is
    /// written shell by shell: shell j contributes
    /// int_{1/2}^{1} omega(s) [f(xjs) + f(-xjs)] ds.
    inline double smear(const SampledFunction &f, double x)
    {
        detail::check_kernel_x(x);
        const double reach = std::max(std::abs(f.lower()), std::abs(f.upper()));
        // Innermost shells must be resolved on each side that the grid covers.
        for (double sgn : {1.0, -1.0})
        {
            const double a = std::min(sgn * 0.5 * x, sgn * x), b = std::max(sgn * 0.5 * x, sgn * x);
            if (a >= f.lower() && b <= f.upper() && f.nodes_in(a, b) < kMinNodesPerShell)
                throw AccuracyError("smear: grid has fewer than 8 nodes per omega-shell at x = " + std::to_string(x));
        }
        const double main = h1(x) * f.integral();
        CompensatedSum<double> shells;
        for (std::int64_t j = 1; 0.5 * x * static_cast<double>(j) < reach; ++j)
        {
            const double xj = x * static_cast<double>(j);
            // stop each side at the grid edge, where f jumps to 0
            const double s_pos = std::min(1.0, f.upper() / xj), s_neg = std::min(1.0, -f.lower() / xj);
            if (s_pos > 0.5)
                shells += gauss_integrate([&](double s) { return omega(s) * f(xj * s); }, 0.5, s_pos, 32, 2);
            if (s_neg > 0.5)
                shells += gauss_integrate([&](double s) { return omega(s) * f(-xj * s); }, 0.5, s_neg, 32, 2);
        }
        return main - shells.value();
    }

} // namespace qc
