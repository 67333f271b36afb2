#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "delta_kernel.hpp"
#include "errors.hpp"
#include "forms.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "summation.hpp"
#include "weights.hpp"

namespace qc
{

    struct QuadratureConfig
    {
        int radial_order = 16;   // Gauss nodes per radial panel
        int angular_order = 12;  // Gauss nodes in cos(theta); 2x trapezoid nodes in phi
        int plane_order = 10;    // Gauss nodes per fiber panel and dimension
        int plane_panels = 4;    // fiber panels per dimension
        int bump_panels = 24;    // panels across the support of a compact radial profile
        double r_min_factor = 1e-6;
        double r_max = 0.0;        // 0: from the weight's decay
        double fiber_radius = 0.0; // 0: from the weight's decay
        double tolerance = 1e-7;
        bool use_symmetry = true;  // reduce radial weights to 1-d integrals

        void validate() const
        {
            if (radial_order < 4 || angular_order < 4 || plane_order < 4 || plane_panels < 1 || bump_panels < 1)
                throw ArgumentError("quadrature: all orders must be >= 4");
            if (!(r_min_factor > 0.0 && r_min_factor < 1.0))
                throw ArgumentError("quadrature: r_min factor must lie in (0, 1)");
            if (r_max < 0.0 || fiber_radius < 0.0 || !(tolerance > 0.0))
                throw ArgumentError("quadrature: invalid radius or tolerance");
        }

        QuadratureConfig refined() const
        {
            QuadratureConfig c = *this;
            c.radial_order = radial_order * 3 / 2;
            c.angular_order = angular_order * 3 / 2;
            c.plane_order = plane_order * 3 / 2;
            c.plane_panels = plane_panels + plane_panels / 2 + 1;
            c.bump_panels = bump_panels * 3 / 2;
            c.r_min_factor = r_min_factor / 4.0;
            return c;
        }
    };

    struct QuadResult
    {
        double value;
        double est_error;
    };

    enum class Projection
    {
        X,
        Y,
    };

    namespace detail
    {

        inline constexpr double kNegligible = 1e-17;

        inline double sphere_area(int n) // |S^{n-1}| in R^n
        {
            return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / boost::math::tgamma(0.5 * n);
        }

        inline std::vector<double> factor_center(const Factor &f, int d1)
        {
            if (const auto *g = std::get_if<GaussianFactor>(&f))
                return g->shift;
            return std::vector<double>(static_cast<std::size_t>(d1), 0.0);
        }

        inline double vec_norm(const std::vector<double> &v)
        {
            double s = 0.0;
            for (double x : v)
                s += x * x;
            return std::sqrt(s);
        }

        // Radius of the ball about the factor's centre outside of which it is negligible.
        inline double factor_local_radius(const Factor &f, int d1)
        {
            if (const auto *g = std::get_if<GaussianFactor>(&f))
                return std::sqrt(std::log(1.0 / kNegligible) / (g->a * std::numbers::pi));
            if (const auto *b = std::get_if<BumpFactor>(&f))
                return b->scale * std::sqrt(static_cast<double>(d1));
            const auto &r = std::get<RadialBumpFactor>(f);
            return std::sqrt(std::max(0.0, r.center + r.half_width));
        }

        inline double factor_reach(const Factor &f, int d1)
        {
            return vec_norm(factor_center(f, d1)) + factor_local_radius(f, d1);
        }

        inline bool factor_is_radial(const Factor &f)
        {
            if (const auto *g = std::get_if<GaussianFactor>(&f))
                return std::all_of(g->shift.begin(), g->shift.end(), [](double v) { return v == 0.0; });
            return std::holds_alternative<RadialBumpFactor>(f);
        }

        // Radial profile P(s), s = |v|^2, and its support [lo, hi] in s.
        struct RadialView
        {
            const Factor *f;
            double lo, hi;
            bool compact;

            double operator()(double s) const
            {
                if (s <= lo || s >= hi)
                    return 0.0;
                if (const auto *g = std::get_if<GaussianFactor>(f))
                    return std::exp(-g->a * std::numbers::pi * s);
                const auto &r = std::get<RadialBumpFactor>(*f);
                const double u = (s - r.center) / r.half_width;
                return std::exp(1.0 + 1.0 / (u * u - 1.0));
            }
        };

        inline RadialView radial_view(const Factor &f, int d1)
        {
            if (const auto *r = std::get_if<RadialBumpFactor>(&f))
                return {&f, std::max(0.0, r->center - r->half_width), std::max(0.0, r->center + r->half_width), true};
            const double R = factor_local_radius(f, d1);
            return {&f, -1.0, R * R, false};
        }

        struct Panel
        {
            double a, b;
        };

        // Geometric panels (ratio 2) from r_lo up to 0.5, then at least
        // min_uniform panels of width <= 0.5.
        inline std::vector<Panel> radial_panels(double r_lo, double r_hi, bool geometric, int min_uniform = 1)
        {
            std::vector<Panel> out;
            double a = r_lo;
            if (geometric)
                while (a < std::min(0.5, r_hi))
                {
                    const double b = std::min({2.0 * a, 0.5, r_hi});
                    out.push_back({a, b});
                    a = b;
                }
            const int n = std::max(min_uniform, static_cast<int>(std::ceil((r_hi - a) / 0.5 - 1e-12)));
            if (r_hi > a)
                for (int k = 0; k < n; ++k)
                    out.push_back({a + (r_hi - a) * k / n, a + (r_hi - a) * (k + 1) / n});
            return out;
        }

        // Fiber integral over the (d1-1)-plane at distance |s| from the origin
        // of a radial profile: |S^{d1-2}| int rho^{d1-2} P(rho^2 + s^2) drho.
        inline double radial_fiber(const RadialView &P, int d1, double s, const QuadratureConfig &cfg)
        {
            const double s2 = s * s;
            if (s2 >= P.hi)
                return 0.0;
            const double lo = std::sqrt(std::max(0.0, P.lo - s2));
            const double hi = std::sqrt(P.hi - s2);
            const int panels = P.compact ? cfg.bump_panels : std::max(4, static_cast<int>(std::ceil((hi - lo) / 0.25)));
            const int k = d1 - 2;
            const double v = gauss_integrate([&](double rho) { return std::pow(rho, k) * P(rho * rho + s2); }, lo, hi,
                                             cfg.radial_order, panels);
            return sphere_area(d1 - 1) * v;
        }

        // Drops the part of the panels below `cut` and subdivides the window
        // [a, b] into about n pieces.
        inline std::vector<Panel> refine_panels(const std::vector<Panel> &in, double cut, double a, double b, int n)
        {
            std::vector<Panel> out;
            const double len = b - a;
            for (Panel p : in)
            {
                if (p.b <= cut)
                    continue;
                p.a = std::max(p.a, cut);
                std::vector<double> pts{p.a};
                for (double x : {a, b})
                    if (x > p.a && x < p.b)
                        pts.push_back(x);
                pts.push_back(p.b);
                for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                {
                    const double lo = pts[i], hi = pts[i + 1];
                    int k = 1;
                    if (len > 0.0 && lo >= a && hi <= b)
                        k = std::max(1, static_cast<int>(std::ceil(n * (hi - lo) / len)));
                    for (int j = 0; j < k; ++j)
                        out.push_back({lo + (hi - lo) * j / k, lo + (hi - lo) * (j + 1) / k});
                }
            }
            return out;
        }

        // Both factors radial: I = |S^{d1-1}| int r^{d1-2} P_base(r^2) G(t/r) dr.
        inline QuadResult reduced_projection(const Factor &base, const Factor &fib, int d1, double t,
                                             const QuadratureConfig &cfg)
        {
            const RadialView Pb = radial_view(base, d1), Pf = radial_view(fib, d1);
            const double r_hi = cfg.r_max > 0.0 ? cfg.r_max : std::sqrt(Pb.hi);
            bool apex = !(Pb.lo > 0.0);
            const double r_lo = apex ? cfg.r_min_factor * r_hi : std::sqrt(Pb.lo);
            auto panels = radial_panels(r_lo, r_hi, apex, Pb.compact ? cfg.bump_panels : 1);
            if (Pf.compact && t != 0.0)
            {
                // G(t/r) vanishes for r < |t|/sqrt(hi) and switches on smoothly up to |t|/sqrt(lo).
                const double b1 = std::abs(t) / std::sqrt(Pf.hi);
                const double b2 = Pf.lo > 0.0 ? std::abs(t) / std::sqrt(Pf.lo) : std::min(r_hi, 4.0 * b1);
                panels = refine_panels(panels, b1, b1, std::min(b2, r_hi), cfg.bump_panels);
                if (b1 > r_lo)
                    apex = false;
            }
            auto A = [&](double r) { return Pb(r * r) * radial_fiber(Pf, d1, t / r, cfg); };
            const auto &g = gauss_legendre(cfg.radial_order);
            const auto parts = ordered_parallel_map(panels.size(), [&](std::size_t i) {
                const double mid = 0.5 * (panels[i].a + panels[i].b), half = 0.5 * (panels[i].b - panels[i].a);
                double s = 0.0;
                for (std::size_t k = 0; k < g.nodes.size(); ++k)
                {
                    const double r = mid + half * g.nodes[k];
                    s += g.weights[k] * std::pow(r, d1 - 2) * A(r);
                }
                return s * half;
            });
            CompensatedSum<double> total;
            for (double p : parts)
                total += p;
            double corr = 0.0;
            if (apex)
            {
                corr = A(r_lo) * std::pow(r_lo, d1 - 1) / (d1 - 1);
                total += corr;
            }
            const double area = sphere_area(d1);
            const double inner = parts.empty() ? 0.0 : std::abs(parts.front());
            return {area * total.value(), area * (inner + std::abs(corr))};
        }

        struct SphereRule
        {
            std::vector<std::vector<double>> theta;
            std::vector<double> weight;
        };

        inline SphereRule sphere_rule(int d1, int order)
        {
            SphereRule S;
            const int nphi = 2 * order;
            if (d1 == 2)
            {
                for (int k = 0; k < nphi; ++k)
                {
                    const double ph = 2.0 * std::numbers::pi * (k + 0.5) / nphi;
                    S.theta.push_back({std::cos(ph), std::sin(ph)});
                    S.weight.push_back(2.0 * std::numbers::pi / nphi);
                }
                return S;
            }
            if (d1 != 3)
                throw CapabilityError("singular integral: sphere rules are built for d1 in {2, 3} only");
            const auto &g = gauss_legendre(order);
            for (std::size_t i = 0; i < g.nodes.size(); ++i)
            {
                const double c = g.nodes[i], sn = std::sqrt(std::max(0.0, 1.0 - c * c));
                for (int k = 0; k < nphi; ++k)
                {
                    const double ph = 2.0 * std::numbers::pi * (k + 0.5) / nphi;
                    S.theta.push_back({c, sn * std::cos(ph), sn * std::sin(ph)});
                    S.weight.push_back(g.weights[i] * 2.0 * std::numbers::pi / nphi);
                }
            }
            return S;
        }

        /// Orthonormal basis of theta-perp: columns 2..n of the Householder
        /// reflection sending e1 to theta.
        inline std::vector<std::vector<double>> householder_frame(const std::vector<double> &theta)
        {
            const std::size_t n = theta.size();
            std::vector<double> v(theta.size());
            for (std::size_t i = 0; i < n; ++i)
                v[i] = (i == 0 ? 1.0 : 0.0) - theta[i];
            double vv = 0.0;
            for (double x : v)
                vv += x * x;
            std::vector<std::vector<double>> out;
            for (std::size_t k = 1; k < n; ++k)
            {
                std::vector<double> col(n, 0.0);
                col[k] = 1.0;
                if (vv > 1e-30)
                {
                    const double f = 2.0 * v[k] / vv;
                    for (std::size_t i = 0; i < n; ++i)
                        col[i] -= f * v[i];
                }
                out.push_back(std::move(col));
            }
            return out;
        }

        // General separable weight: tensor rules on the sphere and on the fiber plane.
        inline QuadResult generic_projection(const Factor &base, const Factor &fib, int d1, double t,
                                             const QuadratureConfig &cfg)
        {
            if (d1 > 3)
                throw CapabilityError("singular integral: d1 > 3 quadrature is not part of this build");
            const double r_hi = cfg.r_max > 0.0 ? cfg.r_max : factor_reach(base, d1);
            const double r_lo = cfg.r_min_factor * r_hi;
            const auto panels = radial_panels(r_lo, r_hi, true);
            const auto S = sphere_rule(d1, cfg.angular_order);
            const auto cf = factor_center(fib, d1);
            const double Rf = cfg.fiber_radius > 0.0 ? cfg.fiber_radius : factor_local_radius(fib, d1);

            // 1-d composite rule on [-Rf, Rf] reused in each fiber direction.
            std::vector<double> un, uw;
            {
                const auto &g = gauss_legendre(cfg.plane_order);
                const double width = 2.0 * Rf / cfg.plane_panels;
                for (int p = 0; p < cfg.plane_panels; ++p)
                {
                    const double mid = -Rf + (p + 0.5) * width;
                    for (std::size_t k = 0; k < g.nodes.size(); ++k)
                    {
                        un.push_back(mid + 0.5 * width * g.nodes[k]);
                        uw.push_back(0.5 * width * g.weights[k]);
                    }
                }
            }
            struct Dir
            {
                std::vector<double> theta;
                double weight;
                std::vector<std::vector<double>> frame;
                std::vector<double> centre; // fiber centre coordinates in the frame
            };
            std::vector<Dir> dirs;
            for (std::size_t i = 0; i < S.theta.size(); ++i)
            {
                Dir D{S.theta[i], S.weight[i], householder_frame(S.theta[i]), {}};
                for (const auto &e : D.frame)
                {
                    double c = 0.0;
                    for (int k = 0; k < d1; ++k)
                        c += cf[static_cast<std::size_t>(k)] * e[static_cast<std::size_t>(k)];
                    D.centre.push_back(c);
                }
                dirs.push_back(std::move(D));
            }
            const std::size_t nu = un.size();
            auto fiber = [&](const Dir &D, double s) {
                std::vector<double> y(static_cast<std::size_t>(d1));
                CompensatedSum<double> acc;
                if (d1 == 2)
                {
                    for (std::size_t i = 0; i < nu; ++i)
                    {
                        const double u = D.centre[0] + un[i];
                        for (int k = 0; k < 2; ++k)
                            y[static_cast<std::size_t>(k)] = s * D.theta[static_cast<std::size_t>(k)] + u * D.frame[0][static_cast<std::size_t>(k)];
                        acc += uw[i] * factor_value(fib, y.data(), d1);
                    }
                    return acc.value();
                }
                for (std::size_t i = 0; i < nu; ++i)
                {
                    const double u1 = D.centre[0] + un[i];
                    double row = 0.0;
                    for (std::size_t j = 0; j < nu; ++j)
                    {
                        const double u2 = D.centre[1] + un[j];
                        for (int k = 0; k < 3; ++k)
                        {
                            const auto kk = static_cast<std::size_t>(k);
                            y[kk] = s * D.theta[kk] + u1 * D.frame[0][kk] + u2 * D.frame[1][kk];
                        }
                        row += uw[j] * factor_value(fib, y.data(), d1);
                    }
                    acc += uw[i] * row;
                }
                return acc.value();
            };
            auto A = [&](double r) {
                // sphere average at radius r, without the r^{d1-2} factor
                std::vector<double> x(static_cast<std::size_t>(d1));
                CompensatedSum<double> acc;
                for (const auto &D : dirs)
                {
                    for (int k = 0; k < d1; ++k)
                        x[static_cast<std::size_t>(k)] = r * D.theta[static_cast<std::size_t>(k)];
                    const double wb = factor_value(base, x.data(), d1);
                    if (wb < 1e-300)
                        continue;
                    acc += D.weight * wb * fiber(D, t / r);
                }
                return acc.value();
            };
            const auto &g = gauss_legendre(cfg.radial_order);
            const auto parts = ordered_parallel_map(panels.size(), [&](std::size_t i) {
                const double mid = 0.5 * (panels[i].a + panels[i].b), half = 0.5 * (panels[i].b - panels[i].a);
                double s = 0.0;
                for (std::size_t k = 0; k < g.nodes.size(); ++k)
                {
                    const double r = mid + half * g.nodes[k];
                    s += g.weights[k] * std::pow(r, d1 - 2) * A(r);
                }
                return s * half;
            });
            CompensatedSum<double> total;
            for (double p : parts)
                total += p;
            const double corr = A(r_lo) * std::pow(r_lo, d1 - 1) / (d1 - 1);
            total += corr;
            const double inner = parts.empty() ? 0.0 : std::abs(parts.front());
            return {total.value(), inner + std::abs(corr)};
        }

    } // namespace detail

    /// I(t) disintegrated over the projection onto x (or y):
    /// int |x|^{-1} dx int_{x-perp} w(x, y + t x/|x|^2) dy.
    inline QuadResult integrate_projection(const WeightFunction &w, double t, const QuadratureConfig &cfg, Projection proj)
    {
        cfg.validate();
        if (w.d1() < 2)
            throw ArgumentError("singular integral: d1 must be >= 2");
        if (!std::isfinite(t))
            throw ArgumentError("singular integral: t must be finite");
        if (w.is_zero())
            return {0.0, 0.0};
        const Factor &base = proj == Projection::X ? w.x_factor() : w.y_factor();
        const Factor &fib = proj == Projection::X ? w.y_factor() : w.x_factor();
        if (cfg.use_symmetry && detail::factor_is_radial(base) && detail::factor_is_radial(fib))
            return detail::reduced_projection(base, fib, w.d1(), t, cfg);
        return detail::generic_projection(base, fib, w.d1(), t, cfg);
    }

    inline double I_x_projection(const WeightFunction &w, double t, const QuadratureConfig &cfg = {})
    {
        return integrate_projection(w, t, cfg, Projection::X).value;
    }

    inline double I_y_projection(const WeightFunction &w, double t, const QuadratureConfig &cfg = {})
    {
        return integrate_projection(w, t, cfg, Projection::Y).value;
    }

    /// sigma_infty(w; F0, m) = I(m; w). With refine, a second level is run and
    /// the two must agree to 10x the tolerance.
    inline QuadResult sigma_infty(const WeightFunction &w, double m, const QuadratureConfig &cfg = {}, bool refine = false)
    {
        const auto base = integrate_projection(w, m, cfg, Projection::X);
        if (!refine)
            return base;
        const auto fine = integrate_projection(w, m, cfg.refined(), Projection::X);
        const double diff = std::abs(fine.value - base.value);
        if (diff > 10.0 * cfg.tolerance * std::max(1.0, std::abs(fine.value)))
            throw AccuracyError("sigma_infty: refinement levels differ by " + std::to_string(diff));
        return {fine.value, std::max(diff, fine.est_error)};
    }

    /// Central finite difference of order k <= 3 of t -> I(t).
    inline double I_derivative_fd(const WeightFunction &w, double t, int k, double step, const QuadratureConfig &cfg = {})
    {
        if (k < 1 || k > 3)
            throw ArgumentError("I_derivative_fd: k must be in 1..3");
        if (t == 0.0)
            throw ArgumentError("I_derivative_fd: t must be nonzero");
        if (!(step > 0.0) || step > std::abs(t) / 4.0)
            throw ArgumentError("I_derivative_fd: step must lie in (0, |t|/4]");
        auto I = [&](double s) { return I_x_projection(w, s, cfg); };
        const double h = step;
        switch (k)
        {
        case 1:
            return (I(t + h) - I(t - h)) / (2.0 * h);
        case 2:
            return (I(t + h) - 2.0 * I(t) + I(t - h)) / (h * h);
        default:
            return (I(t + 2 * h) - 2.0 * I(t + h) + 2.0 * I(t - h) - I(t - 2 * h)) / (2.0 * h * h * h);
        }
    }

    struct IFunctionGrid
    {
        std::vector<double> t_values;
        std::vector<double> I_values;
        QuadratureConfig config;
    };

    inline IFunctionGrid make_i_grid(const WeightFunction &w, std::vector<double> ts, const QuadratureConfig &cfg = {})
    {
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        QuadratureConfig inner = cfg;
        auto vals = ordered_parallel_map(ts.size(), [&](std::size_t i) { return I_x_projection(w, ts[i], inner); });
        return {std::move(ts), std::move(vals), cfg};
    }

    /// Nodes on [c - X, c + X]: spacing h_min within |t - c| <= 16 h_min,
    /// growing like |t - c|/16 beyond, capped at h_max.
    inline std::vector<double> graded_grid(double c, double X, double h_min, double h_max = 0.02)
    {
        if (!(X > 0.0 && h_min > 0.0 && h_max >= h_min))
            throw ArgumentError("graded_grid: invalid spacing");
        std::vector<double> half{0.0};
        double s = 0.0;
        while (s < X)
        {
            s = std::min(X, s + std::clamp(s / 16.0, h_min, h_max));
            half.push_back(s);
        }
        std::vector<double> out;
        for (auto it = half.rbegin(); it != half.rend(); ++it)
            if (*it > 0.0)
                out.push_back(c - *it);
        for (double v : half)
            out.push_back(c + v);
        return out;
    }

    inline constexpr double kSmearGamma1 = 0.1;

    /// Half-width X = min(1, x^{1 - gamma1/2}) needed around m.
    inline double smear_window(double x)
    {
        return std::min(1.0, std::pow(x, 1.0 - kSmearGamma1 / 2.0));
    }

    /// Grid of I on [m - X, m + X] resolving the kernel shells down to x_min.
    inline IFunctionGrid make_smear_grid(const WeightFunction &w, double m, double x_min, double X = 1.0,
                                         const QuadratureConfig &cfg = {})
    {
        return make_i_grid(w, graded_grid(m, X, x_min / 32.0), cfg);
    }

    /// int I(m + t) h(x, t) dt over the span of the grid.
    inline double smeared_sigma(const WeightFunction &w, double m, double x, const IFunctionGrid &grid)
    {
        if (w.is_zero())
            return 0.0;
        if (grid.t_values.size() < 2)
            throw ArgumentError("smeared_sigma: empty grid");
        const double X = smear_window(x);
        if (grid.t_values.front() > m - X + 1e-12 || grid.t_values.back() < m + X - 1e-12)
            throw ArgumentError("smeared_sigma: grid does not cover [m - X, m + X]");
        std::vector<double> tau(grid.t_values.size());
        for (std::size_t i = 0; i < tau.size(); ++i)
            tau[i] = grid.t_values[i] - m;
        return smear(SampledFunction(std::move(tau), grid.I_values), x);
    }

    struct CoareaConfig
    {
        int order = 12;  // Gauss nodes per panel
        int panels = 2;  // panels per coordinate
    };

    struct CoareaResult
    {
        double lhs;
        double rhs;
    };

    /// lhs: tensor Gauss quadrature of int w(z) phi(F0(z)) dz over the box
    /// holding w. rhs: int phi(t) I(t) dt over supp phi = [a, b].
    inline CoareaResult coarea_check(const WeightFunction &w, const std::function<double(double)> &phi, double a, double b,
                                     const QuadratureConfig &cfg = {}, const CoareaConfig &cc = {})
    {
        if (!(b > a))
            throw ArgumentError("coarea_check: empty support");
        if (w.is_zero())
            return {0.0, 0.0};
        const int d1 = w.d1();
        if (d1 > 3)
            throw CapabilityError("coarea_check: d1 > 3 is not part of this build");
        // Tensor nodes for one factor, with the factor's value attached.
        auto tensor = [&](const Factor &f) {
            const auto c = detail::factor_center(f, d1);
            const double R = detail::factor_local_radius(f, d1);
            const auto &g = gauss_legendre(cc.order);
            std::vector<double> n1, w1;
            const double width = 2.0 * R / cc.panels;
            for (int p = 0; p < cc.panels; ++p)
                for (std::size_t k = 0; k < g.nodes.size(); ++k)
                {
                    n1.push_back(-R + (p + 0.5) * width + 0.5 * width * g.nodes[k]);
                    w1.push_back(0.5 * width * g.weights[k]);
                }
            std::vector<std::vector<double>> pts;
            std::vector<double> wts;
            std::vector<std::size_t> idx(static_cast<std::size_t>(d1), 0);
            while (true)
            {
                std::vector<double> v(static_cast<std::size_t>(d1));
                double wt = 1.0;
                for (int k = 0; k < d1; ++k)
                {
                    const auto kk = static_cast<std::size_t>(k);
                    v[kk] = c[kk] + n1[idx[kk]];
                    wt *= w1[idx[kk]];
                }
                const double fv = detail::factor_value(f, v.data(), d1);
                if (fv != 0.0)
                {
                    pts.push_back(std::move(v));
                    wts.push_back(wt * fv);
                }
                int k = 0;
                while (k < d1 && ++idx[static_cast<std::size_t>(k)] == n1.size())
                    idx[static_cast<std::size_t>(k++)] = 0;
                if (k == d1)
                    break;
            }
            return std::pair{std::move(pts), std::move(wts)};
        };
        const auto [xs, wx] = tensor(w.x_factor());
        const auto [ys, wy] = tensor(w.y_factor());
        const auto rows = ordered_parallel_map(xs.size(), [&](std::size_t i) {
            double s = 0.0;
            for (std::size_t j = 0; j < ys.size(); ++j)
            {
                double dot = 0.0;
                for (int k = 0; k < d1; ++k)
                    dot += xs[i][static_cast<std::size_t>(k)] * ys[j][static_cast<std::size_t>(k)];
                if (dot > a && dot < b)
                    s += wy[j] * phi(dot);
            }
            return wx[i] * s;
        });
        CompensatedSum<double> lhs;
        for (double r : rows)
            lhs += r;

        // rhs: Gauss panels over [a, b], split at 0 where I has its cone-point
        // singularity; the panel touching 0 is graded geometrically.
        std::vector<detail::Panel> tp;
        const int per_side = 16, grading = 30;
        auto add = [&](double lo, double hi) {
            const bool at0 = (lo == 0.0), at1 = (hi == 0.0);
            for (int k = 0; k < per_side; ++k)
            {
                const double p0 = lo + (hi - lo) * k / per_side, p1 = lo + (hi - lo) * (k + 1) / per_side;
                if ((at0 && k == 0) || (at1 && k == per_side - 1))
                {
                    const double z = at0 ? p0 : p1, far = at0 ? p1 : p0;
                    double prev = far;
                    for (int g = 1; g <= grading; ++g)
                    {
                        const double next = z + (far - z) * std::ldexp(1.0, -g);
                        tp.push_back({std::min(prev, next), std::max(prev, next)});
                        prev = next;
                    }
                    tp.push_back({std::min(prev, z), std::max(prev, z)});
                }
                else
                    tp.push_back({p0, p1});
            }
        };
        if (a < 0.0 && b > 0.0)
        {
            add(a, 0.0);
            add(0.0, b);
        }
        else
            add(a, b);
        const auto &g = gauss_legendre(12);
        std::vector<double> ts, tw;
        for (const auto &p : tp)
            for (std::size_t k = 0; k < g.nodes.size(); ++k)
            {
                ts.push_back(0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * g.nodes[k]);
                tw.push_back(0.5 * (p.b - p.a) * g.weights[k]);
            }
        const auto Ivals = ordered_parallel_map(ts.size(), [&](std::size_t i) { return I_x_projection(w, ts[i], cfg); });
        CompensatedSum<double> rhs;
        for (std::size_t i = 0; i < ts.size(); ++i)
            rhs += tw[i] * phi(ts[i]) * Ivals[i];
        return {lhs.value(), rhs.value()};
    }

    /// Closed forms for w = exp(-a pi |z|^2): d1 = 3 gives 4 pi |t| K1(2 a pi |t|)/a
    /// (2/a^2 at t = 0), d1 = 2 gives pi exp(-2 a pi |t|)/a.
    inline double gaussian_I_closed(int d1, double a, double t)
    {
        const double at = std::abs(t);
        if (d1 == 2)
            return std::numbers::pi * std::exp(-2.0 * a * std::numbers::pi * at) / a;
        if (d1 == 3)
        {
            if (at == 0.0)
                return 2.0 / (a * a);
            return 4.0 * std::numbers::pi * at * boost::math::cyl_bessel_k(1, 2.0 * a * std::numbers::pi * at) / a;
        }
        throw CapabilityError("gaussian_I_closed: d1 must be 2 or 3");
    }

    /// d/dt of the d1 = 3 closed form: -8 pi^2 t K0(2 a pi |t|).
    inline double gaussian_I_derivative_closed(double a, double t)
    {
        if (t == 0.0)
            return 0.0;
        return -8.0 * std::numbers::pi * std::numbers::pi * t * boost::math::cyl_bessel_k(0, 2.0 * a * std::numbers::pi * std::abs(t));
    }

} // namespace qc
