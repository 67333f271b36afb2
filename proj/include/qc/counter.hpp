#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "forms.hpp"
#include "number_theory.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "summation.hpp"
#include "weights.hpp"

namespace qc
{

    using IntVec = std::vector<std::int64_t>;

    struct HyperplaneLatticeSolution
    {
        IntVec particular;
        std::vector<IntVec> basis;
    };

    namespace detail
    {
        inline std::int64_t dot(const IntVec &a, const IntVec &b)
        {
            __int128 s = 0;
            for (std::size_t i = 0; i < a.size(); ++i)
                s += static_cast<__int128>(a[i]) * b[i];
            return static_cast<std::int64_t>(s);
        }

        inline double dotd(const IntVec &a, const IntVec &b)
        {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i)
                s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
            return s;
        }

        inline void axpy(IntVec &y, std::int64_t mu, const IntVec &x)
        {
            for (std::size_t i = 0; i < y.size(); ++i)
                y[i] -= mu * x[i];
        }

        // Pairwise Lagrange-style length reduction until no vector shrinks.
        inline void pairwise_reduce(std::vector<IntVec> &B)
        {
            bool changed = true;
            for (int pass = 0; changed && pass < 1000; ++pass)
            {
                changed = false;
                for (std::size_t i = 0; i < B.size(); ++i)
                    for (std::size_t j = 0; j < B.size(); ++j)
                    {
                        if (i == j)
                            continue;
                        const double bj = dotd(B[j], B[j]);
                        if (bj == 0.0)
                            continue;
                        const auto mu = static_cast<std::int64_t>(std::llround(dotd(B[i], B[j]) / bj));
                        if (mu != 0)
                        {
                            const double before = dotd(B[i], B[i]);
                            IntVec cand = B[i];
                            axpy(cand, mu, B[j]);
                            if (dotd(cand, cand) < before)
                            {
                                B[i] = std::move(cand);
                                changed = true;
                            }
                        }
                    }
            }
            std::sort(B.begin(), B.end(), [](const IntVec &a, const IntVec &b) { return dotd(a, a) < dotd(b, b); });
        }
    } // namespace detail

    /// Solutions of x.y = t: empty when gcd(x) does not divide t, else a
    /// particular solution plus a reduced basis of {y : x.y = 0}.
    inline std::optional<HyperplaneLatticeSolution> solve_hyperplane_lattice(const IntVec &x, std::int64_t t)
    {
        const std::size_t n = x.size();
        if (n == 0 || std::all_of(x.begin(), x.end(), [](std::int64_t v) { return v == 0; }))
            throw ArgumentError("solve_hyperplane_lattice: x must be nonzero");
        // Unimodular U with x^T U = (g, 0, ..., 0), built column by column.
        std::vector<IntVec> U(n, IntVec(n, 0)); // U[col][row]
        for (std::size_t i = 0; i < n; ++i)
            U[i][i] = 1;
        // bring a nonzero entry to the front so column 0 carries the gcd
        std::size_t first = 0;
        while (x[first] == 0)
            ++first;
        std::swap(U[0], U[first]);
        IntVec v = x;
        std::swap(v[0], v[first]);
        for (std::size_t i = 1; i < n; ++i)
        {
            if (v[i] == 0)
                continue;
            const auto e = nt::ext_gcd(v[0], v[i]);
            const std::int64_t a0 = v[0] / e.g, ai = v[i] / e.g;
            IntVec c0(n), ci(n);
            for (std::size_t r = 0; r < n; ++r)
            {
                c0[r] = e.a * U[0][r] + e.b * U[i][r];
                ci[r] = -ai * U[0][r] + a0 * U[i][r];
            }
            U[0] = std::move(c0);
            U[i] = std::move(ci);
            v[0] = e.g;
            v[i] = 0;
        }
        std::int64_t g = v[0];
        if (g < 0)
        {
            g = -g;
            for (auto &e : U[0])
                e = -e;
        }
        if (t % g != 0)
            return std::nullopt;
        HyperplaneLatticeSolution sol;
        sol.particular = U[0];
        for (auto &e : sol.particular)
            e *= t / g;
        sol.basis.assign(U.begin() + 1, U.end());
        detail::pairwise_reduce(sol.basis);
        // size-reduce the particular solution against the basis
        for (int pass = 0; pass < 8; ++pass)
        {
            bool changed = false;
            for (const auto &b : sol.basis)
            {
                const auto mu = static_cast<std::int64_t>(std::llround(detail::dotd(sol.particular, b) / detail::dotd(b, b)));
                if (mu != 0)
                {
                    detail::axpy(sol.particular, mu, b);
                    changed = true;
                }
            }
            if (!changed)
                break;
        }
        return sol;
    }

    namespace detail
    {
        /// Calls visit(y) for every y = p + B k with |y|^2 <= rho2 (Fincke-Pohst).
        template <typename Visit>
        void enumerate_coset(const IntVec &p, const std::vector<IntVec> &B, double rho2, Visit &&visit)
        {
            const std::size_t n = B.size();
            const std::size_t dim = p.size();
            if (n == 0)
            {
                if (dotd(p, p) <= rho2)
                    visit(p);
                return;
            }
            // Gram-Schmidt in floating point.
            std::vector<std::vector<double>> bs(n, std::vector<double>(dim));
            std::vector<double> bn(n);
            std::vector<std::vector<double>> mu(n, std::vector<double>(n, 0.0));
            for (std::size_t i = 0; i < n; ++i)
            {
                for (std::size_t k = 0; k < dim; ++k)
                    bs[i][k] = static_cast<double>(B[i][k]);
                for (std::size_t j = 0; j < i; ++j)
                {
                    double s = 0.0;
                    for (std::size_t k = 0; k < dim; ++k)
                        s += static_cast<double>(B[i][k]) * bs[j][k];
                    mu[i][j] = s / bn[j];
                    for (std::size_t k = 0; k < dim; ++k)
                        bs[i][k] -= mu[i][j] * bs[j][k];
                }
                double s = 0.0;
                for (std::size_t k = 0; k < dim; ++k)
                    s += bs[i][k] * bs[i][k];
                bn[i] = s;
            }
            // Coordinates of p along the Gram-Schmidt directions and its orthogonal remainder.
            std::vector<double> gam(n);
            std::vector<double> rem(dim);
            for (std::size_t k = 0; k < dim; ++k)
                rem[k] = static_cast<double>(p[k]);
            for (std::size_t i = 0; i < n; ++i)
            {
                double s = 0.0;
                for (std::size_t k = 0; k < dim; ++k)
                    s += static_cast<double>(p[k]) * bs[i][k];
                gam[i] = s / bn[i];
                for (std::size_t k = 0; k < dim; ++k)
                    rem[k] -= gam[i] * bs[i][k];
            }
            double base = 0.0;
            for (double r : rem)
                base += r * r;
            const double slack = 1e-9 * std::max(1.0, rho2);
            if (base > rho2 + slack)
                return;
            std::vector<std::int64_t> k(n, 0);
            IntVec y(dim);
            // recursive descent from the last coordinate
            auto rec = [&](auto &&self, std::size_t level, double budget) -> void {
                double c = gam[level];
                for (std::size_t j = level + 1; j < n; ++j)
                    c += mu[j][level] * static_cast<double>(k[j]);
                const double r = std::sqrt(std::max(0.0, budget + slack) / bn[level]);
                const auto lo = static_cast<std::int64_t>(std::ceil(-c - r));
                const auto hi = static_cast<std::int64_t>(std::floor(-c + r));
                for (std::int64_t ki = lo; ki <= hi; ++ki)
                {
                    k[level] = ki;
                    const double z = (static_cast<double>(ki) + c);
                    const double left = budget - z * z * bn[level];
                    if (left < -slack)
                        continue;
                    if (level == 0)
                    {
                        for (std::size_t q = 0; q < dim; ++q)
                        {
                            std::int64_t s = p[q];
                            for (std::size_t j = 0; j < n; ++j)
                                s += k[j] * B[j][q];
                            y[q] = s;
                        }
                        if (dotd(y, y) <= rho2)
                            visit(y);
                    }
                    else
                        self(self, level - 1, left);
                }
            };
            rec(rec, n - 1, rho2 - base);
        }

        /// Calls visit(v) for every integer v in the d-ball of squared radius rho2.
        template <typename Visit>
        void enumerate_ball(int d, double rho2, Visit &&visit)
        {
            IntVec v(static_cast<std::size_t>(d), 0);
            auto rec = [&](auto &&self, int i, double budget) -> void {
                const auto r = static_cast<std::int64_t>(std::floor(std::sqrt(std::max(0.0, budget))));
                for (std::int64_t a = -r; a <= r; ++a)
                {
                    const double left = budget - static_cast<double>(a * a);
                    if (left < 0.0)
                        continue;
                    v[static_cast<std::size_t>(i)] = a;
                    if (i + 1 == d)
                        visit(v);
                    else
                        self(self, i + 1, left);
                }
            };
            rec(rec, 0, rho2);
        }
    } // namespace detail

    struct CountResult
    {
        HighReal value;
        std::int64_t lattice_points_visited;
        double truncation_radius;
        double tail_estimate;

        double value_d() const { return value.get_d(); }
    };

    struct CountOptions
    {
        double budget = 5e8;
        bool reverse_order = false;
        std::optional<double> radius; // z-units; overrides the decay-derived radius
    };

    namespace detail
    {
        inline double ball_volume(int n)
        {
            return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
        }

        // Rough visit count: first-coordinate ball plus points on the quadric.
        inline double predicted_visits(int d1, double rho)
        {
            return ball_volume(d1) * std::pow(rho + 1.0, d1) + 4.0 * d1 * std::pow(rho + 1.0, 2 * d1 - 2);
        }

        // sum over quadric points outside radius R, bounded through the
        // surface point density ~ L^{d-2} r^{d-3}.
        inline double gaussian_envelope(const WeightFunction &w, double R, double L)
        {
            const int d = w.d();
            const double c = w.a() * std::numbers::pi, sigma = w.shift_norm();
            const double area = 2.0 * std::pow(std::numbers::pi, 0.5 * w.d1()) / std::tgamma(0.5 * w.d1());
            const double top = R + 12.0 / std::sqrt(c) + sigma;
            const double v = gauss_integrate(
                [&](double r) {
                    const double e = std::max(0.0, r - sigma);
                    return std::pow(r, std::max(0, d - 3)) * std::exp(-c * e * e);
                },
                R, top, 20, 8);
            return area * area * std::pow(L, d - 2) * v;
        }
    } // namespace detail

    /// N_L(w; F0, m) = sum of w(z) over z in Z^d_L with F0(z) = m, enumerated in
    /// integer coordinates u = L z inside the ball |z| <= R.
    inline CountResult enumerate_N_L(const WeightFunction &w, const LatticeSpec &spec, double eps, const CountOptions &opt = {})
    {
        if (!(eps > 0.0))
            throw ArgumentError("enumerate_N_L: eps must be > 0");
        const int d1 = w.d1();
        const double L = spec.L();
        const std::int64_t t = spec.t();
        if (w.is_zero())
            return {make_high(0.0), 0, 0.0, 0.0};
        const auto support = w.support_radius();
        const double R = opt.radius ? *opt.radius : decay_radius(w, eps, std::max(0, w.d() - 2));
        const double rho = R * L, rho2 = rho * rho, rho08sq = 0.64 * rho2;
        const double pred = detail::predicted_visits(d1, rho);
        if (pred > opt.budget)
        {
            double lo = 1.0, hi = L;
            for (int it = 0; it < 60; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                (detail::predicted_visits(d1, R * mid) > opt.budget ? hi : lo) = mid;
            }
            throw CapabilityError("enumerate_N_L: predicted " + std::to_string(pred) + " visits exceed the budget; max L ~ " +
                                  std::to_string(lo));
        }
        const auto r0 = static_cast<std::int64_t>(std::floor(rho));
        const std::size_t n0 = static_cast<std::size_t>(2 * r0 + 1);
        std::atomic<std::int64_t> visits{0};

        struct Partial
        {
            CompensatedSum<double> full, inner;
            std::int64_t visited = 0;
        };

        auto wy_at = [&](const IntVec &y, std::vector<double> &buf) {
            for (int k = 0; k < d1; ++k)
                buf[static_cast<std::size_t>(k)] = static_cast<double>(y[static_cast<std::size_t>(k)]) / L;
            return w.y_value(buf.data());
        };

        // One shell: all u_x with first coordinate a.
        auto shell = [&](std::size_t idx) {
            const std::int64_t a = opt.reverse_order ? r0 - static_cast<std::int64_t>(idx) : -r0 + static_cast<std::int64_t>(idx);
            Partial P;
            std::vector<double> xb(static_cast<std::size_t>(d1)), yb(static_cast<std::size_t>(d1));
            const double left = rho2 - static_cast<double>(a * a);
            if (left < 0.0)
                return P;
            auto per_x = [&](const IntVec &rest) {
                IntVec ux(static_cast<std::size_t>(d1));
                ux[0] = a;
                for (int k = 1; k < d1; ++k)
                    ux[static_cast<std::size_t>(k)] = rest[static_cast<std::size_t>(k - 1)];
                for (int k = 0; k < d1; ++k)
                    xb[static_cast<std::size_t>(k)] = static_cast<double>(ux[static_cast<std::size_t>(k)]) / L;
                const double wx = w.x_value(xb.data());
                const double nx = detail::dotd(ux, ux);
                ++P.visited;
                if (wx == 0.0)
                    return;
                const bool zero = std::all_of(ux.begin(), ux.end(), [](std::int64_t v) { return v == 0; });
                if (zero)
                {
                    if (t != 0)
                        return;
                    detail::enumerate_ball(d1, rho2, [&](const IntVec &uy) {
                        ++P.visited;
                        const double c = wx * wy_at(uy, yb);
                        P.full += c;
                        if (detail::dotd(uy, uy) <= rho08sq)
                            P.inner += c;
                    });
                    return;
                }
                const auto sol = solve_hyperplane_lattice(ux, t);
                if (!sol)
                    return;
                detail::enumerate_coset(sol->particular, sol->basis, rho2 - nx, [&](const IntVec &uy) {
                    ++P.visited;
                    const double c = wx * wy_at(uy, yb);
                    P.full += c;
                    if (nx + detail::dotd(uy, uy) <= rho08sq)
                        P.inner += c;
                });
            };
            if (d1 == 1)
                per_x({});
            else
                detail::enumerate_ball(d1 - 1, left, per_x);
            visits += P.visited;
            return P;
        };
        const auto parts = ordered_parallel_map(n0, shell);
        CompensatedSum<double> full, inner;
        std::int64_t visited = 0;
        for (const auto &P : parts)
        {
            full.merge(P.full);
            inner.merge(P.inner);
            visited += P.visited;
        }
        double tail = 0.0;
        if (!support)
            tail = std::abs(full.value() - inner.value()) + detail::gaussian_envelope(w, R, L);
        return {make_high(full.value()), visited, R, tail};
    }

    /// Literal box scan over |u|_inf <= B, solving the first y coordinate
    /// directly from x.y = t.
    inline double brute_force_N_L(const WeightFunction &w, const LatticeSpec &spec, std::int64_t B)
    {
        if (B < 0)
            throw ArgumentError("brute_force_N_L: box radius must be >= 0");
        const int d1 = w.d1();
        const double side = static_cast<double>(2 * B + 1);
        if (std::pow(side, 2 * d1 - 1) > 1e9)
            throw CapabilityError("brute_force_N_L: box too large");
        if (w.is_zero())
            return 0.0;
        const double L = spec.L();
        const std::int64_t t = spec.t();
        std::vector<double> z(static_cast<std::size_t>(2 * d1));
        CompensatedSum<double> s;
        IntVec u(static_cast<std::size_t>(2 * d1), -B);
        auto eval_point = [&]() {
            __int128 dot = 0;
            for (int i = 0; i < d1; ++i)
                dot += static_cast<__int128>(u[static_cast<std::size_t>(i)]) * u[static_cast<std::size_t>(i + d1)];
            if (dot != t)
                throw InternalError("brute_force_N_L: point off the quadric");
            for (std::size_t i = 0; i < z.size(); ++i)
                z[i] = static_cast<double>(u[i]) / L;
            s += w(z);
        };
        // odometer over all coordinates except y_0 (index d1)
        std::vector<std::size_t> free;
        for (int i = 0; i < 2 * d1; ++i)
            if (i != d1)
                free.push_back(static_cast<std::size_t>(i));
        for (auto i : free)
            u[i] = -B;
        while (true)
        {
            __int128 rest = t;
            for (int i = 1; i < d1; ++i)
                rest -= static_cast<__int128>(u[static_cast<std::size_t>(i)]) * u[static_cast<std::size_t>(i + d1)];
            const std::int64_t x0 = u[0];
            if (x0 != 0)
            {
                if (rest % x0 == 0)
                {
                    const __int128 y0 = rest / x0;
                    if (y0 >= -B && y0 <= B)
                    {
                        u[static_cast<std::size_t>(d1)] = static_cast<std::int64_t>(y0);
                        eval_point();
                    }
                }
            }
            else if (rest == 0)
            {
                for (std::int64_t y0 = -B; y0 <= B; ++y0)
                {
                    u[static_cast<std::size_t>(d1)] = y0;
                    eval_point();
                }
            }
            std::size_t k = 0;
            while (k < free.size() && ++u[free[k]] > B)
                u[free[k++]] = -B;
            if (k == free.size())
                break;
        }
        return s.value();
    }

} // namespace qc
