#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace qc
{

    /// The one-dimensional bump exp(1/(x^2-1)) on (-1, 1), zero elsewhere.
    inline double w0(double x) noexcept
    {
        const double s = x * x - 1.0;
        if (!(s < 0.0))
            return 0.0;
        return std::exp(1.0 / s);
    }

    namespace detail
    {

        // phi(u) = e * w0(u): smooth bump with phi(0) = 1.
        // Returns phi, phi', phi'' at u.
        inline std::array<double, 3> unit_bump_jet(double u) noexcept
        {
            const double s = u * u - 1.0;
            if (!(s < 0.0))
                return {0.0, 0.0, 0.0};
            const double phi = std::exp(1.0 + 1.0 / s);
            const double p1 = -2.0 * u / (s * s);
            const double p2 = (6.0 * u * u + 2.0) / (s * s * s);
            return {phi, phi * p1, phi * (p1 * p1 + p2)};
        }

        inline double norm2(const double *v, int n) noexcept
        {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                s += v[i] * v[i];
            return s;
        }

        /// Supremum of |f| over [a, b] on a uniform grid refined dyadically until
        /// it stabilises, inflated by 1.05.
        template <typename F>
        double grid_sup(F &&f, double a, double b)
        {
            double prev = -1.0;
            for (int n = 64;; n *= 2)
            {
                double m = 0.0;
                for (int i = 0; i <= n; ++i)
                    m = std::max(m, std::abs(f(a + (b - a) * i / n)));
                if (n >= 2048 && std::abs(m - prev) <= 1e-6 * std::max(1.0, m))
                    return 1.05 * m;
                if (n >= (1 << 16))
                    return 1.05 * m;
                prev = m;
            }
        }

        /// sup_{r >= 0} r^p exp(-c r^2), c > 0.
        inline double gauss_moment_sup(double p, double c)
        {
            if (p <= 0.0)
                return 1.0;
            return std::pow(p / (2.0 * c * std::numbers::e), p / 2.0);
        }

    } // namespace detail

    /// exp(-a*pi*|v - shift|^2) on R^{d1}.
    struct GaussianFactor
    {
        double a;
        std::vector<double> shift;
    };

    /// prod_i phi(v_i / scale), phi = e*w0, support |v|_inf < scale.
    struct BumpFactor
    {
        double scale;
    };

    /// Radial profile P(|v|^2) with P(s) = e*w0((s - center)/half_width).
    struct RadialBumpFactor
    {
        double center;
        double half_width;
    };

    using Factor = std::variant<GaussianFactor, BumpFactor, RadialBumpFactor>;

    namespace detail
    {

        inline double factor_value(const Factor &f, const double *v, int n) noexcept
        {
            if (const auto *g = std::get_if<GaussianFactor>(&f))
            {
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                {
                    const double dv = v[i] - g->shift[static_cast<std::size_t>(i)];
                    s += dv * dv;
                }
                return std::exp(-g->a * std::numbers::pi * s);
            }
            if (const auto *b = std::get_if<BumpFactor>(&f))
            {
                double p = 1.0;
                for (int i = 0; i < n && p != 0.0; ++i)
                {
                    const double u = v[i] / b->scale;
                    p *= (std::abs(u) < 1.0) ? std::exp(1.0 + 1.0 / (u * u - 1.0)) : 0.0;
                }
                return p;
            }
            const auto &r = std::get<RadialBumpFactor>(f);
            const double u = (norm2(v, n) - r.center) / r.half_width;
            return (std::abs(u) < 1.0) ? std::exp(1.0 + 1.0 / (u * u - 1.0)) : 0.0;
        }

        // Partial derivative of a factor; idx lists the differentiated
        // coordinates (size 0, 1 or 2, repetitions allowed).
        inline double factor_partial(const Factor &f, const double *v, int n, std::span<const int> idx)
        {
            if (idx.empty())
                return factor_value(f, v, n);
            if (const auto *g = std::get_if<GaussianFactor>(&f))
            {
                const double c = g->a * std::numbers::pi;
                const double val = factor_value(f, v, n);
                auto dv = [&](int i) { return v[i] - g->shift[static_cast<std::size_t>(i)]; };
                if (idx.size() == 1)
                    return -2.0 * c * dv(idx[0]) * val;
                const double kron = idx[0] == idx[1] ? 1.0 : 0.0;
                return (4.0 * c * c * dv(idx[0]) * dv(idx[1]) - 2.0 * c * kron) * val;
            }
            if (const auto *b = std::get_if<BumpFactor>(&f))
            {
                std::vector<int> ord(static_cast<std::size_t>(n), 0);
                for (int k : idx)
                    ++ord[static_cast<std::size_t>(k)];
                double p = 1.0;
                for (int i = 0; i < n; ++i)
                {
                    const auto jet = unit_bump_jet(v[i] / b->scale);
                    const int o = ord[static_cast<std::size_t>(i)];
                    p *= jet[static_cast<std::size_t>(o)] / std::pow(b->scale, o);
                    if (p == 0.0)
                        break;
                }
                return p;
            }
            const auto &r = std::get<RadialBumpFactor>(f);
            const double s = norm2(v, n);
            const auto jet = unit_bump_jet((s - r.center) / r.half_width);
            const double P1 = jet[1] / r.half_width;
            const double P2 = jet[2] / (r.half_width * r.half_width);
            if (idx.size() == 1)
                return 2.0 * v[idx[0]] * P1;
            const double kron = idx[0] == idx[1] ? 1.0 : 0.0;
            return 4.0 * v[idx[0]] * v[idx[1]] * P2 + 2.0 * kron * P1;
        }

    } // namespace detail

    enum class WeightFamily
    {
        Zero,
        GaussianIsotropic,
        ShiftedGaussian,
        ProductBump,
        AppendixExample,
    };

    /// Radial profile parameters for the appendix-example family, in the
    /// squared-radius variable s = |v|^2: P(s) = e*w0((s - center)/half_width).
    struct RadialProfile
    {
        double center;
        double half_width;

        double lower() const noexcept { return center - half_width; }
        double upper() const noexcept { return center + half_width; }
    };

    /// Weight w(z) = W_x(x) * W_y(y) from a closed family; every member is
    /// separable in the (x, y) split, bounded by 1 and carries decay metadata.
    class WeightFunction
    {
    public:
        static WeightFunction zero(int d1)
        {
            return WeightFunction(WeightFamily::Zero, d1, GaussianFactor{1.0, std::vector<double>(static_cast<std::size_t>(d1), 0.0)},
                                  GaussianFactor{1.0, std::vector<double>(static_cast<std::size_t>(d1), 0.0)});
        }

        static WeightFunction gaussian(int d1, double a)
        {
            if (!(a > 0.0))
                throw ArgumentError("gaussian weight: a must be > 0");
            std::vector<double> zero_shift(static_cast<std::size_t>(d1), 0.0);
            auto w = WeightFunction(WeightFamily::GaussianIsotropic, d1, GaussianFactor{a, zero_shift}, GaussianFactor{a, zero_shift});
            w.a_ = a;
            return w;
        }

        static WeightFunction shifted_gaussian(int d1, double a, std::vector<double> shift)
        {
            if (!(a > 0.0))
                throw ArgumentError("gaussian weight: a must be > 0");
            if (shift.size() != static_cast<std::size_t>(2 * d1))
                throw ArgumentError("gaussian weight: shift must have d = 2*d1 entries");
            std::vector<double> sx(shift.begin(), shift.begin() + d1);
            std::vector<double> sy(shift.begin() + d1, shift.end());
            auto w = WeightFunction(WeightFamily::ShiftedGaussian, d1, GaussianFactor{a, sx}, GaussianFactor{a, sy});
            w.a_ = a;
            w.shift_ = std::move(shift);
            return w;
        }

        static WeightFunction product_bump(int d1, double scale)
        {
            if (!(scale > 0.0))
                throw ArgumentError("bump weight: scale must be > 0");
            auto w = WeightFunction(WeightFamily::ProductBump, d1, BumpFactor{scale}, BumpFactor{scale});
            w.scale_ = scale;
            return w;
        }

        /// f = F(|x|^2) g(|y|^2); both profiles supported inside [-1/2, 1/2] and
        /// the support of g bounded away from 0.
        static WeightFunction appendix_example(int d1, RadialProfile F = default_appendix_F(),
                                               RadialProfile g = default_appendix_g())
        {
            auto inside = [](const RadialProfile &p) {
                return p.half_width > 0.0 && p.lower() >= -0.5 - 1e-15 && p.upper() <= 0.5 + 1e-15;
            };
            if (!inside(F) || !inside(g))
                throw ArgumentError("appendix-example: profiles must be supported in [-1/2, 1/2]");
            if (!(g.lower() > 0.0))
                throw ArgumentError("appendix-example: 0 must not lie in the support of g");
            return appendix_unchecked(d1, F, g);
        }

        static RadialProfile default_appendix_F() { return {0.0, 0.5}; }
        static RadialProfile default_appendix_g() { return {5.0 / 16.0, 3.0 / 16.0}; }

        WeightFamily family() const noexcept { return family_; }
        int d1() const noexcept { return d1_; }
        int d() const noexcept { return 2 * d1_; }
        bool is_zero() const noexcept { return family_ == WeightFamily::Zero; }

        const Factor &x_factor() const noexcept { return fx_; }
        const Factor &y_factor() const noexcept { return fy_; }

        double x_value(const double *x) const noexcept
        {
            return is_zero() ? 0.0 : detail::factor_value(fx_, x, d1_);
        }
        double y_value(const double *y) const noexcept
        {
            return is_zero() ? 0.0 : detail::factor_value(fy_, y, d1_);
        }

        double operator()(std::span<const double> z) const
        {
            check_dim(z.size());
            if (is_zero())
                return 0.0;
            const double wx = detail::factor_value(fx_, z.data(), d1_);
            if (wx == 0.0)
                return 0.0;
            return wx * detail::factor_value(fy_, z.data() + d1_, d1_);
        }

        void check_dim(std::size_t n) const
        {
            if (n != static_cast<std::size_t>(d()))
                throw ArgumentError("weight: dimension mismatch (expected " + std::to_string(d()) + ")");
        }

        /// Regularity exponent gamma: |w|, |w^| <= C <z>^{-d-gamma}. Both the
        /// Gaussian and the compactly supported smooth families satisfy the
        /// bound for every gamma; 1 is reported.
        double regularity_gamma() const noexcept { return 1.0; }

        /// Euclidean radius of the support for compactly supported families.
        std::optional<double> support_radius() const
        {
            switch (family_)
            {
            case WeightFamily::Zero:
                return 0.0;
            case WeightFamily::ProductBump:
                return scale_ * std::sqrt(static_cast<double>(d()));
            case WeightFamily::AppendixExample:
                return std::sqrt(std::max(0.0, F_.upper()) + std::max(0.0, g_.upper()));
            default:
                return std::nullopt;
            }
        }

        double a() const noexcept { return a_; }
        const std::vector<double> &shift() const noexcept { return shift_; }
        double scale() const noexcept { return scale_; }
        const RadialProfile &profile_x() const noexcept { return F_; }
        const RadialProfile &profile_y() const noexcept { return g_; }

        double shift_norm() const noexcept
        {
            double s = 0.0;
            for (double v : shift_)
                s += v * v;
            return std::sqrt(s);
        }

        /// w_L(z) = w(z / L).
        WeightFunction rescaled(double L) const
        {
            if (!(L > 0.0))
                throw ArgumentError("rescaled: L must be > 0");
            switch (family_)
            {
            case WeightFamily::Zero:
                return *this;
            case WeightFamily::GaussianIsotropic:
                return gaussian(d1_, a_ / (L * L));
            case WeightFamily::ShiftedGaussian:
            {
                std::vector<double> s = shift_;
                for (double &v : s)
                    v *= L;
                return shifted_gaussian(d1_, a_ / (L * L), std::move(s));
            }
            case WeightFamily::ProductBump:
                return product_bump(d1_, scale_ * L);
            case WeightFamily::AppendixExample:
                return appendix_unchecked(d1_, {F_.center * L * L, F_.half_width * L * L},
                                          {g_.center * L * L, g_.half_width * L * L});
            }
            throw InternalError("rescaled: unknown family");
        }

        std::string spec_string() const
        {
            std::ostringstream os;
            os.precision(17);
            switch (family_)
            {
            case WeightFamily::Zero:
                return "zero";
            case WeightFamily::GaussianIsotropic:
                os << "gaussian:a=" << a_;
                return os.str();
            case WeightFamily::ShiftedGaussian:
                os << "gaussian:a=" << a_ << ":shift=";
                for (std::size_t i = 0; i < shift_.size(); ++i)
                    os << (i ? "," : "") << shift_[i];
                return os.str();
            case WeightFamily::ProductBump:
                os << "bump:scale=" << scale_;
                return os.str();
            case WeightFamily::AppendixExample:
                return "appendix-example";
            }
            return "?";
        }

    private:
        WeightFunction(WeightFamily fam, int d1, Factor fx, Factor fy)
            : family_(fam), d1_(d1), fx_(std::move(fx)), fy_(std::move(fy))
        {
            if (d1 < 1)
                throw ArgumentError("weight: d1 must be >= 1");
        }

        static WeightFunction appendix_unchecked(int d1, RadialProfile F, RadialProfile g)
        {
            auto w = WeightFunction(WeightFamily::AppendixExample, d1, RadialBumpFactor{F.center, F.half_width},
                                    RadialBumpFactor{g.center, g.half_width});
            w.F_ = F;
            w.g_ = g;
            return w;
        }

        WeightFamily family_;
        int d1_;
        Factor fx_;
        Factor fy_;
        double a_{0.0};
        std::vector<double> shift_;
        double scale_{0.0};
        RadialProfile F_{0.0, 0.5};
        RadialProfile g_{5.0 / 16.0, 3.0 / 16.0};
    };

    /// Japanese bracket <z> = max(1, |z|).
    inline double japanese_bracket(std::span<const double> z)
    {
        double s = 0.0;
        for (double v : z)
            s += v * v;
        return std::max(1.0, std::sqrt(s));
    }

    inline double eval(const WeightFunction &w, std::span<const double> z)
    {
        return w(z);
    }

    namespace detail
    {

        inline int multi_index_order(std::span<const int> alpha)
        {
            int s = 0;
            for (int a : alpha)
            {
                if (a < 0)
                    throw ArgumentError("eval_partial: negative multi-index entry");
                s += a;
            }
            return s;
        }

        inline double analytic_partial(const WeightFunction &w, std::span<const double> z, std::span<const int> alpha)
        {
            if (w.is_zero())
                return 0.0;
            const int d1 = w.d1();
            std::vector<int> ix, iy;
            for (int i = 0; i < 2 * d1; ++i)
                for (int k = 0; k < alpha[static_cast<std::size_t>(i)]; ++k)
                    (i < d1 ? ix : iy).push_back(i < d1 ? i : i - d1);
            const double px = factor_partial(w.x_factor(), z.data(), d1, ix);
            if (px == 0.0)
                return 0.0;
            return px * factor_partial(w.y_factor(), z.data() + d1, d1, iy);
        }

        inline double fd_step(std::span<const double> z, int order)
        {
            double s = 0.0;
            for (double v : z)
                s += v * v;
            const double base = order <= 3 ? std::cbrt(std::numeric_limits<double>::epsilon())
                                           : std::pow(std::numeric_limits<double>::epsilon(), 0.25);
            return base * std::max(1.0, std::sqrt(s));
        }

    } // namespace detail

    /// Partial derivative by central differences of the next-lower order,
    /// bottoming out at the analytic value (orders 1..4).
    inline double eval_partial_fd(const WeightFunction &w, std::span<const double> z, std::span<const int> alpha)
    {
        w.check_dim(z.size());
        if (alpha.size() != z.size())
            throw ArgumentError("eval_partial: multi-index length mismatch");
        const int order = detail::multi_index_order(alpha);
        if (order > 4)
            throw CapabilityError("eval_partial: derivative order > 4 is not supported");
        if (order == 0)
            return w(z);
        std::size_t k = 0;
        while (alpha[k] == 0)
            ++k;
        std::vector<int> lower(alpha.begin(), alpha.end());
        --lower[k];
        const double h = detail::fd_step(z, order);
        std::vector<double> zp(z.begin(), z.end()), zm(z.begin(), z.end());
        zp[k] += h;
        zm[k] -= h;
        auto lower_eval = [&](std::span<const double> p) {
            return order - 1 <= 2 ? detail::analytic_partial(w, p, lower) : eval_partial_fd(w, p, lower);
        };
        return (lower_eval(zp) - lower_eval(zm)) / (2.0 * h);
    }

    /// Partial derivative d^alpha w(z); analytic for |alpha| <= 2,
    /// finite-difference fallback up to |alpha| = 4.
    inline double eval_partial(const WeightFunction &w, std::span<const double> z, std::span<const int> alpha)
    {
        w.check_dim(z.size());
        if (alpha.size() != z.size())
            throw ArgumentError("eval_partial: multi-index length mismatch");
        const int order = detail::multi_index_order(alpha);
        if (order <= 2)
            return detail::analytic_partial(w, z, alpha);
        return eval_partial_fd(w, z, alpha);
    }

    /// R with sup_{|z| >= R} |w(z)| |z|^n <= eps.
    inline double decay_radius(const WeightFunction &w, double eps, int n)
    {
        if (!(eps > 0.0))
            throw ArgumentError("decay_radius: eps must be > 0");
        if (n < 0)
            throw ArgumentError("decay_radius: n must be >= 0");
        if (auto R = w.support_radius())
            return *R;
        // Gaussian families: |w(z)| <= exp(-c (|z| - sigma)^2) for |z| >= sigma.
        const double c = w.a() * std::numbers::pi;
        const double sigma = w.shift_norm();
        auto f = [&](double r) {
            const double e = r > sigma ? r - sigma : 0.0;
            return std::exp(-c * e * e) * std::pow(r, n);
        };
        // f increases up to r* and decreases afterwards.
        const double r_star = 0.5 * (sigma + std::sqrt(sigma * sigma + 2.0 * n / c));
        auto tail_sup = [&](double R) { return R >= r_star ? f(R) : f(r_star); };
        if (tail_sup(0.0) <= eps)
            return 0.0;
        double lo = 0.0, hi = std::max(1.0, r_star);
        while (tail_sup(hi) > eps)
            hi *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            (tail_sup(mid) > eps ? lo : hi) = mid;
        }
        return hi;
    }

    /// Certified upper bound for ||w||_{n1,n2} = sup_z max_{|alpha|<=n1} |d^alpha w| <z>^{n2}.
    inline double norm_bound(const WeightFunction &w, int n1, double n2)
    {
        if (n1 < 0 || n1 > 2)
            throw CapabilityError("norm_bound: only n1 <= 2 is certified");
        if (n2 < 0.0)
            throw ArgumentError("norm_bound: n2 must be >= 0");
        switch (w.family())
        {
        case WeightFamily::Zero:
            return 0.0;
        case WeightFamily::GaussianIsotropic:
        case WeightFamily::ShiftedGaussian:
        {
            // |d^alpha G| <= P_k(r) G(r), r = |z - shift|, with P_0 = 1,
            // P_1 = 2c r, P_2 = 4c^2 r^2 + 2c. <z> <= (1 + |shift|) <z - shift>.
            const double c = w.a() * std::numbers::pi;
            auto term = [&](double power) {
                // sup_r r^power e^{-c r^2} max(1, r)^n2
                return std::max(detail::gauss_moment_sup(power, c), detail::gauss_moment_sup(power + n2, c));
            };
            double best = term(0.0);
            if (n1 >= 1)
                best = std::max(best, 2.0 * c * term(1.0));
            if (n1 >= 2)
                best = std::max(best, 4.0 * c * c * term(2.0) + 2.0 * c * term(0.0));
            return best * std::pow(1.0 + w.shift_norm(), n2);
        }
        case WeightFamily::ProductBump:
        {
            const double s = w.scale();
            std::array<double, 3> M{1.0, 0.0, 0.0};
            for (int k = 1; k <= n1; ++k)
                M[static_cast<std::size_t>(k)] =
                    detail::grid_sup([k](double u) { return detail::unit_bump_jet(u)[static_cast<std::size_t>(k)]; }, -1.0, 1.0) /
                    std::pow(s, k);
            double best = 1.0;
            if (n1 >= 1)
                best = std::max(best, M[1]);
            if (n1 >= 2)
                best = std::max({best, M[2], M[1] * M[1]});
            return best * std::pow(std::max(1.0, *w.support_radius()), n2);
        }
        case WeightFamily::AppendixExample:
        {
            auto radial_bounds = [n1](const RadialProfile &p) {
                std::array<double, 3> A{1.0, 0.0, 0.0};
                const double rmax = std::sqrt(std::max(0.0, p.upper()));
                auto jet = [&p](double r) {
                    const auto j = detail::unit_bump_jet((r * r - p.center) / p.half_width);
                    return std::array<double, 3>{j[0], j[1] / p.half_width, j[2] / (p.half_width * p.half_width)};
                };
                if (n1 >= 1)
                    A[1] = detail::grid_sup([&](double r) { return 2.0 * r * jet(r)[1]; }, 0.0, rmax);
                if (n1 >= 2)
                    A[2] = detail::grid_sup(
                        [&](double r) {
                            const auto j = jet(r);
                            return 4.0 * r * r * std::abs(j[2]) + 2.0 * std::abs(j[1]);
                        },
                        0.0, rmax);
                return A;
            };
            const auto Ax = radial_bounds(w.profile_x());
            const auto Ay = radial_bounds(w.profile_y());
            double best = 0.0;
            for (int ax = 0; ax <= n1; ++ax)
                for (int ay = 0; ax + ay <= n1; ++ay)
                    best = std::max(best, Ax[static_cast<std::size_t>(ax)] * Ay[static_cast<std::size_t>(ay)]);
            return best * std::pow(std::max(1.0, *w.support_radius()), n2);
        }
        }
        throw InternalError("norm_bound: unknown family");
    }

    namespace detail
    {

        inline double parse_double_exact(std::string_view s, const std::string &what)
        {
            double v = 0.0;
            const auto *first = s.data();
            const auto *last = s.data() + s.size();
            if (!s.empty() && *first == '+')
                ++first;
            auto res = std::from_chars(first, last, v);
            if (s.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
                throw ArgumentError("weight spec: malformed number in " + what + ": '" + std::string(s) + "'");
            return v;
        }

        inline std::vector<std::string_view> split(std::string_view s, char sep)
        {
            std::vector<std::string_view> out;
            std::size_t start = 0;
            while (true)
            {
                const auto pos = s.find(sep, start);
                out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
                if (pos == std::string_view::npos)
                    break;
                start = pos + 1;
            }
            return out;
        }

    } // namespace detail

    /// Parses `gaussian:a=<f>`, `gaussian:a=<f>:shift=<v1,...,vd>`,
    /// `bump:scale=<f>`, `appendix-example`, `zero`.
    inline WeightFunction parse_weight_spec(std::string_view spec, int d1)
    {
        const auto parts = detail::split(spec, ':');
        const auto head = parts[0];
        auto keyed = [&](std::size_t i, std::string_view key) {
            if (i >= parts.size() || parts[i].substr(0, key.size() + 1) != std::string(key) + "=")
                throw ArgumentError("weight spec: expected '" + std::string(key) + "=' in '" + std::string(spec) + "'");
            return parts[i].substr(key.size() + 1);
        };
        if (head == "zero" && parts.size() == 1)
            return WeightFunction::zero(d1);
        if (head == "appendix-example" && parts.size() == 1)
            return WeightFunction::appendix_example(d1);
        if (head == "bump" && parts.size() == 2)
            return WeightFunction::product_bump(d1, detail::parse_double_exact(keyed(1, "scale"), "scale"));
        if (head == "gaussian" && (parts.size() == 2 || parts.size() == 3))
        {
            const double a = detail::parse_double_exact(keyed(1, "a"), "a");
            if (parts.size() == 2)
                return WeightFunction::gaussian(d1, a);
            std::vector<double> shift;
            for (auto tok : detail::split(keyed(2, "shift"), ','))
                shift.push_back(detail::parse_double_exact(tok, "shift"));
            return WeightFunction::shifted_gaussian(d1, a, std::move(shift));
        }
        throw ArgumentError("weight spec: unrecognised '" + std::string(spec) + "'");
    }

} // namespace qc
