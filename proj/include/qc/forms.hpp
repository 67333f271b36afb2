#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qc
{

    /// The split form F0(x, y) = x . y on R^d, d = 2*d1. Vectors are flat
    /// arrays with x = z[0..d1) and y = z[d1..d).
    class QuadraticFormF0
    {
    public:
        explicit QuadraticFormF0(int d1) : d1_(d1)
        {
            if (d1 < 1)
                throw ArgumentError("QuadraticFormF0: d1 must be >= 1");
        }

        int d1() const noexcept { return d1_; }
        int d() const noexcept { return 2 * d1_; }

        /// True when the form is admissible for the main asymptotic (d > 4).
        bool asymptotic_regime() const noexcept { return d1_ >= 3; }

        void check_dim(std::size_t n) const
        {
            if (n != static_cast<std::size_t>(d()))
                throw ArgumentError("dimension mismatch: expected " + std::to_string(d()) +
                                    " coordinates, got " + std::to_string(n));
        }

    private:
        int d1_;
    };

    inline double eval_F0(const QuadraticFormF0 &form, std::span<const double> z)
    {
        form.check_dim(z.size());
        const auto d1 = static_cast<std::size_t>(form.d1());
        double s = 0.0;
        for (std::size_t i = 0; i < d1; ++i)
            s += z[i] * z[d1 + i];
        return s;
    }

    /// Exact integer path.
    inline __int128 eval_F0(const QuadraticFormF0 &form, std::span<const std::int64_t> z)
    {
        form.check_dim(z.size());
        const auto d1 = static_cast<std::size_t>(form.d1());
        __int128 s = 0;
        for (std::size_t i = 0; i < d1; ++i)
            s += static_cast<__int128>(z[i]) * z[d1 + i];
        return s;
    }

    /// A0 z = (y, x), the gradient of F0.
    inline std::vector<double> grad_F0(const QuadraticFormF0 &form, std::span<const double> z)
    {
        form.check_dim(z.size());
        const auto d1 = static_cast<std::size_t>(form.d1());
        std::vector<double> g(z.size());
        for (std::size_t i = 0; i < d1; ++i)
        {
            g[i] = z[d1 + i];
            g[d1 + i] = z[i];
        }
        return g;
    }

    /// Lattice Z^d_L = L^{-1} Z^d together with the level m; t = m L^2 must be
    /// an integer (it is the level in integer coordinates u = L z). L = 1 is
    /// accepted so the plain integer lattice can be used by the small oracles.
    class LatticeSpec
    {
    public:
        LatticeSpec(double L, double m) : L_(L), m_(m)
        {
            if (!(L >= 1.0))
                throw ArgumentError("LatticeSpec: L must be >= 1");
            const double t = m * L * L;
            const double tr = std::nearbyint(t);
            if (std::abs(t - tr) > 1e-9 * std::max(1.0, std::abs(t)))
                throw ArgumentError("LatticeSpec: m*L^2 must be an integer");
            t_ = static_cast<std::int64_t>(tr);
        }

        /// Integer-first constructor, m = t / L^2.
        static LatticeSpec from_shift(double L, std::int64_t t)
        {
            return LatticeSpec(L, static_cast<double>(t) / (L * L));
        }

        double L() const noexcept { return L_; }
        double m() const noexcept { return m_; }
        std::int64_t t() const noexcept { return t_; }

    private:
        double L_;
        double m_;
        std::int64_t t_{0};
    };

} // namespace qc
