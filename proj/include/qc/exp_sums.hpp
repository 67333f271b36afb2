#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "forms.hpp"
#include "number_theory.hpp"
#include "summation.hpp"

namespace qc
{

    /// c_q(n) as an exact integer.
    inline BigInt ramanujan(std::int64_t q, std::int64_t n)
    {
        if (q < 1)
            throw ArgumentError("ramanujan: q must be >= 1");
        return BigInt(static_cast<long>(nt::ramanujan(q, n)));
    }

    struct ExpSumValue
    {
        std::int64_t q;
        std::vector<std::int64_t> c;
        std::int64_t t;
        std::complex<double> value;
        std::optional<BigInt> exact;
    };

    namespace detail
    {
        inline void check_sum_args(const QuadraticFormF0 &form, std::int64_t q, std::span<const std::int64_t> c)
        {
            if (q < 1)
                throw ArgumentError("S_q: q must be >= 1");
            form.check_dim(c.size());
        }

        // e_q(k) for k = 0..q-1.
        inline std::vector<std::complex<double>> unit_roots(std::int64_t q)
        {
            std::vector<std::complex<double>> e(static_cast<std::size_t>(q));
            for (std::int64_t k = 0; k < q; ++k)
                e[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(q));
            return e;
        }

        // c_x . c_y reduced mod q.
        inline std::int64_t split_dot_mod(std::span<const std::int64_t> c, int d1, std::int64_t q)
        {
            __int128 s = 0;
            for (int i = 0; i < d1; ++i)
                s += static_cast<__int128>(c[static_cast<std::size_t>(i)]) * c[static_cast<std::size_t>(i + d1)];
            return nt::mod(s, q);
        }

        inline std::optional<BigInt> exact_if_integral(const QuadraticFormF0 &form, std::int64_t q,
                                                       std::span<const std::int64_t> c, std::int64_t t)
        {
            if (split_dot_mod(c, form.d1(), q) != 0)
                return std::nullopt;
            return nt::pow(q, static_cast<unsigned long>(form.d1())) * BigInt(static_cast<long>(nt::ramanujan(q, t)));
        }
    } // namespace detail

    inline constexpr std::int64_t kNaiveMaxQ = 64;

    /// sum*_a sum_b e_q(a F^t(b) + c.b), evaluated literally: for each a the
    /// b-sum is the product over coordinate pairs (b_xi, b_yi) of the full
    /// q^2 pair sum.
    inline ExpSumValue S_q_naive(const QuadraticFormF0 &form, std::int64_t q, std::span<const std::int64_t> c, std::int64_t t)
    {
        detail::check_sum_args(form, q, c);
        if (q > kNaiveMaxQ)
            throw CapabilityError("S_q_naive: q > 64, use S_q_factored");
        const int d1 = form.d1();
        const auto e = detail::unit_roots(q);
        CompensatedSum<std::complex<double>> total;
        for (std::int64_t a = 1; a <= q; ++a)
        {
            if (std::gcd(a, q) != 1)
                continue;
            std::complex<double> prod = e[static_cast<std::size_t>(nt::mod(-a * nt::mod(t, q), q))];
            for (int i = 0; i < d1; ++i)
            {
                const std::int64_t cx = nt::mod(c[static_cast<std::size_t>(i)], q);
                const std::int64_t cy = nt::mod(c[static_cast<std::size_t>(i + d1)], q);
                CompensatedSum<std::complex<double>> pair;
                for (std::int64_t bx = 0; bx < q; ++bx)
                    for (std::int64_t by = 0; by < q; ++by)
                        pair += e[static_cast<std::size_t>((a * bx % q * by + cx * bx + cy * by) % q)];
                prod *= pair.value();
            }
            total += prod;
        }
        return {q, {c.begin(), c.end()}, t, total.value(), detail::exact_if_integral(form, q, c, t)};
    }

    /// Full q^d enumeration of the b-sum, for very small q only.
    inline ExpSumValue S_q_brute(const QuadraticFormF0 &form, std::int64_t q, std::span<const std::int64_t> c, std::int64_t t)
    {
        detail::check_sum_args(form, q, c);
        const int d = form.d();
        if (std::pow(static_cast<double>(q), d) > 2e7)
            throw CapabilityError("S_q_brute: q^d too large");
        const int d1 = form.d1();
        const auto e = detail::unit_roots(q);
        std::vector<std::int64_t> b(static_cast<std::size_t>(d), 0);
        CompensatedSum<std::complex<double>> total;
        for (std::int64_t a = 1; a <= q; ++a)
        {
            if (std::gcd(a, q) != 1)
                continue;
            std::fill(b.begin(), b.end(), 0);
            while (true)
            {
                __int128 phase = -static_cast<__int128>(a) * t;
                for (int i = 0; i < d1; ++i)
                    phase += static_cast<__int128>(a) * b[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i + d1)];
                for (int i = 0; i < d; ++i)
                    phase += static_cast<__int128>(c[static_cast<std::size_t>(i)]) * b[static_cast<std::size_t>(i)];
                total += e[static_cast<std::size_t>(nt::mod(phase, q))];
                int k = 0;
                while (k < d && ++b[static_cast<std::size_t>(k)] == q)
                    b[static_cast<std::size_t>(k++)] = 0;
                if (k == d)
                    break;
            }
        }
        return {q, {c.begin(), c.end()}, t, total.value(), detail::exact_if_integral(form, q, c, t)};
    }

    /// Closed form q^{d1} sum*_a e_q(-a t - abar (c_x . c_y)).
    inline ExpSumValue S_q_factored(const QuadraticFormF0 &form, std::int64_t q, std::span<const std::int64_t> c, std::int64_t t)
    {
        detail::check_sum_args(form, q, c);
        ExpSumValue out{q, {c.begin(), c.end()}, t, {}, detail::exact_if_integral(form, q, c, t)};
        const double scale = std::pow(static_cast<double>(q), form.d1());
        if (out.exact)
        {
            out.value = {out.exact->get_d(), 0.0};
            return out;
        }
        const std::int64_t C = detail::split_dot_mod(c, form.d1(), q);
        const std::int64_t tq = nt::mod(t, q);
        CompensatedSum<std::complex<double>> s;
        for (std::int64_t a = 1; a < q; ++a)
        {
            if (std::gcd(a, q) != 1)
                continue;
            const std::int64_t abar = nt::mod_inverse(a, q);
            const std::int64_t r = nt::mod(-static_cast<__int128>(nt::mulmod(a, tq, q)) - nt::mulmod(abar, C, q), q);
            s += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(q));
        }
        out.value = s.value() * scale;
        return out;
    }

    struct SigmaPValue
    {
        std::int64_t p;
        Rational exact;
        HighReal value;
        int l_max;
        double tail;
    };

    /// Local factor sum_{l >= 0} p^{-dl} S_{p^l}(0) truncated at l_max with a
    /// certified geometric tail from |S_q(0)| <= 2 q^{d/2+1}. For t != 0 the
    /// terms vanish exactly once p^{l-1} does not divide t.
    inline SigmaPValue sigma_p(std::int64_t p, int d, std::int64_t t, double rel_tol = 1e-20)
    {
        if (!nt::is_prime(p))
            throw ArgumentError("sigma_p: p must be prime");
        if (d < 6 || d % 2 != 0)
            throw ArgumentError("sigma_p: d must be even and >= 6");
        if (!(rel_tol > 0.0))
            throw ArgumentError("sigma_p: rel_tol must be > 0");
        const int d1 = d / 2;
        const double ratio = std::pow(static_cast<double>(p), 1 - d1);
        const int vanish_from = t == 0 ? -1 : nt::valuation(t < 0 ? -t : t, p) + 2;
        Rational sum(1);
        BigInt pl(1);
        for (int l = 1;; ++l)
        {
            pl *= static_cast<long>(p);
            if (vanish_from > 0 && l >= vanish_from)
                return {p, sum, to_high(sum), l - 1, 0.0};
            // p^{-dl} S_{p^l}(0) = p^{-l d1} c_{p^l}(t)
            const auto q = static_cast<std::int64_t>(pl.get_si());
            if (pl > BigInt(static_cast<long>(std::int64_t{1} << 62)))
                throw InternalError("sigma_p: modulus overflow");
            sum += Rational(BigInt(static_cast<long>(nt::ramanujan(q, t))), nt::pow(p, static_cast<unsigned long>(l * d1)));
            sum.canonicalize();
            const double tail = 2.0 * std::pow(ratio, l + 1) / (1.0 - ratio);
            if (tail <= rel_tol * std::abs(sum.get_d()))
                return {p, sum, to_high(sum), l, tail};
        }
    }

    /// 1 + p^{1-d1} - p^{-d1}.
    inline Rational remark5_sigma_p(std::int64_t p, int d1)
    {
        if (!nt::is_prime(p))
            throw ArgumentError("remark5_sigma_p: p must be prime");
        if (d1 < 1)
            throw ArgumentError("remark5_sigma_p: d1 must be >= 1");
        Rational r = Rational(1) + nt::pow_rational(p, 1 - d1) - nt::pow_rational(p, -d1);
        r.canonicalize();
        return r;
    }

    inline constexpr std::int64_t kLocalDensityMaxModulus = 1 << 12;

    /// #{(x, y) mod p^k : x.y = t} / p^{(2 d1 - 1) k}, by convolving the
    /// pair-product distribution d1 times.
    inline Rational local_density(std::int64_t p, int k, int d1, std::int64_t t)
    {
        if (!nt::is_prime(p))
            throw ArgumentError("local_density: p must be prime");
        if (k < 1 || d1 < 1)
            throw ArgumentError("local_density: k and d1 must be >= 1");
        const double M_d = std::pow(static_cast<double>(p), k);
        if (M_d > static_cast<double>(kLocalDensityMaxModulus))
            throw CapabilityError("local_density: p^k exceeds the enumeration cap");
        const auto M = static_cast<std::int64_t>(std::llround(M_d));
        const auto Mz = static_cast<std::size_t>(M);
        std::vector<BigInt> pair(Mz, BigInt(0));
        for (std::int64_t x = 0; x < M; ++x)
            for (std::int64_t y = 0; y < M; ++y)
                pair[static_cast<std::size_t>(x * y % M)] += 1;
        std::vector<BigInt> acc = pair;
        for (int i = 1; i < d1; ++i)
        {
            std::vector<BigInt> next(Mz, BigInt(0));
            for (std::size_t r = 0; r < Mz; ++r)
            {
                if (acc[r] == 0)
                    continue;
                for (std::size_t s = 0; s < Mz; ++s)
                    if (pair[s] != 0)
                        next[(r + s) % Mz] += acc[r] * pair[s];
            }
            acc = std::move(next);
        }
        Rational out(acc[static_cast<std::size_t>(nt::mod(t, M))], nt::pow(p, static_cast<unsigned long>((2 * d1 - 1) * k)));
        out.canonicalize();
        return out;
    }

    enum class SigmaMethod
    {
        EulerProduct,
        DirichletSum,
    };

    enum class SigmaVariant
    {
        Definitional,
        Remark5,
    };

    struct PrimeFactorEntry
    {
        std::int64_t p;
        double sigma_p;
        int l_max;
        double tail;
    };

    struct SigmaReport
    {
        SigmaMethod method;
        SigmaVariant variant{SigmaVariant::Definitional};
        std::int64_t cutoff;
        HighReal value;
        double tail_bound;
        std::vector<PrimeFactorEntry> per_prime;

        double value_d() const { return value.get_d(); }
    };

    inline const char *method_name(SigmaMethod m)
    {
        return m == SigmaMethod::EulerProduct ? "euler" : "dirichlet";
    }

    /// prod_{p <= P} sigma_p. Omitted primes are covered by
    /// |sigma_p - 1| <= 2 p^{1-d1} / (1 - P^{1-d1}) and
    /// sum_{p > P} p^{1-d1} <= P^{2-d1} / (d1 - 2).
    inline SigmaReport sigma_euler(std::int64_t P, int d, std::int64_t t, double rel_tol = 1e-20,
                                   SigmaVariant variant = SigmaVariant::Definitional)
    {
        if (P < 2)
            throw ArgumentError("sigma_euler: P must be >= 2");
        if (d < 6 || d % 2 != 0)
            throw ArgumentError("sigma_euler: d must be even and >= 6");
        const int d1 = d / 2;
        if (variant == SigmaVariant::Remark5 && t != 0)
            throw CapabilityError("sigma_euler: the closed local factor is available for t = 0 only");
        SigmaReport rep{SigmaMethod::EulerProduct, variant, P, make_high(1.0), 0.0, {}};
        double truncation = 0.0;
        for (std::int64_t p : nt::primes_up_to(P))
        {
            if (variant == SigmaVariant::Definitional)
            {
                auto sp = sigma_p(p, d, t, rel_tol);
                rep.value *= sp.value;
                truncation += sp.tail / std::max(1e-300, std::abs(sp.exact.get_d()));
                rep.per_prime.push_back({p, sp.exact.get_d(), sp.l_max, sp.tail});
            }
            else
            {
                const Rational r = remark5_sigma_p(p, d1);
                rep.value *= to_high(r);
                rep.per_prime.push_back({p, r.get_d(), 1, 0.0});
            }
        }
        const double Pd = static_cast<double>(P);
        const double omitted = 2.0 * std::pow(Pd, 2 - d1) / (d1 - 2) / (1.0 - std::pow(Pd, 1 - d1));
        rep.tail_bound = std::abs(rep.value.get_d()) * (std::expm1(omitted) + std::expm1(truncation)) +
                         std::abs(rep.value.get_d()) * std::expm1(omitted) * std::expm1(truncation);
        return rep;
    }

    namespace detail
    {
        // Linear sieve for mu and phi on [0, n].
        struct ArithmeticTables
        {
            std::vector<int> mu;
            std::vector<std::int64_t> phi;
        };

        inline ArithmeticTables arithmetic_tables(std::int64_t n)
        {
            const auto N = static_cast<std::size_t>(n) + 1;
            ArithmeticTables tab{std::vector<int>(N, 1), std::vector<std::int64_t>(N, 0)};
            std::vector<std::int64_t> primes;
            std::vector<bool> composite(N, false);
            if (N > 1)
                tab.phi[1] = 1;
            for (std::size_t i = 2; i < N; ++i)
            {
                if (!composite[i])
                {
                    primes.push_back(static_cast<std::int64_t>(i));
                    tab.mu[i] = -1;
                    tab.phi[i] = static_cast<std::int64_t>(i) - 1;
                }
                for (std::int64_t p : primes)
                {
                    const std::size_t ip = i * static_cast<std::size_t>(p);
                    if (ip >= N)
                        break;
                    composite[ip] = true;
                    if (i % static_cast<std::size_t>(p) == 0)
                    {
                        tab.mu[ip] = 0;
                        tab.phi[ip] = tab.phi[i] * p;
                        break;
                    }
                    tab.mu[ip] = -tab.mu[i];
                    tab.phi[ip] = tab.phi[i] * (p - 1);
                }
            }
            return tab;
        }

        inline double dirichlet_partial(std::int64_t X, int d1, std::int64_t t, const ArithmeticTables &tab)
        {
            CompensatedSum<double> s;
            const std::int64_t at = t < 0 ? -t : t;
            for (std::int64_t q = 1; q <= X; ++q)
            {
                std::int64_t c = 0;
                if (at == 0)
                    c = tab.phi[static_cast<std::size_t>(q)];
                else
                    for (std::int64_t e : nt::divisors(std::gcd(q, at)))
                        c += e * tab.mu[static_cast<std::size_t>(q / e)];
                if (c != 0)
                    s += static_cast<double>(c) * std::pow(static_cast<double>(q), -d1);
            }
            return s.value();
        }
    } // namespace detail

    /// sum_{q <= X} q^{-d} S_q(0); tail C X^{2-d/2} with C fitted from the
    /// X and X/2 partial sums, doubled for safety.
    inline SigmaReport sigma_dirichlet(std::int64_t X, int d, std::int64_t t)
    {
        if (X < 1)
            throw ArgumentError("sigma_dirichlet: X must be >= 1");
        if (d < 6 || d % 2 != 0)
            throw ArgumentError("sigma_dirichlet: d must be even and >= 6");
        const int d1 = d / 2;
        const auto tab = detail::arithmetic_tables(X);
        const double full = detail::dirichlet_partial(X, d1, t, tab);
        SigmaReport rep{SigmaMethod::DirichletSum, SigmaVariant::Definitional, X, make_high(full), 0.0, {}};
        if (X >= 2)
        {
            const double diff = std::abs(full - detail::dirichlet_partial(X / 2, d1, t, tab));
            rep.tail_bound = 2.0 * diff / (std::pow(2.0, d1 - 2) - 1.0);
        }
        else
        {
            rep.tail_bound = 2.0 * (std::pow(2.0, 3 - d1)) / (d1 - 2);
        }
        return rep;
    }

} // namespace qc
