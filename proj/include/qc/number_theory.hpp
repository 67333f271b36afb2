#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"

namespace qc
{

    using BigInt = mpz_class;
    using Rational = mpq_class;

    /// Bits of mantissa carried by HighReal (128-bit-equivalent accumulation).
    inline constexpr mp_bitcnt_t kHighPrecisionBits = 128;

    using HighReal = mpf_class;

    inline HighReal make_high(double v = 0.0)
    {
        return HighReal(v, kHighPrecisionBits);
    }

    inline HighReal to_high(const Rational &r)
    {
        HighReal out(0, kHighPrecisionBits);
        out = r;
        return out;
    }

    namespace nt
    {

        struct ExtGcd
        {
            std::int64_t g; // always >= 0
            std::int64_t a;
            std::int64_t b;
        };

        /// a*x + b*y = g = gcd(x, y) >= 0.
        inline ExtGcd ext_gcd(std::int64_t x, std::int64_t y)
        {
            std::int64_t old_r = x, r = y;
            std::int64_t old_s = 1, s = 0;
            std::int64_t old_t = 0, t = 1;
            while (r != 0)
            {
                const std::int64_t q = old_r / r;
                std::int64_t tmp = old_r - q * r;
                old_r = r;
                r = tmp;
                tmp = old_s - q * s;
                old_s = s;
                s = tmp;
                tmp = old_t - q * t;
                old_t = t;
                t = tmp;
            }
            if (old_r < 0)
                return {-old_r, -old_s, -old_t};
            return {old_r, old_s, old_t};
        }

        /// Least nonnegative residue.
        inline std::int64_t mod(std::int64_t a, std::int64_t m)
        {
            const std::int64_t r = a % m;
            return r < 0 ? r + m : r;
        }

        inline std::int64_t mod(__int128 a, std::int64_t m)
        {
            const __int128 r = a % m;
            return static_cast<std::int64_t>(r < 0 ? r + m : r);
        }

        inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m)
        {
            return mod(static_cast<__int128>(a) * b, m);
        }

        /// Inverse of a modulo m; requires gcd(a, m) = 1.
        inline std::int64_t mod_inverse(std::int64_t a, std::int64_t m)
        {
            if (m == 1)
                return 0;
            const auto e = ext_gcd(mod(a, m), m);
            if (e.g != 1)
                throw ArgumentError("mod_inverse: argument not coprime to modulus");
            return mod(e.a, m);
        }

        struct PrimePower
        {
            std::int64_t p;
            int e;
        };

        /// Trial-division factorisation; fine for the moduli used here (q <= ~1e12).
        inline std::vector<PrimePower> factorize(std::int64_t n)
        {
            if (n < 1)
                throw ArgumentError("factorize: n must be positive");
            std::vector<PrimePower> out;
            for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
            {
                if (n % p != 0)
                    continue;
                int e = 0;
                while (n % p == 0)
                {
                    n /= p;
                    ++e;
                }
                out.push_back({p, e});
            }
            if (n > 1)
                out.push_back({n, 1});
            return out;
        }

        inline bool is_prime(std::int64_t n)
        {
            if (n < 2)
                return false;
            if (n < 4)
                return true;
            if (n % 2 == 0)
                return false;
            for (std::int64_t p = 3; p * p <= n; p += 2)
                if (n % p == 0)
                    return false;
            return true;
        }

        inline int mobius(std::int64_t n)
        {
            int mu = 1;
            for (const auto &pp : factorize(n))
            {
                if (pp.e > 1)
                    return 0;
                mu = -mu;
            }
            return mu;
        }

        inline std::int64_t euler_phi(std::int64_t n)
        {
            std::int64_t phi = n;
            for (const auto &pp : factorize(n))
                phi = phi / pp.p * (pp.p - 1);
            return phi;
        }

        /// All positive divisors, ascending.
        inline std::vector<std::int64_t> divisors(std::int64_t n)
        {
            std::vector<std::int64_t> divs{1};
            for (const auto &pp : factorize(n))
            {
                const std::size_t base = divs.size();
                std::int64_t pk = 1;
                for (int k = 1; k <= pp.e; ++k)
                {
                    pk *= pp.p;
                    for (std::size_t i = 0; i < base; ++i)
                        divs.push_back(divs[i] * pk);
                }
            }
            std::sort(divs.begin(), divs.end());
            return divs;
        }

        /// Eratosthenes sieve, primes <= n in ascending order.
        inline std::vector<std::int64_t> primes_up_to(std::int64_t n)
        {
            std::vector<std::int64_t> out;
            if (n < 2)
                return out;
            std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
            for (std::int64_t i = 2; i <= n; ++i)
            {
                if (composite[static_cast<std::size_t>(i)])
                    continue;
                out.push_back(i);
                for (std::int64_t j = i * i; j <= n; j += i)
                    composite[static_cast<std::size_t>(j)] = true;
            }
            return out;
        }

        inline BigInt pow(std::int64_t base, unsigned long e)
        {
            BigInt out;
            BigInt b(static_cast<long>(base));
            mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), e);
            return out;
        }

        /// p^e as an exact rational, e may be negative.
        inline Rational pow_rational(std::int64_t p, long e)
        {
            if (e >= 0)
                return Rational(pow(p, static_cast<unsigned long>(e)));
            return Rational(BigInt(1), pow(p, static_cast<unsigned long>(-e)));
        }

        /// p-adic valuation of n != 0.
        inline int valuation(std::int64_t n, std::int64_t p)
        {
            int v = 0;
            while (n != 0 && n % p == 0)
            {
                n /= p;
                ++v;
            }
            return v;
        }

        /// Ramanujan sum c_q(n) = sum over divisors e of gcd(q, n) of e*mu(q/e);
        /// gcd(q, 0) = q.
        inline std::int64_t ramanujan(std::int64_t q, std::int64_t n)
        {
            const std::int64_t g = std::gcd(q, n < 0 ? -n : n);
            std::int64_t s = 0;
            for (std::int64_t e : divisors(g))
                s += e * mobius(q / e);
            return s;
        }

    } // namespace nt

} // namespace qc
