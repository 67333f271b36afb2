#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "counter.hpp"
#include "delta_kernel.hpp"
#include "exp_sums.hpp"
#include "forms.hpp"
#include "sing_integral.hpp"
#include "weights.hpp"

namespace qc
{

    struct Cutoffs
    {
        std::int64_t primes = 10000;
        std::int64_t q = 100000;
        double rel_tol = 1e-20; // per-prime truncation of the local factor
    };

    struct PredictionReport
    {
        int d;
        double m;
        double L;
        double sigma_infty;
        double sigma_infty_error;
        double sigma_remark5; // NaN when the closed local factor does not apply
        double sigma_definitional;
        double sigma_definitional_tail;
        double main_term_r5;
        double main_term_def;
        double error_envelope;
        double epsilon;
        std::array<long, 3> theorem_constants;
    };

    inline std::array<long, 3> theorem_constants(int d)
    {
        const long N1 = 2L * d * d - 2L * d;
        return {N1, 7L * (d + 1), N1 + 3L * d + 4};
    }

    /// Both singular-series variants at level t, computed once and reused.
    struct SigmaPair
    {
        double definitional;
        double definitional_tail;
        double remark5;
    };

    inline SigmaPair sigma_pair(int d, std::int64_t t, const Cutoffs &cut)
    {
        const auto def = sigma_euler(cut.primes, d, t, cut.rel_tol);
        double r5 = std::numeric_limits<double>::quiet_NaN();
        if (t == 0)
            r5 = sigma_euler(cut.primes, d, 0, cut.rel_tol, SigmaVariant::Remark5).value_d();
        return {def.value_d(), def.tail_bound, r5};
    }

    namespace detail
    {
        inline PredictionReport assemble(const WeightFunction &w, double m, double L, const QuadResult &si,
                                         const SigmaPair &sp, double epsilon)
        {
            const int d = w.d();
            const double Lp = std::pow(L, d - 2);
            const auto N = theorem_constants(d);
            double envelope = 0.0;
            if (!w.is_zero())
            {
                // Norms beyond n1 = 2 are not certified; the n1 <= 2 bound stands in for them.
                const double norms = norm_bound(w, 2, static_cast<double>(N[1])) + norm_bound(w, 0, static_cast<double>(N[2]));
                envelope = std::pow(L, d / 2.0 + epsilon) * norms;
            }
            return {d,
                    m,
                    L,
                    si.value,
                    si.est_error,
                    sp.remark5,
                    sp.definitional,
                    sp.definitional_tail,
                    si.value * sp.remark5 * Lp,
                    si.value * sp.definitional * Lp,
                    envelope,
                    epsilon,
                    N};
        }

        inline void check_dimension(int d1)
        {
            if (2 * d1 <= 4)
                throw ArgumentError("predict: d = 2*d1 must exceed 4");
        }
    } // namespace detail

    inline PredictionReport predict(const WeightFunction &w, double m, double L, const Cutoffs &cut = {},
                                    const QuadratureConfig &qc_cfg = {}, double epsilon = 0.5)
    {
        detail::check_dimension(w.d1());
        const LatticeSpec spec(L, m);
        const QuadResult si = w.is_zero() ? QuadResult{0.0, 0.0} : sigma_infty(w, m, qc_cfg);
        return detail::assemble(w, m, L, si, sigma_pair(w.d(), spec.t(), cut), epsilon);
    }

    inline PredictionReport predict(int d1, double m, double L, const std::string &weight_spec, const Cutoffs &cut = {},
                                    const QuadratureConfig &qc_cfg = {}, double epsilon = 0.5)
    {
        return predict(parse_weight_spec(weight_spec, d1), m, L, cut, qc_cfg, epsilon);
    }

    struct ConvergenceRow
    {
        double L;
        double exact;
        double tail_estimate;
        double predicted_def;
        double predicted_r5;
        double ratio_def;
        double ratio_r5;
        std::optional<double> fitted_error_exponent; // local slope against the previous row
    };

    struct VerifySummary
    {
        std::optional<double> error_exponent; // least-squares slope of log|exact - predicted_def|
        std::optional<double> extrapolated_def;
        std::optional<double> extrapolated_r5;
        std::string converging_variant; // "definitional", "remark5" or "NA"
        bool def_monotone = false;
        bool r5_monotone = false;
        std::string verdict;
    };

    struct VerifyReport
    {
        std::vector<ConvergenceRow> rows;
        VerifySummary summary;
        double sigma_infty;
        double sigma_definitional;
        double sigma_remark5;
    };

    namespace detail
    {
        inline double ratio_or_nan(double a, double b)
        {
            return b != 0.0 && std::isfinite(b) ? a / b : std::numeric_limits<double>::quiet_NaN();
        }

        // Least-squares fit y = a + b x; returns (a, b).
        inline std::pair<double, double> linear_fit(const std::vector<double> &x, const std::vector<double> &y)
        {
            const double n = static_cast<double>(x.size());
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (std::size_t i = 0; i < x.size(); ++i)
            {
                sx += x[i];
                sy += y[i];
                sxx += x[i] * x[i];
                sxy += x[i] * y[i];
            }
            const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            return {(sy - b * sx) / n, b};
        }

        // |ratio - 1| strictly decreasing along the rows.
        inline bool monotone_toward_one(const std::vector<ConvergenceRow> &rows, bool def)
        {
            if (rows.size() < 2)
                return false;
            for (std::size_t i = 1; i < rows.size(); ++i)
            {
                const double a = def ? rows[i - 1].ratio_def : rows[i - 1].ratio_r5;
                const double b = def ? rows[i].ratio_def : rows[i].ratio_r5;
                if (!std::isfinite(a) || !std::isfinite(b) || !(std::abs(b - 1.0) < std::abs(a - 1.0)))
                    return false;
            }
            return true;
        }
    } // namespace detail

    struct VerifyOptions
    {
        double eps = 1e-12;
        Cutoffs cutoffs{};
        QuadratureConfig quadrature{};
        CountOptions count{};
    };

    inline VerifyReport verify(const WeightFunction &w, double m, std::vector<double> L_list, const VerifyOptions &opt = {})
    {
        detail::check_dimension(w.d1());
        std::sort(L_list.begin(), L_list.end());
        for (double L : L_list)
            LatticeSpec(L, m); // integrality check before any work
        VerifyReport rep{};
        const QuadResult si = w.is_zero() ? QuadResult{0.0, 0.0} : sigma_infty(w, m, opt.quadrature);
        rep.sigma_infty = si.value;
        std::map<std::int64_t, SigmaPair> series;
        for (double L : L_list)
        {
            const LatticeSpec spec(L, m);
            if (!series.count(spec.t()))
                series.emplace(spec.t(), sigma_pair(w.d(), spec.t(), opt.cutoffs));
            const auto &sp = series.at(spec.t());
            const auto pr = detail::assemble(w, m, L, si, sp, 0.5);
            const auto cnt = enumerate_N_L(w, spec, opt.eps, opt.count);
            ConvergenceRow row{L, cnt.value_d(), cnt.tail_estimate, pr.main_term_def, pr.main_term_r5,
                               detail::ratio_or_nan(cnt.value_d(), pr.main_term_def),
                               detail::ratio_or_nan(cnt.value_d(), pr.main_term_r5), std::nullopt};
            if (!rep.rows.empty())
            {
                const auto &prev = rep.rows.back();
                const double e0 = std::abs(prev.exact - prev.predicted_def), e1 = std::abs(row.exact - row.predicted_def);
                if (e0 > 0.0 && e1 > 0.0)
                    row.fitted_error_exponent = std::log(e1 / e0) / std::log(row.L / prev.L);
            }
            rep.rows.push_back(row);
            rep.sigma_definitional = sp.definitional;
            rep.sigma_remark5 = sp.remark5;
        }
        auto &S = rep.summary;
        S.converging_variant = "NA";
        if (rep.rows.size() >= 2 && !w.is_zero())
        {
            std::vector<double> lx, ly, inv, rd, rr;
            bool have_r5 = true;
            for (const auto &r : rep.rows)
            {
                const double e = std::abs(r.exact - r.predicted_def);
                if (e > 0.0)
                {
                    lx.push_back(std::log(r.L));
                    ly.push_back(std::log(e));
                }
                inv.push_back(1.0 / r.L);
                rd.push_back(r.ratio_def);
                rr.push_back(r.ratio_r5);
                have_r5 = have_r5 && std::isfinite(r.ratio_r5);
            }
            if (lx.size() >= 2)
                S.error_exponent = detail::linear_fit(lx, ly).second;
            // ratio ~ r_inf + c/L; the variant whose r_inf is closest to 1 is the consistent one
            S.extrapolated_def = detail::linear_fit(inv, rd).first;
            if (have_r5)
                S.extrapolated_r5 = detail::linear_fit(inv, rr).first;
            S.def_monotone = detail::monotone_toward_one(rep.rows, true);
            S.r5_monotone = have_r5 && detail::monotone_toward_one(rep.rows, false);
            if (S.extrapolated_r5 && std::abs(*S.extrapolated_r5 - 1.0) < std::abs(*S.extrapolated_def - 1.0))
                S.converging_variant = "remark5";
            else
                S.converging_variant = "definitional";
        }
        char buf[256];
        std::snprintf(buf, sizeof buf, "variant=%s extrapolated_def=%s extrapolated_r5=%s error_exponent=%s (bound %d)",
                      S.converging_variant.c_str(),
                      S.extrapolated_def ? std::to_string(*S.extrapolated_def).c_str() : "NA",
                      S.extrapolated_r5 ? std::to_string(*S.extrapolated_r5).c_str() : "NA",
                      S.error_exponent ? std::to_string(*S.error_exponent).c_str() : "NA", w.d() / 2 + 1);
        S.verdict = buf;
        return rep;
    }

    // ---------------------------------------------------------------- checks

    struct CheckEntry
    {
        std::string suite;
        std::string name;
        bool pass;
        double measured;
    };

    namespace detail
    {
        inline std::vector<CheckEntry> kernel_checks()
        {
            std::vector<CheckEntry> out;
            auto cfg = make_delta_config(20.0);
            double worst = 0.0;
            for (std::int64_t n = -50; n <= 50; ++n)
                worst = std::max(worst, std::abs(delta_sum(n, cfg) - (n == 0 ? 1.0 : 0.0)));
            out.push_back({"kernel", "delta_sum sweep |n|<=50, Q=20", worst <= 1e-9, worst});

            auto c10 = make_delta_config(10.0), c40 = make_delta_config(40.0);
            const double g10 = std::abs(*c10.cQ - 1.0), g40 = std::abs(*c40.cQ - 1.0);
            out.push_back({"kernel", "|c_Q - 1| decreases from Q=10 to Q=40", g40 < g10, g40});

            double omega_mass = gauss_integrate([](double x) { return omega(x); }, 0.5, 1.0, 40, 16);
            out.push_back({"kernel", "integral of omega", std::abs(omega_mass - 1.0) <= 1e-10, omega_mass});

            bool support_ok = true;
            double C = 0.0;
            int negative = 0;
            for (int i = 0; i < 200; ++i)
            {
                const double x = 0.01 + (1.0 - 0.01) * i / 199.0;
                for (int j = 0; j < 200; ++j)
                {
                    const double y = -3.0 + 6.0 * j / 199.0;
                    const double hv = h(x, y);
                    if (x > std::max(1.0, 2.0 * std::abs(y)) && hv != 0.0)
                        support_ok = false;
                    negative += hv < 0.0;
                    C = std::max(C, x * std::abs(hv));
                }
            }
            out.push_back({"kernel", "h = 0 for x > max(1, 2|y|)", support_ok, 0.0});
            out.push_back({"kernel", "sup x|h(x,y)| (fitted C)", std::isfinite(C) && C < 10.0, C});
            // h is not sign-definite; the negative fraction is informational
            out.push_back({"kernel", "fraction of grid with h < 0", true, negative / 40000.0});

            // first moment, N = 3, X = 1: |int y h| <= C X (X x^2 + x^3)
            double Cm = 0.0;
            for (double x : {0.02, 0.05, 0.1, 0.2})
            {
                const double mom = gauss_integrate([x](double y) { return y * h(x, y); }, -1.0, 1.0, 16, 400);
                Cm = std::max(Cm, std::abs(mom) / (x * x + x * x * x));
            }
            out.push_back({"kernel", "first-moment constant (N=3)", std::isfinite(Cm), Cm});
            return out;
        }

        inline std::vector<CheckEntry> sums_checks()
        {
            std::vector<CheckEntry> out;
            const QuadraticFormF0 f3(3);
            std::mt19937_64 rng(20240611);
            std::uniform_int_distribution<std::int64_t> cd(-20, 20);
            double worst = 0.0;
            for (std::int64_t q = 1; q <= 20; ++q)
                for (std::int64_t t : {0, 1, -1, 6, -6})
                    for (int k = 0; k < 10; ++k)
                    {
                        std::vector<std::int64_t> c(6);
                        for (auto &v : c)
                            v = cd(rng);
                        const auto a = S_q_naive(f3, q, c, t), b = S_q_factored(f3, q, c, t);
                        worst = std::max(worst, std::abs(a.value - b.value) / std::max(1.0, std::abs(b.value)));
                    }
            out.push_back({"sums", "naive = factored (q<=20)", worst <= 1e-8, worst});

            bool exact_ok = true;
            for (std::int64_t q = 1; q <= 50; ++q)
                for (std::int64_t t : {0, 1, -1, 6, -6})
                {
                    const auto v = S_q_factored(f3, q, std::vector<std::int64_t>(6, 0), t);
                    exact_ok = exact_ok && v.exact && *v.exact == nt::pow(q, 3) * ramanujan(q, t);
                }
            out.push_back({"sums", "S_q(0) = q^3 c_q(t) exactly (q<=50)", exact_ok, 0.0});

            int mult_ok = 0, pairs = 0;
            std::uniform_int_distribution<std::int64_t> qd(1, 30);
            while (pairs < 50)
            {
                const std::int64_t q = qd(rng), qq = qd(rng);
                if (std::gcd(q, qq) != 1)
                    continue;
                ++pairs;
                std::vector<std::int64_t> c(6);
                for (auto &v : c)
                    v = cd(rng) * (pairs % 2); // half the pairs with c = 0 (exact path)
                const std::int64_t t = pairs % 3 - 1;
                const auto whole = S_q_factored(f3, q * qq, c, t);
                std::vector<std::int64_t> c1(6), c2(6);
                const std::int64_t qb = nt::mod_inverse(q, qq), qqb = nt::mod_inverse(qq, q);
                for (std::size_t i = 0; i < 6; ++i)
                {
                    c1[i] = nt::mulmod(qqb, nt::mod(c[i], q), q);
                    c2[i] = nt::mulmod(qb, nt::mod(c[i], qq), qq);
                }
                const auto A = S_q_factored(f3, q, c1, t), B = S_q_factored(f3, qq, c2, t);
                bool ok;
                if (whole.exact && A.exact && B.exact)
                    ok = *whole.exact == *A.exact * *B.exact;
                else
                    ok = std::abs(whole.value - A.value * B.value) <= 1e-12 * std::pow(static_cast<double>(q * qq), 4.0);
                mult_ok += ok;
            }
            out.push_back({"sums", "multiplicativity (50 coprime pairs)", mult_ok == 50, static_cast<double>(mult_ok)});

            bool dens_ok = true;
            for (auto [p, k] : std::vector<std::pair<std::int64_t, int>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {5, 1}, {5, 2}})
                for (std::int64_t t : {0, 1})
                {
                    Rational s(0);
                    for (int l = 0; l <= k; ++l)
                    {
                        const std::int64_t q = static_cast<std::int64_t>(std::llround(std::pow(p, l)));
                        s += Rational(*S_q_factored(f3, q, std::vector<std::int64_t>(6, 0), t).exact, nt::pow(p, 6UL * l));
                        s.canonicalize();
                    }
                    dens_ok = dens_ok && s == local_density(p, k, 3, t);
                }
            out.push_back({"sums", "truncated series = local density", dens_ok, 0.0});

            double Cb = 0.0;
            for (std::int64_t q = 1; q <= 200; ++q)
                for (std::int64_t t : {0, 1, 6})
                {
                    const auto v = S_q_factored(f3, q, std::vector<std::int64_t>(6, 0), t);
                    Cb = std::max(Cb, std::abs(v.value) / std::pow(static_cast<double>(q), 4.0));
                }
            out.push_back({"sums", "|S_q(c)| <= C q^{d/2+1}, c_x.c_y = 0", Cb <= 1.0 + 1e-9, Cb});

            double Cp = 0.0, acc = 0.0;
            std::vector<std::int64_t> c{1, 2, 0, 3, 1, 1};
            for (std::int64_t X = 1; X <= 200; ++X)
            {
                acc += std::abs(S_q_factored(f3, X, c, 0).value);
                Cp = std::max(Cp, acc / std::pow(static_cast<double>(X), 5.0));
            }
            out.push_back({"sums", "partial sums <= C X^{d/2+2}", Cp <= 2.0, Cp});
            return out;
        }

        inline std::vector<CheckEntry> integral_checks()
        {
            std::vector<CheckEntry> out;
            const auto g = WeightFunction::gaussian(3, 1.0);
            const double e0 = std::abs(sigma_infty(g, 0.0).value - 2.0);
            const double e1 = std::abs(sigma_infty(g, 1.0).value - gaussian_I_closed(3, 1.0, 1.0));
            out.push_back({"integral", "Gaussian closed form, m=0", e0 <= 1e-6, e0});
            out.push_back({"integral", "Gaussian closed form, m=1", e1 <= 1e-6, e1});
            double sym = 0.0;
            const auto shifted = WeightFunction::shifted_gaussian(3, 1.0, {0.3, -0.2, 0.1, 0.2, 0.1, -0.3});
            for (const auto &w : {g, WeightFunction::appendix_example(3), shifted})
                for (double t : {0.0, 1.0})
                    sym = std::max(sym, std::abs(I_x_projection(w, t) - I_y_projection(w, t)));
            out.push_back({"integral", "x/y projection symmetry", sym <= 2e-6, sym});
            QuadratureConfig half;
            half.r_min_factor = 0.5e-6;
            const double apex = std::abs(I_x_projection(g, 0.0, half) - I_x_projection(g, 0.0));
            out.push_back({"integral", "apex cut-off halving", apex <= 1e-6, apex});
            const double i2 = I_x_projection(g, 2.0), i4 = I_x_projection(g, 4.0);
            out.push_back({"integral", "decay |I(4)| <= |I(2)|", std::abs(i4) <= std::abs(i2), i4});
            return out;
        }
    } // namespace detail

    inline std::vector<CheckEntry> check_bounds(const std::string &suite)
    {
        if (suite == "kernel")
            return detail::kernel_checks();
        if (suite == "sums")
            return detail::sums_checks();
        if (suite == "integral")
            return detail::integral_checks();
        if (suite == "all")
        {
            auto out = detail::kernel_checks();
            for (auto &e : detail::sums_checks())
                out.push_back(e);
            for (auto &e : detail::integral_checks())
                out.push_back(e);
            return out;
        }
        throw ArgumentError("check: unknown suite '" + suite + "'");
    }

    /// %.12e, or NA for non-finite values.
    inline std::string fmt(double v)
    {
        if (!std::isfinite(v))
            return "NA";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12e", v);
        return buf;
    }

} // namespace qc
