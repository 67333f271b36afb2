#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qc/harness.hpp"

namespace
{
    using nlohmann::json;

    std::vector<double> parse_list(const std::string &s)
    {
        std::vector<double> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ','))
            out.push_back(std::stod(item));
        if (out.empty())
            throw qc::ArgumentError("empty list '" + s + "'");
        return out;
    }

    // a:b:n -> n evenly spaced points in [a, b]
    std::vector<double> parse_range(const std::string &s)
    {
        const auto parts = qc::detail::split(s, ':');
        if (parts.size() != 3)
            throw qc::ArgumentError("range must be a:b:n, got '" + s + "'");
        const double a = std::stod(std::string(parts[0])), b = std::stod(std::string(parts[1]));
        const int n = std::stoi(std::string(parts[2]));
        if (n < 1 || (n == 1 && a != b))
            throw qc::ArgumentError("range needs n >= 2 unless a == b");
        std::vector<double> out;
        for (int i = 0; i < n; ++i)
            out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
        return out;
    }

    void row(std::initializer_list<std::string> cells)
    {
        bool first = true;
        for (const auto &c : cells)
        {
            if (!first)
                std::fputc(',', stdout);
            std::fputs(c.c_str(), stdout);
            first = false;
        }
        std::fputc('\n', stdout);
    }

    std::string fmt_int(long long v) { return std::to_string(v); }

    struct Options
    {
        int d1 = 3;
        double m = 0.0, L = 8.0, eps = 1e-12, budget = 5e8;
        std::string weight = "gaussian:a=1", L_list = "2,4,6,8";
        qc::Cutoffs cut{};
        long long l_max = 0; // 0 -> rel_tol governs the per-prime truncation
        qc::QuadratureConfig quad{};
        bool refine = false;
        std::string config;
    };

    // Fill every option left unset on the command line from the JSON file.
    void apply_config(CLI::App &app, Options &o)
    {
        if (o.config.empty())
            return;
        std::ifstream in(o.config);
        if (!in)
            throw qc::ArgumentError("cannot open config '" + o.config + "'");
        json j;
        try
        {
            j = json::parse(in);
        }
        catch (const json::exception &e)
        {
            throw qc::ArgumentError(std::string("config: ") + e.what());
        }
        auto unset = [&](const char *flag) {
            for (auto *sub : app.get_subcommands())
                if (auto *opt = sub->get_option_no_throw(flag); opt && opt->count() > 0)
                    return false;
            return true;
        };
        auto take = [&](const char *key, const char *flag, auto &dst) {
            if (j.contains(key) && unset(flag))
                dst = j.at(key).get<std::remove_reference_t<decltype(dst)>>();
        };
        try
        {
            take("d1", "--d1", o.d1);
            take("m", "--m", o.m);
            take("L", "--L", o.L);
            take("eps", "--eps", o.eps);
            take("budget", "--budget", o.budget);
            take("weight", "--weight", o.weight);
            if (j.contains("L_list") && unset("--L-list"))
            {
                std::string s;
                for (double v : j.at("L_list").get<std::vector<double>>())
                    s += (s.empty() ? "" : ",") + qc::fmt(v);
                o.L_list = s;
            }
            if (j.contains("cutoffs"))
            {
                const auto &c = j.at("cutoffs");
                if (c.contains("primes") && unset("--primes"))
                    o.cut.primes = c.at("primes").get<std::int64_t>();
                if (c.contains("q") && unset("--q-cutoff"))
                    o.cut.q = c.at("q").get<std::int64_t>();
                if (c.contains("l") && unset("--l-max"))
                    o.l_max = c.at("l").get<long long>();
            }
            if (j.contains("quadrature"))
            {
                const auto &q = j.at("quadrature");
                if (q.contains("radial") && unset("--radial"))
                    o.quad.radial_order = q.at("radial").get<int>();
                if (q.contains("angular") && unset("--angular"))
                    o.quad.angular_order = q.at("angular").get<int>();
                if (q.contains("plane") && unset("--plane"))
                    o.quad.plane_order = q.at("plane").get<int>();
                if (q.contains("r_min") && unset("--r-min"))
                    o.quad.r_min_factor = q.at("r_min").get<double>();
                if (q.contains("r_max") && unset("--r-max"))
                    o.quad.r_max = q.at("r_max").get<double>();
            }
        }
        catch (const json::exception &e)
        {
            throw qc::ArgumentError(std::string("config: ") + e.what());
        }
    }

    void add_weight_opts(CLI::App *sub, Options &o)
    {
        sub->add_option("--d1", o.d1, "half dimension");
        sub->add_option("--weight", o.weight, "gaussian:a=<a>[:shift=<v,..>] | bump:scale=<s> | appendix-example | zero");
    }

    void add_quad_opts(CLI::App *sub, Options &o)
    {
        sub->add_option("--radial", o.quad.radial_order);
        sub->add_option("--angular", o.quad.angular_order);
        sub->add_option("--plane", o.quad.plane_order);
        sub->add_option("--r-min", o.quad.r_min_factor);
        sub->add_option("--r-max", o.quad.r_max);
    }

    void add_cutoff_opts(CLI::App *sub, Options &o)
    {
        sub->add_option("--primes", o.cut.primes, "prime cutoff P");
        sub->add_option("--q-cutoff", o.cut.q, "Dirichlet cutoff X");
        sub->add_option("--l-max", o.l_max, "per-prime term cap (0: tolerance driven)");
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"circle-method artifact for the split form x.y"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config, "JSON manifest; flags override its values");

    auto *count = app.add_subcommand("count", "weighted lattice count N_L");
    add_weight_opts(count, o);
    count->add_option("--L", o.L);
    count->add_option("--m", o.m);
    count->add_option("--eps", o.eps);
    count->add_option("--budget", o.budget);

    auto *pred = app.add_subcommand("predict", "main terms with both singular-series variants");
    add_weight_opts(pred, o);
    add_quad_opts(pred, o);
    add_cutoff_opts(pred, o);
    pred->add_option("--L", o.L);
    pred->add_option("--m", o.m);
    double epsilon = 0.5;
    pred->add_option("--epsilon", epsilon);

    auto *ver = app.add_subcommand("verify", "convergence table against the exact count");
    add_weight_opts(ver, o);
    add_quad_opts(ver, o);
    add_cutoff_opts(ver, o);
    ver->add_option("--m", o.m);
    ver->add_option("--L-list", o.L_list, "comma separated");
    ver->add_option("--eps", o.eps);
    ver->add_option("--budget", o.budget);

    auto *sig = app.add_subcommand("sigma", "singular series");
    std::string method = "euler";
    int d = 6;
    std::int64_t t = 0, cutoff = 0;
    sig->add_option("--method", method)->check(CLI::IsMember({"euler", "dirichlet"}));
    sig->add_option("--d", d);
    sig->add_option("--t", t);
    sig->add_option("--cutoff", cutoff, "P for euler, X for dirichlet");
    add_cutoff_opts(sig, o);

    auto *sigp = app.add_subcommand("sigma-p", "local factor at one prime");
    std::int64_t p = 2;
    sigp->add_option("--p", p)->required();
    sigp->add_option("--d", d);
    sigp->add_option("--t", t);

    auto *sinf = app.add_subcommand("sigma-infty", "singular integral");
    add_weight_opts(sinf, o);
    add_quad_opts(sinf, o);
    sinf->add_option("--m", o.m);
    sinf->add_flag("--refine", o.refine, "cross-check against a refined rule");

    auto *igrid = app.add_subcommand("i-grid", "I(t) on a uniform grid");
    add_weight_opts(igrid, o);
    add_quad_opts(igrid, o);
    std::string trange = "-2:2:9";
    igrid->add_option("--t", trange, "a:b:n");

    auto *gs = app.add_subcommand("gauss-sum", "complete exponential sum S_q(c, t)");
    std::int64_t q = 1;
    std::string cvec;
    gs->add_option("--q", q)->required();
    gs->add_option("--c", cvec, "comma separated, length 2*d1")->required();
    gs->add_option("--t", t);
    gs->add_option("--d1", o.d1);

    auto *del = app.add_subcommand("delta", "delta-method identity residuals");
    double Q = 20.0;
    std::string nrange = "-50:50";
    del->add_option("--Q", Q);
    del->add_option("--n", nrange, "a:b");

    auto *chk = app.add_subcommand("check", "lemma-level property suites");
    std::string suite = "all";
    chk->add_option("--suite", suite, "kernel | sums | integral | all");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try
    {
        apply_config(app, o);
        if (o.l_max > 0)
            o.cut.rel_tol = 0.0;
        o.quad.validate();

        if (*count)
        {
            const auto w = qc::parse_weight_spec(o.weight, o.d1);
            qc::CountOptions co;
            co.budget = o.budget;
            const auto r = qc::enumerate_N_L(w, qc::LatticeSpec(o.L, o.m), o.eps, co);
            row({"L", "m", "value", "tail_estimate", "visited"});
            row({qc::fmt(o.L), qc::fmt(o.m), qc::fmt(r.value_d()), qc::fmt(r.tail_estimate),
                 fmt_int(static_cast<long long>(r.lattice_points_visited))});
        }
        else if (*pred)
        {
            const auto r = qc::predict(o.d1, o.m, o.L, o.weight, o.cut, o.quad, epsilon);
            row({"d", "m", "L", "sigma_infty", "sigma_remark5", "sigma_definitional", "main_term_r5", "main_term_def",
                 "error_envelope", "epsilon", "N1", "N2", "N3"});
            row({fmt_int(r.d), qc::fmt(r.m), qc::fmt(r.L), qc::fmt(r.sigma_infty), qc::fmt(r.sigma_remark5),
                 qc::fmt(r.sigma_definitional), qc::fmt(r.main_term_r5), qc::fmt(r.main_term_def),
                 qc::fmt(r.error_envelope), qc::fmt(r.epsilon), fmt_int(r.theorem_constants[0]),
                 fmt_int(r.theorem_constants[1]), fmt_int(r.theorem_constants[2])});
        }
        else if (*ver)
        {
            qc::VerifyOptions vo;
            vo.eps = o.eps;
            vo.cutoffs = o.cut;
            vo.quadrature = o.quad;
            vo.count.budget = o.budget;
            const auto rep = qc::verify(qc::parse_weight_spec(o.weight, o.d1), o.m, parse_list(o.L_list), vo);
            row({"L", "exact", "predicted_def", "predicted_r5", "ratio_def", "ratio_r5", "fitted_error_exponent"});
            for (const auto &r : rep.rows)
                row({qc::fmt(r.L), qc::fmt(r.exact), qc::fmt(r.predicted_def), qc::fmt(r.predicted_r5),
                     qc::fmt(r.ratio_def), qc::fmt(r.ratio_r5),
                     r.fitted_error_exponent ? qc::fmt(*r.fitted_error_exponent) : "NA"});
            std::printf("# sigma_infty=%s sigma_definitional=%s sigma_remark5=%s\n", qc::fmt(rep.sigma_infty).c_str(),
                        qc::fmt(rep.sigma_definitional).c_str(), qc::fmt(rep.sigma_remark5).c_str());
            std::printf("# verdict: %s\n", rep.summary.verdict.c_str());
        }
        else if (*sig)
        {
            row({"method", "cutoff", "value", "tail_bound"});
            if (method == "euler")
            {
                const std::int64_t P = cutoff > 0 ? cutoff : o.cut.primes;
                const auto def = qc::sigma_euler(P, d, t, o.cut.rel_tol);
                row({"euler", fmt_int(P), qc::fmt(def.value_d()), qc::fmt(def.tail_bound)});
                if (t == 0)
                {
                    const auto r5 = qc::sigma_euler(P, d, 0, o.cut.rel_tol, qc::SigmaVariant::Remark5);
                    row({"euler-remark5", fmt_int(P), qc::fmt(r5.value_d()), qc::fmt(r5.tail_bound)});
                    const double gap = std::abs(def.value_d() - r5.value_d());
                    if (gap > def.tail_bound + r5.tail_bound)
                        std::printf("# flag: remark5 and definitional differ by %s, beyond the tails\n", qc::fmt(gap).c_str());
                }
            }
            else
            {
                const std::int64_t X = cutoff > 0 ? cutoff : o.cut.q;
                const auto r = qc::sigma_dirichlet(X, d, t);
                row({"dirichlet", fmt_int(X), qc::fmt(r.value_d()), qc::fmt(r.tail_bound)});
            }
        }
        else if (*sigp)
        {
            const auto r = qc::sigma_p(p, d, t);
            row({"p", "sigma_p", "l_max", "tail"});
            row({fmt_int(p), qc::fmt(r.value.get_d()), fmt_int(r.l_max), qc::fmt(r.tail)});
        }
        else if (*sinf)
        {
            const auto r = qc::sigma_infty(qc::parse_weight_spec(o.weight, o.d1), o.m, o.quad, o.refine);
            row({"m", "value", "est_error"});
            row({qc::fmt(o.m), qc::fmt(r.value), qc::fmt(r.est_error)});
        }
        else if (*igrid)
        {
            const auto g = qc::make_i_grid(qc::parse_weight_spec(o.weight, o.d1), parse_range(trange), o.quad);
            row({"t", "I"});
            for (std::size_t i = 0; i < g.t_values.size(); ++i)
                row({qc::fmt(g.t_values[i]), qc::fmt(g.I_values[i])});
        }
        else if (*gs)
        {
            std::vector<std::int64_t> c;
            for (double v : parse_list(cvec))
                c.push_back(static_cast<std::int64_t>(v));
            const auto r = qc::S_q_factored(qc::QuadraticFormF0(o.d1), q, c, t);
            row({"q", "t", "re", "im", "exact"});
            row({fmt_int(q), fmt_int(t), qc::fmt(r.value.real()), qc::fmt(r.value.imag()),
                 r.exact ? r.exact->get_str() : "NA"});
        }
        else if (*del)
        {
            const auto parts = qc::detail::split(nrange, ':');
            if (parts.size() != 2)
                throw qc::ArgumentError("--n must be a:b");
            const long long a = std::stoll(std::string(parts[0])), b = std::stoll(std::string(parts[1]));
            const auto cfg = qc::make_delta_config(Q);
            row({"n", "value", "abs_error"});
            for (long long n = a; n <= b; ++n)
            {
                const double v = qc::delta_sum(n, cfg);
                row({fmt_int(n), qc::fmt(v), qc::fmt(std::abs(v - (n == 0 ? 1.0 : 0.0)))});
            }
        }
        else if (*chk)
        {
            const auto entries = qc::check_bounds(suite);
            row({"suite", "check", "status", "measured"});
            bool ok = true;
            for (const auto &e : entries)
            {
                row({e.suite, "\"" + e.name + "\"", e.pass ? "PASS" : "FAIL", qc::fmt(e.measured)});
                ok = ok && e.pass;
            }
            return ok ? 0 : 1;
        }
        return 0;
    }
    catch (const qc::ArgumentError &e)
    {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    }
    catch (const std::invalid_argument &e)
    {
        std::fprintf(stderr, "usage error: bad number (%s)\n", e.what());
        return 2;
    }
    catch (const qc::CapabilityError &e)
    {
        std::fprintf(stderr, "capability error: %s\n", e.what());
        return 3;
    }
    catch (const qc::AccuracyError &e)
    {
        std::fprintf(stderr, "accuracy error: %s\n", e.what());
        return 3;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
