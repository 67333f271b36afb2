#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

#include "errors.hpp"

namespace qc
{

    /// Gauss-Legendre rule on [-1, 1], nodes ascending.
    struct GaussRule
    {
        std::vector<double> nodes;
        std::vector<double> weights;
    };

    inline const GaussRule &gauss_legendre(int n)
    {
        if (n < 1)
            throw ArgumentError("gauss_legendre: order must be >= 1");
        static std::mutex mu;
        static std::map<int, std::unique_ptr<GaussRule>> cache;
        std::lock_guard lock(mu);
        auto &slot = cache[n];
        if (slot)
            return *slot;
        auto rule = std::make_unique<GaussRule>();
        // legendre_p_zeros gives the nonnegative zeros in ascending order.
        const auto zeros = boost::math::legendre_p_zeros<double>(n);
        std::vector<double> nodes;
        for (auto it = zeros.rbegin(); it != zeros.rend(); ++it)
            if (*it != 0.0)
                nodes.push_back(-*it);
        for (double z : zeros)
            nodes.push_back(z);
        for (double x : nodes)
        {
            const double dp = boost::math::legendre_p_prime<double>(n, x);
            rule->nodes.push_back(x);
            rule->weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
        }
        slot = std::move(rule);
        return *slot;
    }

    /// Integral of f over [a, b] split into `panels` equal Gauss panels.
    template <typename F>
    double gauss_integrate(F &&f, double a, double b, int order, int panels = 1)
    {
        const auto &g = gauss_legendre(order);
        const double width = (b - a) / panels;
        double total = 0.0;
        for (int k = 0; k < panels; ++k)
        {
            const double lo = a + k * width;
            const double mid = lo + 0.5 * width, half = 0.5 * width;
            double s = 0.0;
            for (std::size_t i = 0; i < g.nodes.size(); ++i)
                s += g.weights[i] * f(mid + half * g.nodes[i]);
            total += s * half;
        }
        return total;
    }

} // namespace qc
