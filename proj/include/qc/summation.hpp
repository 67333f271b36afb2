#pragma once

#include <cmath>
#include <complex>

namespace qc
{

    /// Neumaier (improved Kahan) compensated accumulator.
    template <typename T>
    class CompensatedSum
    {
    public:
        CompensatedSum() = default;
        explicit CompensatedSum(T init) : sum_(init) {}

        void add(T x) noexcept
        {
            const T t = sum_ + x;
            if (std::abs(sum_) >= std::abs(x))
                comp_ += (sum_ - t) + x;
            else
                comp_ += (x - t) + sum_;
            sum_ = t;
        }

        CompensatedSum &operator+=(T x) noexcept
        {
            add(x);
            return *this;
        }

        // Merge another partial sum (used for ordered parallel reductions).
        void merge(const CompensatedSum &o) noexcept
        {
            add(o.sum_);
            add(o.comp_);
        }

        T value() const noexcept { return sum_ + comp_; }

    private:
        T sum_{0};
        T comp_{0};
    };

    /// Component-wise compensated accumulation for complex values.
    template <typename T>
    class CompensatedSum<std::complex<T>>
    {
    public:
        void add(std::complex<T> z) noexcept
        {
            re_.add(z.real());
            im_.add(z.imag());
        }
        CompensatedSum &operator+=(std::complex<T> z) noexcept
        {
            add(z);
            return *this;
        }
        std::complex<T> value() const noexcept { return {re_.value(), im_.value()}; }

    private:
        CompensatedSum<T> re_;
        CompensatedSum<T> im_;
    };

} // namespace qc
