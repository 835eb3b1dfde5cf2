#pragma once

// Numeric plumbing shared by every module: compensated complex summation,
// roots of unity, the cotangent split for 1/(1 - e(m/p)), and overflow-checked
// 128-bit integer arithmetic.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace invsum {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr i64 default_budget = 1'000'000'000;

// Thrown when a requested computation exceeds the iteration budget.
class budget_error : public std::runtime_error {
public:
    budget_error(double cost, i64 cap)
        : std::runtime_error("iteration budget exceeded: estimated cost " +
                             std::to_string(cost) + " > budget " + std::to_string(cap)),
          cost_(cost), cap_(cap) {}
    double cost() const { return cost_; }
    i64 cap() const { return cap_; }
private:
    double cost_;
    i64 cap_;
};

// Neumaier variant of Kahan summation.
struct CompensatedSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

struct ComplexSum {
    CompensatedSum re, im;
    void add(cplx z) {
        re.add(z.real());
        im.add(z.imag());
    }
    cplx value() const { return {re.value(), im.value()}; }
};

// e(k/n) = exp(2*pi*i*k/n); k may be any integer.
inline cplx unit_root(i64 n, i64 k) {
    i64 r = k % n;
    if (r < 0) r += n;
    double t = 2.0 * pi * static_cast<double>(r) / static_cast<double>(n);
    return {std::cos(t), std::sin(t)};
}

// Table of e(j/n) for j = 0..n-1.
inline std::vector<cplx> unit_roots(i64 n) {
    std::vector<cplx> w(static_cast<size_t>(n));
    for (i64 j = 0; j < n; ++j) w[static_cast<size_t>(j)] = unit_root(n, j);
    return w;
}

struct RootOfUnity {
    i64 p = 0;
    i64 k = 0;
    cplx value{1.0, 0.0};
};

inline RootOfUnity root_of_unity(i64 p, i64 k) {
    if (p <= 0) throw std::domain_error("root_of_unity: order must be positive");
    return {p, k, unit_root(p, k)};
}

// 1/(1 - e(m/p)) = 1/2 + (i/2) cot(pi m / p), valid for 1 <= m <= p-1.
// For 1/(1 - e(-k/p)) pass m = p - k.
inline cplx inv_one_minus_e(i64 p, i64 m) {
    i64 r = m % p;
    if (r < 0) r += p;
    if (r == 0) throw std::domain_error("inv_one_minus_e: exponent divisible by modulus");
    double t = pi * static_cast<double>(r) / static_cast<double>(p);
    return {0.5, 0.5 / std::tan(t)};
}

// Rounding contract for floating routes that target exact integers: the float
// must land within 0.4 of the integer it rounds to.
inline constexpr double rounding_slack = 0.4;

inline i64 nearest_int(double x) { return static_cast<i64>(std::llround(x)); }

inline double rounding_gap(double x) {
    return std::abs(x - static_cast<double>(nearest_int(x)));
}

// Overflow-checked 128-bit helpers. A breach throws instead of wrapping.
inline i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("128-bit addition overflow");
    return r;
}

inline i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("128-bit multiplication overflow");
    return r;
}

inline double i128_to_double(i128 v) { return static_cast<double>(v); }

inline std::string i128_to_string(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    // Careful with the minimum value: negate digit by digit via unsigned.
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                              : static_cast<unsigned __int128>(v);
    std::string out;
    while (u > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) out.push_back('-');
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace invsum
