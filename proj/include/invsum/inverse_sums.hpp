#pragma once

// The inverse-product sums themselves:
//   S(d)   = sum over a*b == d (mod p) of a*b, three independent routes
//   S_k(d) = sum over a_1*...*a_k == d (mod p) of a_1*...*a_k
// Brute force is exact integer work; the character and exponential-sum routes
// are floating closed forms whose outputs must round back to the integer.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "invsum/characters.hpp"
#include "invsum/modular.hpp"
#include "invsum/numeric.hpp"

namespace invsum {

namespace detail {

inline void require_unit(const PrimeContext& ctx, i64 d, const char* who) {
    i64 r = d % ctx.p;
    if (r < 0) r += ctx.p;
    if (r == 0) throw std::domain_error(std::string(who) + ": residue divisible by p");
}

inline i64 reduce(const PrimeContext& ctx, i64 d) {
    i64 r = d % ctx.p;
    if (r < 0) r += ctx.p;
    return r;
}

}  // namespace detail

// S(d) by direct enumeration of a (b = d * a^{-1}); O(p) exact.
inline i64 s_d_bruteforce(const PrimeContext& ctx, i64 d) {
    detail::require_unit(ctx, d, "s_d_bruteforce");
    i64 dd = detail::reduce(ctx, d);
    i128 acc = 0;
    for (i64 a = 1; a < ctx.p; ++a) {
        i64 b = static_cast<i64>(mulmod_u64(static_cast<u64>(dd), static_cast<u64>(ctx.inv_of(a)), static_cast<u64>(ctx.p)));
        acc += static_cast<i128>(a) * b;
    }
    if (acc > static_cast<i128>(INT64_MAX))
        throw std::overflow_error("s_d_bruteforce: sum exceeds 64-bit range");
    return static_cast<i64>(acc);
}

// All of S(1..p-1) in O(p^2): for fixed a the inner index d*inv(a) mod p
// advances by inv(a) as d steps, so no multiplications in the inner loop.
inline std::vector<i64> s_d_table(const PrimeContext& ctx) {
    i64 p = ctx.p;
    double bound = static_cast<double>(p) * static_cast<double>(p - 1) * static_cast<double>(p - 1);
    if (bound > 9.0e18) throw std::overflow_error("s_d_table: sums exceed 64-bit range");
    std::vector<i64> s(static_cast<size_t>(p), 0);
    for (i64 a = 1; a < p; ++a) {
        i64 m = ctx.inv_of(a);
        i64 idx = 0;
        i64* row = s.data();
        for (i64 d = 1; d < p; ++d) {
            idx += m;
            if (idx >= p) idx -= p;
            row[d] += a * idx;
        }
    }
    return s;
}

// S(d) through the character closed form
//   S(d) = p^2(p-1)/4 + (p^2/(p-1)) * sum over non-principal chi of
//          conj(chi(d)) * L(0,chi)^2,
// with L(0,chi) = -W_chi/p. Even characters drop out (their L(0) vanishes).
// Pass a precomputed weighted_char_sum_table to share it across calls.
inline double s_d_char_formula(const PrimeContext& ctx, i64 d,
                               const std::vector<cplx>* w_table = nullptr) {
    detail::require_unit(ctx, d, "s_d_char_formula");
    i64 p = ctx.p, m = p - 1;
    i64 dd = detail::reduce(ctx, d);
    std::vector<cplx> local;
    if (!w_table) {
        local = weighted_char_sum_table(ctx);
        w_table = &local;
    }
    std::vector<cplx> omega = unit_roots(m);
    i64 t = ctx.dlog_of(dd);
    double pd = static_cast<double>(p);
    ComplexSum acc;
    i64 idx = 0, step = (m - t) % m;
    for (i64 j = 0; j < m; ++j) {
        if (j != 0) {
            cplx l0 = -(*w_table)[static_cast<size_t>(j)] / pd;
            acc.add(omega[static_cast<size_t>(idx)] * l0 * l0);
        }
        idx += step;
        if (idx >= m) idx -= m;
    }
    double main = pd * pd * static_cast<double>(m) / 4.0;
    cplx v = acc.value() * (pd * pd / static_cast<double>(m));
    return main + v.real();
}

// A(m) = sum_a a * e(m * inv(a) / p) for m = 0..p-1, O(p^2) by index stepping
// over m for fixed a. This is the weighted inverse exponential sum table the
// exponential route and the triple sum share.
inline std::vector<cplx> weighted_inverse_exp_table(const PrimeContext& ctx) {
    i64 p = ctx.p;
    std::vector<cplx> roots = unit_roots(p);
    std::vector<ComplexSum> acc(static_cast<size_t>(p));
    for (i64 a = 1; a < p; ++a) {
        i64 ia = ctx.inv_of(a);
        double ad = static_cast<double>(a);
        i64 idx = 0;
        for (i64 mm = 0; mm < p; ++mm) {
            acc[static_cast<size_t>(mm)].add(ad * roots[static_cast<size_t>(idx)]);
            idx += ia;
            if (idx >= p) idx -= p;
        }
    }
    std::vector<cplx> a_table(static_cast<size_t>(p));
    for (i64 mm = 0; mm < p; ++mm) a_table[static_cast<size_t>(mm)] = acc[static_cast<size_t>(mm)].value();
    return a_table;
}

// S(d) through the exponential-sum closed form
//   S(d) = p(p-1)^2/4 - sum_{k=1}^{p-1} A(k d mod p) / (1 - e(-k/p)).
inline double s_d_exp_formula(const PrimeContext& ctx, i64 d,
                              const std::vector<cplx>* a_table = nullptr) {
    detail::require_unit(ctx, d, "s_d_exp_formula");
    i64 p = ctx.p;
    i64 dd = detail::reduce(ctx, d);
    std::vector<cplx> local;
    if (!a_table) {
        local = weighted_inverse_exp_table(ctx);
        a_table = &local;
    }
    ComplexSum acc;
    i64 idx = 0;
    for (i64 k = 1; k < p; ++k) {
        idx += dd;
        if (idx >= p) idx -= p;
        // 1/(1 - e(-k/p)) = 1/(1 - e((p-k)/p))
        acc.add(inv_one_minus_e(p, p - k) * (*a_table)[static_cast<size_t>(idx)]);
    }
    double main = static_cast<double>(p) * static_cast<double>(p - 1) * static_cast<double>(p - 1) / 4.0;
    return main - acc.value().real();
}

// S_k(d) by enumerating the first k-1 factors; the last is forced. Exact
// integer arithmetic with overflow checks; cost (p-1)^{k-1} against budget.
inline i128 s_k_bruteforce(const PrimeContext& ctx, i64 k, i64 d, i64 budget = default_budget) {
    if (k < 2) throw std::domain_error("s_k_bruteforce: need k >= 2");
    detail::require_unit(ctx, d, "s_k_bruteforce");
    i64 p = ctx.p;
    i64 dd = detail::reduce(ctx, d);
    double cost = 1.0;
    for (i64 i = 0; i < k - 1; ++i) cost *= static_cast<double>(p - 1);
    if (cost > static_cast<double>(budget)) throw budget_error(cost, budget);
    i128 acc = 0;
    // Odometer over (a_1, ..., a_{k-1}) with partial integer products and
    // partial residues maintained per level.
    std::vector<i64> digit(static_cast<size_t>(k - 1), 1);
    std::vector<i128> part_int(static_cast<size_t>(k), 1);
    std::vector<i64> part_res(static_cast<size_t>(k), 1);
    for (i64 lvl = 0; lvl < k - 1; ++lvl) {
        part_int[static_cast<size_t>(lvl + 1)] = part_int[static_cast<size_t>(lvl)];  // digit 1
        part_res[static_cast<size_t>(lvl + 1)] = part_res[static_cast<size_t>(lvl)];
    }
    for (;;) {
        i64 r = part_res[static_cast<size_t>(k - 1)];
        i64 last = static_cast<i64>(mulmod_u64(static_cast<u64>(dd), static_cast<u64>(ctx.inv_of(r)), static_cast<u64>(p)));
        acc = checked_add(acc, checked_mul(part_int[static_cast<size_t>(k - 1)], last));
        // advance odometer
        i64 lvl = k - 2;
        while (lvl >= 0 && digit[static_cast<size_t>(lvl)] == p - 1) --lvl;
        if (lvl < 0) break;
        digit[static_cast<size_t>(lvl)] += 1;
        for (i64 i = lvl + 1; i < k - 1; ++i) digit[static_cast<size_t>(i)] = 1;
        for (i64 i = lvl; i < k - 1; ++i) {
            part_int[static_cast<size_t>(i + 1)] =
                checked_mul(part_int[static_cast<size_t>(i)], digit[static_cast<size_t>(i)]);
            part_res[static_cast<size_t>(i + 1)] = static_cast<i64>(mulmod_u64(
                static_cast<u64>(part_res[static_cast<size_t>(i)]), static_cast<u64>(digit[static_cast<size_t>(i)]),
                static_cast<u64>(p)));
        }
    }
    return acc;
}

// All of S_k(1..p-1) in one enumeration of the first k-1 factors; the last
// factor sweeps [1, p-1] binning each product into its residue class.
inline std::vector<i128> s_k_bruteforce_table(const PrimeContext& ctx, i64 k, i64 budget = default_budget) {
    if (k < 2) throw std::domain_error("s_k_bruteforce_table: need k >= 2");
    i64 p = ctx.p;
    double cost = 1.0;
    for (i64 i = 0; i < k; ++i) cost *= static_cast<double>(p - 1);
    if (cost > static_cast<double>(budget)) throw budget_error(cost, budget);
    std::vector<i128> s(static_cast<size_t>(p), 0);
    std::vector<i64> digit(static_cast<size_t>(k - 1), 1);
    std::vector<i128> part_int(static_cast<size_t>(k), 1);
    std::vector<i64> part_res(static_cast<size_t>(k), 1);
    for (i64 lvl = 0; lvl < k - 1; ++lvl) {
        part_int[static_cast<size_t>(lvl + 1)] = part_int[static_cast<size_t>(lvl)];
        part_res[static_cast<size_t>(lvl + 1)] = part_res[static_cast<size_t>(lvl)];
    }
    for (;;) {
        i128 pint = part_int[static_cast<size_t>(k - 1)];
        i64 r = part_res[static_cast<size_t>(k - 1)];
        i64 idx = 0;
        for (i64 last = 1; last < p; ++last) {
            idx += r;
            if (idx >= p) idx -= p;
            s[static_cast<size_t>(idx)] = checked_add(s[static_cast<size_t>(idx)], checked_mul(pint, last));
        }
        i64 lvl = k - 2;
        while (lvl >= 0 && digit[static_cast<size_t>(lvl)] == p - 1) --lvl;
        if (lvl < 0) break;
        digit[static_cast<size_t>(lvl)] += 1;
        for (i64 i = lvl + 1; i < k - 1; ++i) digit[static_cast<size_t>(i)] = 1;
        for (i64 i = lvl; i < k - 1; ++i) {
            part_int[static_cast<size_t>(i + 1)] =
                checked_mul(part_int[static_cast<size_t>(i)], digit[static_cast<size_t>(i)]);
            part_res[static_cast<size_t>(i + 1)] = static_cast<i64>(mulmod_u64(
                static_cast<u64>(part_res[static_cast<size_t>(i)]), static_cast<u64>(digit[static_cast<size_t>(i)]),
                static_cast<u64>(p)));
        }
    }
    return s;
}

// Deviation of S_k(d) from its main term via characters:
//   S_k(d) - p^k(p-1)^{k-1}/2^k = (1/(p-1)) * sum over non-principal chi of
//   conj(chi(d)) * W_chi^k.
inline double s_k_main_term(i64 p, i64 k) {
    double main = 1.0;
    for (i64 i = 0; i < k; ++i) main *= static_cast<double>(p) / 2.0;
    for (i64 i = 0; i < k - 1; ++i) main *= static_cast<double>(p - 1);
    return main;
}

inline cplx s_k_char_deviation(const PrimeContext& ctx, i64 k, i64 d,
                               const std::vector<cplx>* w_table = nullptr) {
    if (k < 2) throw std::domain_error("s_k_char_deviation: need k >= 2");
    detail::require_unit(ctx, d, "s_k_char_deviation");
    i64 p = ctx.p, m = p - 1;
    i64 dd = detail::reduce(ctx, d);
    std::vector<cplx> local;
    if (!w_table) {
        local = weighted_char_sum_table(ctx);
        w_table = &local;
    }
    std::vector<cplx> omega = unit_roots(m);
    i64 t = ctx.dlog_of(dd);
    i64 idx = 0, step = (m - t) % m;
    ComplexSum acc;
    for (i64 j = 0; j < m; ++j) {
        if (j != 0) {
            cplx w = (*w_table)[static_cast<size_t>(j)];
            cplx v = w;
            for (i64 i = 1; i < k; ++i) v *= w;
            acc.add(omega[static_cast<size_t>(idx)] * v);
        }
        idx += step;
        if (idx >= m) idx -= m;
    }
    return acc.value() / static_cast<double>(m);
}

inline double s_k_char_formula(const PrimeContext& ctx, i64 k, i64 d,
                               const std::vector<cplx>* w_table = nullptr) {
    return s_k_main_term(ctx.p, k) + s_k_char_deviation(ctx, k, d, w_table).real();
}

// |deviation| for every d at once, O(p^2) given the W table; shared by the
// Theorem 4/5 statistics.
inline std::vector<double> s_k_char_deviation_table(const PrimeContext& ctx, i64 k,
                                                    const std::vector<cplx>* w_table = nullptr) {
    if (k < 2) throw std::domain_error("s_k_char_deviation_table: need k >= 2");
    i64 p = ctx.p, m = p - 1;
    std::vector<cplx> local;
    if (!w_table) {
        local = weighted_char_sum_table(ctx);
        w_table = &local;
    }
    std::vector<cplx> omega = unit_roots(m);
    std::vector<cplx> v(static_cast<size_t>(m));
    for (i64 j = 1; j < m; ++j) {
        cplx w = (*w_table)[static_cast<size_t>(j)], acc = w;
        for (i64 i = 1; i < k; ++i) acc *= w;
        v[static_cast<size_t>(j)] = acc;
    }
    std::vector<double> dev(static_cast<size_t>(p), 0.0);
    // d with dlog(d) = t gets sum_j omega[(-j t) mod m] * v[j]
    i64 val = 1;
    for (i64 t = 0; t < m; ++t) {
        i64 step = (m - t) % m;
        ComplexSum acc;
        i64 idx = step;  // j starts at 1
        for (i64 j = 1; j < m; ++j) {
            acc.add(omega[static_cast<size_t>(idx)] * v[static_cast<size_t>(j)]);
            idx += step;
            if (idx >= m) idx -= m;
        }
        dev[static_cast<size_t>(val)] = acc.value().real() / static_cast<double>(m);
        val = static_cast<i64>(mulmod_u64(static_cast<u64>(val), static_cast<u64>(ctx.g), static_cast<u64>(p)));
    }
    return dev;
}

}  // namespace invsum
