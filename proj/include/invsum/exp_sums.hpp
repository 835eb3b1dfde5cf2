#pragma once

// Exponential sums: the three root-of-unity lemmas, Kloosterman sums (complete
// and incomplete), the weighted inverse exponential sum A(k), the cosecant
// bound sum, and the double/triple exponential sums D(l), T(l) with their
// closed-form routes.

#include <stdexcept>
#include <vector>

#include "invsum/inverse_sums.hpp"
#include "invsum/modular.hpp"
#include "invsum/numeric.hpp"

namespace invsum {

// lhs = sum_{b=1}^{p-1} b z^b with z = e(k/p), rhs = -p/(1-z).
inline std::pair<cplx, cplx> lemma1_check(i64 p, i64 k) {
    i64 r = k % p;
    if (r < 0) r += p;
    if (r == 0) throw std::domain_error("lemma1_check: k divisible by p");
    std::vector<cplx> roots = unit_roots(p);
    ComplexSum lhs;
    i64 idx = 0;
    for (i64 b = 1; b < p; ++b) {
        idx += r;
        if (idx >= p) idx -= p;
        lhs.add(static_cast<double>(b) * roots[static_cast<size_t>(idx)]);
    }
    cplx rhs = -static_cast<double>(p) * inv_one_minus_e(p, r);
    return {lhs.value(), rhs};
}

// sum_{b=1}^{p-1} 1/(1 - z^b), z = e(k/p); closed form (p-1)/2.
inline cplx lemma2_sum(i64 p, i64 k) {
    i64 r = k % p;
    if (r < 0) r += p;
    if (r == 0) throw std::domain_error("lemma2_sum: k divisible by p");
    ComplexSum acc;
    i64 idx = 0;
    for (i64 b = 1; b < p; ++b) {
        idx += r;
        if (idx >= p) idx -= p;
        acc.add(inv_one_minus_e(p, idx));
    }
    return acc.value();
}

// sum_{b=1}^{p-1} z^{-db}/(1 - z^b), z = e(k/p); closed form (p-1)/2 - d.
inline cplx lemma3_sum(i64 p, i64 k, i64 d, const std::vector<cplx>* shared_roots = nullptr) {
    i64 r = k % p;
    if (r < 0) r += p;
    if (r == 0) throw std::domain_error("lemma3_sum: k divisible by p");
    if (d < 1 || d >= p) throw std::domain_error("lemma3_sum: need 1 <= d < p");
    std::vector<cplx> local;
    if (!shared_roots) {
        local = unit_roots(p);
        shared_roots = &local;
    }
    const std::vector<cplx>& roots = *shared_roots;
    ComplexSum acc;
    i64 idx = 0;                       // k b mod p
    i64 nidx = 0;                      // -d k b mod p
    i64 nstep = (p - (d * r) % p) % p;
    for (i64 b = 1; b < p; ++b) {
        idx += r;
        if (idx >= p) idx -= p;
        nidx += nstep;
        if (nidx >= p) nidx -= p;
        acc.add(roots[static_cast<size_t>(nidx)] * inv_one_minus_e(p, idx));
    }
    return acc.value();
}

// S(a,b;p) = sum_x e((a x + b inv(x))/p). Real-valued; |S| <= 2 sqrt(p).
inline cplx kloosterman(const PrimeContext& ctx, i64 a, i64 b) {
    i64 p = ctx.p;
    i64 ra = a % p; if (ra < 0) ra += p;
    i64 rb = b % p; if (rb < 0) rb += p;
    std::vector<cplx> roots = unit_roots(p);
    ComplexSum acc;
    for (i64 x = 1; x < p; ++x) {
        i64 idx = (ra * x + rb * ctx.inv_of(x)) % p;
        acc.add(roots[static_cast<size_t>(idx)]);
    }
    return acc.value();
}

// F(u) = sum_{a=1}^{u} e(k inv(a)/p) for 1 <= u <= p-1.
inline cplx incomplete_kloosterman(const PrimeContext& ctx, i64 k, i64 u) {
    i64 p = ctx.p;
    i64 r = k % p;
    if (r < 0) r += p;
    if (r == 0) throw std::domain_error("incomplete_kloosterman: k divisible by p");
    if (u < 1 || u >= p) throw std::domain_error("incomplete_kloosterman: need 1 <= u <= p-1");
    std::vector<cplx> roots = unit_roots(p);
    ComplexSum acc;
    for (i64 a = 1; a <= u; ++a) {
        i64 idx = static_cast<i64>(mulmod_u64(static_cast<u64>(r), static_cast<u64>(ctx.inv_of(a)), static_cast<u64>(p)));
        acc.add(roots[static_cast<size_t>(idx)]);
    }
    return acc.value();
}

// A(k) = sum_a a e(k inv(a)/p); << p^{3/2} log p. Table version lives in
// inverse_sums.hpp (weighted_inverse_exp_table).
inline cplx weighted_inverse_exp_sum(const PrimeContext& ctx, i64 k) {
    i64 p = ctx.p;
    i64 r = k % p;
    if (r < 0) r += p;
    if (r == 0) throw std::domain_error("weighted_inverse_exp_sum: k divisible by p");
    std::vector<cplx> roots = unit_roots(p);
    ComplexSum acc;
    for (i64 a = 1; a < p; ++a) {
        i64 idx = static_cast<i64>(mulmod_u64(static_cast<u64>(r), static_cast<u64>(ctx.inv_of(a)), static_cast<u64>(p)));
        acc.add(static_cast<double>(a) * roots[static_cast<size_t>(idx)]);
    }
    return acc.value();
}

// sum_{k=1}^{p-1} 1/|1 - e(-k/p)| = sum_k 1/(2 sin(pi k/p)); << p log p.
inline double cosecant_sum(i64 p) {
    if (p < 2) throw std::domain_error("cosecant_sum: need p >= 2");
    CompensatedSum acc;
    for (i64 k = 1; k < p; ++k)
        acc.add(0.5 / std::sin(pi * static_cast<double>(k) / static_cast<double>(p)));
    return acc.value();
}

// Shared tables for the closed-form routes: roots e(j/p), exact S(d), A(m),
// Q(d) = sum_k A(k d mod p)/(1 - e(-k/p)), and cinv[m] = 1/(1 - e(m/p)).
struct ExpSumTables {
    std::vector<cplx> roots;
    std::vector<i64> s;
    std::vector<cplx> a;
    std::vector<cplx> q;
    std::vector<cplx> cinv;
};

inline ExpSumTables build_exp_sum_tables(const PrimeContext& ctx) {
    i64 p = ctx.p;
    ExpSumTables t;
    t.roots = unit_roots(p);
    t.s = s_d_table(ctx);
    t.a = weighted_inverse_exp_table(ctx);
    t.cinv.assign(static_cast<size_t>(p), cplx{0.0, 0.0});
    for (i64 m = 1; m < p; ++m) t.cinv[static_cast<size_t>(m)] = inv_one_minus_e(p, m);
    t.q.assign(static_cast<size_t>(p), cplx{0.0, 0.0});
    for (i64 d = 1; d < p; ++d) {
        ComplexSum acc;
        i64 idx = 0;
        for (i64 k = 1; k < p; ++k) {
            idx += d;
            if (idx >= p) idx -= p;
            // 1/(1 - e(-k/p)) = cinv[p-k]
            acc.add(t.cinv[static_cast<size_t>(p - k)] * t.a[static_cast<size_t>(idx)]);
        }
        t.q[static_cast<size_t>(d)] = acc.value();
    }
    return t;
}

namespace detail {

inline i64 reduced_nonzero(const PrimeContext& ctx, i64 l, const char* who) {
    i64 r = l % ctx.p;
    if (r < 0) r += ctx.p;
    if (r == 0) throw std::domain_error(std::string(who) + ": residue divisible by p");
    return r;
}

}  // namespace detail

// D(l) = sum_{a,b} a b e(l a b/p), grouped by a b mod p against the exact
// S table.
inline cplx double_exp_sum_brute(const PrimeContext& ctx, i64 l, const ExpSumTables* tables = nullptr) {
    i64 p = ctx.p;
    i64 r = detail::reduced_nonzero(ctx, l, "double_exp_sum_brute");
    std::vector<i64> s_local;
    std::vector<cplx> roots_local;
    const std::vector<i64>* s = tables ? &tables->s : nullptr;
    const std::vector<cplx>* roots = tables ? &tables->roots : nullptr;
    if (!tables) {
        s_local = s_d_table(ctx);
        roots_local = unit_roots(p);
        s = &s_local;
        roots = &roots_local;
    }
    ComplexSum acc;
    i64 idx = 0;
    for (i64 d = 1; d < p; ++d) {
        idx += r;
        if (idx >= p) idx -= p;
        acc.add(static_cast<double>((*s)[static_cast<size_t>(d)]) * (*roots)[static_cast<size_t>(idx)]);
    }
    return acc.value();
}

// Closed form: D(l) = -p sum_a a/(1 - e(a l/p)).
inline cplx double_exp_sum_identity(const PrimeContext& ctx, i64 l) {
    i64 p = ctx.p;
    i64 r = detail::reduced_nonzero(ctx, l, "double_exp_sum_identity");
    ComplexSum acc;
    i64 idx = 0;
    for (i64 a = 1; a < p; ++a) {
        idx += r;
        if (idx >= p) idx -= p;
        acc.add(static_cast<double>(a) * inv_one_minus_e(p, idx));
    }
    return -static_cast<double>(p) * acc.value();
}

// T(l) = sum_{a,b,c} a b c e(l a b c/p), grouped by a b c mod p against an
// exact S_3 table (cost (p-1)^3 to build once per prime).
inline cplx triple_exp_sum_brute(const PrimeContext& ctx, i64 l,
                                 const std::vector<i128>* s3 = nullptr,
                                 i64 budget = default_budget) {
    i64 p = ctx.p;
    i64 r = detail::reduced_nonzero(ctx, l, "triple_exp_sum_brute");
    std::vector<i128> local;
    if (!s3) {
        local = s_k_bruteforce_table(ctx, 3, budget);
        s3 = &local;
    }
    std::vector<cplx> roots = unit_roots(p);
    ComplexSum acc;
    i64 idx = 0;
    for (i64 d = 1; d < p; ++d) {
        idx += r;
        if (idx >= p) idx -= p;
        acc.add(i128_to_double((*s3)[static_cast<size_t>(d)]) * roots[static_cast<size_t>(idx)]);
    }
    return acc.value();
}

// Closed form: T(l) = -p^2(p-1)^3/8 + p sum_d Q(d)/(1 - e(d l/p)).
inline cplx triple_exp_sum_formula(const PrimeContext& ctx, i64 l, const ExpSumTables* tables = nullptr) {
    i64 p = ctx.p;
    i64 r = detail::reduced_nonzero(ctx, l, "triple_exp_sum_formula");
    ExpSumTables local;
    if (!tables) {
        local = build_exp_sum_tables(ctx);
        tables = &local;
    }
    ComplexSum acc;
    i64 idx = 0;
    for (i64 d = 1; d < p; ++d) {
        idx += r;
        if (idx >= p) idx -= p;
        acc.add(tables->cinv[static_cast<size_t>(idx)] * tables->q[static_cast<size_t>(d)]);
    }
    double pd = static_cast<double>(p), md = static_cast<double>(p - 1);
    double main = -pd * pd * md * md * md / 8.0;
    return main + pd * acc.value();
}

}  // namespace invsum
