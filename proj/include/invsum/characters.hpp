#pragma once

// Dirichlet characters mod an odd prime p, Gauss sums, the weighted character
// sum W_chi = sum_a a*chi(a), and the L-values at s = 0 and s = 1 that the
// closed forms of the inverse-product sums run through.
//
// chi_j(a) = e(j * dlog(a) / (p-1)) for the fixed least primitive root g, so
// j = 0 is principal and chi_j(-1) = (-1)^j decides parity.

#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "invsum/modular.hpp"
#include "invsum/numeric.hpp"

namespace invsum {

struct DirichletCharacter {
    const PrimeContext* ctx = nullptr;
    i64 j = 0;  // normalized to [0, p-2]

    bool principal() const { return j == 0; }
    bool odd() const { return (j & 1) != 0; }
};

inline DirichletCharacter make_character(const PrimeContext& ctx, i64 j) {
    i64 m = ctx.p - 1;
    i64 r = j % m;
    if (r < 0) r += m;
    return {&ctx, r};
}

enum class Parity { all, odd, even };

inline std::vector<DirichletCharacter> enumerate_characters(const PrimeContext& ctx, Parity parity = Parity::all) {
    std::vector<DirichletCharacter> out;
    for (i64 j = 0; j < ctx.p - 1; ++j) {
        if (parity == Parity::odd && (j & 1) == 0) continue;
        if (parity == Parity::even && (j & 1) == 1) continue;
        out.push_back({&ctx, j});
    }
    return out;
}

inline cplx chi_eval(const DirichletCharacter& chi, i64 a) {
    const PrimeContext& c = *chi.ctx;
    i64 r = a % c.p;
    if (r < 0) r += c.p;
    if (r == 0) return {0.0, 0.0};
    return unit_root(c.p - 1, chi.j * c.dlog_of(r));
}

// chi(a) for a = 0..p-1 in one pass over the dlog table.
inline std::vector<cplx> chi_values(const DirichletCharacter& chi) {
    const PrimeContext& c = *chi.ctx;
    i64 m = c.p - 1;
    std::vector<cplx> omega = unit_roots(m);
    std::vector<cplx> vals(static_cast<size_t>(c.p));
    vals[0] = {0.0, 0.0};
    for (i64 a = 1; a < c.p; ++a)
        vals[static_cast<size_t>(a)] = omega[static_cast<size_t>((chi.j * c.dlog_of(a)) % m)];
    return vals;
}

// tau(chi) = sum_a chi(a) e(a/p). Needs chi non-principal.
inline cplx gauss_sum(const DirichletCharacter& chi, const std::vector<cplx>& roots,
                      const std::vector<cplx>& vals) {
    if (chi.principal()) throw std::domain_error("gauss_sum: principal character");
    const PrimeContext& c = *chi.ctx;
    ComplexSum acc;
    for (i64 a = 1; a < c.p; ++a)
        acc.add(vals[static_cast<size_t>(a)] * roots[static_cast<size_t>(a)]);
    return acc.value();
}

inline cplx gauss_sum(const DirichletCharacter& chi) {
    return gauss_sum(chi, unit_roots(chi.ctx->p), chi_values(chi));
}

// W_chi = sum_{a=1}^{p-1} a * chi(a).
inline cplx weighted_char_sum(const DirichletCharacter& chi, const std::vector<cplx>& vals) {
    const PrimeContext& c = *chi.ctx;
    ComplexSum acc;
    for (i64 a = 1; a < c.p; ++a)
        acc.add(static_cast<double>(a) * vals[static_cast<size_t>(a)]);
    return acc.value();
}

inline cplx weighted_char_sum(const DirichletCharacter& chi) {
    return weighted_char_sum(chi, chi_values(chi));
}

// W_chi for every j at once: W[j] = sum_t g^t * omega[(j*t) mod (p-1)].
// Index stepping keeps it O(p^2) with a deterministic summation order.
inline std::vector<cplx> weighted_char_sum_table(const PrimeContext& ctx) {
    i64 p = ctx.p, m = p - 1;
    std::vector<cplx> omega = unit_roots(m);
    std::vector<double> pow_g(static_cast<size_t>(m));
    {
        i64 val = 1;
        for (i64 t = 0; t < m; ++t) {
            pow_g[static_cast<size_t>(t)] = static_cast<double>(val);
            val = static_cast<i64>(mulmod_u64(static_cast<u64>(val), static_cast<u64>(ctx.g), static_cast<u64>(p)));
        }
    }
    std::vector<cplx> w(static_cast<size_t>(m));
    for (i64 j = 0; j < m; ++j) {
        ComplexSum acc;
        i64 idx = 0;
        for (i64 t = 0; t < m; ++t) {
            acc.add(pow_g[static_cast<size_t>(t)] * omega[static_cast<size_t>(idx)]);
            idx += j;
            if (idx >= m) idx -= m;
        }
        w[static_cast<size_t>(j)] = acc.value();
    }
    return w;
}

// L(0, chi) = -(1/p) W_chi for odd chi; identically zero for even
// non-principal chi (the terms cancel in pairs a <-> p-a).
inline cplx l_zero(const DirichletCharacter& chi) {
    if (chi.principal()) throw std::domain_error("l_zero: principal character");
    if (!chi.odd()) return {0.0, 0.0};
    cplx w = weighted_char_sum(chi);
    return -w / static_cast<double>(chi.ctx->p);
}

enum class LOneMethod { finite, truncated };

// L(1, chi) for odd non-principal chi.
//  finite:    (i pi / p^2) * tau(chi) * conj(W_chi), the closed form through
//             the generalized Bernoulli number B_{1, conj(chi)} = conj(W)/p.
//  truncated: direct Dirichlet series to N = max(10^6, p^2) rounded up to a
//             multiple of p (so the character prefix sum vanishes at N), plus
//             the first-order Abel tail mu/(N+1) with mu the mean of the
//             prefix sums over one period; the remaining tail is O(p^1.5 log p / N^2).
inline cplx l_one(const DirichletCharacter& chi, LOneMethod method) {
    if (chi.principal()) throw std::domain_error("l_one: principal character");
    if (!chi.odd()) throw std::domain_error("l_one: even character not supported");
    const PrimeContext& c = *chi.ctx;
    double p = static_cast<double>(c.p);
    std::vector<cplx> vals = chi_values(chi);
    if (method == LOneMethod::finite) {
        cplx tau = gauss_sum(chi, unit_roots(c.p), vals);
        cplx w = weighted_char_sum(chi, vals);
        return cplx(0.0, pi / (p * p)) * tau * std::conj(w);
    }
    i64 n_target = std::max<i64>(1'000'000, c.p * c.p);
    i64 n_cut = ((n_target + c.p - 1) / c.p) * c.p;
    ComplexSum acc;
    for (i64 n = 1; n <= n_cut; ++n)
        acc.add(vals[static_cast<size_t>(n % c.p)] / static_cast<double>(n));
    ComplexSum prefix_mean;
    cplx prefix{0.0, 0.0};
    for (i64 r = 0; r < c.p; ++r) {
        // prefix = C(r) = sum_{m<=r} chi(m)
        prefix += vals[static_cast<size_t>(r)];
        prefix_mean.add(prefix);
    }
    cplx mu = prefix_mean.value() / p;
    return acc.value() + mu / static_cast<double>(n_cut + 1);
}

}  // namespace invsum
