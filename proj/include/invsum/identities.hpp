#pragma once

// Identity verification suites: every exact identity the formulas satisfy,
// checked over a prime range with condition-aware tolerances (a base scale of
// 1e-8 times the magnitude of what was summed). One row per (suite, p) with
// the worst parameter recorded; expensive suites are skipped (and say so)
// when they exceed the budget or their stated domain.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "invsum/characters.hpp"
#include "invsum/exp_sums.hpp"
#include "invsum/harness.hpp"
#include "invsum/inverse_sums.hpp"
#include "invsum/modular.hpp"
#include "invsum/numeric.hpp"
#include "invsum/parallel.hpp"

namespace invsum {

struct IdentityCheck {
    std::string name;
    i64 p = 0;
    std::string param;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    bool skipped = false;
};

struct VerifyOptions {
    i64 lo = 3;
    i64 hi = 97;
    double tol_scale = 1e-8;
    i64 budget = default_budget;
    int threads = 1;
};

namespace detail {

struct WorstCase {
    double dev = 0.0;
    std::string param;
    void update(double d, const std::string& desc) {
        if (d > dev) {
            dev = d;
            param = desc;
        }
    }
};

inline IdentityCheck finish(const std::string& name, i64 p, const WorstCase& w, double tol) {
    return {name, p, w.param, w.dev, tol, w.dev <= tol, false};
}

inline IdentityCheck skip(const std::string& name, i64 p, const std::string& why) {
    return {name, p, why, 0.0, 0.0, true, true};
}

inline std::vector<IdentityCheck> verify_one_prime(i64 p, const VerifyOptions& opt) {
    std::vector<IdentityCheck> rows;
    PrimeContext ctx = build_context(p);
    ExpSumTables tab = build_exp_sum_tables(ctx);
    double csc = cosecant_sum(p);
    double pd = static_cast<double>(p);
    double sum_a = pd * (pd - 1.0) / 2.0;

    // Lemma 1: sum b z^b = -p/(1-z) for every z = e(k/p) != 1.
    {
        WorstCase w;
        for (i64 k = 1; k < p; ++k) {
            auto [lhs, rhs] = lemma1_check(p, k);
            w.update(std::abs(lhs - rhs), "k=" + std::to_string(k));
        }
        // |rhs| <= p/(2 sin(pi/p)); conditioning is the weighted term sum.
        double tol = opt.tol_scale * (sum_a + pd / (2.0 * std::sin(pi / pd)));
        rows.push_back(finish("lemma1", p, w, tol));
    }

    // Lemma 2: sum 1/(1-z^b) = (p-1)/2.
    {
        WorstCase w;
        for (i64 k = 1; k < p; ++k)
            w.update(std::abs(lemma2_sum(p, k) - cplx((pd - 1.0) / 2.0, 0.0)), "k=" + std::to_string(k));
        rows.push_back(finish("lemma2", p, w, opt.tol_scale * (csc + pd)));
    }

    // Lemma 3: sum z^{-db}/(1-z^b) = (p-1)/2 - d, all (k, d); O(p^3).
    {
        double cost = (pd - 1.0) * (pd - 1.0) * (pd - 1.0);
        if (cost > static_cast<double>(opt.budget)) {
            rows.push_back(skip("lemma3", p, "cost " + std::to_string(cost) + " exceeds budget"));
        } else {
            WorstCase w;
            for (i64 k = 1; k < p; ++k)
                for (i64 d = 1; d < p; ++d) {
                    cplx closed((pd - 1.0) / 2.0 - static_cast<double>(d), 0.0);
                    double dev = std::abs(lemma3_sum(p, k, d, &tab.roots) - closed);
                    if (dev > w.dev)
                        w.update(dev, "k=" + std::to_string(k) + " d=" + std::to_string(d));
                }
            rows.push_back(finish("lemma3", p, w, opt.tol_scale * (csc + pd)));
        }
    }

    // Q/S bridge: Q(d) = p(p-1)^2/4 - S(d) for all d.
    {
        WorstCase w;
        double main = pd * (pd - 1.0) * (pd - 1.0) / 4.0;
        double max_a = 0.0;
        for (i64 k = 1; k < p; ++k) max_a = std::max(max_a, std::abs(tab.a[static_cast<size_t>(k)]));
        for (i64 d = 1; d < p; ++d) {
            cplx expect(main - static_cast<double>(tab.s[static_cast<size_t>(d)]), 0.0);
            w.update(std::abs(tab.q[static_cast<size_t>(d)] - expect), "d=" + std::to_string(d));
        }
        rows.push_back(finish("exptemp_q", p, w, opt.tol_scale * (csc * max_a + main)));
    }

    // double sum routes: brute grouping vs closed form, all l.
    {
        WorstCase w;
        for (i64 l = 1; l < p; ++l)
            w.update(std::abs(double_exp_sum_brute(ctx, l, &tab) - double_exp_sum_identity(ctx, l)),
                     "l=" + std::to_string(l));
        rows.push_back(finish("double_exp_routes", p, w, opt.tol_scale * (sum_a * sum_a + pd * sum_a)));
    }

    // triple sum routes: brute grouping vs closed form, all l; needs the exact
    // S_3 table, cost (p-1)^3.
    {
        double cost = (pd - 1.0) * (pd - 1.0) * (pd - 1.0);
        if (cost > static_cast<double>(opt.budget)) {
            rows.push_back(skip("triple_exp_routes", p, "cost " + std::to_string(cost) + " exceeds budget"));
        } else {
            std::vector<i128> s3 = s_k_bruteforce_table(ctx, 3, opt.budget);
            WorstCase w;
            for (i64 l = 1; l < p; ++l)
                w.update(std::abs(triple_exp_sum_brute(ctx, l, &s3) - triple_exp_sum_formula(ctx, l, &tab)),
                         "l=" + std::to_string(l));
            rows.push_back(finish("triple_exp_routes", p, w, opt.tol_scale * (sum_a * sum_a * sum_a)));
        }
    }

    // Orthogonality: sum_l e(-dl/p) D(l) = p S(d) - (p(p-1)/2)^2, all d (p <= 100).
    if (p <= 100) {
        std::vector<cplx> dvals(static_cast<size_t>(p));
        double sum_abs_d = 0.0;
        for (i64 l = 1; l < p; ++l) {
            dvals[static_cast<size_t>(l)] = double_exp_sum_identity(ctx, l);
            sum_abs_d += std::abs(dvals[static_cast<size_t>(l)]);
        }
        WorstCase w;
        for (i64 d = 1; d < p; ++d) {
            ComplexSum acc;
            for (i64 l = 1; l < p; ++l) {
                i64 idx = static_cast<i64>((static_cast<i128>(d) * l) % p);
                acc.add(std::conj(tab.roots[static_cast<size_t>(idx)]) * dvals[static_cast<size_t>(l)]);
            }
            cplx rhs(pd * static_cast<double>(tab.s[static_cast<size_t>(d)]) - sum_a * sum_a, 0.0);
            w.update(std::abs(acc.value() - rhs), "d=" + std::to_string(d));
        }
        rows.push_back(finish("orthogonality_D", p, w, opt.tol_scale * (sum_abs_d + pd * sum_a * sum_a)));
    }

    // Rounding contract: both floating S(d) routes round to the exact integer.
    {
        std::vector<cplx> w_tab = weighted_char_sum_table(ctx);
        WorstCase w;
        for (i64 d = 1; d < p; ++d) {
            double exact = static_cast<double>(tab.s[static_cast<size_t>(d)]);
            w.update(std::abs(s_d_char_formula(ctx, d, &w_tab) - exact), "char d=" + std::to_string(d));
            w.update(std::abs(s_d_exp_formula(ctx, d, &tab.a) - exact), "exp d=" + std::to_string(d));
        }
        IdentityCheck row = finish("s_d_round_contract", p, w, rounding_slack);
        rows.push_back(row);

        // S_k routes for k = 3, 4 within the stated small-p domain.
        if (p <= 60) {
            WorstCase wk;
            for (i64 k = 3; k <= 4; ++k) {
                std::vector<i128> brute = s_k_bruteforce_table(ctx, k, opt.budget);
                for (i64 d = 1; d < p; ++d) {
                    double exact = i128_to_double(brute[static_cast<size_t>(d)]);
                    wk.update(std::abs(s_k_char_formula(ctx, k, d, &w_tab) - exact),
                              "k=" + std::to_string(k) + " d=" + std::to_string(d));
                }
            }
            rows.push_back(finish("s_k_round_contract", p, wk, rounding_slack));
        } else {
            rows.push_back(skip("s_k_round_contract", p, "outside stated domain p <= 60"));
        }

        // Gauss magnitude |tau| = sqrt(p), every non-principal chi.
        {
            WorstCase wg;
            for (i64 j = 1; j < p - 1; ++j) {
                DirichletCharacter chi{&ctx, j};
                std::vector<cplx> vals = chi_values(chi);
                cplx tau = gauss_sum(chi, tab.roots, vals);
                wg.update(std::abs(std::abs(tau) - std::sqrt(pd)), "j=" + std::to_string(j));
            }
            rows.push_back(finish("gauss_magnitude", p, wg, opt.tol_scale * pd));
        }

        // W_chi = 0 exactly for even non-principal chi.
        {
            WorstCase we;
            for (i64 j = 2; j < p - 1; j += 2)
                we.update(std::abs(w_tab[static_cast<size_t>(j)]), "j=" + std::to_string(j));
            if (p > 3) rows.push_back(finish("weighted_even_zero", p, we, opt.tol_scale * sum_a));
        }

        // |L(0,chi)| = (sqrt(p)/pi) |L(1,chi)| for odd chi (finite route).
        {
            WorstCase wl;
            for (i64 j = 1; j < p - 1; j += 2) {
                DirichletCharacter chi{&ctx, j};
                double l0 = std::abs(l_zero(chi));
                double l1 = std::abs(l_one(chi, LOneMethod::finite));
                wl.update(std::abs(l0 - std::sqrt(pd) / pi * l1), "j=" + std::to_string(j));
            }
            rows.push_back(finish("l_magnitude_relation", p, wl, opt.tol_scale * pd));
        }

        // L(1,chi) truncated Dirichlet series agrees with the finite form.
        if (p <= 500) {
            DirichletCharacter chi{&ctx, 1};
            double dev = std::abs(l_one(chi, LOneMethod::finite) - l_one(chi, LOneMethod::truncated));
            WorstCase wt;
            wt.update(dev, "j=1");
            rows.push_back(finish("l_one_truncation", p, wt, 1e-6 * (opt.tol_scale / 1e-8)));
        } else {
            rows.push_back(skip("l_one_truncation", p, "outside stated domain p <= 500"));
        }
    }

    // Fourth moment: M = (p^6/(pi^4(p-1))) sum over odd chi |L(1,chi)|^4.
    {
        FourthMomentCheck fm = fourth_moment_check(ctx, &tab.s);
        WorstCase w;
        w.update(fm.rel_err, "relative");
        rows.push_back(finish("fourth_moment", p, w, 1e-6 * (opt.tol_scale / 1e-8)));
    }

    // Kloosterman: reality, Weil bound, and the collapse S(a,b;p) = S(1,ab;p).
    {
        WorstCase wr, ww, wc;
        for (i64 m = 1; m < p; ++m) {
            cplx s1 = kloosterman(ctx, 1, m);
            wr.update(std::abs(s1.imag()), "m=" + std::to_string(m));
            ww.update(std::abs(s1) / (2.0 * std::sqrt(pd)) - 1.0, "m=" + std::to_string(m));
            cplx s2 = kloosterman(ctx, 2, m);
            cplx s1c = kloosterman(ctx, 1, (2 * m) % p);
            wc.update(std::abs(s2 - s1c), "a=2 b=" + std::to_string(m));
        }
        rows.push_back(finish("kloosterman_real", p, wr, opt.tol_scale * pd));
        IdentityCheck weil{"kloosterman_weil", p, ww.param, std::max(0.0, ww.dev), 1e-9, ww.dev <= 1e-9, false};
        rows.push_back(weil);
        rows.push_back(finish("kloosterman_collapse", p, wc, opt.tol_scale * pd));
    }

    return rows;
}

}  // namespace detail

inline std::vector<IdentityCheck> verify_identities(const VerifyOptions& opt) {
    if (opt.tol_scale <= 0.0) throw std::domain_error("verify_identities: tolerance scale must be positive");
    std::vector<i64> primes = primes_in_range(opt.lo, opt.hi);
    std::vector<i64> usable;
    for (i64 p : primes)
        if (p != 2) usable.push_back(p);
    if (usable.empty()) throw std::domain_error("verify_identities: no usable primes in range");
    std::vector<std::vector<IdentityCheck>> rows(usable.size());
    parallel_for(static_cast<i64>(usable.size()), opt.threads, [&](i64 begin, i64 end) {
        for (i64 i = begin; i < end; ++i)
            rows[static_cast<size_t>(i)] = detail::verify_one_prime(usable[static_cast<size_t>(i)], opt);
    });
    std::vector<IdentityCheck> out;
    for (auto& r : rows)
        for (IdentityCheck& c : r) out.push_back(std::move(c));
    return out;
}

}  // namespace invsum
