// Acceptance gate: one line per criterion, exit code = number of failures.
// Every tolerance and recorded constant is pinned here, in code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <invsum/characters.hpp>
#include <invsum/exp_sums.hpp>
#include <invsum/harness.hpp>
#include <invsum/identities.hpp>
#include <invsum/inverse_sums.hpp>
#include <invsum/modular.hpp>
#include <invsum/parallel.hpp>
#include <invsum/report_io.hpp>

using namespace invsum;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt(double v, const char* spec = "%.4g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void report(int idx, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << idx << ": " << detail
              << std::endl;
    if (!pass) ++failures;
}

template <typename F>
void criterion(int idx, F&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(idx, false, std::string("unexpected error: ") + e.what());
    }
}

// 1. Exact-identity suites over every prime 3 <= p <= 500 within the
//    condition-aware 1e-8 tolerance scale, single-threaded, under 5 minutes.
void criterion_1() {
    Timer t;
    VerifyOptions opt;
    opt.lo = 3;
    opt.hi = 500;
    opt.tol_scale = 1e-8;
    opt.threads = 1;
    std::vector<IdentityCheck> rows = verify_identities(opt);
    double sec = t.seconds();
    const std::vector<std::string> gated{"lemma1", "lemma2", "lemma3", "double_exp_routes",
                                         "triple_exp_routes"};
    int gate_rows = 0, gate_breaches = 0, other_breaches = 0;
    for (const IdentityCheck& r : rows) {
        if (r.skipped) continue;
        bool in_gate = std::find(gated.begin(), gated.end(), r.name) != gated.end();
        if (in_gate) {
            ++gate_rows;
            if (!r.pass) ++gate_breaches;
        } else if (!r.pass) {
            ++other_breaches;
        }
    }
    size_t n_primes = primes_in_range(3, 500).size();
    bool pass = gate_breaches == 0 && gate_rows == static_cast<int>(5 * n_primes) && sec < 300.0;
    std::ostringstream d;
    d << "geometric, twisted, and double/triple sum identities: " << gate_rows
      << " suite rows over the " << n_primes << " primes in [3,500], " << gate_breaches
      << " tolerance breaches at scale 1e-8, " << fmt(sec, "%.1f")
      << "s single-threaded (limit 300s); remaining suites: " << other_breaches
      << " breaches";
    report(1, pass, d.str());
}

// 2. Route equivalence: exact pair sums match both analytic routes after
//    rounding for every d, p <= 200; dimensions 2..4 agree for p <= 60.
void criterion_2() {
    Timer t;
    long checked = 0;
    int breaches = 0;
    double worst_gap = 0.0;
    for (i64 p : primes_in_range(3, 200)) {
        PrimeContext ctx = build_context(p);
        std::vector<i64> s_tab = s_d_table(ctx);
        std::vector<cplx> w = weighted_char_sum_table(ctx);
        std::vector<cplx> a = weighted_inverse_exp_table(ctx);
        for (i64 d = 1; d < p; ++d) {
            i64 exact = s_tab[static_cast<size_t>(d)];
            double via_char = s_d_char_formula(ctx, d, &w);
            double via_exp = s_d_exp_formula(ctx, d, &a);
            if (nearest_int(via_char) != exact || nearest_int(via_exp) != exact) ++breaches;
            worst_gap = std::max({worst_gap, rounding_gap(via_char), rounding_gap(via_exp)});
            ++checked;
        }
    }
    long k_checked = 0;
    for (i64 p : primes_in_range(3, 60)) {
        PrimeContext ctx = build_context(p);
        std::vector<cplx> w = weighted_char_sum_table(ctx);
        for (i64 k = 2; k <= 4; ++k) {
            std::vector<i128> tab = s_k_bruteforce_table(ctx, k);
            for (i64 d = 1; d < p; ++d) {
                double f = s_k_char_formula(ctx, k, d, &w);
                if (nearest_int(f) != static_cast<i64>(tab[static_cast<size_t>(d)])) ++breaches;
                worst_gap = std::max(worst_gap, rounding_gap(f));
                ++k_checked;
            }
        }
    }
    std::ostringstream d;
    d << "route equivalence: " << checked << " pair-sum residues (p <= 200) and " << k_checked
      << " k-fold residues (p <= 60, k = 2..4), " << breaches
      << " rounding breaches, worst gap " << fmt(worst_gap) << " (slack 0.4), "
      << fmt(t.seconds(), "%.1f") << "s";
    report(2, breaches == 0, d.str());
}

// 3. Known small values, asserted exactly.
void criterion_3() {
    PrimeContext c5 = build_context(5);
    PrimeContext c3 = build_context(3);
    bool pass = s_d_bruteforce(c5, 1) == 29 && s_d_bruteforce(c5, 2) == 28 &&
                s_d_bruteforce(c5, 3) == 22 && s_d_bruteforce(c5, 4) == 21 &&
                theorem2_m_exact(c5) == 50.0 && s_k_bruteforce(c3, 3, 1) == 13;
    report(3, pass,
           "known values at p=5: S(1)=29, S(2)=28, S(3)=22, S(4)=21, M=50; S_3(1)=13 at p=3 "
           "(all exact)");
}

// 4. Gauss-sum magnitude within 1e-8 relative for every non-principal
//    character, p <= 500.
void criterion_4() {
    Timer t;
    double worst = 0.0;
    long count = 0;
    for (i64 p : primes_in_range(3, 500)) {
        PrimeContext ctx = build_context(p);
        std::vector<cplx> roots = unit_roots(p);
        double root_p = std::sqrt(static_cast<double>(p));
        for (i64 j = 1; j < p - 1; ++j) {
            DirichletCharacter chi = make_character(ctx, j);
            std::vector<cplx> vals = chi_values(chi);
            double mag = std::abs(gauss_sum(chi, roots, vals));
            worst = std::max(worst, std::abs(mag - root_p) / root_p);
            ++count;
        }
    }
    std::ostringstream d;
    d << "|tau(chi)| = sqrt(p): " << count << " non-principal characters over p <= 500, worst "
      << "relative error " << fmt(worst) << " (tolerance 1e-8), " << fmt(t.seconds(), "%.1f")
      << "s";
    report(4, worst < 1e-8, d.str());
}

// 5. Empirical exponent of the max deviation over primes in [100, 3000]:
//    2.3 <= alpha <= 2.6 with the log^2 p factor absorbed (the plain log-log
//    slope is also printed; desk-scale log factors push it above the window).
void criterion_5() {
    Timer t;
    SweepConfig cfg;
    cfg.lo = 100;
    cfg.hi = 3000;
    cfg.statistics = {"thm1"};
    cfg.threads = resolve_threads("auto");
    SweepReport rep = run_sweep(cfg);
    FitResult plain = fit_exponent(rep.records);
    std::vector<ErrorRecord> absorbed = rep.records;
    for (ErrorRecord& r : absorbed) {
        double lp = std::log(static_cast<double>(r.p));
        r.observed /= lp * lp;
    }
    FitResult alog = fit_exponent(absorbed);
    bool pass = 2.3 <= alog.exponent && alog.exponent <= 2.6;
    std::ostringstream d;
    d << "max-deviation exponent over " << rep.records.size()
      << " primes in [100,3000]: alpha = " << fmt(alog.exponent, "%.3f")
      << " in [2.3, 2.6] with log^2 p absorbed (plain slope " << fmt(plain.exponent, "%.3f")
      << ", residual " << fmt(alog.residual) << "), " << fmt(t.seconds(), "%.1f") << "s";
    report(5, pass, d.str());
}

// 6. Mean-square convergence: relative deviation below 0.15 on [500, 3000]
//    with a decreasing trend (strictly decreasing medians of five contiguous
//    equal-count buckets), and the fourth-moment identity within 1e-6 for
//    p <= 500.
void criterion_6() {
    Timer t;
    SweepConfig cfg;
    cfg.lo = 500;
    cfg.hi = 3000;
    cfg.statistics = {"thm2"};
    cfg.threads = resolve_threads("auto");
    SweepReport rep = run_sweep(cfg);
    std::vector<double> rel;
    double max_rel = 0.0;
    for (const ErrorRecord& r : rep.records) {
        double v = std::abs(r.observed - r.main_term) / r.main_term;
        rel.push_back(v);
        max_rel = std::max(max_rel, v);
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        size_t n = v.size();
        return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    size_t n = rel.size();
    std::vector<double> meds;
    for (size_t b = 0; b < 5; ++b) {
        std::vector<double> bucket(rel.begin() + static_cast<long>(b * n / 5),
                                   rel.begin() + static_cast<long>((b + 1) * n / 5));
        meds.push_back(median(bucket));
    }
    bool mono = true;
    for (size_t b = 1; b < meds.size(); ++b) mono = mono && meds[b] < meds[b - 1];

    double worst_fm = 0.0;
    for (i64 p : primes_in_range(3, 500)) {
        PrimeContext ctx = build_context(p);
        worst_fm = std::max(worst_fm, fourth_moment_check(ctx).rel_err);
    }
    bool pass = max_rel < 0.15 && mono && worst_fm <= 1e-6;
    std::ostringstream d;
    d << "mean-square convergence over " << n << " primes in [500,3000]: max relative deviation "
      << fmt(max_rel, "%.4f") << " (< 0.15), bucket medians";
    for (double m : meds) d << " " << fmt(m, "%.4f");
    d << (mono ? " strictly decreasing" : " NOT decreasing")
      << "; fourth-moment identity worst relative error " << fmt(worst_fm)
      << " (tolerance 1e-6) for p <= 500, " << fmt(t.seconds(), "%.1f") << "s";
    report(6, pass, d.str());
}

// 7. Bound ratios: Weil for every parameter pair over p <= 500 (via the
//    collapse onto S(1, ab)); coefficient-sum and cosecant ratios on
//    (200, 3000] never exceed their recorded p <= 200 maxima.
void criterion_7() {
    Timer t;
    double worst_weil = 0.0;
    for (i64 p : primes_in_range(3, 500)) {
        PrimeContext ctx = build_context(p);
        double bound = 2.0 * std::sqrt(static_cast<double>(p));
        for (i64 m = 1; m < p; ++m)
            worst_weil = std::max(worst_weil, std::abs(kloosterman(ctx, 1, m)) / bound);
    }
    bool weil_ok = worst_weil <= 1.0 + 1e-9;

    SweepConfig cfg;
    cfg.lo = 3;
    cfg.hi = 3000;
    cfg.statistics = {"lemma4", "lemma5"};
    cfg.threads = resolve_threads("auto");
    SweepReport rep = run_sweep(cfg);
    double rec4 = 0.0, ext4 = 0.0, rec5 = 0.0, ext5 = 0.0;
    for (const ErrorRecord& r : rep.records) {
        if (r.statistic == "lemma4_max") {
            double& slot = r.p <= 200 ? rec4 : ext4;
            slot = std::max(slot, r.ratio);
        } else if (r.statistic == "lemma5_ratio") {
            double& slot = r.p <= 200 ? rec5 : ext5;
            slot = std::max(slot, r.ratio);
        }
    }
    bool l4_ok = ext4 <= rec4;
    bool l5_ok = ext5 <= rec5;
    std::ostringstream d;
    d << "bound ratios: Weil max " << fmt(worst_weil, "%.6f")
      << " <= 1+1e-9 over all parameters, p <= 500 (via S(a,b)=S(1,ab)); coefficient-sum ratio "
      << fmt(ext4, "%.4f") << " beyond p=200 vs recorded " << fmt(rec4, "%.4f")
      << "; cosecant ratio " << fmt(ext5, "%.4f") << " beyond p=200 vs recorded "
      << fmt(rec5, "%.4f") << "; " << fmt(t.seconds(), "%.1f") << "s";
    report(7, weil_ok && l4_ok && l5_ok, d.str());
}

// 8. Triple-sum deviation bounded by the recorded constant 0.10 for every l,
//    p <= 300, and the two T routes agree.
void criterion_8() {
    Timer t;
    SweepConfig cfg;
    cfg.lo = 3;
    cfg.hi = 300;
    cfg.statistics = {"thm6"};
    cfg.threads = resolve_threads("auto");
    SweepReport rep = run_sweep(cfg);
    double worst_ratio = 0.0;
    for (const ErrorRecord& r : rep.records) worst_ratio = std::max(worst_ratio, r.ratio);
    bool sampled = false;
    for (const std::string& note : rep.notes)
        if (note.find("sampled") != std::string::npos) sampled = true;
    bool ratio_ok = !sampled && rep.records.size() == primes_in_range(3, 300).size() &&
                    worst_ratio <= 0.10;

    double worst_gap = 0.0;
    for (i64 p : primes_in_range(3, 60)) {
        PrimeContext ctx = build_context(p);
        ExpSumTables tab = build_exp_sum_tables(ctx);
        std::vector<i128> s3 = s_k_bruteforce_table(ctx, 3);
        for (i64 l = 1; l < p; ++l) {
            cplx brute = triple_exp_sum_brute(ctx, l, &s3);
            cplx formula = triple_exp_sum_formula(ctx, l, &tab);
            worst_gap = std::max(worst_gap,
                                 std::abs(brute - formula) / std::max(1.0, std::abs(brute)));
        }
    }
    bool agree = worst_gap <= 1e-6;
    std::ostringstream d;
    d << "triple-sum deviation: all l over every prime p <= 300, max ratio "
      << fmt(worst_ratio, "%.4f") << " <= recorded 0.10 (no sampling); route agreement worst "
      << "relative gap " << fmt(worst_gap) << " (tolerance 1e-6) for p <= 60, "
      << fmt(t.seconds(), "%.1f") << "s";
    report(8, ratio_ok && agree, d.str());
}

// 9. Byte-identical CSV across repeated runs and across thread counts,
//    including a config that exercises the seeded sampling path.
void criterion_9() {
    Timer t;
    SweepConfig sampled;
    sampled.lo = 3;
    sampled.hi = 150;
    sampled.statistics = {"thm6"};
    sampled.budget = 50'000;  // forces sampling above p = 109
    sampled.seed = 7;
    sampled.threads = 1;
    std::string a = report_to_csv(run_sweep(sampled));
    std::string b = report_to_csv(run_sweep(sampled));
    sampled.threads = resolve_threads("auto");
    std::string c = report_to_csv(run_sweep(sampled));
    sampled.threads = 5;
    std::string d4 = report_to_csv(run_sweep(sampled));

    SweepConfig mixed;
    mixed.lo = 3;
    mixed.hi = 100;
    mixed.statistics = {"thm1", "thm2", "cor1"};
    mixed.threads = 1;
    std::string m1 = report_to_csv(run_sweep(mixed));
    mixed.threads = resolve_threads("auto");
    std::string m2 = report_to_csv(run_sweep(mixed));

    bool pass = a == b && a == c && a == d4 && m1 == m2 && !a.empty() && !m1.empty();
    std::ostringstream d;
    d << "determinism: byte-identical CSV across repeated runs and threads {1, auto, 5} for a "
      << "seeded sampling sweep and a three-statistic sweep (" << a.size() + m1.size()
      << " bytes compared), " << fmt(t.seconds(), "%.1f") << "s";
    report(9, pass, d.str());
}

}  // namespace

int main() {
    criterion(1, criterion_1);
    criterion(2, criterion_2);
    criterion(3, criterion_3);
    criterion(4, criterion_4);
    criterion(5, criterion_5);
    criterion(6, criterion_6);
    criterion(7, criterion_7);
    criterion(8, criterion_8);
    criterion(9, criterion_9);
    std::cout << "acceptance: " << (9 - failures) << " of 9 criteria passed" << std::endl;
    return failures;
}
