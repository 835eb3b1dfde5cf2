// invsum: inverse-product sums, character/exponential sums, and theorem
// statistics over F_p.
//
// Exit codes (stable scripting contract):
//   0 success, 1 verification failure, 2 usage error,
//   3 resource/cap refusal, 4 IO error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <invsum/characters.hpp>
#include <invsum/exp_sums.hpp>
#include <invsum/harness.hpp>
#include <invsum/identities.hpp>
#include <invsum/inverse_sums.hpp>
#include <invsum/modular.hpp>
#include <invsum/numeric.hpp>
#include <invsum/parallel.hpp>
#include <invsum/report_io.hpp>

namespace {

using namespace invsum;

constexpr i64 unset = INT64_MIN;

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

std::string fmt_ms(double ms) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", ms);
    return buf;
}

std::string fmt_cplx(cplx z) {
    std::string out = format_real(z.real());
    out += z.imag() < 0 ? '-' : '+';
    out += format_real(std::abs(z.imag()));
    out += 'i';
    return out;
}

i64 parse_i64(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::domain_error(std::string(what) + ": expected an integer, got '" + s + "'");
    }
}

std::pair<i64, i64> parse_range(const std::string& s) {
    size_t pos = s.find(':');
    if (pos == std::string::npos)
        throw std::domain_error("--range: expected LO:HI, got '" + s + "'");
    i64 lo = parse_i64(s.substr(0, pos), "--range LO");
    i64 hi = parse_i64(s.substr(pos + 1), "--range HI");
    if (lo > hi) throw std::domain_error("--range: need LO <= HI");
    return {lo, hi};
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

i64 env_budget() {
    const char* e = std::getenv("INVSUM_BUDGET");
    if (!e || !*e) return default_budget;
    i64 v = parse_i64(e, "INVSUM_BUDGET");
    if (v <= 0) throw std::domain_error("INVSUM_BUDGET: must be positive");
    return v;
}

bool affordable(double cost, i64 budget) { return cost <= static_cast<double>(budget); }

void require_param(bool present, const char* flag, const char* quantity) {
    if (!present)
        throw std::domain_error(std::string("compute ") + quantity + ": " + flag + " is required");
}

// ---- verify-identities ------------------------------------------------

int cmd_verify(const VerifyOptions& opt) {
    Stopwatch total;
    std::vector<IdentityCheck> rows = verify_identities(opt);
    double ms = total.ms();
    int breaches = 0, skipped = 0;
    for (const IdentityCheck& r : rows) {
        if (r.skipped) {
            ++skipped;
            std::cout << "SKIP  " << r.name << " p=" << r.p << " (" << r.param << ")\n";
            continue;
        }
        if (!r.pass) ++breaches;
        char dev[32], tol[32];
        std::snprintf(dev, sizeof dev, "%.6g", r.deviation);
        std::snprintf(tol, sizeof tol, "%.6g", r.tolerance);
        std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name << " p=" << r.p
                  << " max_dev=" << dev << " tol=" << tol
                  << (r.param.empty() ? "" : " at " + r.param) << "\n";
        if (!r.pass)
            std::cerr << "breach: " << r.name << " p=" << r.p << " " << r.param
                      << " deviation=" << dev << " tolerance=" << tol << "\n";
    }
    std::cout << "identities: " << rows.size() << " rows, " << breaches << " breaches, "
              << skipped << " skipped, primes " << opt.lo << ".." << opt.hi
              << ", elapsed_ms=" << fmt_ms(ms) << "\n";
    return breaches == 0 ? 0 : 1;
}

// ---- compute -----------------------------------------------------------

void compute_sd(const PrimeContext& ctx, i64 d, i64 budget) {
    i64 p = ctx.p;
    std::cout << "quantity=S(d) p=" << p << " d=" << d << "\n";
    Stopwatch sw;
    i64 exact = s_d_bruteforce(ctx, d);
    std::cout << "bruteforce value=" << exact << " exact=1 elapsed_ms=" << fmt_ms(sw.ms())
              << "\n";
    double float_cost = 2.0 * static_cast<double>(p - 1) * static_cast<double>(p - 1);
    if (!affordable(float_cost, budget)) {
        std::cout << "char_formula/exp_formula skipped: estimated cost " << float_cost
                  << " exceeds budget " << budget << "\n";
        return;
    }
    Stopwatch sc;
    double c = s_d_char_formula(ctx, d);
    std::cout << "char_formula value=" << format_real(c) << " round=" << nearest_int(c)
              << " exact=0 elapsed_ms=" << fmt_ms(sc.ms()) << "\n";
    Stopwatch se;
    double e = s_d_exp_formula(ctx, d);
    std::cout << "exp_formula value=" << format_real(e) << " round=" << nearest_int(e)
              << " exact=0 elapsed_ms=" << fmt_ms(se.ms()) << "\n";
}

void compute_sk(const PrimeContext& ctx, i64 k, i64 d, i64 budget) {
    i64 p = ctx.p;
    if (k < 2) throw std::domain_error("compute sk: need --k >= 2");
    std::cout << "quantity=S_" << k << "(d) p=" << p << " d=" << d << "\n";
    double md = static_cast<double>(p - 1);
    double brute_cost = 1.0;
    for (i64 i = 0; i < k - 1; ++i) brute_cost *= md;
    double char_cost = 2.0 * md * md;
    bool can_brute = affordable(brute_cost, budget);
    bool can_char = affordable(char_cost, budget);
    if (!can_brute && !can_char) throw budget_error(std::min(brute_cost, char_cost), budget);
    if (can_brute) {
        Stopwatch sw;
        i128 v = s_k_bruteforce(ctx, k, d, budget);
        std::cout << "bruteforce value=" << i128_to_string(v) << " exact=1 elapsed_ms="
                  << fmt_ms(sw.ms()) << "\n";
    } else {
        std::cout << "bruteforce skipped: estimated cost " << brute_cost << " exceeds budget "
                  << budget << "\n";
    }
    if (can_char) {
        Stopwatch sw;
        double v = s_k_char_formula(ctx, k, d);
        std::cout << "char_formula value=" << format_real(v) << " round="
                  << nearest_int(v) << " exact=0 elapsed_ms=" << fmt_ms(sw.ms()) << "\n";
    } else {
        std::cout << "char_formula skipped: estimated cost " << char_cost << " exceeds budget "
                  << budget << "\n";
    }
}

void compute_m(const PrimeContext& ctx, i64 budget) {
    i64 p = ctx.p;
    double cost = static_cast<double>(p - 1) * static_cast<double>(p - 1);
    if (!affordable(cost, budget)) throw budget_error(cost, budget);
    std::cout << "quantity=M p=" << p << "\n";
    Stopwatch sw;
    double m = theorem2_m_exact(ctx);
    std::cout << "value=" << format_real(m) << " exact=1 elapsed_ms=" << fmt_ms(sw.ms()) << "\n";
    double main = theorem2_main_term(p);
    std::cout << "main_term=" << format_real(main)
              << " rel_dev=" << format_real(std::abs(m - main) / main) << "\n";
}

void compute_d(const PrimeContext& ctx, i64 l, i64 budget) {
    i64 p = ctx.p;
    std::cout << "quantity=D(l) p=" << p << " l=" << l << "\n";
    Stopwatch si;
    cplx ident = double_exp_sum_identity(ctx, l);
    std::cout << "identity value=" << fmt_cplx(ident) << " exact=0 elapsed_ms="
              << fmt_ms(si.ms()) << "\n";
    double cost = static_cast<double>(p - 1) * static_cast<double>(p - 1);
    if (!affordable(cost, budget)) {
        std::cout << "bruteforce skipped: estimated cost " << cost << " exceeds budget "
                  << budget << "\n";
        return;
    }
    Stopwatch sb;
    cplx brute = double_exp_sum_brute(ctx, l);
    std::cout << "bruteforce value=" << fmt_cplx(brute) << " exact=0 elapsed_ms="
              << fmt_ms(sb.ms()) << "\n";
    std::cout << "route_gap=" << format_real(std::abs(ident - brute)) << "\n";
}

void compute_t(const PrimeContext& ctx, i64 l, i64 budget) {
    i64 p = ctx.p;
    double md = static_cast<double>(p - 1);
    double formula_cost = 3.0 * md * md;
    if (!affordable(formula_cost, budget)) throw budget_error(formula_cost, budget);
    std::cout << "quantity=T(l) p=" << p << " l=" << l << "\n";
    Stopwatch sf;
    ExpSumTables tables = build_exp_sum_tables(ctx);
    cplx formula = triple_exp_sum_formula(ctx, l, &tables);
    std::cout << "formula value=" << fmt_cplx(formula) << " exact=0 elapsed_ms="
              << fmt_ms(sf.ms()) << "\n";
    double brute_cost = md * md * md;
    if (!affordable(brute_cost, budget)) {
        std::cout << "bruteforce skipped: estimated cost " << brute_cost << " exceeds budget "
                  << budget << "\n";
        return;
    }
    Stopwatch sb;
    cplx brute = triple_exp_sum_brute(ctx, l, nullptr, budget);
    std::cout << "bruteforce value=" << fmt_cplx(brute) << " exact=0 elapsed_ms="
              << fmt_ms(sb.ms()) << "\n";
    std::cout << "route_gap=" << format_real(std::abs(formula - brute)) << "\n";
}

void compute_kloosterman(const PrimeContext& ctx, i64 a, i64 b) {
    i64 p = ctx.p;
    std::cout << "quantity=kloosterman p=" << p << " a=" << a << " b=" << b << "\n";
    Stopwatch sw;
    cplx v = kloosterman(ctx, a, b);
    double bound = 2.0 * std::sqrt(static_cast<double>(p));
    std::cout << "value=" << fmt_cplx(v) << " exact=0 elapsed_ms=" << fmt_ms(sw.ms()) << "\n";
    std::cout << "abs=" << format_real(std::abs(v)) << " weil_bound=" << format_real(bound)
              << " ratio=" << format_real(std::abs(v) / bound) << "\n";
}

void compute_gauss(const PrimeContext& ctx, i64 j) {
    std::cout << "quantity=gauss p=" << ctx.p << " j=" << j << "\n";
    Stopwatch sw;
    DirichletCharacter chi = make_character(ctx, j);
    cplx tau = gauss_sum(chi);
    std::cout << "value=" << fmt_cplx(tau) << " exact=0 elapsed_ms=" << fmt_ms(sw.ms()) << "\n";
    std::cout << "abs=" << format_real(std::abs(tau))
              << " sqrt_p=" << format_real(std::sqrt(static_cast<double>(ctx.p))) << "\n";
}

void compute_l0(const PrimeContext& ctx, i64 j) {
    std::cout << "quantity=L(0,chi_j) p=" << ctx.p << " j=" << j << "\n";
    Stopwatch sw;
    DirichletCharacter chi = make_character(ctx, j);
    cplx v = l_zero(chi);
    bool exact_zero = !chi.odd();
    std::cout << "value=" << fmt_cplx(v) << " exact=" << (exact_zero ? 1 : 0)
              << " elapsed_ms=" << fmt_ms(sw.ms()) << "\n";
}

void compute_l1(const PrimeContext& ctx, i64 j, i64 budget) {
    i64 p = ctx.p;
    std::cout << "quantity=L(1,chi_j) p=" << p << " j=" << j << "\n";
    DirichletCharacter chi = make_character(ctx, j);
    Stopwatch sf;
    cplx fin = l_one(chi, LOneMethod::finite);
    std::cout << "finite value=" << fmt_cplx(fin) << " exact=0 elapsed_ms=" << fmt_ms(sf.ms())
              << "\n";
    double cost = std::max(1.0e6, static_cast<double>(p) * static_cast<double>(p));
    if (!affordable(cost, budget)) {
        std::cout << "truncated skipped: estimated cost " << cost << " exceeds budget "
                  << budget << "\n";
        return;
    }
    Stopwatch st;
    cplx tr = l_one(chi, LOneMethod::truncated);
    std::cout << "truncated value=" << fmt_cplx(tr) << " exact=0 elapsed_ms="
              << fmt_ms(st.ms()) << "\n";
    std::cout << "route_gap=" << format_real(std::abs(fin - tr)) << "\n";
}

void compute_thm1(const PrimeContext& ctx, i64 budget) {
    i64 p = ctx.p;
    double cost = static_cast<double>(p - 1) * static_cast<double>(p - 1);
    if (!affordable(cost, budget)) throw budget_error(cost, budget);
    std::cout << "quantity=thm1 p=" << p << "\n";
    Stopwatch sw;
    std::vector<i64> s_tab = s_d_table(ctx);
    ErrorRecord a = theorem1_stats(ctx, &s_tab);
    ErrorRecord b = theorem1_stats_p3(ctx, &s_tab);
    double ms = sw.ms();
    for (const ErrorRecord& r : {a, b})
        std::cout << r.statistic << " observed=" << format_real(r.observed)
                  << " normalizer=" << format_real(r.normalizer)
                  << " ratio=" << format_real(r.ratio) << "\n";
    std::cout << "elapsed_ms=" << fmt_ms(ms) << "\n";
}

// ---- fit ---------------------------------------------------------------

int cmd_fit(const std::string& in_path, const std::string& format_hint) {
    std::string text = read_text_file(in_path);
    std::string format = format_hint;
    if (format.empty()) {
        size_t pos = text.find_first_not_of(" \t\r\n");
        format = (pos != std::string::npos && text[pos] == '{') ? "json" : "csv";
    }
    SweepReport rep = format == "json" ? report_from_json(text) : report_from_csv(text);
    FitResult fit = fit_exponent(rep.records);
    std::cout << "records=" << rep.records.size() << " used=" << fit.used
              << " excluded_zero=" << fit.excluded_zero << "\n";
    std::cout << "exponent=" << format_real(fit.exponent)
              << " log_constant=" << format_real(fit.log_constant)
              << " residual=" << format_real(fit.residual) << "\n";
    return 0;
}

// ---- main --------------------------------------------------------------

int run(int argc, char** argv) {
    CLI::App app{"inverse-product sums, character sums, and exponential-sum statistics modulo primes"};
    app.require_subcommand(1);

    i64 budget = env_budget();

    std::string ver_range = "3:97", ver_threads = "1";
    double tol_scale = 1e-8;
    auto* ver = app.add_subcommand("verify-identities",
                                   "run every identity suite over a prime range; exit 1 on any breach");
    ver->add_option("--range", ver_range, "prime range LO:HI")->capture_default_str();
    ver->add_option("--tol-scale", tol_scale, "tolerance scale for condition-aware bounds")
        ->capture_default_str();
    ver->add_option("--budget", budget, "max inner iterations per check");
    ver->add_option("--threads", ver_threads, "worker count or auto")->capture_default_str();

    std::string quantity;
    i64 p = 0, d = unset, k = 3, l = unset, ka = 1, kb = 1, j = 1;
    auto* comp = app.add_subcommand("compute", "print one quantity with every affordable route");
    comp->add_option("quantity", quantity, "sd|sk|d|t|m|kloosterman|gauss|l0|l1|thm1")
        ->required()
        ->check(CLI::IsMember({"sd", "sk", "d", "t", "m", "kloosterman", "gauss", "l0", "l1",
                               "thm1"}));
    comp->add_option("-p,--p", p, "odd prime modulus")->required();
    comp->add_option("--d", d, "target residue for sd/sk");
    comp->add_option("--k", k, "dimension for sk")->capture_default_str();
    comp->add_option("--l", l, "frequency for d/t");
    comp->add_option("--a", ka, "first kloosterman parameter")->capture_default_str();
    comp->add_option("--b", kb, "second kloosterman parameter")->capture_default_str();
    comp->add_option("--j", j, "character index for gauss/l0/l1")->capture_default_str();
    comp->add_option("--budget", budget, "max inner iterations");

    std::string sweep_range, stat_csv, format = "csv", out_path, sweep_threads = "auto";
    u64 seed = 0;
    auto* swp = app.add_subcommand("sweep", "tabulate statistics over a prime range into CSV or JSON");
    swp->add_option("--range", sweep_range, "prime range LO:HI")->required();
    swp->add_option("--stat", stat_csv, "statistic name(s), comma separated")->required();
    swp->add_option("--k", k, "dimension for thm4")->capture_default_str();
    swp->add_option("--budget", budget, "max inner iterations per statistic per prime");
    swp->add_option("--format", format, "serialization format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    swp->add_option("--out", out_path, "output path (stdout when omitted)");
    swp->add_option("--threads", sweep_threads, "worker count or auto")->capture_default_str();
    swp->add_option("--seed", seed, "seed for any sampled-l choices")->capture_default_str();

    std::string fit_in, fit_format;
    auto* fit = app.add_subcommand("fit", "re-fit the exponent from a saved report");
    fit->add_option("--in", fit_in, "report file")->required();
    fit->add_option("--format", fit_format, "csv or json (auto-detected when omitted)")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (budget <= 0) throw std::domain_error("--budget: must be positive");

    if (ver->parsed()) {
        VerifyOptions opt;
        std::tie(opt.lo, opt.hi) = parse_range(ver_range);
        opt.tol_scale = tol_scale;
        opt.budget = budget;
        opt.threads = resolve_threads(ver_threads);
        return cmd_verify(opt);
    }

    if (comp->parsed()) {
        PrimeContext ctx = build_context(p);
        if (quantity == "sd") {
            require_param(d != unset, "--d", "sd");
            compute_sd(ctx, d, budget);
        } else if (quantity == "sk") {
            require_param(d != unset, "--d", "sk");
            compute_sk(ctx, k, d, budget);
        } else if (quantity == "m") {
            compute_m(ctx, budget);
        } else if (quantity == "d") {
            require_param(l != unset, "--l", "d");
            compute_d(ctx, l, budget);
        } else if (quantity == "t") {
            require_param(l != unset, "--l", "t");
            compute_t(ctx, l, budget);
        } else if (quantity == "kloosterman") {
            compute_kloosterman(ctx, ka, kb);
        } else if (quantity == "gauss") {
            compute_gauss(ctx, j);
        } else if (quantity == "l0") {
            compute_l0(ctx, j);
        } else if (quantity == "l1") {
            compute_l1(ctx, j, budget);
        } else {
            compute_thm1(ctx, budget);
        }
        return 0;
    }

    if (swp->parsed()) {
        SweepConfig cfg;
        std::tie(cfg.lo, cfg.hi) = parse_range(sweep_range);
        cfg.statistics = split_commas(stat_csv);
        if (cfg.statistics.empty()) throw std::domain_error("--stat: no statistic names given");
        cfg.k = k;
        cfg.budget = budget;
        cfg.threads = resolve_threads(sweep_threads);
        cfg.seed = seed;
        Stopwatch total;
        SweepReport rep = run_sweep(cfg);
        double ms = total.ms();
        for (const std::string& note : rep.notes) std::cerr << "note: " << note << "\n";
        if (rep.fit)
            std::cerr << "fit: exponent=" << format_real(rep.fit->exponent)
                      << " log_constant=" << format_real(rep.fit->log_constant)
                      << " residual=" << format_real(rep.fit->residual) << "\n";
        std::cerr << "sweep: " << rep.records.size() << " records, elapsed_ms=" << fmt_ms(ms)
                  << "\n";
        std::string payload;
        if (format == "csv") {
            payload = report_to_csv(rep);
        } else {
            nlohmann::ordered_json echo = config_echo_json(cfg, format);
            echo["threads"] = sweep_threads;  // echo the request, not the resolved count
            payload = report_to_json(rep, echo).dump(2);
            payload += '\n';
        }
        if (!out_path.empty())
            write_text_file(out_path, payload);
        else
            std::cout << payload;
        return 0;
    }

    return cmd_fit(fit_in, fit_format);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const invsum::budget_error& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 3;
    } catch (const std::overflow_error& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 3;
    } catch (const invsum::report_parse_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
