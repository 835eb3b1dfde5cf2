#pragma once

// CSV / JSON serialization of sweep reports, plus parsers so saved reports
// can be re-fit later. The CSV layout is a stable scripting contract:
// header bytes fixed, floats at 17 significant digits, exact integers
// rendered without a decimal point (%.17g does both), runtime_ms pinned
// to 0 so identical configs produce byte-identical files.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "harness.hpp"

namespace invsum {

class report_parse_error : public std::runtime_error {
public:
    explicit report_parse_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr const char* csv_header =
    "p,statistic,observed,main_term,normalizer,ratio,exact_flag,runtime_ms";

inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string report_to_csv(const SweepReport& rep) {
    std::string out(csv_header);
    out += '\n';
    for (const auto& r : rep.records) {
        out += std::to_string(r.p);
        out += ',';
        out += r.statistic;
        out += ',';
        out += format_real(r.observed);
        out += ',';
        out += format_real(r.main_term);
        out += ',';
        out += format_real(r.normalizer);
        out += ',';
        out += format_real(r.ratio);
        out += ',';
        out += r.exact ? '1' : '0';
        out += ",0\n";
    }
    return out;
}

inline nlohmann::ordered_json record_to_json(const ErrorRecord& r) {
    nlohmann::ordered_json j;
    j["p"] = r.p;
    j["statistic"] = r.statistic;
    j["observed"] = r.observed;
    j["main_term"] = r.main_term;
    j["normalizer"] = r.normalizer;
    j["ratio"] = r.ratio;
    j["exact_flag"] = r.exact;
    j["runtime_ms"] = 0;
    return j;
}

inline nlohmann::ordered_json report_to_json(const SweepReport& rep,
                                      const nlohmann::ordered_json& config_echo) {
    nlohmann::ordered_json j;
    j["records"] = nlohmann::ordered_json::array();
    for (const auto& r : rep.records) j["records"].push_back(record_to_json(r));
    if (rep.fit) {
        nlohmann::ordered_json f;
        f["exponent"] = rep.fit->exponent;
        f["log_constant"] = rep.fit->log_constant;
        f["residual"] = rep.fit->residual;
        j["fit"] = f;
    } else {
        j["fit"] = nullptr;
    }
    j["config_echo"] = config_echo;
    return j;
}

inline nlohmann::ordered_json config_echo_json(const SweepConfig& cfg,
                                               const std::string& format) {
    nlohmann::ordered_json j;
    j["range"] = {cfg.lo, cfg.hi};
    j["statistics"] = cfg.statistics;
    j["k"] = cfg.k;
    j["budget"] = cfg.budget;
    j["threads"] = cfg.threads;
    j["seed"] = cfg.seed;
    j["format"] = format;
    return j;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_real(const std::string& s, const char* field, size_t lineno) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw report_parse_error("line " + std::to_string(lineno) + ": bad " +
                                 field + " value '" + s + "'");
    }
}

inline i64 parse_int(const std::string& s, const char* field, size_t lineno) {
    try {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw report_parse_error("line " + std::to_string(lineno) + ": bad " +
                                 field + " value '" + s + "'");
    }
}

}  // namespace detail

inline SweepReport report_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw report_parse_error("empty CSV input");
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line != csv_header)
        throw report_parse_error("unexpected CSV header '" + line + "'");
    SweepReport rep;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 8)
            throw report_parse_error("line " + std::to_string(lineno) + ": expected 8 fields, got " +
                                     std::to_string(f.size()));
        ErrorRecord r;
        r.p = detail::parse_int(f[0], "p", lineno);
        r.statistic = f[1];
        r.observed = detail::parse_real(f[2], "observed", lineno);
        r.main_term = detail::parse_real(f[3], "main_term", lineno);
        r.normalizer = detail::parse_real(f[4], "normalizer", lineno);
        r.ratio = detail::parse_real(f[5], "ratio", lineno);
        i64 flag = detail::parse_int(f[6], "exact_flag", lineno);
        if (flag != 0 && flag != 1)
            throw report_parse_error("line " + std::to_string(lineno) + ": exact_flag must be 0 or 1");
        r.exact = flag == 1;
        rep.records.push_back(std::move(r));
    }
    return rep;
}

inline SweepReport report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw report_parse_error(std::string("invalid JSON: ") + e.what());
    }
    SweepReport rep;
    try {
        for (const auto& rj : j.at("records")) {
            ErrorRecord r;
            r.p = rj.at("p").get<i64>();
            r.statistic = rj.at("statistic").get<std::string>();
            r.observed = rj.at("observed").get<double>();
            r.main_term = rj.at("main_term").get<double>();
            r.normalizer = rj.at("normalizer").get<double>();
            r.ratio = rj.at("ratio").get<double>();
            r.exact = rj.at("exact_flag").get<bool>();
            rep.records.push_back(std::move(r));
        }
        if (j.contains("fit") && !j["fit"].is_null()) {
            FitResult fit;
            fit.exponent = j["fit"].at("exponent").get<double>();
            fit.log_constant = j["fit"].at("log_constant").get<double>();
            fit.residual = j["fit"].at("residual").get<double>();
            fit.used = static_cast<int>(rep.records.size());
            rep.fit = fit;
        }
    } catch (const nlohmann::json::exception& e) {
        throw report_parse_error(std::string("bad report structure: ") + e.what());
    }
    return rep;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw std::ios_base::failure("write failed for '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw std::ios_base::failure("read failed for '" + path + "'");
    return ss.str();
}

}  // namespace invsum
