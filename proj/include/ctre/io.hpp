#pragma once

// Event-list ingestion and plot-ready output. Input is two-column CSV
// (time, magnitude), header optional; times are either numeric offsets or
// ISO-like timestamps, the latter converted to seconds since the first
// event. Analysis tables print at 10 significant digits; event series print
// in shortest round-trip form so that simulate -> parse is bit-exact.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctre/diagnostics.hpp"
#include "ctre/estimators.hpp"
#include "ctre/event_series.hpp"
#include "ctre/stability.hpp"

namespace ctre {

struct ParseIssue {
    std::size_t line;
    std::string reason;
};

struct ParseReport {
    bool header_skipped = false;
    bool resorted = false;   // input rows were out of time order
    std::size_t merged = 0;  // duplicate timestamps collapsed (larger magnitude kept)
    bool timestamp_mode = false;
    std::vector<ParseIssue> bad_rows;
};

struct ParsedEvents {
    EventSeries series;
    ParseReport report;
};

namespace detail {

inline bool parse_double(const std::string& s, double& out) {
    const char* b = s.c_str();
    char* end = nullptr;
    out = std::strtod(b, &end);
    return end != b && *end == '\0' && std::isfinite(out);
}

// days since 1970-01-01 (Howard Hinnant's civil-days algorithm)
inline long long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097LL + static_cast<long long>(doe) - 719468LL;
}

// "YYYY-MM-DD", "YYYY-MM-DD HH:MM:SS(.fff)" or with 'T' separator
inline bool parse_timestamp(const std::string& s, double& seconds) {
    int y, mo, d, h = 0, mi = 0;
    double sec = 0.0;
    char sep = 0;
    int n = 0;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c%2d:%2d:%lf%n", &y, &mo, &d, &sep, &h, &mi, &sec,
                    &n) >= 7 &&
        (sep == ' ' || sep == 'T') && n == static_cast<int>(s.size())) {
        // fall through to range checks
    } else if (std::sscanf(s.c_str(), "%4d-%2d-%2d%n", &y, &mo, &d, &n) == 3 &&
               n == static_cast<int>(s.size())) {
        h = mi = 0;
        sec = 0.0;
    } else {
        return false;
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec >= 61.0) return false;
    seconds = static_cast<double>(days_from_civil(y, mo, d)) * 86400.0 + h * 3600.0 +
              mi * 60.0 + sec;
    return true;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    return out;
}

}  // namespace detail

inline ParsedEvents parse_events(std::istream& in) {
    ParseReport rep;
    std::vector<std::pair<double, double>> rows;
    std::string line;
    std::size_t lineno = 0;
    bool mode_known = false;
    bool first_data_seen = false;

    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto fields = detail::split_csv(t);
        if (fields.size() < 2) {
            if (!first_data_seen && !rep.header_skipped) {
                rep.header_skipped = true;
            } else {
                rep.bad_rows.push_back({lineno, "expected two comma-separated columns"});
            }
            continue;
        }
        double tv = 0.0, mv = 0.0;
        bool t_num = detail::parse_double(fields[0], tv);
        bool t_ts = !t_num && detail::parse_timestamp(fields[0], tv);
        bool m_ok = detail::parse_double(fields[1], mv);
        if ((!t_num && !t_ts) || !m_ok) {
            if (!first_data_seen && !rep.header_skipped) {
                rep.header_skipped = true;  // first unparseable line is taken as a header
            } else {
                rep.bad_rows.push_back({lineno, "unparseable time or magnitude"});
            }
            continue;
        }
        if (!mode_known) {
            rep.timestamp_mode = t_ts;
            mode_known = true;
        } else if (t_ts != rep.timestamp_mode) {
            rep.bad_rows.push_back({lineno, "mixed numeric and timestamp time formats"});
            continue;
        }
        first_data_seen = true;
        rows.emplace_back(tv, mv);
    }

    if (rows.size() < 2) {
        std::string msg = "parse_events: fewer than 2 valid events";
        if (!rep.bad_rows.empty())
            msg += " (" + std::to_string(rep.bad_rows.size()) + " unparseable rows, first at line " +
                   std::to_string(rep.bad_rows.front().line) + ": " +
                   rep.bad_rows.front().reason + ")";
        throw std::runtime_error(msg);
    }

    if (!std::is_sorted(rows.begin(), rows.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; })) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        rep.resorted = true;
    }
    // merge duplicate timestamps, keeping the larger magnitude
    std::vector<std::pair<double, double>> merged;
    merged.reserve(rows.size());
    for (const auto& r : rows) {
        if (!merged.empty() && merged.back().first == r.first) {
            merged.back().second = std::max(merged.back().second, r.second);
            ++rep.merged;
        } else {
            merged.push_back(r);
        }
    }
    if (merged.size() < 2) throw std::runtime_error("parse_events: fewer than 2 distinct events");

    ParsedEvents out;
    out.report = rep;
    out.series.times.reserve(merged.size());
    out.series.magnitudes.reserve(merged.size());
    const double t0 = rep.timestamp_mode ? merged.front().first : 0.0;
    for (const auto& r : merged) {
        out.series.times.push_back(r.first - t0);
        out.series.magnitudes.push_back(r.second);
    }
    out.series.validate();
    return out;
}

inline ParsedEvents parse_events(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_events: cannot open " + path);
    return parse_events(in);
}

// ---------------------------------------------------------------------------
// Formatting and table writers.

namespace detail {

inline std::string fmt_sig(double v, int digits = 10) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// shortest representation that parses back to the identical double
inline std::string fmt_exact(double v) {
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

inline void write_events_csv(std::ostream& os, const EventSeries& s) {
    os << "time,magnitude\n";
    for (std::size_t i = 0; i < s.n(); ++i)
        os << detail::fmt_exact(s.times[i]) << ',' << detail::fmt_exact(s.magnitudes[i])
           << '\n';
}

inline void write_scan_csv(std::ostream& os, const StabilityScan& scan) {
    os << "k,ell,beta_hat,beta_lo,beta_hi,sigma_hat,sigma_norm,sigma_lo,sigma_hi\n";
    for (const auto& r : scan.rows) {
        os << r.k << ',' << detail::fmt_sig(r.ell);
        if (r.ok) {
            os << ',' << detail::fmt_sig(r.beta_hat) << ',' << detail::fmt_sig(r.beta_lo)
               << ',' << detail::fmt_sig(r.beta_hi) << ',' << detail::fmt_sig(r.sigma_hat)
               << ',' << detail::fmt_sig(r.sigma_norm) << ',' << detail::fmt_sig(r.sigma_norm_lo)
               << ',' << detail::fmt_sig(r.sigma_norm_hi) << '\n';
        } else {
            os << ",nan,nan,nan,nan,nan,nan,nan\n";
        }
    }
}

inline void write_acf_csv(std::ostream& os, const DiagnosticReport& rep) {
    os << "series,lag,acf,band\n";
    for (std::size_t h = 0; h < rep.acf_durations.acf.size(); ++h)
        os << "durations," << h << ',' << detail::fmt_sig(rep.acf_durations.acf[h]) << ','
           << detail::fmt_sig(rep.acf_durations.band) << '\n';
    for (std::size_t h = 0; h < rep.acf_excesses.acf.size(); ++h)
        os << "excesses," << h << ',' << detail::fmt_sig(rep.acf_excesses.acf[h]) << ','
           << detail::fmt_sig(rep.acf_excesses.band) << '\n';
}

inline void write_copula_csv(std::ostream& os, const CopulaPoints& cop) {
    os << "u,v\n";
    for (std::size_t i = 0; i < cop.u.size(); ++i)
        os << detail::fmt_sig(cop.u[i]) << ',' << detail::fmt_sig(cop.v[i]) << '\n';
}

inline void write_qq_csv(std::ostream& os, const QQPoints& qq) {
    os << "theoretical,empirical,beta_used\n";
    for (std::size_t i = 0; i < qq.theoretical.size(); ++i)
        os << detail::fmt_sig(qq.theoretical[i]) << ',' << detail::fmt_sig(qq.empirical[i])
           << ',' << detail::fmt_sig(qq.beta_used) << '\n';
}

inline const char* method_name(FitMethod m) {
    return m == FitMethod::mle ? "mle" : "logmoment";
}

inline void write_fit_csv(std::ostream& os, const MLFit& fit, const LRTResult* lrt) {
    os << "method,n,beta,beta_lo,beta_hi,sigma,sigma_lo,sigma_hi,loglik,boundary,clamped,"
          "converged,deviance,p_value,loglik_exp\n";
    os << method_name(fit.method) << ',' << fit.n << ',' << detail::fmt_sig(fit.params.beta)
       << ',' << detail::fmt_sig(fit.ci_beta.first) << ',' << detail::fmt_sig(fit.ci_beta.second)
       << ',' << detail::fmt_sig(fit.params.sigma) << ',' << detail::fmt_sig(fit.ci_sigma.first)
       << ',' << detail::fmt_sig(fit.ci_sigma.second) << ',' << detail::fmt_sig(fit.loglik)
       << ',' << (fit.beta_boundary ? 1 : 0) << ',' << (fit.beta_clamped ? 1 : 0) << ','
       << (fit.converged ? 1 : 0);
    if (lrt)
        os << ',' << detail::fmt_sig(lrt->deviance) << ',' << detail::fmt_sig(lrt->p_value)
           << ',' << detail::fmt_sig(lrt->loglik_exp);
    else
        os << ",nan,nan,nan";
    os << '\n';
}

}  // namespace ctre
