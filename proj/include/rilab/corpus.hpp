#pragma once

// Test functions f* (nonincreasing, supported in (0,1)) used by the
// verification harnesses, and the small grammar the CLI accepts for them.

#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "rilab/errors.hpp"
#include "rilab/gridfn.hpp"

namespace rilab {

struct CorpusFunction {
    std::string id;
    std::function<double(double)> f;  // may be non-monotone; sampling rearranges it
    bool needs_rearrange = false;

    // f* sampled on the grid.
    [[nodiscard]] GridFunction sample(const Grid& g) const {
        auto raw = GridFunction::sample(g, f);
        if (!needs_rearrange) return GridFunction(g, std::move(raw.values), Monotone::Nonincreasing);
        return rearrange(raw);
    }
};

inline double ell_of(double t) { return 1.0 + std::abs(std::log(t)); }

inline CorpusFunction chi_fn(double a) {
    if (!(a > 0.0)) throw InputError("chi:a needs a > 0");
    return {"chi:" + format_double(a), [a](double t) { return t <= a ? 1.0 : 0.0; }};
}

// s^{-1/r} on (0,1)
inline CorpusFunction pow_fn(double r) {
    if (!(r > 1.0)) throw InputError("pow:r needs r > 1");
    return {"pow:" + format_double(r), [r](double t) { return t <= 1.0 ? std::pow(t, -1.0 / r) : 0.0; }};
}

// s^{-1/r} ell(s)^m on (0,1)
inline CorpusFunction powlog_fn(double r, double m) {
    if (!(r > 1.0)) throw InputError("powlog:r,m needs r > 1");
    return {"powlog:" + format_double(r) + "," + format_double(m),
            [r, m](double t) { return t <= 1.0 ? std::pow(t, -1.0 / r) * std::pow(ell_of(t), m) : 0.0; }, m < 0.0};
}

// ell(s)^m on (0,1)
inline CorpusFunction log_fn(double m) {
    if (!(m > 0.0)) throw InputError("log:m needs m > 0");
    return {"log:" + format_double(m), [m](double t) { return t <= 1.0 ? std::pow(ell_of(t), m) : 0.0; }};
}

// Log-linear interpolation of a CSV sample; zero past its last point and
// constant before its first.
inline CorpusFunction csv_fn(const std::string& path) {
    auto g = std::make_shared<GridFunction>(read_csv(path));
    return {"csv:" + path,
            [g](double t) {
                const Grid& gr = g->grid;
                double x = std::log(t);
                if (x <= gr.log_min) return (*g)[0];
                if (x > gr.log_max + 1e-12) return 0.0;
                double pos = (x - gr.log_min) / gr.step();
                auto i = std::min<std::size_t>(static_cast<std::size_t>(pos), gr.n - 2);
                double fr = pos - static_cast<double>(i);
                double a = (*g)[i], b = (*g)[i + 1];
                if (a <= 0.0 || b <= 0.0) return fr < 0.5 ? a : b;
                return a * std::pow(b / a, fr);
            },
            true};
}

// Grammar: chi:a | pow:r | powlog:r,m | log:m | csv:PATH
inline CorpusFunction parse_function(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw InputError("function spec needs kind:args, got '" + spec + "'");
    std::string kind = spec.substr(0, colon), args = spec.substr(colon + 1);
    if (kind == "csv") return csv_fn(args);
    std::vector<double> v;
    std::stringstream ss(args);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw InputError("");
        } catch (const std::exception&) {
            throw InputError("bad number '" + tok + "' in function spec '" + spec + "'");
        }
    }
    auto need = [&](std::size_t k) {
        if (v.size() != k) throw InputError("function spec '" + spec + "' needs " + std::to_string(k) + " argument(s)");
    };
    if (kind == "chi") { need(1); return chi_fn(v[0]); }
    if (kind == "pow") { need(1); return pow_fn(v[0]); }
    if (kind == "powlog") { need(2); return powlog_fn(v[0], v[1]); }
    if (kind == "log") { need(1); return log_fn(v[0]); }
    throw InputError("unknown function kind '" + kind + "' (expected chi, pow, powlog, log, csv)");
}

// The eight prototypes used by the equivalence checks.
inline std::vector<CorpusFunction> standard_corpus() {
    return {chi_fn(1.0),  chi_fn(0.01),         pow_fn(4.0),       pow_fn(3.0),
            powlog_fn(4.0, 1.0), powlog_fn(2.0, -1.0), log_fn(1.0), log_fn(2.0)};
}

// Characteristic functions only.
inline std::vector<CorpusFunction> chi_corpus() {
    return {chi_fn(1e-3), chi_fn(1e-2), chi_fn(0.1), chi_fn(0.5), chi_fn(1.0)};
}

inline std::vector<CorpusFunction> named_corpus(const std::string& name) {
    if (name == "standard") return standard_corpus();
    if (name == "chi") return chi_corpus();
    // comma-free list of specs separated by ';'
    std::vector<CorpusFunction> out;
    std::stringstream ss(name);
    std::string tok;
    while (std::getline(ss, tok, ';'))
        if (!tok.empty()) out.push_back(parse_function(tok));
    if (out.empty()) throw InputError("empty corpus '" + name + "'");
    return out;
}

}  // namespace rilab
