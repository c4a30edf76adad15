#pragma once

// Two-sided equivalence reports: pointwise ratios lhs/rhs, their window
// over a corpus and how that window moves under grid refinement.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "rilab/gridfn.hpp"

namespace rilab {

struct RatioRow {
    std::string case_id;
    std::string function_id;
    std::size_t n = 0;
    double u = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct FunctionRatios {
    std::string function_id;
    double ratio_min = kInf;
    double ratio_max = 0.0;
    double oracle_gap = 1.0;  // max of trivial split / oracle; 1 means no gain
};

struct EquivalenceReport {
    std::string case_id;
    std::vector<std::size_t> sizes;
    std::vector<FunctionRatios> functions;  // at the first size
    double window = kInf;                   // at the first size
    double window_refined = kInf;           // at the last size
    double stability = kInf;                // |window_refined - window| / window
    std::vector<RatioRow> rows;
    std::vector<std::string> notes;
    std::size_t one_sided = 0;  // exclusions where only one side diverged

    [[nodiscard]] bool passes(double window_max, double stability_max) const {
        return one_sided == 0 && std::isfinite(window) && window <= window_max && stability <= stability_max;
    }
};

// max(ratio_max) / min(ratio_min) over the functions with finite ratios.
inline double window_of(const std::vector<FunctionRatios>& fs) {
    double hi = 0.0, lo = kInf;
    for (const auto& f : fs) {
        hi = std::max(hi, f.ratio_max);
        lo = std::min(lo, f.ratio_min);
    }
    return (lo > 0.0 && std::isfinite(hi) && std::isfinite(lo)) ? hi / lo : kInf;
}

inline void finish_report(EquivalenceReport& r, const std::vector<FunctionRatios>& first,
                          const std::vector<FunctionRatios>& last) {
    r.functions = first;
    r.window = window_of(first);
    r.window_refined = window_of(last);
    r.stability = std::isfinite(r.window) && std::isfinite(r.window_refined)
                      ? std::abs(r.window_refined - r.window) / r.window
                      : kInf;
}

inline std::string report_csv(const EquivalenceReport& r) {
    std::string s = "case,function_id,n,u,lhs,rhs,ratio\n";
    for (const auto& row : r.rows)
        s += row.case_id + "," + row.function_id + "," + std::to_string(row.n) + "," + format_double(row.u) + "," +
             format_double(row.lhs) + "," + format_double(row.rhs) + "," + format_double(row.ratio) + "\n";
    return s;
}

inline nlohmann::ordered_json finite_or_null(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json report_json(const EquivalenceReport& r) {
    nlohmann::ordered_json j;
    j["case"] = r.case_id;
    j["sizes"] = r.sizes;
    j["window"] = finite_or_null(r.window);
    j["window_refined"] = finite_or_null(r.window_refined);
    j["stability"] = finite_or_null(r.stability);
    auto& fs = j["functions"] = nlohmann::ordered_json::array();
    for (const auto& f : r.functions)
        fs.push_back({{"function_id", f.function_id},
                      {"ratio_min", finite_or_null(f.ratio_min)},
                      {"ratio_max", finite_or_null(f.ratio_max)},
                      {"oracle_gap", finite_or_null(f.oracle_gap)}});
    j["notes"] = r.notes;
    j["one_sided_exclusions"] = r.one_sided;
    return j;
}

}  // namespace rilab
