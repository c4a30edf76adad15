#pragma once

// Numeric forms of the weighted inequalities used by the reiteration
// proofs.  Each returns lhs / rhs for one function; callers sweep parameters
// and a corpus and look at the spread.  f is taken as its grid samples and
// zero outside the grid, so both sides see the same function.

#include <cmath>
#include <vector>

#include "rilab/gridfn.hpp"
#include "rilab/svfunc.hpp"

namespace rilab {

namespace hardy_detail {

inline std::vector<double> weighted(const std::vector<double>& f, const Grid& g, double power, const SvExpr& b) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        out[i] = f[i] == 0.0 ? 0.0 : f[i] * std::exp(power * g.x(i)) * b.at_log(g.x(i));
    return out;
}

// ∫_0^t f(s) ds (lower) or ∫_t^inf f(s) ds (upper) over the grid cells,
// with a half cell at t.
inline std::vector<double> running_integral(const std::vector<double>& f, const Grid& g, Side side) {
    const double h = g.step();
    std::vector<double> cell(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) cell[i] = f[i] * std::exp(g.x(i)) * h;
    std::vector<double> out(f.size());
    CompensatedSum s;
    const std::size_t n = f.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t i = side == Side::Lower ? k : n - 1 - k;
        out[i] = s.value() + 0.5 * cell[i];
        s.add(cell[i]);
    }
    return out;
}

inline double ratio(const NormValue& a, const NormValue& b) {
    if (a.divergent || b.divergent || !(b.value > 0.0)) return std::nan("");
    return a.value / b.value;
}

}  // namespace hardy_detail

// ||t^-a b(t) ∫_0^t f||_E~ / ||t^{1-a} b f||_E~ (Lower, a > 0) and
// ||t^a b(t) ∫_t^inf f||_E~ / ||t^{1+a} b f||_E~ (Upper).
inline double hardy_ratio(const std::vector<double>& f, const Grid& g, double a, const SvExpr& b, RiSpace E,
                          Side side) {
    using namespace hardy_detail;
    const bool lower = side == Side::Lower;
    auto F = running_integral(f, g, side);
    auto lhs = weighted(F, g, lower ? -a : a, b);
    auto rhs = weighted(f, g, lower ? 1.0 - a : 1.0 + a, b);
    return ratio(tilde_norm_checked(lhs, g, E, {g.log_min - 0.5 * g.step(), g.log_max + 0.5 * g.step()}),
                 tilde_norm_checked(rhs, g, E, {g.log_min - 0.5 * g.step(), g.log_max + 0.5 * g.step()}));
}

// max over the interior grid points t of ||s^a b phi||_{E~(0,t)} / ∫_0^t s^a b phi ds/s
// (Lower) or the same over (t, inf) (Upper); phi quasi-concave.
inline double quasi_concave_ratio(const std::vector<double>& phi, const Grid& g, double a, const SvExpr& b, RiSpace E,
                                  Side side, double interior = 0.05) {
    using namespace hardy_detail;
    auto w = weighted(phi, g, a, b);
    auto num = nested_norms(w, g, E, side);
    auto den = nested_norms(w, g, RiSpace{1.0}, side);
    const auto skip = static_cast<std::size_t>(interior * static_cast<double>(g.n));
    double worst = 0.0;
    for (std::size_t i = skip; i + skip < g.n; ++i)
        if (den[i] > 0.0) worst = std::max(worst, num[i] / den[i]);
    return worst;
}

// ||t^beta b(t) ||s^a a(s) f(s)||_{F~(t,inf)}||_E~ / ||t^{a+beta} a b f||_E~ for
// nonincreasing f and beta > 0.
inline double tail_power_ratio(const std::vector<double>& f, const Grid& g, double alpha, const SvExpr& a,
                               double beta, const SvExpr& b, RiSpace E, RiSpace F) {
    using namespace hardy_detail;
    auto in = nested_norms(weighted(f, g, alpha, a), g, F, Side::Upper);
    auto lhs = weighted(in, g, beta, b);
    std::vector<double> rhs = weighted(weighted(f, g, alpha + beta, a), g, 0.0, b);
    const LogInterval whole{g.log_min - 0.5 * g.step(), g.log_max + 0.5 * g.step()};
    return ratio(tilde_norm_checked(lhs, g, E, whole), tilde_norm_checked(rhs, g, E, whole));
}

}  // namespace rilab
