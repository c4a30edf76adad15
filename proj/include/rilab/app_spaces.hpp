#pragma once

// Function spaces on (0,1) that arise as interpolation spaces of the
// ordered couple (L_1, L_inf): ultrasymmetric, grand and small Lebesgue,
// L_{inf,q,beta}, G Gamma and the A/B-type spaces.  Norms are evaluated
// directly from a sampled nonincreasing rearrangement f*.

#include <cmath>
#include <string>
#include <variant>

#include "rilab/errors.hpp"
#include "rilab/gridfn.hpp"
#include "rilab/svfunc.hpp"

namespace rilab {

// w(t) = t^power * sv(t)
struct Weight {
    double power = 0.0;
    SvExpr sv;

    [[nodiscard]] double at_log(double x) const { return std::exp(power * x) * sv.at_log(x); }
    bool operator==(const Weight&) const = default;
};

struct UltraSpace { double p; SvExpr b; RiSpace E; };
struct GrandLp { double p; double alpha; };
struct SmallLp { double p; double alpha; };
struct LinfQBeta { RiSpace E; double beta; };
struct GGamma { double p; RiSpace E; Weight w1; Weight w2; };
struct ATypeSpace { double p; double alpha; RiSpace E; };
struct BTypeSpace { double p; double alpha; RiSpace E; };

using AppKind = std::variant<UltraSpace, GrandLp, SmallLp, LinfQBeta, GGamma, ATypeSpace, BTypeSpace>;

struct AppSpace {
    AppKind kind;

    static AppSpace ultra(double p, SvExpr b, RiSpace E) {
        if (!(p >= 1.0)) throw DomainError("ultrasymmetric space needs p >= 1");
        return {UltraSpace{p, std::move(b), E}};
    }
    static AppSpace grand(double p, double alpha) {
        if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("grand Lebesgue space needs 1 < p < inf");
        if (!(alpha > 0.0)) throw DomainError("grand Lebesgue space needs alpha > 0");
        return {GrandLp{p, alpha}};
    }
    static AppSpace small(double p, double alpha) {
        if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("small Lebesgue space needs 1 < p < inf");
        if (!(alpha > 0.0)) throw DomainError("small Lebesgue space needs alpha > 0");
        return {SmallLp{p, alpha}};
    }
    static AppSpace linf_q_beta(RiSpace E, double beta) {
        bool ok = E.is_sup() ? beta <= 0.0 : beta + 1.0 / E.q < 0.0;
        if (!ok) throw DomainError("L_{inf,q,beta} needs beta + 1/q < 0 (beta <= 0 for q = inf)");
        return {LinfQBeta{E, beta}};
    }
    static AppSpace ggamma(double p, RiSpace E, Weight w1, Weight w2);
    static AppSpace a_type(double p, double alpha, RiSpace E);
    static AppSpace b_type(double p, double alpha, RiSpace E) {
        if (!(p >= 1.0)) throw DomainError("B-type space needs p >= 1");
        return {BTypeSpace{p, alpha, E}};
    }

    [[nodiscard]] std::string name() const;
};

namespace app_detail {

inline LogInterval unit() { return {-kInf, 0.0}; }

inline std::vector<double> times(const std::vector<double>& a, const Grid& g, double power, const SvExpr* sv) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double x = g.x(i);
        double w = std::exp(power * x);
        if (sv) w *= sv->at_log(x);
        out[i] = a[i] == 0.0 ? 0.0 : a[i] * w;
    }
    return out;
}

// Nested norm with a divergence check on the integrand's truncated end.
inline std::vector<double> inner(const std::vector<double>& g, const Grid& grid, RiSpace F, Side side, bool& divergent) {
    const LogInterval dom = unit();
    LogInterval whole = side == Side::Lower ? LogInterval{dom.lo, std::min(dom.hi, grid.log_max)}
                                            : LogInterval{grid.log_min, dom.hi};
    if (tilde_norm_checked(g, grid, F, whole).divergent) divergent = true;
    return nested_norms(g, grid, F, side, dom);
}

// Weighted finiteness probe on a sampled SV weight over (0,1).
inline bool finite_on_unit(const SvExpr& w, double power, RiSpace E) {
    Grid g = Grid::geometric(1e-8, 1.0, 2048);
    std::vector<double> ones(g.n, 1.0);
    auto v = times(ones, g, power, &w);
    return !tilde_norm_checked(v, g, E, unit()).divergent;
}

}  // namespace app_detail

inline AppSpace AppSpace::a_type(double p, double alpha, RiSpace E) {
    if (!(p >= 1.0)) throw DomainError("A-type space needs p >= 1");
    if (!app_detail::finite_on_unit(SvExpr::ell(alpha - 1.0), 0.0, E))
        throw DomainError("A-type space needs ||ell^(alpha-1)||_E(0,1) < inf");
    return {ATypeSpace{p, alpha, E}};
}

// Checks: w2 doubling on the sample grid, L^p(w2) embedded in L_1
// (∫ w2^{-1/(p-1)} < inf), and ∫_0^t w2 in L^{q/p}(w1).
inline AppSpace AppSpace::ggamma(double p, RiSpace E, Weight w1, Weight w2) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("G Gamma space needs 1 < p < inf");
    Grid g = Grid::geometric(1e-8, 1.0, 2048);
    const double h = g.step();
    const auto shift = static_cast<std::size_t>(std::lround(std::log(2.0) / h));
    for (std::size_t i = 0; i + shift < g.n; ++i)
        if (w2.at_log(g.x(i + shift)) > 1e3 * w2.at_log(g.x(i))) throw DomainError("G Gamma weight w2 is not doubling");
    // ∫_0^1 w2^{-1/(p-1)} ds = ||(s w2^{-1/(p-1)})||_{L~1}
    std::vector<double> dual(g.n);
    for (std::size_t i = 0; i < g.n; ++i) dual[i] = std::exp(g.x(i)) * std::pow(w2.at_log(g.x(i)), -1.0 / (p - 1.0));
    if (tilde_norm_checked(dual, g, RiSpace{1.0}, app_detail::unit()).divergent)
        throw DomainError("G Gamma needs L^p(w2) to embed in L_1");
    std::vector<double> sw2(g.n);
    for (std::size_t i = 0; i < g.n; ++i) sw2[i] = std::exp(g.x(i)) * w2.at_log(g.x(i));
    auto W2 = nested_norms(sw2, g, RiSpace{1.0}, Side::Lower, app_detail::unit());
    std::vector<double> outer(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        double x = g.x(i);
        double base = std::pow(W2[i], 1.0 / p);
        outer[i] = E.is_sup() ? w1.at_log(x) * base : std::pow(std::exp(x) * w1.at_log(x), 1.0 / E.q) * base;
    }
    if (tilde_norm_checked(outer, g, E, app_detail::unit()).divergent)
        throw DomainError("G Gamma needs the primitive of w2 in L^{q/p}(w1)");
    return {GGamma{p, E, std::move(w1), std::move(w2)}};
}

inline std::string AppSpace::name() const {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, UltraSpace>)
                return "L_{" + format_double(s.p) + "," + s.b.describe() + ",L" + q_label(s.E) + "}";
            else if constexpr (std::is_same_v<T, GrandLp>)
                return "L^{" + format_double(s.p) + ")," + format_double(s.alpha) + "}";
            else if constexpr (std::is_same_v<T, SmallLp>)
                return "L^{(" + format_double(s.p) + "," + format_double(s.alpha) + "}";
            else if constexpr (std::is_same_v<T, LinfQBeta>)
                return "L_{inf," + q_label(s.E) + "," + format_double(s.beta) + "}";
            else if constexpr (std::is_same_v<T, GGamma>)
                return "GGamma(" + format_double(s.p) + "," + q_label(s.E) + ")";
            else if constexpr (std::is_same_v<T, ATypeSpace>)
                return "A_{" + format_double(s.p) + "," + format_double(s.alpha) + ",L" + q_label(s.E) + "}";
            else
                return "B_{" + format_double(s.p) + "," + format_double(s.alpha) + ",L" + q_label(s.E) + "}";
        },
        kind);
}

// Norm of f in an application space; f* is sampled on a grid over (0,1]
// (cells past t = 1 are ignored).
inline NormValue norm_app(const GridFunction& fstar, const AppSpace& S) {
    using namespace app_detail;
    const Grid& g = fstar.grid;
    const auto& f = fstar.values;
    const LogInterval dom = unit();
    bool div = false;
    NormValue r = std::visit(
        [&](const auto& s) -> NormValue {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, UltraSpace>) {
                return tilde_norm_checked(times(f, g, 1.0 / s.p, &s.b), g, s.E, dom);
            } else if constexpr (std::is_same_v<T, GrandLp>) {
                // (∫_t^1 f*^p ds)^{1/p} = ||s^{1/p} f*||_{L~p(t,1)}
                auto in = inner(times(f, g, 1.0 / s.p, nullptr), g, RiSpace{s.p}, Side::Upper, div);
                SvExpr w = SvExpr::ell(-s.alpha / s.p);
                return tilde_norm_checked(times(in, g, 0.0, &w), g, RiSpace::Linf(), dom);
            } else if constexpr (std::is_same_v<T, SmallLp>) {
                auto in = inner(times(f, g, 1.0 / s.p, nullptr), g, RiSpace{s.p}, Side::Lower, div);
                const double pp = s.p / (s.p - 1.0);
                SvExpr w = SvExpr::ell(s.alpha / pp - 1.0);
                return tilde_norm_checked(times(in, g, 0.0, &w), g, RiSpace{1.0}, dom);
            } else if constexpr (std::is_same_v<T, LinfQBeta>) {
                SvExpr w = SvExpr::ell(s.beta);
                return tilde_norm_checked(times(f, g, 0.0, &w), g, s.E, dom);
            } else if constexpr (std::is_same_v<T, GGamma>) {
                std::vector<double> a(g.n);
                for (std::size_t i = 0; i < g.n; ++i) {
                    double x = g.x(i);
                    a[i] = f[i] == 0.0 ? 0.0 : f[i] * std::pow(std::exp(x) * s.w2.at_log(x), 1.0 / s.p);
                }
                auto in = inner(a, g, RiSpace{s.p}, Side::Lower, div);
                for (std::size_t i = 0; i < g.n; ++i) {
                    double x = g.x(i);
                    double w = s.E.is_sup() ? s.w1.at_log(x) : std::pow(std::exp(x) * s.w1.at_log(x), 1.0 / s.E.q);
                    in[i] *= w;
                }
                return tilde_norm_checked(in, g, s.E, dom);
            } else if constexpr (std::is_same_v<T, ATypeSpace>) {
                auto fss = double_star(fstar);
                auto in = inner(times(fss.values, g, 1.0 / s.p, nullptr), g, RiSpace{1.0}, Side::Upper, div);
                SvExpr w = SvExpr::ell(s.alpha - 1.0);
                return tilde_norm_checked(times(in, g, 0.0, &w), g, s.E, dom);
            } else {
                auto fss = double_star(fstar);
                SvExpr w = SvExpr::ell(s.alpha - 1.0);
                auto in = inner(times(fss.values, g, 1.0 / s.p, &w), g, RiSpace::Linf(), Side::Lower, div);
                return tilde_norm_checked(in, g, s.E, dom);
            }
        },
        S.kind);
    r.divergent = r.divergent || div;
    return r;
}

}  // namespace rilab
