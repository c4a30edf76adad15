#pragma once

// Holmstedt-type formulas: K(rho(u), f; Y0, Y1) for couples built from a
// theta-space and an R-space (or an L-space and a theta-space, or one
// endpoint), written as explicit sums of weighted norms of K(t,f;X0,X1).

#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "rilab/corpus.hpp"
#include "rilab/errors.hpp"
#include "rilab/gridfn.hpp"
#include "rilab/kfunctional.hpp"
#include "rilab/report.hpp"
#include "rilab/spaces.hpp"
#include "rilab/svfunc.hpp"

namespace rilab {

enum class HolmstedtCase { R_interior, R_theta0_zero, R_x0, L_interior, L_theta1_one, L_x1 };

inline const std::vector<std::pair<HolmstedtCase, std::string>>& holmstedt_case_names() {
    static const std::vector<std::pair<HolmstedtCase, std::string>> v = {
        {HolmstedtCase::R_interior, "R_interior"},     {HolmstedtCase::R_theta0_zero, "R_theta0_zero"},
        {HolmstedtCase::R_x0, "R_x0"},                 {HolmstedtCase::L_interior, "L_interior"},
        {HolmstedtCase::L_theta1_one, "L_theta1_one"}, {HolmstedtCase::L_x1, "L_x1"}};
    return v;
}

inline std::string to_string(HolmstedtCase c) {
    for (const auto& [k, s] : holmstedt_case_names())
        if (k == c) return s;
    return "?";
}

inline HolmstedtCase parse_holmstedt_case(const std::string& s) {
    for (const auto& [k, n] : holmstedt_case_names())
        if (n == s) return k;
    std::string ids;
    for (const auto& [k, n] : holmstedt_case_names()) ids += (ids.empty() ? "" : ", ") + n;
    throw InputError("unknown Holmstedt case '" + s + "'; available: " + ids);
}

inline bool is_r_case(HolmstedtCase c) {
    return c == HolmstedtCase::R_interior || c == HolmstedtCase::R_theta0_zero || c == HolmstedtCase::R_x0;
}

// theta0/b0/E0 belong to the first member, theta1/b1/E1 to the second; a and
// F are the inner parameters of the R- or L-space.  Unused fields are ignored.
struct HolmstedtParams {
    double theta0 = 0.25;
    double theta1 = 0.5;
    SvExpr b0, b1, a;
    RiSpace E0 = RiSpace::Linf(), E1 = RiSpace::Linf(), F = RiSpace::Linf();
};

// rho(u) = u^gamma * factor(u)
struct RhoFunction {
    double gamma = 0.0;
    SvExpr factor;

    [[nodiscard]] double log_at(double x) const { return gamma * x + std::log(factor.at_log(x)); }
    [[nodiscard]] double operator()(double u) const { return std::exp(log_at(std::log(u))); }
};

struct HolmstedtSetup {
    HolmstedtCase kase;
    HolmstedtParams p;
    RhoFunction rho;
    SpaceDescriptor Y0, Y1;
    SvExpr N0u;  // ||b0||_{E0(u,inf)}
    SvExpr N1;   // ||b1||_{E1(0,u)}
    std::vector<Condition> hypotheses;
};

namespace holm_detail {

inline Condition require_plain(const char* what, const SvExpr& b, RiSpace E, bool upper) {
    Grid g = Grid::geometric(1e-8, 1e8, 2048);
    LogInterval iv = upper ? LogInterval{0.0, kInf} : LogInterval{-kInf, 0.0};
    return probe_condition(std::string("||") + what + "||_L" + q_label(E) + (upper ? "(1,inf)" : "(0,1)") + " < inf",
                           [b](const Grid& gr) { return sample_sv(b, gr); }, E, iv, g);
}

inline SvExpr tail_or_throw(const SvExpr& b, RiSpace E, Side side, const std::string& name) {
    try {
        return SvExpr::norm_tail(b, E, side);
    } catch (const DivergenceError&) {
        throw InadmissibleError("hypothesis fails: " + name);
    }
}

inline SvExpr inv(const SvExpr& e) { return SvExpr::power(e, -1.0); }
inline SvExpr mul(const SvExpr& a, const SvExpr& b) { return SvExpr::product(a, b); }

}  // namespace holm_detail

// Checks the case hypotheses and builds rho and the member spaces.
inline HolmstedtSetup holmstedt_setup(HolmstedtCase c, const HolmstedtParams& p) {
    using namespace holm_detail;
    HolmstedtSetup s{c, p, {}, X0(), X1(), SvExpr(), SvExpr(), {}};
    auto theta_in = [](double t) { return t > 0.0 && t < 1.0; };
    auto fail = [&](const std::string& m) { throw InadmissibleError("hypothesis fails for " + to_string(c) + ": " + m); };
    auto need = [&](Condition cond) {
        bool ok = cond.finite;
        std::string nm = cond.name;
        s.hypotheses.push_back(std::move(cond));
        if (!ok) fail(nm);
    };
    const bool r = is_r_case(c);
    switch (c) {
        case HolmstedtCase::R_interior:
        case HolmstedtCase::L_interior:
            if (!(theta_in(p.theta0) && theta_in(p.theta1) && p.theta0 < p.theta1)) fail("0 < theta0 < theta1 < 1");
            break;
        case HolmstedtCase::R_theta0_zero:
            if (!(p.theta0 == 0.0 && theta_in(p.theta1))) fail("theta0 = 0 < theta1 < 1");
            break;
        case HolmstedtCase::R_x0:
            if (!theta_in(p.theta1)) fail("0 < theta1 < 1");
            break;
        case HolmstedtCase::L_theta1_one:
            if (!(theta_in(p.theta0) && p.theta1 == 1.0)) fail("0 < theta0 < theta1 = 1");
            break;
        case HolmstedtCase::L_x1:
            if (!theta_in(p.theta0)) fail("0 < theta0 < 1");
            break;
    }
    if (r) {
        need(require_plain("b1", p.b1, p.E1, false));
        s.N1 = tail_or_throw(p.b1, p.E1, Side::Lower, "||b1||_E1(0,1) < inf");
        if (c == HolmstedtCase::R_theta0_zero) {
            need(require_plain("b0", p.b0, p.E0, true));
            s.N0u = tail_or_throw(p.b0, p.E0, Side::Upper, "||b0||_E0(1,inf) < inf");
        }
    } else {
        need(require_plain("b0", p.b0, p.E0, true));
        s.N0u = tail_or_throw(p.b0, p.E0, Side::Upper, "||b0||_E0(1,inf) < inf");
        if (c == HolmstedtCase::L_theta1_one) {
            need(require_plain("b1", p.b1, p.E1, false));
            s.N1 = tail_or_throw(p.b1, p.E1, Side::Lower, "||b1||_E1(0,1) < inf");
        }
    }
    switch (c) {
        case HolmstedtCase::R_interior:
            s.rho = {p.theta1 - p.theta0, mul(p.b0, inv(mul(p.a, s.N1)))};
            s.Y0 = Theta(p.theta0, p.b0, p.E0);
            break;
        case HolmstedtCase::R_theta0_zero:
            s.rho = {p.theta1, mul(s.N0u, inv(mul(p.a, s.N1)))};
            s.Y0 = Theta(0.0, p.b0, p.E0);
            break;
        case HolmstedtCase::R_x0:
            s.rho = {p.theta1, inv(mul(p.a, s.N1))};
            s.Y0 = X0();
            break;
        case HolmstedtCase::L_interior:
            s.rho = {p.theta1 - p.theta0, mul(mul(p.a, s.N0u), inv(p.b1))};
            s.Y1 = Theta(p.theta1, p.b1, p.E1);
            break;
        case HolmstedtCase::L_theta1_one:
            s.rho = {1.0 - p.theta0, mul(mul(p.a, s.N0u), inv(s.N1))};
            s.Y1 = Theta(1.0, p.b1, p.E1);
            break;
        case HolmstedtCase::L_x1:
            s.rho = {1.0 - p.theta0, mul(p.a, s.N0u)};
            s.Y1 = X1();
            break;
    }
    if (r)
        s.Y1 = R(p.theta1, p.b1, p.E1, p.a, p.F);
    else
        s.Y0 = L(p.theta0, p.b0, p.E0, p.a, p.F);
    return s;
}

// Right-hand side of the Holmstedt formula at every grid point u, with a
// divergence flag per point.
struct HolmstedtRhs {
    std::vector<double> value;
    std::vector<bool> divergent;
};

inline HolmstedtRhs holmstedt_rhs(const HolmstedtSetup& s, const KProfile& K) {
    const Grid& g = K.k.grid;
    const std::size_t n = g.n;
    const auto& k = K.k.values;
    const auto& p = s.p;
    auto weight = [&](double power, const SvExpr& sv) { return sample_sv(sv, g, power); };
    auto times = [](std::vector<double> a, const std::vector<double>& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] == 0.0 ? 0.0 : a[i] * b[i];
        return a;
    };
    HolmstedtRhs out{std::vector<double>(n, 0.0), std::vector<bool>(n, false)};
    std::vector<double> rho(n);
    for (std::size_t i = 0; i < n; ++i) rho[i] = std::exp(s.rho.log_at(g.x(i)));
    // A lower-end tail integrand that is still significant makes every (0,u) norm infinite.
    bool lower_div = false, upper_div = false;
    auto check = [&](const std::vector<double>& v, RiSpace E, Side side) {
        LogInterval iv = side == Side::Lower ? LogInterval{-kInf, g.log_max} : LogInterval{g.log_min, kInf};
        if (tilde_norm_checked(v, g, E, iv).divergent) (side == Side::Lower ? lower_div : upper_div) = true;
    };

    std::vector<double> total(n, 0.0);
    if (is_r_case(s.kase)) {
        auto aK = times(weight(-p.theta1, p.a), k);  // s^-theta1 a K
        check(aK, p.F, Side::Upper);
        auto A = nested_norms(aK, g, p.F, Side::Upper);
        auto b1A = times(weight(0.0, p.b1), A);
        check(b1A, p.E1, Side::Upper);
        auto T3in = nested_norms(b1A, g, p.E1, Side::Upper);
        auto N1 = weight(0.0, s.N1);
        for (std::size_t i = 0; i < n; ++i) total[i] = rho[i] * (N1[i] * A[i] + T3in[i]);
        if (s.kase != HolmstedtCase::R_x0) {
            auto w0 = times(weight(-p.theta0, p.b0), k);
            check(w0, p.E0, Side::Lower);
            auto T1 = nested_norms(w0, g, p.E0, Side::Lower);
            for (std::size_t i = 0; i < n; ++i) total[i] += T1[i];
        }
    } else {
        auto aK = times(weight(-p.theta0, p.a), k);
        check(aK, p.F, Side::Lower);
        auto J = nested_norms(aK, g, p.F, Side::Lower);
        auto b0J = times(weight(0.0, p.b0), J);
        check(b0J, p.E0, Side::Lower);
        auto T1 = nested_norms(b0J, g, p.E0, Side::Lower);
        auto N0u = weight(0.0, s.N0u);
        for (std::size_t i = 0; i < n; ++i) total[i] = T1[i] + N0u[i] * J[i];
        if (s.kase != HolmstedtCase::L_x1) {
            auto w1 = times(weight(-p.theta1, p.b1), k);
            check(w1, p.E1, Side::Upper);
            auto T3 = nested_norms(w1, g, p.E1, Side::Upper);
            for (std::size_t i = 0; i < n; ++i) total[i] += rho[i] * T3[i];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.value[i] = total[i];
        out.divergent[i] = lower_div || upper_div || !std::isfinite(total[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Harness

struct HarnessOptions {
    double t_min = 1e-8;
    double t_max = 1e8;
    std::vector<std::size_t> sizes{1024, 2048};
    std::size_t test_points = 256;  // interior positions where the formula is checked
    double interior = 0.05;        // fraction of log-range dropped at each end
    unsigned jobs = 1;
};

// Indices of interior test points: `count` + 1 evenly spaced positions in
// log t, snapped to the nearest grid point.  The positions do not depend on
// n, so grid doubling compares the same u values (sharp features such as the
// kink of l at t = 1 would otherwise be hit or missed by chance).
inline std::vector<std::size_t> interior_points(const Grid& g, double frac, std::size_t count) {
    std::vector<std::size_t> out;
    const double span = g.log_max - g.log_min, h = g.step();
    const double lo = g.log_min + frac * span, hi = g.log_max - frac * span;
    for (std::size_t k = 0; k <= count; ++k) {
        const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count);
        const auto i = static_cast<std::size_t>(std::lround((x - g.log_min) / h));
        if (out.empty() || i != out.back()) out.push_back(std::min(i, g.n - 1));
    }
    return out;
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads; results land in
// caller-owned slots so output order never depends on scheduling.
template <class F>
void parallel_for(std::size_t count, unsigned jobs, F&& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < std::min<std::size_t>(jobs, count); ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < count;) fn(i);
        });
    for (auto& t : pool) t.join();
}

struct FunctionRun {
    FunctionRatios ratios;
    std::vector<RatioRow> rows;
    std::string note;  // non-empty when the function was excluded
    bool one_sided = false;  // excluded because exactly one side diverged
};

inline EquivalenceReport verify_holmstedt(HolmstedtCase c, const HolmstedtParams& params,
                                          const std::vector<CorpusFunction>& corpus, const HarnessOptions& opt = {}) {
    const HolmstedtSetup setup = holmstedt_setup(c, params);
    EquivalenceReport rep;
    rep.case_id = to_string(c);
    rep.sizes = opt.sizes;
    std::vector<std::vector<FunctionRatios>> per_size;
    for (std::size_t n : opt.sizes) {
        const Grid g = Grid::geometric(opt.t_min, opt.t_max, n);
        const auto pts = interior_points(g, opt.interior, opt.test_points);
        std::vector<FunctionRun> runs(corpus.size());
        parallel_for(corpus.size(), opt.jobs, [&](std::size_t fi) {
            const auto& cf = corpus[fi];
            FunctionRun& run = runs[fi];
            run.ratios.function_id = cf.id;
            GridFunction fs = cf.sample(g);
            KProfile K = k_peetre(fs);
            HolmstedtRhs rhs = holmstedt_rhs(setup, K);
            KOracle oracle(fs, setup.Y0, setup.Y1);
            for (std::size_t i : pts) {
                double r = std::exp(setup.rho.log_at(g.x(i)));
                double lhs = oracle(r);
                double rv = rhs.value[i];
                if (rhs.divergent[i] || !std::isfinite(lhs) || !(rv > 0.0) || !(lhs > 0.0)) {
                    run.note = cf.id + " excluded at n=" + std::to_string(n) + ": f is not in Y0+Y1 on this grid";
                    run.rows.clear();
                    run.ratios = FunctionRatios{cf.id};
                    return;
                }
                double ratio = lhs / rv;
                run.ratios.ratio_min = std::min(run.ratios.ratio_min, ratio);
                run.ratios.ratio_max = std::max(run.ratios.ratio_max, ratio);
                run.ratios.oracle_gap = std::max(run.ratios.oracle_gap, oracle.trivial(r) / lhs);
                run.rows.push_back({rep.case_id, cf.id, n, g.t(i), lhs, rv, ratio});
            }
        });
        std::vector<FunctionRatios> fr;
        for (auto& run : runs) {
            if (!run.note.empty()) {
                rep.notes.push_back(run.note);
                continue;
            }
            fr.push_back(run.ratios);
            rep.rows.insert(rep.rows.end(), run.rows.begin(), run.rows.end());
        }
        per_size.push_back(std::move(fr));
    }
    finish_report(rep, per_size.front(), per_size.back());
    return rep;
}

}  // namespace rilab
