#pragma once

// Reiteration: (Y0, Y1)_{theta,b,E} for the member couples of the Holmstedt
// formulas, expressed again as a space built on (X0, X1).  The interpolation
// parameter rho enters only through b∘rho, represented symbolically.

#include <cmath>
#include <string>
#include <vector>

#include "rilab/corpus.hpp"
#include "rilab/errors.hpp"
#include "rilab/holmstedt.hpp"
#include "rilab/kfunctional.hpp"
#include "rilab/report.hpp"
#include "rilab/spaces.hpp"
#include "rilab/svfunc.hpp"

namespace rilab {

enum class ReiterationCase { ThmR_interior, ThmR_theta0_zero, ThmR_x0, ThmL_interior, ThmL_theta1_one, ThmL_x1 };

inline const std::vector<std::pair<ReiterationCase, std::string>>& reiteration_case_names() {
    static const std::vector<std::pair<ReiterationCase, std::string>> v = {
        {ReiterationCase::ThmR_interior, "ThmR_interior"},     {ReiterationCase::ThmR_theta0_zero, "ThmR_theta0_zero"},
        {ReiterationCase::ThmR_x0, "ThmR_x0"},                 {ReiterationCase::ThmL_interior, "ThmL_interior"},
        {ReiterationCase::ThmL_theta1_one, "ThmL_theta1_one"}, {ReiterationCase::ThmL_x1, "ThmL_x1"}};
    return v;
}

inline std::string to_string(ReiterationCase c) {
    for (const auto& [k, s] : reiteration_case_names())
        if (k == c) return s;
    return "?";
}

inline ReiterationCase parse_reiteration_case(const std::string& s) {
    for (const auto& [k, n] : reiteration_case_names())
        if (n == s) return k;
    std::string ids;
    for (const auto& [k, n] : reiteration_case_names()) ids += (ids.empty() ? "" : ", ") + n;
    throw InputError("unknown reiteration case '" + s + "'; available: " + ids);
}

inline HolmstedtCase member_case(ReiterationCase c) {
    switch (c) {
        case ReiterationCase::ThmR_interior: return HolmstedtCase::R_interior;
        case ReiterationCase::ThmR_theta0_zero: return HolmstedtCase::R_theta0_zero;
        case ReiterationCase::ThmR_x0: return HolmstedtCase::R_x0;
        case ReiterationCase::ThmL_interior: return HolmstedtCase::L_interior;
        case ReiterationCase::ThmL_theta1_one: return HolmstedtCase::L_theta1_one;
        case ReiterationCase::ThmL_x1: return HolmstedtCase::L_x1;
    }
    return HolmstedtCase::R_interior;
}

struct ReiterationParams {
    HolmstedtParams members;
    double theta = 0.5;
    SvExpr b;
    RiSpace E = RiSpace::Lq(2.0);
};

struct DerivedParams {
    double theta_tilde = 0.0;
    RhoFunction rho;
    SvExpr B;           // B_theta, for the branches that produce a theta-space
    std::string rule;   // which branch fired, in words
};

struct ReiterationResult {
    SpaceDescriptor space;
    DerivedParams derived;
    HolmstedtSetup setup;
    std::vector<Condition> hypotheses;
};

inline ReiterationResult reiterate(ReiterationCase c, const ReiterationParams& rp) {
    using holm_detail::inv;
    using holm_detail::mul;
    if (!(rp.theta >= 0.0 && rp.theta <= 1.0)) throw InadmissibleError("theta must lie in [0,1]");
    HolmstedtSetup s = holmstedt_setup(member_case(c), rp.members);
    ReiterationResult out{X0(), {}, s, s.hypotheses};
    const auto& p = rp.members;
    const double th = rp.theta;

    auto need = [&](Condition cond) {
        bool ok = cond.finite;
        std::string nm = cond.name;
        out.hypotheses.push_back(std::move(cond));
        if (!ok) throw InadmissibleError("hypothesis fails for " + to_string(c) + ": " + nm);
    };
    if (th == 0.0) need(holm_detail::require_plain("b", rp.b, rp.E, true));
    if (th == 1.0) need(holm_detail::require_plain("b", rp.b, rp.E, false));

    const SvExpr bo = SvExpr::compose_rho(rp.b, s.rho.gamma, s.rho.factor);  // b∘rho
    DerivedParams& d = out.derived;
    d.rho = s.rho;
    auto pw = [](const SvExpr& e, double r) { return SvExpr::power(e, r); };
    auto theta_space = [&](double tt, SvExpr B, std::string rule) {
        d.theta_tilde = tt;
        d.B = B;
        d.rule = std::move(rule);
        out.space = Theta(tt, std::move(B), rp.E);
    };
    // R-space at theta1 intersected with an RR-space, shared by the three R theorems.
    auto r_top = [&] {
        d.theta_tilde = p.theta1;
        d.B = mul(s.N1, bo);
        d.rule = "theta=1: R(theta1, ||b1||_E1(0,u) b(rho), E, a, F) ∩ RR(theta1, b∘rho, E, b1, E1, a, F)";
        out.space = Intersect({R(p.theta1, d.B, rp.E, p.a, p.F), RR(p.theta1, bo, rp.E, p.b1, p.E1, p.a, p.F)});
    };
    // L-space at theta0 intersected with an LL-space, shared by the three L theorems.
    auto l_bottom = [&] {
        d.theta_tilde = p.theta0;
        d.B = mul(s.N0u, bo);
        d.rule = "theta=0: L(theta0, ||b0||_E0(u,inf) b(rho), E, a, F) ∩ LL(theta0, b∘rho, E, b0, E0, a, F)";
        out.space = Intersect({L(p.theta0, d.B, rp.E, p.a, p.F), LL(p.theta0, bo, rp.E, p.b0, p.E0, p.a, p.F)});
    };

    switch (c) {
        case ReiterationCase::ThmR_interior:
            if (th == 0.0) {
                d.theta_tilde = p.theta0;
                d.rule = "theta=0: L(theta0, b∘rho, E, b0, E0)";
                out.space = L(p.theta0, bo, rp.E, p.b0, p.E0);
            } else if (th == 1.0) {
                r_top();
            } else {
                theta_space((1 - th) * p.theta0 + th * p.theta1,
                            mul(mul(pw(p.b0, 1 - th), pw(mul(p.a, s.N1), th)), bo),
                            "0<theta<1: b0^(1-theta) (a ||b1||_E1(0,u))^theta b(rho)");
            }
            break;
        case ReiterationCase::ThmR_theta0_zero:
            if (th == 0.0) {
                d.theta_tilde = 0.0;
                d.B = mul(s.N0u, bo);
                d.rule = "theta=0: Theta(0, ||b0||_E0(u,inf) b(rho), E) ∩ L(0, b∘rho, E, b0, E0)";
                out.space = Intersect({Theta(0.0, d.B, rp.E), L(0.0, bo, rp.E, p.b0, p.E0)});
            } else if (th == 1.0) {
                r_top();
            } else {
                theta_space(th * p.theta1, mul(mul(pw(s.N0u, 1 - th), pw(mul(p.a, s.N1), th)), bo),
                            "0<theta<1: ||b0||_E0(u,inf)^(1-theta) (a ||b1||_E1(0,u))^theta b(rho)");
            }
            break;
        case ReiterationCase::ThmR_x0:
            if (th == 1.0)
                r_top();
            else
                theta_space(th * p.theta1, mul(pw(mul(p.a, s.N1), th), bo),
                            "0<=theta<1: (a ||b1||_E1(0,u))^theta b(rho)");
            break;
        case ReiterationCase::ThmL_interior:
            if (th == 0.0) {
                l_bottom();
            } else if (th == 1.0) {
                d.theta_tilde = p.theta1;
                d.rule = "theta=1: R(theta1, b∘rho, E, b1, E1)";
                out.space = R(p.theta1, bo, rp.E, p.b1, p.E1);
            } else {
                theta_space((1 - th) * p.theta0 + th * p.theta1,
                            mul(mul(pw(mul(p.a, s.N0u), 1 - th), pw(p.b1, th)), bo),
                            "0<theta<1: (a ||b0||_E0(u,inf))^(1-theta) b1^theta b(rho)");
            }
            break;
        case ReiterationCase::ThmL_theta1_one:
            if (th == 0.0) {
                l_bottom();
            } else if (th == 1.0) {
                d.theta_tilde = 1.0;
                d.B = mul(s.N1, bo);
                d.rule = "theta=1: Theta(1, ||b1||_E1(0,u) b(rho), E) ∩ R(1, b∘rho, E, b1, E1)";
                out.space = Intersect({Theta(1.0, d.B, rp.E), R(1.0, bo, rp.E, p.b1, p.E1)});
            } else {
                theta_space((1 - th) * p.theta0 + th, mul(mul(pw(mul(p.a, s.N0u), 1 - th), pw(s.N1, th)), bo),
                            "0<theta<1: (a ||b0||_E0(u,inf))^(1-theta) ||b1||_E1(0,u)^theta b(rho)");
            }
            break;
        case ReiterationCase::ThmL_x1:
            if (th == 0.0)
                l_bottom();
            else
                theta_space((1 - th) * p.theta0 + th, mul(pw(mul(p.a, s.N0u), 1 - th), bo),
                            "0<theta<=1: (a ||b0||_E0(u,inf))^(1-theta) b(rho)");
            break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Harness: ||t^-theta b K(t;Y0,Y1)||_E (oracle) against the reiterated norm
// of K(t;X0,X1).  The oracle profile is sampled on [min rho, max rho] over
// the u-grid, so both sides see the same part of the scale.

// The oracle profile stays meaningful past [min rho, max rho]: K(t;Y0,Y1) is
// near ||f||_Y0 above and near t ||f||_Y1 below.  Extend each end until the
// outer weight t^-theta (resp. t^(1-theta)) has damped the q-th power by e^-25.
inline Grid oracle_grid(double lo, double hi, std::size_t n, double theta, RiSpace E) {
    const double span = hi - lo;
    double ext_hi = 0.0, ext_lo = 0.0;
    if (!E.is_sup()) {
        ext_hi = theta > 0.0 ? std::min(25.0 / (theta * E.q), 4.0 * span) : 2.0 * span;
        ext_lo = theta < 1.0 ? std::min(25.0 / ((1.0 - theta) * E.q), 4.0 * span) : 2.0 * span;
    }
    const double total = span + ext_lo + ext_hi;
    const auto m = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * total / span));
    return Grid::from_log(lo - ext_lo, hi + ext_hi, m);
}

inline EquivalenceReport verify_reiteration(ReiterationCase c, const ReiterationParams& rp,
                                            const std::vector<CorpusFunction>& corpus, const HarnessOptions& opt = {}) {
    const ReiterationResult res = reiterate(c, rp);
    const SpaceDescriptor outer = Theta(rp.theta, rp.b, rp.E);
    EquivalenceReport rep;
    rep.case_id = to_string(c) + "@theta=" + format_double(rp.theta);
    rep.sizes = opt.sizes;
    std::vector<std::vector<FunctionRatios>> per_size;
    for (std::size_t n : opt.sizes) {
        const Grid g = Grid::geometric(opt.t_min, opt.t_max, n);
        double lo = kInf, hi = -kInf;
        for (std::size_t i = 0; i < n; ++i) {
            double r = res.derived.rho.log_at(g.x(i));
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        const Grid tg = oracle_grid(lo, hi, n, rp.theta, rp.E);
        const NormPlan rhs_plan(res.space, g);
        const NormPlan lhs_plan(outer, tg);
        std::vector<FunctionRun> runs(corpus.size());
        parallel_for(corpus.size(), opt.jobs, [&](std::size_t fi) {
            const auto& cf = corpus[fi];
            FunctionRun& run = runs[fi];
            run.ratios.function_id = cf.id;
            GridFunction fs = cf.sample(g);
            NormValue rhs = rhs_plan(k_peetre(fs));
            KOracle oracle(fs, res.setup.Y0, res.setup.Y1);
            NormValue lhs = lhs_plan(oracle.profile(tg));
            if (rhs.divergent || lhs.divergent || !(rhs.value > 0.0) || !(lhs.value > 0.0)) {
                run.note = cf.id + " excluded at n=" + std::to_string(n) + ": norm diverges on this grid (lhs " +
                           (lhs.divergent ? "inf" : "finite") + ", rhs " + (rhs.divergent ? "inf" : "finite") + ")";
                run.one_sided = lhs.divergent != rhs.divergent;
                return;
            }
            double ratio = lhs.value / rhs.value;
            run.ratios.ratio_min = run.ratios.ratio_max = ratio;
            run.rows.push_back({rep.case_id, cf.id, n, 0.0, lhs.value, rhs.value, ratio});
        });
        std::vector<FunctionRatios> fr;
        for (auto& run : runs) {
            if (!run.note.empty()) {
                rep.notes.push_back(run.note);
                rep.one_sided += run.one_sided ? 1 : 0;
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
