#pragma once

// Named identities for function spaces on (0,1): each scenario states
// "space A = space B" and is checked by computing both norms over a corpus.
// A side is a max over terms (an intersection); a term is either a
// descriptor applied to K(t,f;L_1,L_inf) or a descriptor applied to the
// oracle K-functional of a derived couple (Y0, Y1).

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rilab/app_spaces.hpp"
#include "rilab/corpus.hpp"
#include "rilab/errors.hpp"
#include "rilab/holmstedt.hpp"
#include "rilab/kfunctional.hpp"
#include "rilab/reiteration.hpp"
#include "rilab/report.hpp"
#include "rilab/spaces.hpp"
#include "rilab/svfunc.hpp"

namespace rilab {

struct IdentityParams {
    double p0 = 2.0;
    double p1 = 4.0;
    double alpha = 1.0;
    double beta = 1.0;
    double theta = 0.5;
    double r = 2.0;  // outer E = L_r
    // A/B-type spaces need exponents below 1; these replace alpha/beta there.
    // beta_ab = -1 keeps the A-norm weight l^{-2} in L~2, whose tail below
    // t = 1e-8 is negligible (l^{-1} would leave a quarter of the mass there).
    double alpha_ab = 0.0;
    double beta_ab = -1.0;
};

struct IdentityTerm {
    SpaceDescriptor space;
    std::optional<std::pair<SpaceDescriptor, SpaceDescriptor>> couple;  // oracle K of (Y0, Y1) when set
};

struct IdentityScenario {
    std::string id;
    std::string claim;
    std::vector<IdentityTerm> lhs, rhs;
    std::string corpus = "standard";
    double outer_theta = 0.5;  // shapes the oracle t-grid
    RiSpace outer_E = RiSpace::Lq(2.0);
};

inline const std::vector<std::string>& identity_ids() {
    static const std::vector<std::string> v = {
        "ultra-as-theta",         "grand-as-R",             "small-as-L",          "small-dual-limit",
        "grand-vs-ultra-interior", "grand-vs-ultra-theta0", "grand-vs-ultra-theta1", "small-grand-interior",
        "small-grand-theta0",     "small-grand-theta1",     "llogl-grand",         "l1-grand",
        "small-ultra",            "small-linfq",            "small-linf",          "ggamma-ultra",
        "a-type-ultra",           "b-type-ultra",           "b-as-limit-of-A",     "ultra-between-AB"};
    return v;
}

namespace id_detail {

constexpr Setting kUnit = Setting::UnitInterval;

inline SvExpr ell(double a) { return SvExpr::ell(a); }
inline SvExpr mul(const SvExpr& a, const SvExpr& b) { return SvExpr::product(a, b); }
inline SvExpr pw(const SvExpr& a, double r) { return SvExpr::power(a, r); }
inline SpaceDescriptor ultra(double p, SvExpr b, RiSpace E) { return App(AppSpace::ultra(p, std::move(b), E)); }
inline IdentityTerm direct(SpaceDescriptor D) { return {std::move(D), std::nullopt}; }
inline IdentityTerm over(SpaceDescriptor D, SpaceDescriptor Y0, SpaceDescriptor Y1) {
    return {std::move(D), std::make_pair(std::move(Y0), std::move(Y1))};
}
inline double conj(double p) { return p / (p - 1.0); }

}  // namespace id_detail

inline IdentityScenario identity_scenario(const std::string& id, const IdentityParams& P = {}) {
    using namespace id_detail;
    const auto& ids = identity_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
        std::string list;
        for (const auto& s : ids) list += (list.empty() ? "" : ", ") + s;
        throw InputError("unknown identity '" + id + "'; available: " + list);
    }
    const double p0 = P.p0, p1 = P.p1, al = P.alpha, be = P.beta, th = P.theta;
    const double p0c = conj(p0);
    const RiSpace E = RiSpace::Lq(P.r);
    const RiSpace Lp0 = RiSpace::Lq(p0), Lp1 = RiSpace::Lq(p1);
    const SvExpr one;
    const SvExpr b_top = ell(-2.0);  // theta = 1 needs ||b||_E(0,1) finite; l^-2 also converges fast
    const double p_mix = 1.0 / ((1.0 - th) / p0 + th / p1);

    IdentityScenario s;
    s.id = id;
    s.outer_theta = th;
    s.outer_E = E;
    auto outer = [&](double t, const SvExpr& b) {
        s.outer_theta = t;
        return Theta(t, b, E, kUnit);
    };
    auto bo = [](const SvExpr& b, double gamma, const SvExpr& factor) { return SvExpr::compose_rho(b, gamma, factor); };

    const SpaceDescriptor grand = App(AppSpace::grand(p1, be));
    const SpaceDescriptor small = App(AppSpace::small(p0, al));
    const SpaceDescriptor Lp0sp = ultra(p0, one, Lp0);
    const SpaceDescriptor Lp1sp = ultra(p1, one, Lp1);

    if (id == "ultra-as-theta") {
        s.claim = "L_{p,b,E} = (L1,Linf)_{1-1/p,b,E}";
        s.lhs = {direct(ultra(p0, one, E))};
        s.rhs = {direct(Theta(1.0 - 1.0 / p0, one, E, kUnit))};
        s.corpus = "chi";
    } else if (id == "grand-as-R") {
        s.claim = "L^{p),a} = (L1,Linf)^R_{1-1/p, l^{-a/p}, Linf, 1, L_p}";
        s.lhs = {direct(grand)};
        s.rhs = {direct(R(1.0 - 1.0 / p1, ell(-be / p1), RiSpace::Linf(), one, Lp1, kUnit))};
    } else if (id == "small-as-L") {
        s.claim = "L^{(p,a} = (L1,Linf)^L_{1-1/p, l^{a/p'-1}, L1, 1, L_p}";
        s.lhs = {direct(small)};
        s.rhs = {direct(L(1.0 - 1.0 / p0, ell(al / p0c - 1.0), RiSpace::Lq(1.0), one, Lp0, kUnit))};
    } else if (id == "small-dual-limit") {
        s.claim = "(L_p0, L^{p1),b})_{0, l^{a/p0'-1}, L1} = L^{(p0,a}";
        s.outer_theta = 0.0;
        s.outer_E = RiSpace::Lq(1.0);
        s.lhs = {over(Theta(0.0, ell(al / p0c - 1.0), RiSpace::Lq(1.0), kUnit), Lp0sp, grand)};
        s.rhs = {direct(small)};
    } else if (id.rfind("grand-vs-ultra", 0) == 0) {
        // Y0 = L_{p0} (b0 = 1, E0 = L_p0), Y1 = L^{p1),beta}
        const double gamma = 1.0 / p0 - 1.0 / p1;
        const SvExpr factor = ell(be / p1);
        if (id == "grand-vs-ultra-interior") {
            s.claim = "(L_p0, L^{p1),b})_{theta,b,E} = L_{p, l^{-b theta/p1} b(rho), E}";
            s.lhs = {over(outer(th, one), Lp0sp, grand)};
            s.rhs = {direct(ultra(p_mix, mul(ell(-be * th / p1), bo(one, gamma, factor)), E))};
        } else if (id == "grand-vs-ultra-theta0") {
            s.claim = "(L_p0, L^{p1),b})_{0,b,E} = (L1,Linf)^L_{1-1/p0, b(rho), E, 1, L_p0}";
            s.lhs = {over(outer(0.0, one), Lp0sp, grand)};
            s.rhs = {direct(L(1.0 - 1.0 / p0, bo(one, gamma, factor), E, one, Lp0, kUnit))};
        } else {
            s.claim = "(L_p0, L^{p1),b})_{1,b,E} = R(1-1/p1, B1, E, 1, L_p1) ∩ RR(1-1/p1, b(rho), E, l^{-b/p1}, Linf, 1, L_p1)";
            const SvExpr brho = bo(b_top, gamma, factor);
            s.lhs = {over(outer(1.0, b_top), Lp0sp, grand)};
            s.rhs = {direct(Intersect({R(1.0 - 1.0 / p1, mul(ell(-be / p1), brho), E, one, Lp1, kUnit),
                                       RR(1.0 - 1.0 / p1, brho, E, ell(-be / p1), RiSpace::Linf(), one, Lp1, kUnit)}))};
        }
    } else if (id == "small-grand-interior") {
        const double A = al * (1.0 - th) / p0c - be * th / p1;
        s.claim = "(L^{(p0,a}, L^{p1),b})_{theta,r} = L^{p,r}(log L)^A";
        s.lhs = {over(outer(th, one), small, grand)};
        s.rhs = {direct(ultra(p_mix, ell(A), E))};
    } else if (id == "small-grand-theta0") {
        s.claim = "(L^{(p0,a}, L^{p1),b})_{0,r} = L(1-1/p0, l^{a/p0'}, L_r, 1, L_p0) ∩ (L_p0, L^{p1),b})^L_{0,1,L_r,l^{a/p0'-1},L1}";
        s.lhs = {over(outer(0.0, one), small, grand)};
        s.rhs = {direct(L(1.0 - 1.0 / p0, ell(al / p0c), E, one, Lp0, kUnit)),
                 over(L(0.0, one, E, ell(al / p0c - 1.0), RiSpace::Lq(1.0), kUnit), Lp0sp, grand)};
    } else if (id == "small-grand-theta1") {
        s.claim = "(L^{(p0,a}, L^{p1),b})_{1,b,E} = R(1-1/p1, B1, E, 1, L_p1) ∩ RR(1-1/p1, b(rho), E, l^{-b/p1}, Linf, 1, L_p1)";
        const SvExpr brho = bo(b_top, 1.0 / p0 - 1.0 / p1, ell(al / p0c + be / p1));
        s.lhs = {over(outer(1.0, b_top), small, grand)};
        s.rhs = {direct(Intersect({R(1.0 - 1.0 / p1, mul(ell(-be / p1), brho), E, one, Lp1, kUnit),
                                   RR(1.0 - 1.0 / p1, brho, E, ell(-be / p1), RiSpace::Linf(), one, Lp1, kUnit)}))};
    } else if (id == "llogl-grand") {
        s.claim = "(L log L, L^{p1),b})_{theta,b,E} = L_{p, l^{1-theta-b theta/p1} b(rho), E}";
        const double p = 1.0 / (1.0 - th + th / p1);
        const SpaceDescriptor llogl = Theta(0.0, one, RiSpace::Lq(1.0), kUnit);
        s.lhs = {over(outer(th, one), llogl, grand)};
        s.rhs = {direct(ultra(p, mul(ell(1.0 - th - be * th / p1), bo(one, 1.0 - 1.0 / p1, ell(1.0 + be / p1))), E))};
    } else if (id == "l1-grand") {
        s.claim = "(L1, L^{p1),b})_{theta,b,E} = L_{p, l^{-b theta/p1} b(rho), E}";
        const double p = 1.0 / (1.0 - th + th / p1);
        s.lhs = {over(outer(th, one), ultra(1.0, one, RiSpace::Lq(1.0)), grand)};
        s.rhs = {direct(ultra(p, mul(ell(-be * th / p1), bo(one, 1.0 - 1.0 / p1, ell(be / p1))), E))};
    } else if (id == "small-ultra") {
        // Y1 = L_{p1} (b1 = 1, E1 = L_p1)
        s.claim = "(L^{(p0,a}, L_{p1,b1,E1})_{theta,b,E} = L_{p, l^{a(1-theta)/p0'} b1^theta b(rho), E}";
        s.lhs = {over(outer(th, one), small, Lp1sp)};
        s.rhs = {direct(ultra(p_mix, mul(ell(al * (1.0 - th) / p0c), bo(one, 1.0 / p0 - 1.0 / p1, ell(al / p0c))), E))};
    } else if (id == "small-linfq") {
        // L_{inf,q1,beta1} with q1 = inf, beta1 = -1 (exponential class)
        const double b1 = -1.0, inv_q1 = 0.0;
        s.claim = "(L^{(p0,a}, L_{inf,q1,b1})_{theta,b,E} = L_{p, l^{(1-theta)a/p0' + theta(b1+1/q1)} b(rho), E}";
        const double p = p0 / (1.0 - th);
        s.lhs = {over(outer(th, one), small, App(AppSpace::linf_q_beta(RiSpace::Linf(), b1)))};
        s.rhs = {direct(ultra(p, mul(ell((1.0 - th) * al / p0c + th * (b1 + inv_q1)),
                                     bo(one, 1.0 / p0, ell(al / p0c - (b1 + inv_q1)))), E))};
    } else if (id == "small-linf") {
        s.claim = "(L^{(p0,a}, L_inf)_{theta,b,E} = L_{p, l^{a(1-theta)/p0'} b(rho), E}";
        const double p = p0 / (1.0 - th);
        s.lhs = {over(outer(th, one), small, App(AppSpace::linf_q_beta(RiSpace::Linf(), 0.0)))};
        s.rhs = {direct(ultra(p, mul(ell(al * (1.0 - th) / p0c), bo(one, 1.0 / p0, ell(al / p0c))), E))};
    } else if (id == "ggamma-ultra") {
        // G Gamma(p0, q0 = 2, w1 = t^-1 l^-2, w2 = 1), Y1 = L_{p1}
        const RiSpace Eq0 = RiSpace::Lq(2.0);
        const Weight w1{-1.0, ell(-2.0)}, w2{0.0, one};
        const SvExpr N = SvExpr::norm_tail(ell(-2.0 / Eq0.q), Eq0, Side::Upper, kUnit);  // ||(t w1)^{1/q0}||_{L~q0(u,1)}
        s.claim = "(G Gamma(p0,q0,w1,w2), L_{p1,b1,E1})_{theta,b,E} = L_{p, (w2^{1/p0} N)^{1-theta} b1^theta b(rho), E}";
        s.lhs = {over(outer(th, one), App(AppSpace::ggamma(p0, Eq0, w1, w2)), Lp1sp)};
        s.rhs = {direct(ultra(p_mix, mul(pw(N, 1.0 - th), bo(one, 1.0 / p0 - 1.0 / p1, N)), E))};
    } else {
        // A/B-type scenarios: E0 = E1 = L_2 inside A and B
        const RiSpace E01 = RiSpace::Lq(2.0);
        const double aa = P.alpha_ab, bb = P.beta_ab;
        const SvExpr N = SvExpr::norm_tail(ell(bb - 1.0), E01, Side::Lower, kUnit);  // ||l^{b-1}||_{E1(0,u)}
        const SvExpr phiB = ell(aa - 1.0 + 1.0 / E01.q);                               // l^{a-1} phi_E0(l)
        const SpaceDescriptor A = App(AppSpace::a_type(p1, bb, E01));
        const SpaceDescriptor B = App(AppSpace::b_type(p0, aa, E01));
        const double gamma = 1.0 / p0 - 1.0 / p1;
        if (id == "a-type-ultra") {
            s.claim = "(L_{p0,b0,E0}, A_{p1,b,E1})_{theta,b,E} = L_{p, b0^{1-theta} N^theta b(rho), E}";
            s.lhs = {over(outer(th, one), Lp0sp, A)};
            s.rhs = {direct(ultra(p_mix, mul(pw(N, th), bo(one, gamma, pw(N, -1.0))), E))};
        } else if (id == "b-type-ultra") {
            s.claim = "(B_{p0,a,E0}, L_{p1,b1,E1})_{theta,b,E} = L_{p, (l^{a-1} phi_E0(l))^{1-theta} b1^theta b(rho), E}";
            s.lhs = {over(outer(th, one), B, Lp1sp)};
            s.rhs = {direct(ultra(p_mix, mul(pw(phiB, 1.0 - th), bo(one, gamma, phiB)), E))};
        } else if (id == "b-as-limit-of-A") {
            s.claim = "(L_{p0, l^{a-1}, Linf}, A_{p1,b,E1})_{0,1,E0} = B_{p0,a,E0}";
            s.outer_theta = 0.0;
            s.outer_E = E01;
            s.lhs = {over(Theta(0.0, one, E01, kUnit), ultra(p0, ell(aa - 1.0), RiSpace::Linf()), A)};
            s.rhs = {direct(B)};
        } else {
            s.claim = "(B_{p0,a,E0}, A_{p1,b,E1})_{theta,b,E} = L_{p, (l^{a-1} phi_E0(l))^{1-theta} N^theta b(rho), E}";
            s.lhs = {over(outer(th, one), B, A)};
            s.rhs = {direct(ultra(p_mix, mul(mul(pw(phiB, 1.0 - th), pw(N, th)), bo(one, gamma, mul(phiB, pw(N, -1.0)))), E))};
        }
    }
    return s;
}

struct IdentityOptions {
    double t_min = 1e-8;
    std::vector<std::size_t> sizes{1024, 2048};
    unsigned jobs = 1;
    std::optional<std::vector<CorpusFunction>> corpus;  // scenario default when unset
};

// t-grid for oracle terms: the u-range, extended below until the outer
// weight has damped the integrand, and cut at t = 1.
inline Grid identity_tgrid(const Grid& ug, double theta, RiSpace E) {
    const Grid og = oracle_grid(ug.log_min, ug.log_max, ug.n, theta, E);
    const double span = ug.log_max - og.log_min;
    const auto m = static_cast<std::size_t>(std::ceil(static_cast<double>(ug.n) * span / (ug.log_max - ug.log_min)));
    return Grid::from_log(og.log_min, ug.log_max, m);
}

inline EquivalenceReport verify_identity(const std::string& id, const IdentityOptions& opt = {},
                                         const IdentityParams& P = {}) {
    const IdentityScenario sc = identity_scenario(id, P);
    const std::vector<CorpusFunction> corpus = opt.corpus ? *opt.corpus : named_corpus(sc.corpus);
    EquivalenceReport rep;
    rep.case_id = sc.id;
    rep.sizes = opt.sizes;
    std::vector<std::vector<FunctionRatios>> per_size;
    for (std::size_t n : opt.sizes) {
        const Grid ug = Grid::geometric(opt.t_min, 1.0, n);
        const Grid tg = identity_tgrid(ug, sc.outer_theta, sc.outer_E);
        struct Plan {
            NormPlan plan;
            const IdentityTerm* term;
        };
        auto plans = [&](const std::vector<IdentityTerm>& terms) {
            std::vector<Plan> out;
            for (const auto& t : terms) out.push_back({NormPlan(t.space, t.couple ? tg : ug), &t});
            return out;
        };
        const auto lp = plans(sc.lhs), rp = plans(sc.rhs);
        std::vector<FunctionRun> runs(corpus.size());
        parallel_for(corpus.size(), opt.jobs, [&](std::size_t fi) {
            const auto& cf = corpus[fi];
            FunctionRun& run = runs[fi];
            run.ratios.function_id = cf.id;
            GridFunction fs = cf.sample(ug);
            const KProfile K = k_peetre(fs);
            auto side = [&](const std::vector<Plan>& ps) {
                NormValue v;
                for (const auto& p : ps) {
                    NormValue x;
                    if (p.term->couple) {
                        KOracle o(fs, p.term->couple->first, p.term->couple->second);
                        x = p.plan(o.profile(tg));
                        run.ratios.oracle_gap = std::max(run.ratios.oracle_gap, o.trivial(1.0) / o(1.0));
                    } else {
                        x = p.plan(K);
                    }
                    v.value = std::max(v.value, x.value);
                    v.divergent = v.divergent || x.divergent;
                }
                return v;
            };
            NormValue lhs = side(lp), rhs = side(rp);
            if (lhs.divergent || rhs.divergent || !(lhs.value > 0.0) || !(rhs.value > 0.0)) {
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

// ---------------------------------------------------------------------------
// ||l^sigma||_{L~q(0,u)} (sigma + 1/q < 0) or ||l^sigma||_{L~q(u,1)}
// (sigma + 1/q > 0) against l^{sigma+1/q}(u).

struct EllNormCheck {
    double ratio_min = kInf;
    double ratio_max = 0.0;
    [[nodiscard]] double window() const { return ratio_max / ratio_min; }
};

// Norms on a grid reaching down to log t = log_floor; ratios at the grid
// points with u in [u_lo, u_hi].
inline EllNormCheck ell_norm_check(double sigma, RiSpace E, double u_lo, double u_hi, double log_floor = -2e4,
                                   std::size_t n = std::size_t{1} << 20) {
    const double s1q = sigma + (E.is_sup() ? 0.0 : 1.0 / E.q);
    Side side;
    if (E.is_sup())
        side = sigma <= 0.0 ? Side::Lower : Side::Upper;
    else if (s1q < 0.0)
        side = Side::Lower;
    else if (s1q > 0.0)
        side = Side::Upper;
    else
        throw DomainError("ell_norm_check needs sigma + 1/q != 0");
    const Grid g = Grid::from_log(log_floor, 0.0, n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::pow(1.0 - g.x(i), sigma);
    const auto nn = nested_norms(v, g, E, side, domain_of(Setting::UnitInterval));
    EllNormCheck c;
    const double lo = std::log(u_lo), hi = std::log(u_hi);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g.x(i);
        if (x < lo || x > hi) continue;
        const double r = nn[i] / std::pow(1.0 - x, s1q);
        c.ratio_min = std::min(c.ratio_min, r);
        c.ratio_max = std::max(c.ratio_max, r);
    }
    return c;
}

}  // namespace rilab
