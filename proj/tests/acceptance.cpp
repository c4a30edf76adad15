// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
//
//   rilab_acceptance            all criteria
//   rilab_acceptance 3 9        selected criteria

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "rilab/corpus.hpp"
#include "rilab/hardy.hpp"
#include "rilab/holmstedt.hpp"
#include "rilab/identities.hpp"
#include "rilab/kfunctional.hpp"
#include "rilab/reiteration.hpp"
#include "rilab/report.hpp"

using namespace rilab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

std::string side_name(Side s) { return s == Side::Lower ? "(0,t)" : "(t,inf)"; }
std::string q_name(RiSpace E) { return "L" + q_label(E); }

// 1. K(t) for f* = s^-1/2 on (0,1) against 2 sqrt(t).
Outcome peetre_exactness() {
    const auto t0 = Clock::now();
    const Grid g = Grid::geometric(1e-8, 1e8, 4096);
    auto fs = GridFunction::sample(g, [](double t) { return t < 1.0 ? 1.0 / std::sqrt(t) : 0.0; },
                                   Monotone::Nonincreasing);
    const KProfile K = k_peetre(fs);
    const double secs = seconds_since(t0);
    double worst = 0.0;
    for (std::size_t i : interior_points(g, 0.05, g.n))
        if (g.t(i) <= 1.0) worst = std::max(worst, std::abs(K.k[i] / (2.0 * std::sqrt(g.t(i))) - 1.0));
    return {worst <= 1e-3 && secs < 1.0, "max rel err " + fmt(worst) + ", " + fmt(secs, 3) + " s"};
}

// 2. The oracle over the endpoint couple against the exact K.
Outcome oracle_endpoints() {
    const Grid g = Grid::geometric(1e-8, 1e8, 1024);
    double worst = 1.0;
    std::string where;
    for (const auto& cf : standard_corpus()) {
        auto fs = cf.sample(g);
        auto K = k_peetre(fs);
        KOracle o(fs, X0(), X1());
        for (std::size_t i = 0; i < g.n; ++i) {
            double r = o(g.t(i)) / K.k[i];
            double f = std::max(r, 1.0 / r);
            if (f > worst) {
                worst = f;
                where = cf.id + " t=" + fmt(g.t(i));
            }
        }
    }
    return {worst <= 1.05, "worst factor " + fmt(worst, 6) + (where.empty() ? "" : " (" + where + ")")};
}

// 3. l-norm asymptotics on (0,1/2).
Outcome ell_norms() {
    auto exact = ell_norm_check(-2.0, RiSpace::Lq(1.0), 1e-6, 0.5);
    const double dev = std::max(std::abs(exact.ratio_min - 1.0), std::abs(exact.ratio_max - 1.0));
    bool ok = dev <= 1e-3;
    std::string d = "||l^-2||_L1(0,u)/l^-1(u) within 1 +- " + fmt(dev, 3) + "; windows on [1e-8, 1/2]:";
    const std::pair<double, RiSpace> sweep[] = {
        {-2.0, RiSpace::Lq(1.0)}, {-1.0, RiSpace::Linf()}, {1.0, RiSpace::Lq(1.0)}, {0.0, RiSpace::Linf()}};
    for (const auto& [sigma, E] : sweep) {
        auto c = ell_norm_check(sigma, E, 1e-8, 0.5);
        ok = ok && c.window() <= 1.2;
        d += " (" + fmt(sigma) + "," + q_label(E) + ")=" + fmt(c.window());
    }
    return {ok, d};
}

// 4. ||s^a b||_E(0,t) ~ t^a b(t) and the dual, on the interior of [1e-8, 1e8].
Outcome power_norms() {
    const SvExpr bs[] = {SvExpr(), SvExpr::ell(1.0), SvExpr::ell(-1.0), SvExpr::broken_ell(1.0, -1.0)};
    const RiSpace Es[] = {RiSpace::Lq(1.0), RiSpace::Lq(2.0), RiSpace::Linf()};
    double worst = 0.0, worst_stab = 0.0;
    std::string where, where_stab;
    for (const auto& b : bs)
        for (double a : {0.25, 1.0})
            for (const auto& E : Es)
                for (Side s : {Side::Lower, Side::Upper}) {
                    auto r0 = power_norm_ratio(b, a, E, s, Grid::geometric(1e-8, 1e8, 512));
                    auto r1 = power_norm_ratio(b, a, E, s, Grid::geometric(1e-8, 1e8, 1024));
                    const std::string id = b.describe() + " a=" + fmt(a) + " " + q_name(E) + side_name(s);
                    if (r1.window() > worst) {
                        worst = r1.window();
                        where = id;
                    }
                    double st = std::abs(r1.window() - r0.window()) / r0.window();
                    if (st > worst_stab) {
                        worst_stab = st;
                        where_stab = id;
                    }
                }
    return {worst <= 5.0 && worst_stab <= 0.10, "worst window " + fmt(worst) + " (" + where + "), worst stability " +
                                                  fmt(worst_stab, 3) + " (" + where_stab + ")"};
}

// 5. All six Holmstedt cases over the parameter grid, n = 512 -> 1024.
Outcome holmstedt_sweep() {
    const auto t0 = Clock::now();
    const SvExpr sv[] = {SvExpr(), SvExpr::ell(0.5), SvExpr::ell(-0.5)};
    const RiSpace Es[] = {RiSpace::Lq(2.0), RiSpace::Linf()};
    HarnessOptions o;
    o.sizes = {512, 1024};
    const auto corpus = standard_corpus();
    double worst = 0.0, worst_stab = 0.0;
    int runs = 0, skipped = 0;
    std::string where;
    for (const auto& [c, name] : holmstedt_case_names()) {
        for (const auto& b0 : sv)
            for (const auto& b1 : sv)
                for (const auto& a : sv)
                    for (const auto& E0 : Es)
                        for (const auto& E1 : Es)
                            for (const auto& F : Es) {
                                HolmstedtParams p{0.25, 0.5, b0, b1, a, E0, E1, F};
                                if (c == HolmstedtCase::R_theta0_zero) p.theta0 = 0.0;
                                if (c == HolmstedtCase::L_theta1_one) p.theta1 = 1.0;
                                try {
                                    holmstedt_setup(c, p);
                                } catch (const InadmissibleError&) {
                                    ++skipped;  // the case hypotheses fail for this choice
                                    continue;
                                }
                                auto r = verify_holmstedt(c, p, corpus, o);
                                ++runs;
                                if (!r.notes.empty() || !std::isfinite(r.window)) worst = kInf;
                                if (r.window > worst) {
                                    worst = r.window;
                                    where = name + " b0=" + b0.describe() + " b1=" + b1.describe() +
                                            " a=" + a.describe() + " " + q_name(E0) + "," + q_name(E1) + "," +
                                            q_name(F);
                                }
                                worst_stab = std::max(worst_stab, r.stability);
                            }
    }
    const double secs = seconds_since(t0);
    return {worst <= 100.0 && worst_stab <= 0.10 && secs <= 600.0,
            std::to_string(runs) + " runs (" + std::to_string(skipped) + " inadmissible skipped), window " + fmt(worst) +
                " (" + where + "), stability " + fmt(worst_stab, 3) + ", " + fmt(secs, 3) + " s"};
}

// 6. Reiteration, interior theta and both end branches.
Outcome reiteration_suite() {
    double worst = 0.0, worst_stab = 0.0;
    std::string where;
    bool notes = false;
    for (auto c : {ReiterationCase::ThmR_interior, ReiterationCase::ThmL_interior})
        for (double th : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            ReiterationParams rp;
            rp.theta = th;
            if (th == 0.0 || th == 1.0) rp.E = RiSpace::Linf();
            auto r = verify_reiteration(c, rp, standard_corpus());
            notes = notes || r.one_sided > 0;
            if (r.window > worst) {
                worst = r.window;
                where = r.case_id;
            }
            worst_stab = std::max(worst_stab, r.stability);
        }
    return {!notes && worst <= 100.0 && worst_stab <= 0.10,
            "10 runs, window " + fmt(worst) + " (" + where + "), stability " + fmt(worst_stab, 3) +
                (notes ? ", one-sided divergence" : "")};
}

// 7. Identities on (0,1).
Outcome identity_suite() {
    const std::pair<const char*, double> checks[] = {
        {"ultra-as-theta", 1.5}, {"grand-as-R", 20.0}, {"small-as-L", 20.0}, {"small-grand-interior", 50.0}};
    // small-grand-interior at p0 = 2, p1 = 4, theta = 1/2, alpha = beta = 1 targets L^{8/3,2}(log L)^{1/8}
    bool ok = false;
    {
        const auto sc = identity_scenario("small-grand-interior");
        if (const auto* app = std::get_if<AppSpace>(&sc.rhs.at(0).space.v))
            if (const auto* u = std::get_if<UltraSpace>(&app->kind))
                ok = std::abs(u->p - 8.0 / 3.0) < 1e-12 && u->b == SvExpr::ell(0.125);
    }
    std::string d = ok ? "target p=8/3, A=1/8" : "target space is not L^{8/3}(log L)^{1/8}";
    for (const auto& [id, limit] : checks) {
        auto r = verify_identity(id);
        bool pass = r.passes(limit, 0.10);  // only two-sided divergences may be excluded
        ok = ok && pass;
        d += "; " + std::string(id) + " " + fmt(r.window) + "/" + fmt(limit) + " stab " +
             fmt(r.stability, 3);
    }
    return {ok, d};
}

// 8. Norm of f in D equals the norm of the reversed K in the reversed D.
Outcome symmetry_suite() {
    const auto l = SvExpr::ell(1.0), lm = SvExpr::ell(-0.5);
    const SpaceDescriptor ds[] = {
        Theta(0.3, l, RiSpace::Lq(2.0)),
        L(0.25, lm, RiSpace::Lq(1.5), l, RiSpace::Linf()),
        R(0.6, SvExpr(), RiSpace::Linf(), lm, RiSpace::Lq(3.0)),
        LL(0.5, SvExpr(), RiSpace::Lq(2.0), l, RiSpace::Lq(1.0), lm, RiSpace::Linf()),
    };
    const Grid g = Grid::geometric(1e-8, 1e8, 1024);
    double worst = 0.0;
    int pairs = 0;
    for (const auto& D : ds) {
        const auto Dr = couple_reverse(D);
        for (const auto& cf : standard_corpus()) {
            auto K = k_peetre(cf.sample(g));
            auto a = norm_in_space(K, D), b = norm_in_space(k_reverse(K), Dr);
            ++pairs;
            if (a.divergent != b.divergent) worst = kInf;
            else if (!a.divergent) worst = std::max(worst, std::abs(b.value / a.value - 1.0));
        }
    }
    return {worst <= 1e-6, std::to_string(pairs) + " pairs, max rel diff " + fmt(worst, 3)};
}

// 9. Weighted Hardy inequalities on the corpus.
Outcome hardy_suite() {
    const Grid g = Grid::from_log(-40.0, 40.0, 4096);
    const SvExpr bs[] = {SvExpr(), SvExpr::ell(1.0), SvExpr::ell(-1.0)};
    const RiSpace Es[] = {RiSpace::Lq(1.0), RiSpace::Lq(2.0), RiSpace::Linf()};
    const auto corpus = standard_corpus();
    std::vector<std::vector<double>> fs;
    for (const auto& cf : corpus) fs.push_back(cf.sample(g).values);

    double hardy = 0.0, qc = 0.0;
    std::string hardy_at, qc_at;
    bool nan = false;
    for (const auto& b : bs)
        for (const auto& E : Es) {
            for (double a : {0.25, 0.5, 1.0})
                for (Side s : {Side::Lower, Side::Upper})
                    for (std::size_t k = 0; k < fs.size(); ++k) {
                        double r = hardy_ratio(fs[k], g, a, b, E, s);
                        nan = nan || !std::isfinite(r);
                        if (r > hardy) {
                            hardy = r;
                            hardy_at = b.describe() + " a=" + fmt(a) + " " + q_name(E) + side_name(s) + " " + corpus[k].id;
                        }
                    }
            const std::pair<Side, double> qs[] = {{Side::Lower, -0.25}, {Side::Lower, 0.25}, {Side::Lower, 0.5},
                                                  {Side::Upper, -0.25}, {Side::Upper, -0.5}, {Side::Upper, -1.0}};
            for (const auto& [s, a] : qs)
                for (std::size_t k = 0; k < fs.size(); ++k) {
                    double r = quasi_concave_ratio(primitive(fs[k], g), g, a, b, E, s);
                    if (r > qc) {
                        qc = r;
                        qc_at = b.describe() + " a=" + fmt(a) + " " + q_name(E) + side_name(s) + " " + corpus[k].id;
                    }
                }
        }

    // one window per parameter set, over the corpus
    double window = 0.0;
    std::string window_at;
    for (double alpha : {0.5, 1.0})
        for (double beta : {0.25, 0.5})
            for (const auto& a : bs)
                for (const auto& b : bs)
                    for (const auto& E : Es)
                        for (const auto& F : Es) {
                            double lo = kInf, hi = 0.0;
                            for (const auto& f : fs) {
                                double r = tail_power_ratio(f, g, alpha, a, beta, b, E, F);
                                nan = nan || !std::isfinite(r);
                                lo = std::min(lo, r);
                                hi = std::max(hi, r);
                            }
                            if (hi / lo > window) {
                                window = hi / lo;
                                window_at = "alpha=" + fmt(alpha) + " beta=" + fmt(beta) + " a=" + a.describe() +
                                            " b=" + b.describe() + " " + q_name(E) + "," + q_name(F);
                            }
                        }
    return {!nan && hardy <= 10.0 && qc <= 10.0 && window <= 10.0,
            "Hardy constant " + fmt(hardy) + " (" + hardy_at + "), quasi-concave " + fmt(qc) + " (" + qc_at +
                "), tail-power window " + fmt(window) + " (" + window_at + ")"};
}

// 10. Repeated runs give the same report bytes, with and without threads.
Outcome determinism() {
    HarnessOptions o;
    o.sizes = {256, 512};
    auto a = report_csv(verify_holmstedt(HolmstedtCase::R_interior, HolmstedtParams{}, standard_corpus(), o));
    auto b = report_csv(verify_holmstedt(HolmstedtCase::R_interior, HolmstedtParams{}, standard_corpus(), o));
    o.jobs = 4;
    auto c = report_csv(verify_holmstedt(HolmstedtCase::R_interior, HolmstedtParams{}, standard_corpus(), o));
    IdentityOptions io;
    io.sizes = {256, 512};
    auto d = report_json(verify_identity("grand-as-R", io)).dump();
    io.jobs = 3;
    auto e = report_json(verify_identity("grand-as-R", io)).dump();
    bool ok = a == b && b == c && d == e;
    return {ok, "holmstedt CSV " + std::to_string(a.size()) + " bytes x3, identity JSON x2" + (ok ? " identical" : " differ")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"Peetre K of s^-1/2", peetre_exactness},
        {"oracle at the endpoint couple", oracle_endpoints},
        {"l-norm asymptotics", ell_norms},
        {"power-weight norms", power_norms},
        {"Holmstedt formulas", holmstedt_sweep},
        {"reiteration", reiteration_suite},
        {"identities on (0,1)", identity_suite},
        {"couple reversal", symmetry_suite},
        {"weighted Hardy inequalities", hardy_suite},
        {"determinism", determinism},
    };
    std::set<int> pick;
    for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!pick.empty() && !pick.count(id)) continue;
        const auto t0 = Clock::now();
        Outcome r;
        try {
            r = criteria[k].second();
        } catch (const std::exception& e) {
            r = {false, std::string("threw: ") + e.what()};
        }
        failed += r.pass ? 0 : 1;
        std::printf("criterion %2d %s  %s: %s [%.1f s]\n", id, r.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                    r.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
