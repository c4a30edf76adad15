#include <gtest/gtest.h>

#include <cmath>

#include "rilab/corpus.hpp"
#include "rilab/hardy.hpp"
#include "rilab/holmstedt.hpp"

using namespace rilab;

namespace {

HolmstedtParams params_for(HolmstedtCase c) {
    HolmstedtParams p;
    if (c == HolmstedtCase::R_theta0_zero) p.theta0 = 0.0;
    if (c == HolmstedtCase::L_theta1_one) p.theta1 = 1.0;
    return p;
}

}  // namespace

TEST(HolmstedtSetup, CaseNamesRoundTrip) {
    for (const auto& [c, name] : holmstedt_case_names()) {
        EXPECT_EQ(parse_holmstedt_case(name), c);
        EXPECT_EQ(to_string(c), name);
    }
    EXPECT_THROW(parse_holmstedt_case("R_nope"), InputError);
}

// With b0 = b1 = a = 1 and L_inf everywhere every tail norm is 1.
TEST(HolmstedtSetup, RhoForConstantWeights) {
    const struct {
        HolmstedtCase c;
        double gamma;
    } expect[] = {{HolmstedtCase::R_interior, 0.25}, {HolmstedtCase::R_theta0_zero, 0.5},
                  {HolmstedtCase::R_x0, 0.5},        {HolmstedtCase::L_interior, 0.25},
                  {HolmstedtCase::L_theta1_one, 0.75}, {HolmstedtCase::L_x1, 0.75}};
    for (const auto& e : expect) {
        auto s = holmstedt_setup(e.c, params_for(e.c));
        EXPECT_DOUBLE_EQ(s.rho.gamma, e.gamma) << to_string(e.c);
        for (double x : {-10.0, 0.0, 7.0}) EXPECT_NEAR(s.rho.log_at(x), e.gamma * x, 1e-9) << to_string(e.c);
    }
}

TEST(HolmstedtSetup, MemberSpaces) {
    auto s = holmstedt_setup(HolmstedtCase::R_x0, params_for(HolmstedtCase::R_x0));
    EXPECT_TRUE(std::holds_alternative<EndpointX0>(s.Y0.v));
    EXPECT_TRUE(std::holds_alternative<RSpace>(s.Y1.v));
    auto t = holmstedt_setup(HolmstedtCase::L_theta1_one, params_for(HolmstedtCase::L_theta1_one));
    EXPECT_TRUE(std::holds_alternative<LSpace>(t.Y0.v));
    EXPECT_TRUE(std::holds_alternative<ThetaSpace>(t.Y1.v));
}

TEST(HolmstedtSetup, HypothesesEnforced) {
    HolmstedtParams p;
    p.E1 = RiSpace::Lq(2.0);  // ||1||_{L~2(0,1)} = inf
    EXPECT_THROW(holmstedt_setup(HolmstedtCase::R_interior, p), InadmissibleError);
    p.b1 = SvExpr::ell(-1.0);
    EXPECT_NO_THROW(holmstedt_setup(HolmstedtCase::R_interior, p));
    HolmstedtParams q;
    q.theta0 = 0.6;  // theta0 > theta1
    EXPECT_THROW(holmstedt_setup(HolmstedtCase::L_interior, q), InadmissibleError);
    EXPECT_THROW(holmstedt_setup(HolmstedtCase::R_theta0_zero, HolmstedtParams{}), InadmissibleError);
}

TEST(InteriorPoints, SamePositionsUnderRefinement) {
    Grid g = Grid::from_log(0.0, 100.0, 101);
    auto pts = interior_points(g, 0.05, 9);
    ASSERT_EQ(pts.size(), 10u);
    EXPECT_EQ(pts.front(), 5u);
    EXPECT_EQ(pts.back(), 95u);
    for (std::size_t k = 1; k < pts.size(); ++k) EXPECT_EQ(pts[k] - pts[k - 1], 10u);
    Grid fine = g.with_size(1001);
    auto f = interior_points(fine, 0.05, 9);
    ASSERT_EQ(f.size(), pts.size());
    for (std::size_t k = 0; k < f.size(); ++k) EXPECT_NEAR(fine.x(f[k]), g.x(pts[k]), 1e-9);
}

TEST(VerifyHolmstedt, AllCasesSmallGrid) {
    HarnessOptions o;
    o.sizes = {256, 512};
    for (const auto& [c, name] : holmstedt_case_names()) {
        auto r = verify_holmstedt(c, params_for(c), standard_corpus(), o);
        EXPECT_TRUE(r.notes.empty()) << name;
        EXPECT_EQ(r.functions.size(), 8u) << name;
        EXPECT_TRUE(r.passes(100.0, 0.10)) << name << " window " << r.window << " stability " << r.stability;
        for (const auto& f : r.functions) EXPECT_GE(f.oracle_gap, 1.0 - 1e-12) << name;
    }
}

TEST(VerifyHolmstedt, JobsDoNotChangeResult) {
    HarnessOptions o;
    o.sizes = {256, 512};
    auto a = verify_holmstedt(HolmstedtCase::L_x1, params_for(HolmstedtCase::L_x1), standard_corpus(), o);
    o.jobs = 4;
    auto b = verify_holmstedt(HolmstedtCase::L_x1, params_for(HolmstedtCase::L_x1), standard_corpus(), o);
    EXPECT_EQ(report_csv(a), report_csv(b));
}

// b = 1, E = L1: both Hardy operators have constant exactly 1/a.
TEST(Hardy, ConstantWeightL1IsOneOverAlpha) {
    Grid g = Grid::from_log(-40.0, 40.0, 4096);
    for (const auto& cf : standard_corpus()) {
        auto f = cf.sample(g).values;
        for (double a : {0.25, 0.5, 1.0})
            for (Side s : {Side::Lower, Side::Upper})
                EXPECT_NEAR(hardy_ratio(f, g, a, SvExpr(), RiSpace::Lq(1.0), s) * a, 1.0, 2e-2) << cf.id << " " << a;
    }
}

TEST(HardyProperty, BoundedOnCorpus) {
    Grid g = Grid::from_log(-40.0, 40.0, 2048);
    for (const auto& cf : standard_corpus()) {
        auto f = cf.sample(g).values;
        for (const auto& b : {SvExpr(), SvExpr::ell(1.0), SvExpr::ell(-1.0)})
            for (const auto& E : {RiSpace::Lq(2.0), RiSpace::Linf()})
                for (Side s : {Side::Lower, Side::Upper}) {
                    double r = hardy_ratio(f, g, 0.5, b, E, s);
                    EXPECT_TRUE(std::isfinite(r)) << cf.id;
                    EXPECT_GT(r, 0.0);
                    EXPECT_LT(r, 10.0) << cf.id << " " << b.describe();
                }
    }
}

// E = L1 makes both sides the same integral.
TEST(QuasiConcave, L1RatioIsOne) {
    Grid g = Grid::from_log(-30.0, 30.0, 1024);
    for (const auto& cf : standard_corpus()) {
        auto phi = primitive(cf.sample(g).values, g);
        EXPECT_NEAR(quasi_concave_ratio(phi, g, -0.25, SvExpr::ell(1.0), RiSpace::Lq(1.0), Side::Lower), 1.0, 1e-12);
        EXPECT_LE(quasi_concave_ratio(phi, g, -0.25, SvExpr(), RiSpace::Lq(2.0), Side::Lower), 10.0);
    }
}

// E = F = L1: ||t^beta ∫_t^inf s^alpha f ds/s||_L~1 = (1/beta) ||t^{alpha+beta} f||_L~1.
TEST(TailPower, L1IsOneOverBeta) {
    Grid g = Grid::from_log(-40.0, 40.0, 4096);
    for (const auto& cf : standard_corpus()) {
        auto f = cf.sample(g).values;
        for (double beta : {0.25, 0.5})
            EXPECT_NEAR(tail_power_ratio(f, g, 0.5, SvExpr(), beta, SvExpr(), RiSpace::Lq(1.0), RiSpace::Lq(1.0)) * beta,
                        1.0, 2e-2)
                << cf.id;
    }
}
