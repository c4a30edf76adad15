#include <gtest/gtest.h>

#include <cmath>

#include "rilab/corpus.hpp"
#include "rilab/kfunctional.hpp"

using namespace rilab;

namespace {

Grid wide(std::size_t n = 2048) { return Grid::geometric(1e-8, 1e8, n); }

// a on the grid, so the sampled indicator jumps exactly there
double on_grid(const Grid& g, double a) {
    double h = g.step();
    return std::exp(g.log_min + h * std::round((std::log(a) - g.log_min) / h));
}

}  // namespace

TEST(Peetre, InverseSquareRoot) {
    Grid g = Grid::geometric(1e-8, 1.0, 4096);
    auto f = GridFunction::sample(g, [](double t) { return 1.0 / std::sqrt(t); }, Monotone::Nonincreasing);
    auto K = k_peetre(f);
    for (std::size_t i = 0; i < g.n; ++i) EXPECT_NEAR(K.k[i] / (2.0 * std::sqrt(g.t(i))), 1.0, 1e-12);
}

TEST(Peetre, RejectsIncreasing) {
    Grid g = Grid::geometric(1e-2, 1.0, 16);
    auto f = GridFunction::sample(g, [](double t) { return t; });
    EXPECT_THROW(k_peetre(f), InputError);
}

TEST(PeetreProperty, ConcaveShapeOnCorpus) {
    Grid g = wide(1024);
    for (const auto& cf : standard_corpus()) {
        auto K = k_peetre(cf.sample(g));
        for (std::size_t i = 1; i < g.n; ++i) {
            EXPECT_GE(K.k[i], K.k[i - 1]) << cf.id;
            EXPECT_LE(K.k[i] / g.t(i), K.k[i - 1] / g.t(i - 1) * (1 + 1e-12)) << cf.id;
        }
    }
}

TEST(KReverse, Involution) {
    Grid g = wide(512);
    auto K = k_peetre(pow_fn(3.0).sample(g));
    auto R = k_reverse(k_reverse(K));
    EXPECT_EQ(R.k.grid, g);
    for (std::size_t i = 0; i < g.n; ++i) EXPECT_NEAR(R.k[i], K.k[i], 1e-14 * K.k[i]);
}

// Theta(1/2, 1, L2) of the indicator of (0,a): ||t^-1/2 min(t,a)||^2 = a + a.
TEST(NormInSpace, ThetaOfIndicator) {
    Grid g = wide(8192);
    const double a = on_grid(g, 0.5), h = g.step();
    auto K = k_peetre(chi_fn(a * (1 + 1e-12)).sample(g));
    // the sampled model puts the jump half a cell past a
    const double am = a * std::exp(0.5 * h);
    EXPECT_NEAR(norm_in_space(K, Theta(0.5, SvExpr(), RiSpace::Lq(2.0))).value, std::sqrt(2.0 * am), 2e-3);
    EXPECT_NEAR(norm_in_space(K, Theta(0.25, SvExpr(), RiSpace::Linf())).value, std::pow(am, 0.75), 1e-3);
    EXPECT_NEAR(norm_in_space(K, X0()).value, am, 1e-12);
    EXPECT_NEAR(norm_in_space(K, X1()).value, 1.0, 1e-12);
}

// sup_{s>t} s^-1/2 min(s,a) = sqrt(a) for t <= a
TEST(NormInSpace, RSpaceSupSup) {
    Grid g = wide(4096);
    const double a = on_grid(g, 1.0);  // 1 itself falls between grid points here
    auto K = k_peetre(chi_fn(a * (1 + 1e-12)).sample(g));
    auto v = norm_in_space(K, R(0.5, SvExpr(), RiSpace::Linf(), SvExpr(), RiSpace::Linf()));
    EXPECT_NEAR(v.value, std::sqrt(a), 1e-9);
    EXPECT_FALSE(v.divergent);
}

TEST(NormInSpace, DivergenceFlagged) {
    Grid g = wide(1024);
    auto K = k_peetre(chi_fn(1.0).sample(g));
    // theta = 1 with L1: ||t^-1 min(t,1)||_{L~1} diverges at 0
    EXPECT_TRUE(norm_in_space(K, Theta(1.0, SvExpr(), RiSpace::Lq(1.0))).divergent);
    EXPECT_TRUE(norm_in_space(K, Theta(0.0, SvExpr(), RiSpace::Lq(2.0))).divergent);
}

TEST(NormInSpace, IntersectionIsMax) {
    Grid g = wide(1024);
    auto K = k_peetre(pow_fn(4.0).sample(g));
    auto A = Theta(0.25, SvExpr(), RiSpace::Lq(2.0)), B = Theta(0.5, SvExpr::ell(1.0), RiSpace::Linf());
    double a = norm_in_space(K, A).value, b = norm_in_space(K, B).value;
    EXPECT_DOUBLE_EQ(norm_in_space(K, Intersect({A, B})).value, std::max(a, b));
}

// For (L1, L_inf) the truncation family holds the exact minimiser.
TEST(KOracle, EndpointCoupleMatchesPeetre) {
    Grid g = wide(1024);
    for (const auto& cf : standard_corpus()) {
        auto fs = cf.sample(g);
        auto K = k_peetre(fs);
        KOracle o(fs, X0(), X1());
        for (std::size_t i = 0; i < g.n; i += 7) {
            double r = o(g.t(i)) / K.k[i];
            EXPECT_LE(r, 1.05) << cf.id << " t=" << g.t(i);
            EXPECT_GE(r, 1.0 - 1e-9) << cf.id << " t=" << g.t(i);
        }
    }
}

TEST(KOracleProperty, BelowTrivialAndConcave) {
    Grid g = wide(512);
    auto Y0 = Theta(0.25, SvExpr(), RiSpace::Lq(2.0)), Y1 = Theta(0.75, SvExpr::ell(-1.0), RiSpace::Linf());
    for (const auto& cf : standard_corpus()) {
        auto fs = cf.sample(g);
        KOracle o(fs, Y0, Y1);
        double prev = 0.0, prev_ratio = kInf;
        for (double x = -30.0; x <= 30.0; x += 0.5) {
            double t = std::exp(x), v = o(t);
            EXPECT_LE(v, o.trivial(t) * (1 + 1e-12)) << cf.id;
            EXPECT_GE(v, prev * (1 - 1e-12)) << cf.id;
            EXPECT_LE(v / t, prev_ratio * (1 + 1e-12)) << cf.id;
            prev = v;
            prev_ratio = v / t;
        }
    }
}

TEST(KOracle, ProfileIsRepaired) {
    Grid g = wide(512);
    auto fs = log_fn(1.0).sample(g);
    KOracle o(fs, Theta(0.25, SvExpr(), RiSpace::Lq(1.0)), X1());
    auto P = o.profile(Grid::geometric(1e-12, 1e12, 300));
    for (std::size_t i = 1; i < P.k.size(); ++i) {
        EXPECT_GE(P.k[i], P.k[i - 1]);
        EXPECT_LE(P.k[i] / P.k.grid.t(i), P.k[i - 1] / P.k.grid.t(i - 1) * (1 + 1e-12));
    }
    EXPECT_THROW(k_oracle(fs, X0(), X1(), {0.0}), DomainError);
}
