#include <gtest/gtest.h>

#include "rilab/corpus.hpp"
#include "rilab/kfunctional.hpp"
#include "rilab/spaces.hpp"

using namespace rilab;

namespace {

std::vector<SpaceDescriptor> some_spaces() {
    const auto l = SvExpr::ell(1.0), lm = SvExpr::ell(-0.5), one = SvExpr();
    return {
        X0(),
        X1(),
        Theta(0.3, l, RiSpace::Lq(2.0)),
        L(0.25, lm, RiSpace::Lq(1.5), l, RiSpace::Linf()),
        R(0.6, one, RiSpace::Linf(), lm, RiSpace::Lq(3.0)),
        LL(0.5, one, RiSpace::Lq(2.0), l, RiSpace::Lq(1.0), lm, RiSpace::Linf()),
        RR(0.5, lm, RiSpace::Linf(), one, RiSpace::Lq(2.0), l, RiSpace::Lq(1.0)),
        Intersect({Theta(0.2, one, RiSpace::Lq(1.0)), R(0.7, l, RiSpace::Lq(2.0), one, RiSpace::Linf())}),
    };
}

}  // namespace

TEST(Descriptor, ThetaRangeChecked) {
    EXPECT_THROW(Theta(-0.1, SvExpr(), RiSpace::Lq(1.0)), DomainError);
    EXPECT_THROW(L(1.5, SvExpr(), RiSpace::Lq(1.0), SvExpr(), RiSpace::Lq(1.0)), DomainError);
    EXPECT_THROW(RiSpace::Lq(0.5), DomainError);
    EXPECT_NO_THROW(Theta(1.0, SvExpr(), RiSpace::Linf()));
}

TEST(Descriptor, Names) {
    EXPECT_EQ(Theta(0.5, SvExpr::ell(1.0), RiSpace::Lq(2.0)).name(), "Theta(0.5,ell^1,L2)");
    EXPECT_EQ(R(0.25, SvExpr(), RiSpace::Linf(), SvExpr::ell(-1.0), RiSpace::Lq(1.0)).name(),
              "R(0.25,1,Linf,ell^-1,L1)");
}

TEST(CoupleReverse, Involution) {
    for (const auto& D : some_spaces()) {
        auto back = couple_reverse(couple_reverse(D));
        // inverse_arg twice is a different tree; compare names of the
        // evaluated weights through norms instead of structure
        EXPECT_EQ(back.v.index(), D.v.index()) << D.name();
    }
    EXPECT_TRUE(same_space(couple_reverse(X0()), X1()));
    EXPECT_TRUE(std::holds_alternative<RSpace>(couple_reverse(some_spaces()[3]).v));
    EXPECT_TRUE(std::holds_alternative<LLSpace>(couple_reverse(some_spaces()[6]).v));
    EXPECT_THROW(couple_reverse(App(AppSpace::grand(2.0, 1.0))), InputError);
    EXPECT_THROW(couple_reverse(X0(Setting::UnitInterval)), InputError);
}

// ||f||_D on the couple equals the reversed descriptor on the reversed K.
TEST(CoupleReverseProperty, NormsAgree) {
    Grid g = Grid::geometric(1e-8, 1e8, 1024);
    for (const auto& D : some_spaces()) {
        const auto Dr = couple_reverse(D);
        for (const auto& cf : standard_corpus()) {
            auto K = k_peetre(cf.sample(g));
            auto a = norm_in_space(K, D), b = norm_in_space(k_reverse(K), Dr);
            EXPECT_EQ(a.divergent, b.divergent) << D.name() << " " << cf.id;
            if (!a.divergent) EXPECT_NEAR(b.value / a.value, 1.0, 1e-9) << D.name() << " " << cf.id;
        }
    }
}

TEST(Admissibility, ThetaEndpoints) {
    EXPECT_TRUE(check_admissible(Theta(0.5, SvExpr(), RiSpace::Lq(1.0))).admissible);
    auto a = check_admissible(Theta(1.0, SvExpr(), RiSpace::Lq(1.0)));
    EXPECT_FALSE(a.admissible);
    EXPECT_FALSE(a.reason.empty());
    EXPECT_TRUE(check_admissible(Theta(1.0, SvExpr(), RiSpace::Linf())).admissible);
    EXPECT_TRUE(check_admissible(Theta(1.0, SvExpr::ell(-2.0), RiSpace::Lq(1.0))).admissible);
    EXPECT_FALSE(check_admissible(Theta(0.0, SvExpr::ell(-1.0), RiSpace::Lq(1.0))).admissible);
    EXPECT_TRUE(check_admissible(Theta(0.0, SvExpr::ell(-1.0), RiSpace::Lq(2.0))).admissible);
}

TEST(Admissibility, LimitingSpaces) {
    // R needs ||b||_E(0,1) finite
    EXPECT_FALSE(check_admissible(R(0.5, SvExpr(), RiSpace::Lq(2.0), SvExpr(), RiSpace::Linf())).admissible);
    EXPECT_TRUE(check_admissible(R(0.5, SvExpr::ell(-1.0), RiSpace::Lq(2.0), SvExpr(), RiSpace::Linf())).admissible);
    // L needs ||b||_E(1,inf) finite
    EXPECT_TRUE(check_admissible(L(0.5, SvExpr(), RiSpace::Linf(), SvExpr(), RiSpace::Lq(1.0))).admissible);
    EXPECT_FALSE(check_admissible(L(0.5, SvExpr(), RiSpace::Lq(1.0), SvExpr(), RiSpace::Lq(1.0))).admissible);
    // on (0,1) only the lower half matters for L
    EXPECT_TRUE(check_admissible(L(0.5, SvExpr(), RiSpace::Lq(1.0), SvExpr(), RiSpace::Lq(1.0), Setting::UnitInterval))
                    .admissible);
}

TEST(Admissibility, IntersectionCollectsMembers) {
    auto good = Theta(0.5, SvExpr(), RiSpace::Lq(1.0)), bad = Theta(1.0, SvExpr(), RiSpace::Lq(1.0));
    auto a = check_admissible(Intersect({good, bad}));
    EXPECT_FALSE(a.admissible);
    EXPECT_EQ(a.conditions.size(), 1u);
}
