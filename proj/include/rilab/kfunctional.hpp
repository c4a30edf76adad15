#pragma once

// K-functionals: the exact Peetre formula for (L_1, L_inf), norms of a
// K-profile in a space descriptor, and the truncation-family oracle for the
// K-functional of a derived couple (Y0, Y1).

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "rilab/errors.hpp"
#include "rilab/gridfn.hpp"
#include "rilab/spaces.hpp"
#include "rilab/svfunc.hpp"

namespace rilab {

struct KProfile {
    GridFunction k;
    std::optional<GridFunction> fstar;  // kept when known; application-space norms need it
};

// K(t,f;L_1,L_inf) = ∫_0^t f*(s) ds, exact for the sampled model of f*.
inline KProfile k_peetre(const GridFunction& fstar) {
    for (std::size_t i = 1; i < fstar.size(); ++i)
        if (fstar[i] > fstar[i - 1] * (1.0 + 1e-12) + 1e-300)
            throw InputError("k_peetre needs a nonincreasing f*");
    for (double v : fstar.values)
        if (v < 0.0) throw InputError("k_peetre needs f* >= 0");
    GridFunction k(fstar.grid, primitive(fstar.values, fstar.grid), Monotone::Nondecreasing);
    return KProfile{std::move(k), fstar};
}

// K(t;X1,X0) = t K(1/t;X0,X1), sampled on the mirrored grid.
inline KProfile k_reverse(const KProfile& p) {
    const Grid g = p.k.grid.reflected();
    std::vector<double> v(g.n);
    for (std::size_t i = 0; i < g.n; ++i) v[i] = std::exp(g.x(i)) * p.k[g.n - 1 - i];
    return KProfile{GridFunction(g, std::move(v)), std::nullopt};
}

// ---------------------------------------------------------------------------
// Norm evaluation

// A descriptor bound to a grid: weights are sampled once so repeated norms
// (the oracle evaluates thousands) cost a few O(n) passes each.
class NormPlan {
public:
    NormPlan(const SpaceDescriptor& D, const Grid& g) : grid_(g), dom_(domain_of(D.setting)) {
        auto pw = [&](double power, const SvExpr& sv) { return sample_sv(sv, g, power); };
        const SvExpr one;
        std::visit(
            [&](const auto& d) {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, EndpointX0>) {
                    outer_ = {pw(0.0, one), RiSpace::Linf()};
                } else if constexpr (std::is_same_v<T, EndpointX1>) {
                    outer_ = {pw(-1.0, one), RiSpace::Linf()};
                } else if constexpr (std::is_same_v<T, ThetaSpace>) {
                    outer_ = {pw(-d.theta, d.b), d.E};
                } else if constexpr (std::is_same_v<T, LSpace> || std::is_same_v<T, RSpace>) {
                    Side s = std::is_same_v<T, LSpace> ? Side::Lower : Side::Upper;
                    inner_.push_back({pw(-d.theta, d.a), d.F, s});
                    outer_ = {pw(0.0, d.b), d.E};
                } else if constexpr (std::is_same_v<T, LLSpace> || std::is_same_v<T, RRSpace>) {
                    Side s = std::is_same_v<T, LLSpace> ? Side::Lower : Side::Upper;
                    inner_.push_back({pw(-d.theta, d.a), d.G, s});
                    inner_.push_back({pw(0.0, d.b), d.F, s});
                    outer_ = {pw(0.0, d.c), d.E};
                } else if constexpr (std::is_same_v<T, AppSpace>) {
                    app_ = d;
                } else {
                    for (const auto& m : d.members) members_.emplace_back(m, g);
                }
            },
            D.v);
    }

    [[nodiscard]] bool needs_fstar() const {
        if (app_) return true;
        return std::any_of(members_.begin(), members_.end(), [](const NormPlan& p) { return p.needs_fstar(); });
    }

    [[nodiscard]] const Grid& grid() const { return grid_; }

    [[nodiscard]] NormValue operator()(const KProfile& p) const {
        if (!(p.k.grid == grid_)) throw InputError("K-profile grid differs from the plan's grid");
        if (app_) {
            if (!p.fstar) throw InputError("application-space norm needs f*");
            return norm_app(*p.fstar, *app_);
        }
        if (!members_.empty()) {
            NormValue r;
            for (const auto& m : members_) {
                NormValue v = m(p);
                r.value = std::max(r.value, v.value);
                r.divergent = r.divergent || v.divergent;
            }
            return r;
        }
        bool div = false;
        std::vector<double> v = p.k.values;
        for (const auto& lv : inner_) {
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = v[i] == 0.0 ? 0.0 : v[i] * lv.w[i];
            LogInterval whole = lv.side == Side::Lower ? LogInterval{dom_.lo, std::min(dom_.hi, grid_.log_max)}
                                                       : LogInterval{std::max(dom_.lo, grid_.log_min), dom_.hi};
            if (tilde_norm_checked(v, grid_, lv.E, whole).divergent) div = true;
            v = nested_norms(v, grid_, lv.E, lv.side, dom_);
        }
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = v[i] == 0.0 ? 0.0 : v[i] * outer_.w[i];
        NormValue r = tilde_norm_checked(v, grid_, outer_.E, dom_);
        r.divergent = r.divergent || div;
        return r;
    }

private:
    struct Level {
        std::vector<double> w;
        RiSpace E;
        Side side = Side::Lower;
    };
    struct Outer {
        std::vector<double> w;
        RiSpace E;
    };
    Grid grid_;
    LogInterval dom_;
    std::vector<Level> inner_;
    Outer outer_;
    std::optional<AppSpace> app_;
    std::vector<NormPlan> members_;
};

inline NormValue norm_in_space(const KProfile& p, const SpaceDescriptor& D) { return NormPlan(D, p.k.grid)(p); }

namespace space_detail {
inline std::array<double, 2> profile_norm(const SpaceDescriptor& D, const Grid& g) {
    auto chi = GridFunction::sample(g, [](double t) { return t <= 1.0 ? 1.0 : 0.0; }, Monotone::Nonincreasing);
    NormValue v = norm_in_space(k_peetre(chi), D);
    return {v.value, v.divergent ? 1.0 : 0.0};
}
}  // namespace space_detail

// ---------------------------------------------------------------------------
// Oracle for K(t,f;Y0,Y1)

// Minimises ||g||_Y0 + t ||h||_Y1 over the decompositions f* = g + h with
// g = (f* - c)_+, h = min(f*, c), c running over the sampled values of f*,
// plus the trivial splits (f,0) and (0,f).  For rearrangement-invariant
// couples this is within a universal factor of the true K-functional.
class KOracle {
public:
    KOracle(const GridFunction& fstar, const SpaceDescriptor& Y0, const SpaceDescriptor& Y1) {
        const Grid& g = fstar.grid;
        const std::size_t n = g.n;
        NormPlan p0(Y0, g), p1(Y1, g);
        const bool keep = p0.needs_fstar() || p1.needs_fstar();
        const auto& f = fstar.values;
        const auto Kf = primitive(f, g);

        std::vector<std::size_t> cuts;
        for (std::size_t j = 0; j < n; ++j)
            if (f[j] > 0.0 && (cuts.empty() || f[j] < f[cuts.back()])) cuts.push_back(j);

        auto eval = [&](const NormPlan& p, std::vector<double> k, std::vector<double> fs) {
            KProfile prof{GridFunction(g, std::move(k)), std::nullopt};
            if (keep) prof.fstar = GridFunction(g, std::move(fs));
            NormValue v = p(prof);
            return v.or_inf();
        };

        // (f, 0) and (0, f)
        n0_.push_back(eval(p0, Kf, f));
        n1_.push_back(0.0);
        n0_.push_back(0.0);
        n1_.push_back(eval(p1, Kf, f));
        full0_ = n0_[0];
        full1_ = n1_[1];

        std::vector<double> kg(n), kh(n), gv(keep ? n : 0), hv(keep ? n : 0);
        for (std::size_t j : cuts) {
            const double c = f[j], tj = std::exp(g.x(j));
            for (std::size_t i = 0; i < n; ++i) {
                kh[i] = i <= j ? c * std::exp(g.x(i)) : c * tj + (Kf[i] - Kf[j]);
                kg[i] = std::max(Kf[i] - kh[i], 0.0);
                if (keep) {
                    gv[i] = std::max(f[i] - c, 0.0);
                    hv[i] = std::min(f[i], c);
                }
            }
            double a = eval(p0, kg, gv);
            double b = eval(p1, kh, hv);
            if (std::isfinite(a) && std::isfinite(b)) {
                n0_.push_back(a);
                n1_.push_back(b);
            }
        }
    }

    [[nodiscard]] double operator()(double t) const {
        double best = kInf;
        for (std::size_t i = 0; i < n0_.size(); ++i) {
            double v = n0_[i] + (n1_[i] == 0.0 ? 0.0 : t * n1_[i]);
            best = std::min(best, v);
        }
        return best;
    }

    // min(||f||_Y0, t ||f||_Y1)
    [[nodiscard]] double trivial(double t) const { return std::min(full0_, t * full1_); }

    // Profile on a grid, repaired so K is nondecreasing and K/t nonincreasing.
    [[nodiscard]] KProfile profile(const Grid& tg) const {
        std::vector<double> v(tg.n);
        for (std::size_t i = 0; i < tg.n; ++i) v[i] = (*this)(tg.t(i));
        for (std::size_t i = 1; i < tg.n; ++i) v[i] = std::max(v[i], v[i - 1]);
        for (std::size_t i = 1; i < tg.n; ++i) {
            double ratio = std::exp(tg.x(i) - tg.x(i - 1));
            v[i] = std::min(v[i], v[i - 1] * ratio);
        }
        return KProfile{GridFunction(tg, std::move(v)), std::nullopt};
    }

    [[nodiscard]] std::size_t decompositions() const { return n0_.size(); }

private:
    std::vector<double> n0_, n1_;
    double full0_ = kInf, full1_ = kInf;
};

inline std::vector<double> k_oracle(const GridFunction& fstar, const SpaceDescriptor& Y0, const SpaceDescriptor& Y1,
                                    const std::vector<double>& t_list) {
    KOracle o(fstar, Y0, Y1);
    std::vector<double> out;
    out.reserve(t_list.size());
    for (double t : t_list) {
        if (!(t > 0.0)) throw DomainError("oracle evaluated at t <= 0");
        out.push_back(o(t));
    }
    return out;
}

}  // namespace rilab
