#pragma once

// Descriptors of the limiting interpolation spaces and their checks.
//
// A descriptor only says which norm to take of K(t,f); evaluation lives in
// kfunctional.hpp.  Every weight is slowly varying; every inner/outer space
// is an L_q on (0,inf) with measure dt/t, restricted to (0,1) in the unit
// setting.

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "rilab/app_spaces.hpp"
#include "rilab/errors.hpp"
#include "rilab/gridfn.hpp"
#include "rilab/svfunc.hpp"

namespace rilab {

struct SpaceDescriptor;

// Endpoint spaces of the couple; for (L_1, L_inf) these are L_1 and L_inf.
struct EndpointX0 {};
struct EndpointX1 {};

// ||t^-theta b(t) K(t)||_E
struct ThetaSpace { double theta; SvExpr b; RiSpace E; };
// ||b(t) ||s^-theta a(s) K(s)||_{F(0,t)}||_E
struct LSpace { double theta; SvExpr b; RiSpace E; SvExpr a; RiSpace F; };
// ||b(t) ||s^-theta a(s) K(s)||_{F(t,inf)}||_E
struct RSpace { double theta; SvExpr b; RiSpace E; SvExpr a; RiSpace F; };
// ||c(u) ||b(t) ||s^-theta a(s) K(s)||_{G(0,t)}||_{F(0,u)}||_E
struct LLSpace { double theta; SvExpr c; RiSpace E; SvExpr b; RiSpace F; SvExpr a; RiSpace G; };
// same with (t,inf) and (u,inf)
struct RRSpace { double theta; SvExpr c; RiSpace E; SvExpr b; RiSpace F; SvExpr a; RiSpace G; };
struct Intersection { std::vector<SpaceDescriptor> members; };

struct SpaceDescriptor {
    std::variant<EndpointX0, EndpointX1, ThetaSpace, LSpace, RSpace, LLSpace, RRSpace, AppSpace, Intersection> v;
    Setting setting = Setting::FullLine;

    [[nodiscard]] std::string name() const;
};

namespace space_detail {
inline void check_theta(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("theta must lie in [0,1]");
}
}  // namespace space_detail

inline SpaceDescriptor X0(Setting s = Setting::FullLine) { return {EndpointX0{}, s}; }
inline SpaceDescriptor X1(Setting s = Setting::FullLine) { return {EndpointX1{}, s}; }
inline SpaceDescriptor Theta(double theta, SvExpr b, RiSpace E, Setting s = Setting::FullLine) {
    space_detail::check_theta(theta);
    return {ThetaSpace{theta, std::move(b), E}, s};
}
inline SpaceDescriptor L(double theta, SvExpr b, RiSpace E, SvExpr a, RiSpace F, Setting s = Setting::FullLine) {
    space_detail::check_theta(theta);
    return {LSpace{theta, std::move(b), E, std::move(a), F}, s};
}
inline SpaceDescriptor R(double theta, SvExpr b, RiSpace E, SvExpr a, RiSpace F, Setting s = Setting::FullLine) {
    space_detail::check_theta(theta);
    return {RSpace{theta, std::move(b), E, std::move(a), F}, s};
}
inline SpaceDescriptor LL(double theta, SvExpr c, RiSpace E, SvExpr b, RiSpace F, SvExpr a, RiSpace G,
                          Setting s = Setting::FullLine) {
    space_detail::check_theta(theta);
    return {LLSpace{theta, std::move(c), E, std::move(b), F, std::move(a), G}, s};
}
inline SpaceDescriptor RR(double theta, SvExpr c, RiSpace E, SvExpr b, RiSpace F, SvExpr a, RiSpace G,
                          Setting s = Setting::FullLine) {
    space_detail::check_theta(theta);
    return {RRSpace{theta, std::move(c), E, std::move(b), F, std::move(a), G}, s};
}
inline SpaceDescriptor App(AppSpace a) { return {std::move(a), Setting::UnitInterval}; }
inline SpaceDescriptor Intersect(std::vector<SpaceDescriptor> members) {
    if (members.empty()) throw InputError("intersection needs at least one member");
    Setting s = members.front().setting;
    return {Intersection{std::move(members)}, s};
}

inline std::string SpaceDescriptor::name() const {
    auto E = [](const RiSpace& e) { return "L" + q_label(e); };
    auto th = [](double t) { return format_double(t); };
    return std::visit(
        [&](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, EndpointX0>) return "X0";
            else if constexpr (std::is_same_v<T, EndpointX1>) return "X1";
            else if constexpr (std::is_same_v<T, ThetaSpace>)
                return "Theta(" + th(d.theta) + "," + d.b.describe() + "," + E(d.E) + ")";
            else if constexpr (std::is_same_v<T, LSpace>)
                return "L(" + th(d.theta) + "," + d.b.describe() + "," + E(d.E) + "," + d.a.describe() + "," + E(d.F) + ")";
            else if constexpr (std::is_same_v<T, RSpace>)
                return "R(" + th(d.theta) + "," + d.b.describe() + "," + E(d.E) + "," + d.a.describe() + "," + E(d.F) + ")";
            else if constexpr (std::is_same_v<T, LLSpace>)
                return "LL(" + th(d.theta) + "," + d.c.describe() + "," + E(d.E) + "," + d.b.describe() + "," + E(d.F) +
                       "," + d.a.describe() + "," + E(d.G) + ")";
            else if constexpr (std::is_same_v<T, RRSpace>)
                return "RR(" + th(d.theta) + "," + d.c.describe() + "," + E(d.E) + "," + d.b.describe() + "," + E(d.F) +
                       "," + d.a.describe() + "," + E(d.G) + ")";
            else if constexpr (std::is_same_v<T, AppSpace>) return d.name();
            else {
                std::string s = "Intersection[";
                for (std::size_t i = 0; i < d.members.size(); ++i) s += (i ? ", " : "") + d.members[i].name();
                return s + "]";
            }
        },
        v);
}

// ---------------------------------------------------------------------------
// Couple reversal: (X0,X1) -> (X1,X0) with K(t;X1,X0) = t K(1/t;X0,X1).

inline SpaceDescriptor couple_reverse(const SpaceDescriptor& D) {
    if (D.setting != Setting::FullLine) throw InputError("couple reversal is defined on (0,inf) only");
    auto inv = [](const SvExpr& e) { return SvExpr::inverse_arg(e); };
    return std::visit(
        [&](const auto& d) -> SpaceDescriptor {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, EndpointX0>) return X1();
            else if constexpr (std::is_same_v<T, EndpointX1>) return X0();
            else if constexpr (std::is_same_v<T, ThetaSpace>) return Theta(1.0 - d.theta, inv(d.b), d.E);
            else if constexpr (std::is_same_v<T, LSpace>) return R(1.0 - d.theta, inv(d.b), d.E, inv(d.a), d.F);
            else if constexpr (std::is_same_v<T, RSpace>) return L(1.0 - d.theta, inv(d.b), d.E, inv(d.a), d.F);
            else if constexpr (std::is_same_v<T, LLSpace>)
                return RR(1.0 - d.theta, inv(d.c), d.E, inv(d.b), d.F, inv(d.a), d.G);
            else if constexpr (std::is_same_v<T, RRSpace>)
                return LL(1.0 - d.theta, inv(d.c), d.E, inv(d.b), d.F, inv(d.a), d.G);
            else if constexpr (std::is_same_v<T, AppSpace>)
                throw InputError("application spaces live on (0,1) and have no reversed form");
            else {
                std::vector<SpaceDescriptor> m;
                for (const auto& x : d.members) m.push_back(couple_reverse(x));
                return Intersect(std::move(m));
            }
        },
        D.v);
}

inline bool same_space(const SpaceDescriptor& a, const SpaceDescriptor& b) {
    if (a.setting != b.setting || a.v.index() != b.v.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const T& y = std::get<T>(b.v);
            if constexpr (std::is_same_v<T, EndpointX0> || std::is_same_v<T, EndpointX1>) return true;
            else if constexpr (std::is_same_v<T, ThetaSpace>) return x.theta == y.theta && x.b == y.b && x.E == y.E;
            else if constexpr (std::is_same_v<T, LSpace> || std::is_same_v<T, RSpace>)
                return x.theta == y.theta && x.b == y.b && x.E == y.E && x.a == y.a && x.F == y.F;
            else if constexpr (std::is_same_v<T, LLSpace> || std::is_same_v<T, RRSpace>)
                return x.theta == y.theta && x.c == y.c && x.E == y.E && x.b == y.b && x.F == y.F && x.a == y.a &&
                       x.G == y.G;
            else if constexpr (std::is_same_v<T, AppSpace>) return x.name() == y.name();
            else {
                if (x.members.size() != y.members.size()) return false;
                for (std::size_t i = 0; i < x.members.size(); ++i)
                    if (!same_space(x.members[i], y.members[i])) return false;
                return true;
            }
        },
        a.v);
}

// ---------------------------------------------------------------------------
// Finiteness of weighted norms, decided numerically.

// Integrand of a condition, sampled on a given grid, with its interval.
using ConditionIntegrand = std::function<std::vector<double>(const Grid&)>;

struct Condition {
    std::string name;
    double value = 0.0;  // norm on the base grid
    bool finite = true;
};

struct Admissibility {
    bool admissible = true;
    std::vector<Condition> conditions;
    std::string reason;  // first failing condition
};

// A condition passes when halving t_min and doubling t_max moves the q-th
// power of the norm (the sup for q = inf) by less than 1%.
inline Condition probe_condition(std::string name, const ConditionIntegrand& g, RiSpace E, LogInterval iv,
                                 const Grid& base) {
    Condition c;
    c.name = std::move(name);
    const double h = base.step();
    const auto extra = static_cast<std::size_t>(std::ceil(std::log(2.0) / h));
    Grid ext = Grid::from_log(base.log_min - static_cast<double>(extra) * h,
                              base.log_max + static_cast<double>(extra) * h, base.n + 2 * extra);
    auto clip = [](LogInterval i, const Grid& g) {
        return LogInterval{std::max(i.lo, g.log_min), std::min(i.hi, g.log_max)};
    };
    double s0 = q_power_sum(g(base), base, E.q, clip(iv, base));
    double s1 = q_power_sum(g(ext), ext, E.q, clip(iv, ext));
    c.value = E.is_sup() ? s0 : std::pow(s0, 1.0 / E.q);
    c.finite = std::isfinite(s1) && s1 < 1e300 && !(std::abs(s1 - s0) > 0.01 * std::abs(s0));
    return c;
}

inline std::vector<double> sample_sv(const SvExpr& b, const Grid& g, double power = 0.0) {
    std::vector<double> v(g.n);
    for (std::size_t i = 0; i < g.n; ++i) v[i] = std::exp(power * g.x(i)) * b.at_log(g.x(i));
    return v;
}

namespace space_detail {

inline std::string nm(const char* what, const SvExpr& b, const RiSpace& E, const char* iv) {
    return std::string("||") + what + "=" + b.describe() + "||_L" + q_label(E) + iv + " < inf";
}

inline Condition plain(const char* what, const SvExpr& b, RiSpace E, bool upper_half, const Grid& g) {
    LogInterval iv = upper_half ? LogInterval{0.0, kInf} : LogInterval{-kInf, 0.0};
    return probe_condition(nm(what, b, E, upper_half ? "(1,inf)" : "(0,1)"),
                           [b](const Grid& gr) { return sample_sv(b, gr); }, E, iv, g);
}

// ||outer(t) ||inner||_{F(range of t)}||_{E(iv)} with the inner range (lo_in, t) or (t, hi_in).
inline Condition nested(std::string name, const SvExpr& outer, RiSpace E, LogInterval iv, const SvExpr& inner,
                        RiSpace F, Side side, LogInterval inner_dom, const Grid& g) {
    return probe_condition(
        std::move(name),
        [=](const Grid& gr) {
            auto in = nested_norms(sample_sv(inner, gr), gr, F, side, inner_dom);
            auto o = sample_sv(outer, gr);
            for (std::size_t i = 0; i < o.size(); ++i) o[i] *= in[i];
            return o;
        },
        E, iv, g);
}

// ||t^-theta w(t) min(1,t)||_{E(0,inf)}: finite iff X0 ∩ X1 embeds.
inline Condition profile(const std::string& name, const std::function<std::vector<double>(const Grid&)>& norm_of_profile) {
    Condition c;
    c.name = name;
    Grid base = Grid::geometric(1e-8, 1e8, 2048);
    Grid wide = Grid::geometric(5e-9, 2e8, 2048 + 2 * static_cast<std::size_t>(std::ceil(std::log(2.0) / base.step())));
    auto a = norm_of_profile(base), b = norm_of_profile(wide);
    c.value = a[0];
    c.finite = !(a[1] > 0.5) && !(b[1] > 0.5) && std::abs(b[0] - a[0]) <= 0.01 * a[0];
    return c;
}

}  // namespace space_detail

// Non-triviality conditions for the descriptor (tables for the theta, L and
// R scales; for LL/RR the norm of the profile min(1,t) must be finite).  In
// the unit setting conditions on (1,inf) are dropped.
inline Admissibility check_admissible(const SpaceDescriptor& D, const Grid& g = Grid::geometric(1e-8, 1e8, 2048));

namespace space_detail {
// Defined in kfunctional.hpp: norm of the profile min(1,t) on a grid, as {value, divergent}.
inline std::array<double, 2> profile_norm(const SpaceDescriptor& D, const Grid& g);
}  // namespace space_detail

inline Admissibility check_admissible(const SpaceDescriptor& D, const Grid& g) {
    using namespace space_detail;
    Admissibility out;
    const bool unit = D.setting == Setting::UnitInterval;
    auto add = [&](Condition c) { out.conditions.push_back(std::move(c)); };
    const LogInterval below{-kInf, 0.0}, above{0.0, kInf};
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ThetaSpace>) {
                if (d.theta == 0.0 && !unit) add(plain("b", d.b, d.E, true, g));
                if (d.theta == 1.0) add(plain("b", d.b, d.E, false, g));
            } else if constexpr (std::is_same_v<T, LSpace>) {
                if (!unit) add(plain("b", d.b, d.E, true, g));
                if (d.theta == 0.0 && !unit) {
                    add(nested("||b(t)||a||_F(1,t)||_E(1,inf) < inf", d.b, d.E, above, d.a, d.F, Side::Lower, above, g));
                    add(plain("ab", SvExpr::product(d.a, d.b), d.E, true, g));
                }
                if (d.theta == 1.0)
                    add(nested("||b(t)||a||_F(0,t)||_E(0,1) < inf", d.b, d.E, below, d.a, d.F, Side::Lower, {}, g));
            } else if constexpr (std::is_same_v<T, RSpace>) {
                add(plain("b", d.b, d.E, false, g));
                if (d.theta == 0.0 && !unit)
                    add(nested("||b(t)||a||_F(t,inf)||_E(1,inf) < inf", d.b, d.E, above, d.a, d.F, Side::Upper, {}, g));
                if (d.theta == 1.0) {
                    add(nested("||b(t)||a||_F(t,1)||_E(0,1) < inf", d.b, d.E, below, d.a, d.F, Side::Upper, below, g));
                    add(plain("ab", SvExpr::product(d.a, d.b), d.E, false, g));
                }
            } else if constexpr (std::is_same_v<T, LLSpace> || std::is_same_v<T, RRSpace>) {
                add(profile("||min(1,t)|| < inf in " + D.name(), [&](const Grid& gr) {
                    auto r = profile_norm(D, gr);
                    return std::vector<double>{r[0], r[1]};
                }));
            } else if constexpr (std::is_same_v<T, Intersection>) {
                for (const auto& m : d.members) {
                    auto sub = check_admissible(m, g);
                    for (auto& c : sub.conditions) add(std::move(c));
                }
            }
        },
        D.v);
    for (const auto& c : out.conditions) {
        if (!c.finite) {
            out.admissible = false;
            if (out.reason.empty()) out.reason = "fails " + c.name;
        }
    }
    return out;
}

}  // namespace rilab

// Evaluation (and profile_norm above) lives with the K-functional.
#include "rilab/kfunctional.hpp"
