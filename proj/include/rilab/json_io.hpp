#pragma once

// JSON form of SV expressions, r.i. exponents and space descriptors, as read
// by the CLI (--space) and printed by `reiterate`.
//
//   SvExpr:  number | {"ell": a} | {"broken_ell": [a, b]} | {"iterated_ell": [k, a]}
//            | {"exp_log_pow": a} | {"product": [e, ...]} | {"power": [e, r]}
//            | {"inverse_arg": e} | {"compose_rho": {"outer": e, "gamma": g, "inner": e}}
//            | {"norm_tail": {"b": e, "E": q, "side": "lower"|"upper", "setting": s}}
//   RiSpace: number q >= 1 or "inf"
//   Space:   {"kind": "X0"|"X1"|"Theta"|"L"|"R"|"LL"|"RR"|"App"|"Intersection", ...,
//             "setting": "full"|"unit"}

#include <string>
#include <vector>

#include "json.hpp"

#include "rilab/app_spaces.hpp"
#include "rilab/errors.hpp"
#include "rilab/spaces.hpp"
#include "rilab/svfunc.hpp"

namespace rilab {

using Json = nlohmann::ordered_json;

namespace json_detail {

[[noreturn]] inline void bad(const std::string& where, const std::string& what) {
    throw InputError("JSON field '" + where + "': " + what);
}

inline const Json& field(const Json& j, const std::string& key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) bad(where + "." + key, "missing");
    return j.at(key);
}

inline double number(const Json& j, const std::string& where) {
    if (!j.is_number()) bad(where, "expected a number");
    return j.get<double>();
}

inline double num_field(const Json& j, const std::string& key, const std::string& where) {
    return number(field(j, key, where), where + "." + key);
}

}  // namespace json_detail

inline Json to_json(RiSpace E) { return E.is_sup() ? Json("inf") : Json(E.q); }

inline RiSpace ri_from_json(const Json& j, const std::string& where = "E") {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return RiSpace::Linf();
        json_detail::bad(where, "expected a number or \"inf\"");
    }
    double q = json_detail::number(j, where);
    if (!(q >= 1.0)) json_detail::bad(where, "exponent must be >= 1");
    return RiSpace::Lq(q);
}

inline std::string to_string(Setting s) { return s == Setting::FullLine ? "full" : "unit"; }

inline Setting setting_from_json(const Json& j, const std::string& where) {
    if (!j.is_string()) json_detail::bad(where, "expected \"full\" or \"unit\"");
    auto s = j.get<std::string>();
    if (s == "full") return Setting::FullLine;
    if (s == "unit") return Setting::UnitInterval;
    json_detail::bad(where, "expected \"full\" or \"unit\", got \"" + s + "\"");
}

inline Json to_json(const SvExpr& e) {
    using namespace sv_detail;
    return std::visit(
        [](const auto& n) -> Json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Const>) return n.c;
            else if constexpr (std::is_same_v<T, EllPow>) return Json{{"ell", n.alpha}};
            else if constexpr (std::is_same_v<T, BrokenEll>) return Json{{"broken_ell", {n.alpha, n.beta}}};
            else if constexpr (std::is_same_v<T, IteratedEll>) return Json{{"iterated_ell", {n.depth, n.alpha}}};
            else if constexpr (std::is_same_v<T, ExpLogPow>) return Json{{"exp_log_pow", n.alpha}};
            else if constexpr (std::is_same_v<T, Product>) return Json{{"product", {to_json(n.a), to_json(n.b)}}};
            else if constexpr (std::is_same_v<T, Power>) return Json{{"power", {to_json(n.base), n.r}}};
            else if constexpr (std::is_same_v<T, InverseArg>) return Json{{"inverse_arg", to_json(n.inner)}};
            else if constexpr (std::is_same_v<T, ComposeRho>)
                return Json{{"compose_rho", {{"outer", to_json(n.outer)}, {"gamma", n.gamma}, {"inner", to_json(n.inner)}}}};
            else
                return Json{{"norm_tail",
                             {{"b", to_json(n.b)},
                              {"E", to_json(n.E)},
                              {"side", n.side == Side::Lower ? "lower" : "upper"},
                              {"setting", to_string(n.setting)}}}};
        },
        e.node().v);
}

inline SvExpr sv_from_json(const Json& j, const std::string& where = "b") {
    using namespace json_detail;
    if (j.is_number()) return SvExpr::constant(j.get<double>());
    if (!j.is_object() || j.size() != 1) bad(where, "expected a number or a one-key object");
    const auto& [key, v] = *j.items().begin();
    const std::string w = where + "." + key;
    auto pair = [&]() -> std::pair<const Json&, const Json&> {
        if (!v.is_array() || v.size() != 2) bad(w, "expected a two-element array");
        return {v[0], v[1]};
    };
    if (key == "ell") return SvExpr::ell(number(v, w));
    if (key == "broken_ell") {
        auto [a, b] = pair();
        return SvExpr::broken_ell(number(a, w + "[0]"), number(b, w + "[1]"));
    }
    if (key == "iterated_ell") {
        auto [k, a] = pair();
        if (!k.is_number_integer()) bad(w + "[0]", "expected an integer depth");
        return SvExpr::iterated_ell(k.get<int>(), number(a, w + "[1]"));
    }
    if (key == "exp_log_pow") return SvExpr::exp_log_pow(number(v, w));
    if (key == "product") {
        if (!v.is_array() || v.empty()) bad(w, "expected a non-empty array");
        SvExpr out;
        for (std::size_t i = 0; i < v.size(); ++i)
            out = SvExpr::product(out, sv_from_json(v[i], w + "[" + std::to_string(i) + "]"));
        return out;
    }
    if (key == "power") {
        auto [b, r] = pair();
        return SvExpr::power(sv_from_json(b, w + "[0]"), number(r, w + "[1]"));
    }
    if (key == "inverse_arg") return SvExpr::inverse_arg(sv_from_json(v, w));
    if (key == "compose_rho")
        return SvExpr::compose_rho(sv_from_json(field(v, "outer", w), w + ".outer"), num_field(v, "gamma", w),
                                   sv_from_json(field(v, "inner", w), w + ".inner"));
    if (key == "norm_tail") {
        const Json& side = field(v, "side", w);
        if (!side.is_string() || (side != "lower" && side != "upper")) bad(w + ".side", "expected \"lower\" or \"upper\"");
        Setting s = v.contains("setting") ? setting_from_json(v.at("setting"), w + ".setting") : Setting::FullLine;
        return SvExpr::norm_tail(sv_from_json(field(v, "b", w), w + ".b"), ri_from_json(field(v, "E", w), w + ".E"),
                                 side == "lower" ? Side::Lower : Side::Upper, s);
    }
    bad(w, "unknown SV form");
}

inline Json to_json(const Weight& w) { return Json{{"power", w.power}, {"sv", to_json(w.sv)}}; }

inline Weight weight_from_json(const Json& j, const std::string& where) {
    return Weight{json_detail::num_field(j, "power", where), sv_from_json(json_detail::field(j, "sv", where), where + ".sv")};
}

inline Json to_json(const AppSpace& a) {
    return std::visit(
        [](const auto& s) -> Json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, UltraSpace>)
                return Json{{"type", "ultra"}, {"p", s.p}, {"b", to_json(s.b)}, {"E", to_json(s.E)}};
            else if constexpr (std::is_same_v<T, GrandLp>)
                return Json{{"type", "grand"}, {"p", s.p}, {"alpha", s.alpha}};
            else if constexpr (std::is_same_v<T, SmallLp>)
                return Json{{"type", "small"}, {"p", s.p}, {"alpha", s.alpha}};
            else if constexpr (std::is_same_v<T, LinfQBeta>)
                return Json{{"type", "linf_q_beta"}, {"E", to_json(s.E)}, {"beta", s.beta}};
            else if constexpr (std::is_same_v<T, GGamma>)
                return Json{{"type", "ggamma"}, {"p", s.p}, {"E", to_json(s.E)}, {"w1", to_json(s.w1)}, {"w2", to_json(s.w2)}};
            else if constexpr (std::is_same_v<T, ATypeSpace>)
                return Json{{"type", "a_type"}, {"p", s.p}, {"alpha", s.alpha}, {"E", to_json(s.E)}};
            else
                return Json{{"type", "b_type"}, {"p", s.p}, {"alpha", s.alpha}, {"E", to_json(s.E)}};
        },
        a.kind);
}

inline AppSpace app_from_json(const Json& j, const std::string& w = "app") {
    using namespace json_detail;
    const Json& ty = field(j, "type", w);
    if (!ty.is_string()) bad(w + ".type", "expected a string");
    const std::string t = ty.get<std::string>();
    auto E = [&] { return ri_from_json(field(j, "E", w), w + ".E"); };
    try {
        if (t == "ultra") return AppSpace::ultra(num_field(j, "p", w), sv_from_json(field(j, "b", w), w + ".b"), E());
        if (t == "grand") return AppSpace::grand(num_field(j, "p", w), num_field(j, "alpha", w));
        if (t == "small") return AppSpace::small(num_field(j, "p", w), num_field(j, "alpha", w));
        if (t == "linf_q_beta") return AppSpace::linf_q_beta(E(), num_field(j, "beta", w));
        if (t == "ggamma")
            return AppSpace::ggamma(num_field(j, "p", w), E(), weight_from_json(field(j, "w1", w), w + ".w1"),
                                    weight_from_json(field(j, "w2", w), w + ".w2"));
        if (t == "a_type") return AppSpace::a_type(num_field(j, "p", w), num_field(j, "alpha", w), E());
        if (t == "b_type") return AppSpace::b_type(num_field(j, "p", w), num_field(j, "alpha", w), E());
    } catch (const DomainError& e) {
        bad(w, e.what());
    }
    bad(w + ".type", "unknown application space '" + t + "'");
}

inline Json to_json(const SpaceDescriptor& D) {
    Json j = std::visit(
        [](const auto& d) -> Json {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, EndpointX0>) return Json{{"kind", "X0"}};
            else if constexpr (std::is_same_v<T, EndpointX1>) return Json{{"kind", "X1"}};
            else if constexpr (std::is_same_v<T, ThetaSpace>)
                return Json{{"kind", "Theta"}, {"theta", d.theta}, {"b", to_json(d.b)}, {"E", to_json(d.E)}};
            else if constexpr (std::is_same_v<T, LSpace> || std::is_same_v<T, RSpace>)
                return Json{{"kind", std::is_same_v<T, LSpace> ? "L" : "R"}, {"theta", d.theta}, {"b", to_json(d.b)},
                            {"E", to_json(d.E)}, {"a", to_json(d.a)}, {"F", to_json(d.F)}};
            else if constexpr (std::is_same_v<T, LLSpace> || std::is_same_v<T, RRSpace>)
                return Json{{"kind", std::is_same_v<T, LLSpace> ? "LL" : "RR"}, {"theta", d.theta}, {"c", to_json(d.c)},
                            {"E", to_json(d.E)}, {"b", to_json(d.b)}, {"F", to_json(d.F)}, {"a", to_json(d.a)},
                            {"G", to_json(d.G)}};
            else if constexpr (std::is_same_v<T, AppSpace>)
                return Json{{"kind", "App"}, {"app", to_json(d)}};
            else {
                Json m = Json::array();
                for (const auto& x : d.members) m.push_back(to_json(x));
                return Json{{"kind", "Intersection"}, {"members", m}};
            }
        },
        D.v);
    j["setting"] = to_string(D.setting);
    return j;
}

inline SpaceDescriptor space_from_json(const Json& j, const std::string& w = "space") {
    using namespace json_detail;
    if (!j.is_object()) bad(w, "expected an object");
    const Json& k = field(j, "kind", w);
    if (!k.is_string()) bad(w + ".kind", "expected a string");
    const std::string kind = k.get<std::string>();
    const Setting s = j.contains("setting") ? setting_from_json(j.at("setting"), w + ".setting") : Setting::FullLine;
    auto th = [&] { return num_field(j, "theta", w); };
    auto sv = [&](const char* key) { return sv_from_json(field(j, key, w), w + "." + key); };
    auto ri = [&](const char* key) { return ri_from_json(field(j, key, w), w + "." + key); };
    try {
        if (kind == "X0") return X0(s);
        if (kind == "X1") return X1(s);
        if (kind == "Theta") return Theta(th(), sv("b"), ri("E"), s);
        if (kind == "L") return L(th(), sv("b"), ri("E"), sv("a"), ri("F"), s);
        if (kind == "R") return R(th(), sv("b"), ri("E"), sv("a"), ri("F"), s);
        if (kind == "LL") return LL(th(), sv("c"), ri("E"), sv("b"), ri("F"), sv("a"), ri("G"), s);
        if (kind == "RR") return RR(th(), sv("c"), ri("E"), sv("b"), ri("F"), sv("a"), ri("G"), s);
        if (kind == "App") return App(app_from_json(field(j, "app", w), w + ".app"));
        if (kind == "Intersection") {
            const Json& m = field(j, "members", w);
            if (!m.is_array() || m.empty()) bad(w + ".members", "expected a non-empty array");
            std::vector<SpaceDescriptor> ms;
            for (std::size_t i = 0; i < m.size(); ++i)
                ms.push_back(space_from_json(m[i], w + ".members[" + std::to_string(i) + "]"));
            return Intersect(std::move(ms));
        }
    } catch (const DomainError& e) {
        bad(w, e.what());
    }
    bad(w + ".kind", "unknown kind '" + kind + "'");
}

inline Json to_json(const Grid& g) {
    return Json{{"t_min", g.t_min()}, {"t_max", g.t_max()}, {"n", g.n}};
}

inline Grid grid_from_json(const Json& j, const std::string& w = "grid") {
    using namespace json_detail;
    const Json& n = field(j, "n", w);
    if (!n.is_number_integer() || n.get<long long>() < 2) bad(w + ".n", "expected an integer >= 2");
    try {
        return Grid::geometric(num_field(j, "t_min", w), num_field(j, "t_max", w), n.get<std::size_t>());
    } catch (const DomainError& e) {
        bad(w, e.what());
    }
}

}  // namespace rilab
