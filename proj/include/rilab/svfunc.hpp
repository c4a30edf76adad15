#pragma once

// Slowly varying functions as immutable expression trees.
//
// Every node is evaluated from x = log t, so the log-type prototypes stay
// accurate on very deep grids.  Tail-norm nodes carry a lazily built table
// of running norms; tables are built once per node and shared by copies.

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "rilab/errors.hpp"
#include "rilab/gridfn.hpp"

namespace rilab {

class SvExpr;

// Resolution of a tail-norm table: a log grid deep enough that slowly
// decaying tails are resolved well past the harness grids.
struct TailResolution {
    double log_lo = -2000.0;
    double log_hi = 2000.0;
    std::size_t n = (std::size_t{1} << 17) + 1;  // odd, so t = 1 is a sample

    static TailResolution for_setting(Setting s) {
        if (s == Setting::FullLine) return {};
        return {-2000.0, 0.0, std::size_t{1} << 16};
    }
    bool operator==(const TailResolution&) const = default;
};

namespace sv_detail {
struct Node;
}

class SvExpr {
public:
    SvExpr();  // the constant 1

    static SvExpr constant(double c);
    static SvExpr ell(double alpha);
    static SvExpr broken_ell(double alpha, double beta);
    static SvExpr iterated_ell(int depth, double alpha);
    static SvExpr exp_log_pow(double alpha);
    static SvExpr product(const SvExpr& a, const SvExpr& b);
    static SvExpr power(const SvExpr& base, double r);
    static SvExpr inverse_arg(const SvExpr& inner);
    // outer(t^gamma * inner(t))
    static SvExpr compose_rho(const SvExpr& outer, double gamma, const SvExpr& inner);
    // ||b||_{E~(0,t)} (Lower) or ||b||_{E~(t,inf)} (Upper); in the unit
    // setting the upper interval is (t,1).
    static SvExpr norm_tail(const SvExpr& b, RiSpace E, Side side, Setting setting = Setting::FullLine);
    static SvExpr norm_tail(const SvExpr& b, RiSpace E, Side side, Setting setting, TailResolution res);

    [[nodiscard]] double operator()(double t) const {
        if (!(t > 0.0)) throw DomainError("slowly varying function evaluated at t <= 0");
        return at_log(std::log(t));
    }
    [[nodiscard]] double at_log(double x) const;

    [[nodiscard]] const sv_detail::Node& node() const { return *node_; }
    [[nodiscard]] bool is_one() const;
    [[nodiscard]] std::string describe() const;

    // Structural equality (tail tables are compared by their definition).
    bool operator==(const SvExpr& o) const;

private:
    explicit SvExpr(std::shared_ptr<const sv_detail::Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const sv_detail::Node> node_;
};

namespace sv_detail {

struct Const { double c; };
struct EllPow { double alpha; };
struct BrokenEll { double alpha, beta; };
struct IteratedEll { int depth; double alpha; };
struct ExpLogPow { double alpha; };
struct Product { SvExpr a, b; };
struct Power { SvExpr base; double r; };
struct InverseArg { SvExpr inner; };
struct ComposeRho { SvExpr outer; double gamma; SvExpr inner; };

struct TailTable {
    std::once_flag once;
    std::vector<double> acc;   // q < inf: prefix sums of b^q*h at cell edges; q = inf: prefix max
    std::vector<double> cell;  // b^q per cell (or b for q = inf)
    std::vector<double> suffix_max;
};

struct NormTail {
    SvExpr b;
    RiSpace E;
    Side side;
    Setting setting;
    TailResolution res;
    std::shared_ptr<TailTable> table;
};

struct Node {
    std::variant<Const, EllPow, BrokenEll, IteratedEll, ExpLogPow, Product, Power, InverseArg, ComposeRho, NormTail> v;
};

inline double ell_log(double x) { return 1.0 + std::abs(x); }

inline void build_table(const NormTail& nt) {
    TailTable& tb = *nt.table;
    std::call_once(tb.once, [&] {
        const Grid g = Grid::from_log(nt.res.log_lo, nt.res.log_hi, nt.res.n);
        const double h = g.step();
        const std::size_t n = g.n;
        tb.cell.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double v = nt.b.at_log(g.x(i));
            tb.cell[i] = nt.E.is_sup() ? v : std::pow(v, nt.E.q);
        }
        tb.acc.assign(n + 1, 0.0);
        if (nt.E.is_sup()) {
            for (std::size_t i = 0; i < n; ++i) tb.acc[i + 1] = std::max(tb.acc[i], tb.cell[i]);
            tb.suffix_max.assign(n + 1, 0.0);
            for (std::size_t i = n; i-- > 0;) tb.suffix_max[i] = std::max(tb.suffix_max[i + 1], tb.cell[i]);
        } else {
            CompensatedSum s;
            for (std::size_t i = 0; i < n; ++i) {
                s.add(tb.cell[i] * h);
                tb.acc[i + 1] = s.value();
            }
        }
    });
}

inline double tail_at(const NormTail& nt, double x) {
    build_table(nt);
    const TailTable& tb = *nt.table;
    const std::size_t n = nt.res.n;
    const double h = (nt.res.log_hi - nt.res.log_lo) / static_cast<double>(n - 1);
    // Evaluation is clamped to the sample centres so a tail never collapses to 0.
    x = std::clamp(x, nt.res.log_lo, nt.res.log_hi);
    const double z0 = nt.res.log_lo - 0.5 * h;
    std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(0.0, (x - z0) / h)), n - 1);
    const double frac = x - (z0 + h * static_cast<double>(k));
    if (nt.E.is_sup()) {
        // cells wholly on the correct side of x, plus b at x itself
        const double centre = z0 + h * (static_cast<double>(k) + 0.5), bx = nt.b.at_log(x);
        if (nt.side == Side::Lower) return std::max({tb.acc[k], centre <= x ? tb.cell[k] : 0.0, bx});
        return std::max({tb.suffix_max[k + 1], centre >= x ? tb.cell[k] : 0.0, bx});
    }
    // partial cells are integrated with b at their midpoint
    auto pw = [&](double y) { return std::pow(nt.b.at_log(y), nt.E.q); };
    const double edge = z0 + h * static_cast<double>(k);
    double below = tb.acc[k] + pw(edge + 0.5 * frac) * frac;
    // the upper integral stops at log_hi, not at the edge of the last cell
    const double top = tb.acc[n - 1] + 0.5 * h * pw(nt.res.log_hi - 0.25 * h);
    double val = nt.side == Side::Lower ? below : top - below;
    return std::pow(std::max(val, 1e-300), 1.0 / nt.E.q);
}

}  // namespace sv_detail

inline SvExpr::SvExpr() : node_(std::make_shared<sv_detail::Node>(sv_detail::Node{sv_detail::Const{1.0}})) {}

inline SvExpr SvExpr::constant(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("constant slowly varying function must be positive");
    return SvExpr(std::make_shared<sv_detail::Node>(sv_detail::Node{sv_detail::Const{c}}));
}
inline SvExpr SvExpr::ell(double alpha) {
    if (alpha == 0.0) return SvExpr();
    return SvExpr(std::make_shared<sv_detail::Node>(sv_detail::Node{sv_detail::EllPow{alpha}}));
}
inline SvExpr SvExpr::broken_ell(double alpha, double beta) {
    return SvExpr(std::make_shared<sv_detail::Node>(sv_detail::Node{sv_detail::BrokenEll{alpha, beta}}));
}
inline SvExpr SvExpr::iterated_ell(int depth, double alpha) {
    if (depth < 1) throw DomainError("iterated log needs depth >= 1");
    return SvExpr(std::make_shared<sv_detail::Node>(sv_detail::Node{sv_detail::IteratedEll{depth, alpha}}));
}
inline SvExpr SvExpr::exp_log_pow(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("exp(|log t|^alpha) needs 0 < alpha < 1");
    return SvExpr(std::make_shared<sv_detail::Node>(sv_detail::Node{sv_detail::ExpLogPow{alpha}}));
}
inline SvExpr SvExpr::product(const SvExpr& a, const SvExpr& b) {
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    return SvExpr(std::make_shared<sv_detail::Node>(sv_detail::Node{sv_detail::Product{a, b}}));
}
inline SvExpr SvExpr::power(const SvExpr& base, double r) {
    if (!std::isfinite(r)) throw DomainError("power exponent must be finite");
    if (r == 1.0) return base;
    if (r == 0.0 || base.is_one()) return SvExpr();
    return SvExpr(std::make_shared<sv_detail::Node>(sv_detail::Node{sv_detail::Power{base, r}}));
}
inline SvExpr SvExpr::inverse_arg(const SvExpr& inner) {
    const auto& v = inner.node().v;
    if (auto* c = std::get_if<sv_detail::Const>(&v)) return constant(c->c);
    if (auto* i = std::get_if<sv_detail::InverseArg>(&v)) return i->inner;
    if (auto* e = std::get_if<sv_detail::EllPow>(&v)) return ell(e->alpha);  // ℓ(1/t) = ℓ(t)
    return SvExpr(std::make_shared<sv_detail::Node>(sv_detail::Node{sv_detail::InverseArg{inner}}));
}
inline SvExpr SvExpr::compose_rho(const SvExpr& outer, double gamma, const SvExpr& inner) {
    if (outer.is_one()) return outer;
    return SvExpr(std::make_shared<sv_detail::Node>(sv_detail::Node{sv_detail::ComposeRho{outer, gamma, inner}}));
}

// Convergence is probed on the table itself: the norm over (0,1) (Lower) or
// (1,inf) (Upper) must move by less than 1% when the truncated depth halves.
inline SvExpr SvExpr::norm_tail(const SvExpr& b, RiSpace E, Side side, Setting setting, TailResolution res) {
    if (setting == Setting::UnitInterval && res.log_hi > 0.0) res.log_hi = 0.0;
    auto node = std::make_shared<sv_detail::Node>(
        sv_detail::Node{sv_detail::NormTail{b, E, side, setting, res, std::make_shared<sv_detail::TailTable>()}});
    const auto& nt = std::get<sv_detail::NormTail>(node->v);
    const bool unit_upper = setting == Setting::UnitInterval && side == Side::Upper;
    if (!unit_upper) {
        sv_detail::build_table(nt);
        const auto& tb = *nt.table;
        const double depth = side == Side::Lower ? -res.log_lo : res.log_hi;
        const Grid g = Grid::from_log(res.log_lo, res.log_hi, res.n);
        auto partial = [&](double d) {
            // over (-d, 0) for Lower, (0, d) for Upper
            LogInterval iv = side == Side::Lower ? LogInterval{-d, 0.0} : LogInterval{0.0, d};
            double s = 0.0;
            for (std::size_t i = 0; i < res.n; ++i) {
                double w = cell_overlap(g, i, iv);
                if (w <= 0.0) continue;
                s = E.is_sup() ? std::max(s, tb.cell[i]) : s + tb.cell[i] * w;
            }
            return s;
        };
        double full = partial(depth), half = partial(0.5 * depth);
        if (!std::isfinite(full) || full > 1e300 || (full > 0.0 && std::abs(full - half) > 0.01 * full))
            throw DivergenceError("tail norm of " + b.describe() + " diverges");
    }
    return SvExpr(node);
}

inline SvExpr SvExpr::norm_tail(const SvExpr& b, RiSpace E, Side side, Setting setting) {
    return norm_tail(b, E, side, setting, TailResolution::for_setting(setting));
}

inline double SvExpr::at_log(double x) const {
    using namespace sv_detail;
    return std::visit(
        [x](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Const>) {
                return n.c;
            } else if constexpr (std::is_same_v<T, EllPow>) {
                return std::pow(ell_log(x), n.alpha);
            } else if constexpr (std::is_same_v<T, BrokenEll>) {
                return std::pow(ell_log(x), x <= 0.0 ? n.alpha : n.beta);
            } else if constexpr (std::is_same_v<T, IteratedEll>) {
                double v = ell_log(x);
                for (int k = 1; k < n.depth; ++k) v = 1.0 + std::log(v);
                return std::pow(v, n.alpha);
            } else if constexpr (std::is_same_v<T, ExpLogPow>) {
                return std::exp(std::pow(std::abs(x), n.alpha));
            } else if constexpr (std::is_same_v<T, Product>) {
                return n.a.at_log(x) * n.b.at_log(x);
            } else if constexpr (std::is_same_v<T, Power>) {
                return std::pow(n.base.at_log(x), n.r);
            } else if constexpr (std::is_same_v<T, InverseArg>) {
                return n.inner.at_log(-x);
            } else if constexpr (std::is_same_v<T, ComposeRho>) {
                return n.outer.at_log(n.gamma * x + std::log(n.inner.at_log(x)));
            } else {
                return tail_at(n, x);
            }
        },
        node_->v);
}

inline bool SvExpr::is_one() const {
    auto* c = std::get_if<sv_detail::Const>(&node_->v);
    return c && c->c == 1.0;
}

inline std::string q_label(const RiSpace& E) {
    return E.is_sup() ? std::string("inf") : format_double(E.q);
}

inline std::string SvExpr::describe() const {
    using namespace sv_detail;
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Const>) return format_double(n.c);
            else if constexpr (std::is_same_v<T, EllPow>) return "ell^" + format_double(n.alpha);
            else if constexpr (std::is_same_v<T, BrokenEll>)
                return "ell^(" + format_double(n.alpha) + "," + format_double(n.beta) + ")";
            else if constexpr (std::is_same_v<T, IteratedEll>)
                return "ell" + std::to_string(n.depth) + "^" + format_double(n.alpha);
            else if constexpr (std::is_same_v<T, ExpLogPow>) return "exp|log|^" + format_double(n.alpha);
            else if constexpr (std::is_same_v<T, Product>) return "(" + n.a.describe() + "*" + n.b.describe() + ")";
            else if constexpr (std::is_same_v<T, Power>) return "(" + n.base.describe() + ")^" + format_double(n.r);
            else if constexpr (std::is_same_v<T, InverseArg>) return n.inner.describe() + "(1/t)";
            else if constexpr (std::is_same_v<T, ComposeRho>)
                return n.outer.describe() + "(t^" + format_double(n.gamma) + "*" + n.inner.describe() + ")";
            else
                return std::string("||") + n.b.describe() + "||_" + q_label(n.E) +
                       (n.side == Side::Lower ? "(0,t)" : (n.setting == Setting::UnitInterval ? "(t,1)" : "(t,inf)"));
        },
        node_->v);
}

inline bool SvExpr::operator==(const SvExpr& o) const {
    using namespace sv_detail;
    if (node_ == o.node_) return true;
    if (node_->v.index() != o.node_->v.index()) return false;
    return std::visit(
        [&](const auto& a) -> bool {
            using T = std::decay_t<decltype(a)>;
            const T& b = std::get<T>(o.node_->v);
            if constexpr (std::is_same_v<T, Const>) return a.c == b.c;
            else if constexpr (std::is_same_v<T, EllPow>) return a.alpha == b.alpha;
            else if constexpr (std::is_same_v<T, BrokenEll>) return a.alpha == b.alpha && a.beta == b.beta;
            else if constexpr (std::is_same_v<T, IteratedEll>) return a.depth == b.depth && a.alpha == b.alpha;
            else if constexpr (std::is_same_v<T, ExpLogPow>) return a.alpha == b.alpha;
            else if constexpr (std::is_same_v<T, Product>) return a.a == b.a && a.b == b.b;
            else if constexpr (std::is_same_v<T, Power>) return a.base == b.base && a.r == b.r;
            else if constexpr (std::is_same_v<T, InverseArg>) return a.inner == b.inner;
            else if constexpr (std::is_same_v<T, ComposeRho>)
                return a.outer == b.outer && a.gamma == b.gamma && a.inner == b.inner;
            else
                return a.b == b.b && a.E == b.E && a.side == b.side && a.setting == b.setting && a.res == b.res;
        },
        node_->v);
}

// ---------------------------------------------------------------------------
// Checks of the defining properties on a finite grid

struct SvVerification {
    double c_up = 1.0;    // t^eps b(t) stays within this factor of its running max
    double c_down = 1.0;  // t^-eps b(t) stays within this factor of its running min
    bool pass = false;
};

// Smallest constants with t^eps b nearly nondecreasing and t^-eps b nearly
// nonincreasing over the grid.  Computed in log space.
inline SvVerification sv_verify(const SvExpr& b, double eps, const Grid& grid, double threshold = 10.0) {
    if (!(eps > 0.0)) throw DomainError("sv_verify needs eps > 0");
    SvVerification r;
    double run_max = -kInf, run_min = kInf, up = 0.0, down = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        double x = grid.x(i);
        double lb = std::log(b.at_log(x));
        double u = eps * x + lb, v = -eps * x + lb;
        run_max = std::max(run_max, u);
        run_min = std::min(run_min, v);
        up = std::max(up, run_max - u);
        down = std::max(down, v - run_min);
    }
    r.c_up = std::exp(up);
    r.c_down = std::exp(down);
    r.pass = r.c_up <= threshold && r.c_down <= threshold;
    return r;
}

struct ScaleBound {
    double c_eps = 0.0;  // lower constant
    double C_eps = 0.0;  // upper constant
    double lower = 0.0;  // c_eps * min(s^eps, s^-eps) * b(t)
    double upper = 0.0;  // C_eps * max(s^eps, s^-eps) * b(t)
};

// Constants in c min(s^eps,s^-eps) b(t) <= b(st) <= C max(s^eps,s^-eps) b(t),
// estimated over s, t on a log grid of half-width `span`.
inline ScaleBound sv_local_scale_bound(const SvExpr& b, double eps, double s, double t, double span = 20.0,
                                       std::size_t m = 81) {
    if (!(s > 0.0) || !(t > 0.0)) throw DomainError("sv_local_scale_bound needs s, t > 0");
    if (!(eps > 0.0)) throw DomainError("sv_local_scale_bound needs eps > 0");
    Grid g = Grid::from_log(-span, span, m);
    std::vector<double> lb(m);
    for (std::size_t i = 0; i < m; ++i) lb[i] = std::log(b.at_log(g.x(i)));
    double lo = kInf, hi = -kInf;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double xs = g.x(i), xt = g.x(j);
            double lst = std::log(b.at_log(xs + xt));
            double d = lst - lb[j];
            lo = std::min(lo, d + eps * std::abs(xs));
            hi = std::max(hi, d - eps * std::abs(xs));
        }
    }
    ScaleBound r;
    r.c_eps = std::exp(lo);
    r.C_eps = std::exp(hi);
    const double ls = std::abs(std::log(s));
    r.lower = r.c_eps * std::exp(-eps * ls) * b(t);
    r.upper = r.C_eps * std::exp(eps * ls) * b(t);
    return r;
}

// ||s^a b(s)||_{E~(0,t)} / (t^a b(t)) (Lower) or ||s^-a b(s)||_{E~(t,inf)} /
// (t^-a b(t)) (Upper) over the interior of `eval`.  The integration grid
// runs past the far end of `eval` until s^{aq} has decayed by e^-40.
struct PowerNormRatio {
    double ratio_min = kInf;
    double ratio_max = 0.0;
    [[nodiscard]] double window() const { return ratio_max / ratio_min; }
};

inline PowerNormRatio power_norm_ratio(const SvExpr& b, double alpha, RiSpace E, Side side, const Grid& eval,
                                       double interior = 0.05) {
    if (!(alpha > 0.0)) throw DomainError("power_norm_ratio needs alpha > 0");
    const double h = eval.step();
    const std::size_t ext = E.is_sup() ? 0 : static_cast<std::size_t>(std::ceil(40.0 / (alpha * E.q * h)));
    const bool lower = side == Side::Lower;
    const Grid big = lower ? Grid::from_log(eval.log_min - h * static_cast<double>(ext), eval.log_max, eval.n + ext)
                           : Grid::from_log(eval.log_min, eval.log_max + h * static_cast<double>(ext), eval.n + ext);
    const double a = lower ? alpha : -alpha;
    std::vector<double> v(big.n);
    for (std::size_t i = 0; i < big.n; ++i) v[i] = std::exp(a * big.x(i)) * b.at_log(big.x(i));
    const auto nn = nested_norms(v, big, E, side);
    const std::size_t off = lower ? ext : 0;
    const auto skip = static_cast<std::size_t>(interior * static_cast<double>(eval.n));
    PowerNormRatio r;
    for (std::size_t i = skip; i + skip < eval.n; ++i) {
        const double ratio = nn[i + off] / v[i + off];
        r.ratio_min = std::min(r.ratio_min, ratio);
        r.ratio_max = std::max(r.ratio_max, ratio);
    }
    return r;
}

// Sample a slowly varying function on a grid.
inline GridFunction sample(const SvExpr& b, const Grid& g) {
    std::vector<double> v(g.n);
    for (std::size_t i = 0; i < g.n; ++i) v[i] = b.at_log(g.x(i));
    return GridFunction(g, std::move(v));
}

}  // namespace rilab
