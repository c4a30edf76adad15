#pragma once

// Sampled functions on geometric grids and the tilde norms built on them.
//
// A grid is uniform in x = log t.  Every sample owns the log-cell
// [x_i - h/2, x_i + h/2]; integrals against dt/t are sums of cell values
// times the cell's overlap with the integration interval.  Grids are kept in
// log coordinates so that very deep truncations (t near e^-20000) stay
// representable.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rilab/errors.hpp"

namespace rilab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Grid {
    double log_min = 0.0;
    double log_max = 0.0;
    std::size_t n = 0;

    static Grid geometric(double t_min, double t_max, std::size_t n) {
        if (!(t_min > 0.0) || !(t_max > t_min) || !std::isfinite(t_max))
            throw DomainError("grid needs 0 < t_min < t_max < inf");
        return from_log(std::log(t_min), std::log(t_max), n);
    }

    static Grid from_log(double log_min, double log_max, std::size_t n) {
        if (n < 2) throw DomainError("grid needs at least two points");
        if (!(log_max > log_min)) throw DomainError("grid needs log_min < log_max");
        return Grid{log_min, log_max, n};
    }

    [[nodiscard]] double step() const { return (log_max - log_min) / static_cast<double>(n - 1); }
    [[nodiscard]] double x(std::size_t i) const {
        if (i + 1 == n) return log_max;
        return log_min + step() * static_cast<double>(i);
    }
    [[nodiscard]] double t(std::size_t i) const { return std::exp(x(i)); }
    [[nodiscard]] double t_min() const { return std::exp(log_min); }
    [[nodiscard]] double t_max() const { return std::exp(log_max); }

    // Same number of points, mirrored through t = 1 (t -> 1/t).
    [[nodiscard]] Grid reflected() const { return Grid{-log_max, -log_min, n}; }
    [[nodiscard]] Grid with_size(std::size_t m) const { return from_log(log_min, log_max, m); }

    bool operator==(const Grid&) const = default;
};

// Interval of log t; infinite ends allowed.
struct LogInterval {
    double lo = -kInf;
    double hi = kInf;

    static LogInterval from_t(double a, double b) {
        return {a > 0.0 ? std::log(a) : -kInf, std::isfinite(b) ? std::log(b) : kInf};
    }
    [[nodiscard]] LogInterval intersect(const LogInterval& o) const {
        return {std::max(lo, o.lo), std::min(hi, o.hi)};
    }
};

// Where spaces live: (0, inf) for an abstract couple, (0, 1) for the
// ordered couples of function spaces on the unit interval.
enum class Setting { FullLine, UnitInterval };

inline LogInterval domain_of(Setting s) {
    return s == Setting::FullLine ? LogInterval{} : LogInterval{-kInf, 0.0};
}

// Lebesgue-type space on (0, inf) with measure dt/t; only the exponent matters.
struct RiSpace {
    double q = 1.0;

    static RiSpace Lq(double q) {
        if (!(q >= 1.0)) throw DomainError("L_q needs q >= 1");
        return RiSpace{q};
    }
    static RiSpace Linf() { return RiSpace{kInf}; }
    [[nodiscard]] bool is_sup() const { return std::isinf(q); }
    bool operator==(const RiSpace&) const = default;
};

enum class Side { Lower, Upper };

enum class Monotone { None, Nonincreasing, Nondecreasing };

struct GridFunction {
    Grid grid;
    std::vector<double> values;
    Monotone monotone = Monotone::None;

    GridFunction() = default;
    GridFunction(Grid g, std::vector<double> v, Monotone m = Monotone::None)
        : grid(g), values(std::move(v)), monotone(m) {
        if (values.size() != grid.n) throw InputError("grid function size does not match grid");
        for (double x : values)
            if (std::isnan(x)) throw InputError("grid function contains NaN");
        if (monotone == Monotone::Nonincreasing) {
            for (std::size_t i = 1; i < values.size(); ++i)
                if (values[i] > values[i - 1] * (1.0 + 1e-12))
                    throw InputError("grid function declared nonincreasing is not");
        } else if (monotone == Monotone::Nondecreasing) {
            for (std::size_t i = 1; i < values.size(); ++i)
                if (values[i] < values[i - 1] * (1.0 - 1e-12))
                    throw InputError("grid function declared nondecreasing is not");
        }
    }

    template <class F>
    static GridFunction sample(const Grid& g, F&& f, Monotone m = Monotone::None) {
        std::vector<double> v(g.n);
        for (std::size_t i = 0; i < g.n; ++i) v[i] = f(g.t(i));
        return GridFunction(g, std::move(v), m);
    }

    [[nodiscard]] std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

// ---------------------------------------------------------------------------
// Cell geometry

inline double overlap(double a, double b, const LogInterval& iv) {
    double lo = std::max(a, iv.lo), hi = std::min(b, iv.hi);
    return hi > lo ? hi - lo : 0.0;
}

inline double cell_overlap(const Grid& g, std::size_t i, const LogInterval& iv) {
    double h = g.step(), x = g.x(i);
    return overlap(x - 0.5 * h, x + 0.5 * h, iv);
}

// ---------------------------------------------------------------------------
// Norms

struct NormValue {
    double value = 0.0;
    bool divergent = false;

    [[nodiscard]] double or_inf() const { return divergent ? kInf : value; }
};

// Sum of |g|^q over the cells of iv (or the max over cells touching iv).
inline double q_power_sum(const std::vector<double>& g, const Grid& grid, double q, const LogInterval& iv) {
    if (std::isinf(q)) {
        double m = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (cell_overlap(grid, i, iv) > 0.0) m = std::max(m, std::abs(g[i]));
        return m;
    }
    CompensatedSum s;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double w = cell_overlap(grid, i, iv);
        if (w > 0.0 && g[i] != 0.0) s.add(std::pow(std::abs(g[i]), q) * w);
    }
    return s.value();
}

// Heuristic for a norm whose true interval reaches past the grid end.
// For q < inf: the end cell carries more than 10% of the q-th power sum, or
// halving t_min (doubling t_max) at the end density would move it by more
// than 1%.  For q = inf: the sup sits at the end and is still growing fast
// enough that the same extension would raise it by more than 1%.
inline bool end_is_significant(const std::vector<double>& g, const Grid& grid, double q, double total,
                               bool lower_end) {
    const std::size_t n = g.size();
    if (n < 2) return false;
    const std::size_t e = lower_end ? 0 : n - 1;
    const std::size_t nb = lower_end ? 1 : n - 2;
    const double ge = std::abs(g[e]), gn = std::abs(g[nb]);
    if (!std::isfinite(ge)) return true;
    if (ge == 0.0) return false;
    const double h = grid.step();
    if (std::isinf(q)) {
        if (ge < total * (1.0 - 1e-12)) return false;
        if (gn <= 0.0) return true;
        if (ge <= gn) return false;
        return std::pow(ge / gn, std::log(2.0) / h) > 1.01;
    }
    if (!(total > 0.0)) return false;
    const double dens = std::pow(ge, q);
    return dens * h * 0.5 > 0.10 * total || dens * std::log(2.0) > 0.01 * total;
}

inline NormValue finish_norm(const std::vector<double>& g, const Grid& grid, double q, const LogInterval& iv,
                             double total) {
    NormValue r;
    r.value = std::isinf(q) ? total : std::pow(total, 1.0 / q);
    if (!std::isfinite(r.value) || r.value > 1e300) {
        r.divergent = true;
        return r;
    }
    // A truncated end is one the interval reaches past.
    const double h = grid.step();
    if (iv.lo < grid.log_min - 0.5 * h && end_is_significant(g, grid, q, total, true)) r.divergent = true;
    if (iv.hi > grid.log_max + 0.5 * h && end_is_significant(g, grid, q, total, false)) r.divergent = true;
    return r;
}

// ||g||_{L~q(a,b)} with the interval given in log t.
inline NormValue tilde_norm_checked(const std::vector<double>& g, const Grid& grid, const RiSpace& E,
                                    const LogInterval& iv) {
    if (!(iv.hi > iv.lo)) return {};
    double total = q_power_sum(g, grid, E.q, iv);
    return finish_norm(g, grid, E.q, iv, total);
}

// ||g||_{L~q(a,b)} with a, b in t (a = 0, b = inf allowed).  Divergent norms
// come back as +inf.
inline double tilde_norm(const GridFunction& g, const RiSpace& E, double a = 0.0, double b = kInf) {
    if (a < 0.0 || !(b > a)) throw DomainError("tilde_norm needs 0 <= a < b");
    return tilde_norm_checked(g.values, g.grid, E, LogInterval::from_t(a, b)).or_inf();
}

// Running norms: out[i] = ||g||_{L~q((0,t_i) ∩ dom)} (Lower) or over
// (t_i, inf) ∩ dom (Upper), in O(n).
inline std::vector<double> nested_norms(const std::vector<double>& g, const Grid& grid, const RiSpace& E, Side side,
                                        const LogInterval& dom = {}) {
    const std::size_t n = g.size();
    const double h = grid.step();
    std::vector<double> out(n, 0.0);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = cell_overlap(grid, i, dom);
    auto half = [&](std::size_t i, bool left) {
        double x = grid.x(i);
        return left ? overlap(x - 0.5 * h, x, dom) : overlap(x, x + 0.5 * h, dom);
    };
    const bool lower = side == Side::Lower;
    if (E.is_sup()) {
        double m = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t i = lower ? k : n - 1 - k;
            double v = std::abs(g[i]);
            out[i] = half(i, lower) > 0.0 ? std::max(m, v) : m;
            if (w[i] > 0.0) m = std::max(m, v);
        }
        return out;
    }
    const double q = E.q;
    CompensatedSum s;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t i = lower ? k : n - 1 - k;
        double p = g[i] == 0.0 ? 0.0 : std::pow(std::abs(g[i]), q);
        double cur = s.value() + p * half(i, lower);
        out[i] = std::pow(cur, 1.0 / q);
        s.add(p * w[i]);
    }
    return out;
}

inline GridFunction nested_tilde_norms(const GridFunction& g, const RiSpace& E, Side side) {
    return GridFunction(g.grid, nested_norms(g.values, g.grid, E, side),
                        side == Side::Lower ? Monotone::Nondecreasing : Monotone::Nonincreasing);
}

// ---------------------------------------------------------------------------
// Rearrangement and averages

// Nonincreasing rearrangement of a function sampled on the grid, with cell
// measures taken from Lebesgue measure on (0, inf).  The result is sampled
// on the same grid.
inline GridFunction rearrange(const GridFunction& f) {
    const Grid& g = f.grid;
    const double h = g.step();
    std::vector<std::size_t> idx(g.n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(f[a]) > std::abs(f[b]); });
    std::vector<double> cum(g.n);
    double m = 0.0;
    for (std::size_t k = 0; k < g.n; ++k) {
        double x = g.x(idx[k]);
        // the first cell reaches down to 0
        m += std::exp(x + 0.5 * h) - (idx[k] == 0 ? 0.0 : std::exp(x - 0.5 * h));
        cum[k] = m;
    }
    std::vector<double> out(g.n, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) {
        double t = g.t(i);
        auto it = std::lower_bound(cum.begin(), cum.end(), t);
        out[i] = it == cum.end() ? 0.0 : std::abs(f[idx[static_cast<std::size_t>(it - cum.begin())]]);
    }
    return GridFunction(g, std::move(out), Monotone::Nonincreasing);
}

// Integral of the sampled function over [t_i, t_{i+1}] under the model used
// throughout: log-linear between positive samples, a step at the log-midpoint
// where the next sample is zero.
inline double segment_integral(double fi, double fj, double xi, double h) {
    if (fi <= 0.0) return 0.0;
    const double ti = std::exp(xi);
    if (fj <= 0.0) return fi * ti * std::expm1(0.5 * h);
    const double a = (std::log(fj / fi) / h + 1.0) * h;  // (p + 1) h
    const double r = std::abs(a) < 1e-12 ? 1.0 : std::expm1(a) / a;
    return fi * ti * h * r;
}

// Integral over (0, t_0]: continue the first segment as a power law.  A slope
// of -1 or steeper is not integrable; the sample is then held constant.
inline double lower_tail_integral(const std::vector<double>& f, const Grid& g) {
    if (f.empty() || f[0] <= 0.0) return 0.0;
    double p = 0.0;
    if (f.size() > 1 && f[1] > 0.0) p = std::log(f[1] / f[0]) / g.step();
    if (p <= -1.0 || p > 0.0) p = 0.0;
    return f[0] * g.t(0) / (p + 1.0);
}

// Primitive F(t_i) = ∫_0^{t_i} f(s) ds of a nonnegative sampled function.
inline std::vector<double> primitive(const std::vector<double>& f, const Grid& g) {
    const std::size_t n = f.size();
    const double h = g.step();
    std::vector<double> out(n);
    CompensatedSum s;
    s.add(lower_tail_integral(f, g));
    out[0] = s.value();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        s.add(segment_integral(f[i], f[i + 1], g.x(i), h));
        out[i + 1] = s.value();
    }
    return out;
}

// f**(t) = (1/t) ∫_0^t f*(s) ds.
inline GridFunction double_star(const GridFunction& fstar) {
    auto F = primitive(fstar.values, fstar.grid);
    for (std::size_t i = 0; i < F.size(); ++i) F[i] = F[i] * std::exp(-fstar.grid.x(i));
    return GridFunction(fstar.grid, std::move(F), Monotone::Nonincreasing);
}

// ---------------------------------------------------------------------------
// CSV with header "t,value"

inline std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline std::string to_csv(const GridFunction& f) {
    std::string s = "t,value\n";
    for (std::size_t i = 0; i < f.size(); ++i) s += format_double(f.grid.t(i)) + "," + format_double(f[i]) + "\n";
    return s;
}

inline GridFunction from_csv(std::istream& in, Monotone m = Monotone::None) {
    std::string line;
    std::vector<double> ts, vs;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.find_first_of("tT") == 0) continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) throw InputError("csv line without comma: " + line);
        try {
            ts.push_back(std::stod(line.substr(0, comma)));
            vs.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw InputError("csv line is not numeric: " + line);
        }
    }
    if (ts.size() < 2) throw InputError("csv needs at least two rows");
    for (double t : ts)
        if (!(t > 0.0)) throw InputError("csv t values must be positive");
    Grid g = Grid::geometric(ts.front(), ts.back(), ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (std::abs(std::log(ts[i]) - g.x(i)) > 1e-6 * std::max(1.0, g.step() * static_cast<double>(g.n)))
            throw InputError("csv t values are not on a geometric grid");
    return GridFunction(g, std::move(vs), m);
}

inline GridFunction read_csv(const std::string& path, Monotone m = Monotone::None) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return from_csv(in, m);
}

}  // namespace rilab
