#pragma once

// Dickman's rho: rho(t) = 1 on [0, 1] and -t rho'(t) = rho(t - 1) for t >= 1.
//
// Integrating the delay equation gives t rho(t) = int_{t-1}^{t} rho(u) du for
// t >= 1. The table applies the trapezoid rule to that average on a grid
// containing every integer, so rho is smooth on each panel and the error
// expands in even powers of h. Every step is a sum of positive terms, which
// keeps the relative error small far into the tail (rho(20) ~ 1e-29), where
// the difference form rho(t) = rho(t-h) - int rho(u-1)/u du cancels badly.
//
// Two step sizes are combined by Richardson extrapolation; a third (h/4) run
// measures the self-consistency of the combined values. Between nodes the
// table interpolates with cubic Hermite polynomials, using
// rho'(t) = -rho(t - 1)/t.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace grimm {

struct RhoTable {
    double t_max = 0.0;
    double step = 0.0;
    std::vector<double> values;  // values[i] = rho(i * step)
    double max_self_consistency_error = 0.0;

    std::size_t nodes_per_unit() const { return static_cast<std::size_t>(std::lround(1.0 / step)); }
};

namespace detail {

inline std::vector<double> rho_trapezoid(std::size_t per_unit, std::size_t nodes) {
    const double h = 1.0 / static_cast<double>(per_unit);
    std::vector<double> r(nodes, 1.0);
    // suffix[j] = sum of r[j..end of j's unit interval], filled once an
    // interval is complete. Only positive terms are ever added.
    std::vector<double> suffix(nodes, 0.0);
    for (std::size_t j = 0; j <= std::min(per_unit, nodes - 1); ++j)
        suffix[j] = static_cast<double>(per_unit - j + 1);
    for (std::size_t base = per_unit; base + 1 < nodes; base += per_unit) {
        const std::size_t top = std::min(base + per_unit, nodes - 1);
        double prefix = 0.0;  // r[base+1 .. i-1]
        for (std::size_t i = base + 1; i <= top; ++i) {
            const double left = suffix[i - per_unit] - 0.5 * r[i - per_unit];
            const double t = static_cast<double>(i) * h;
            r[i] = h * (left + prefix) / (t - 0.5 * h);
            prefix += r[i];
        }
        double s = 0.0;
        for (std::size_t j = top + 1; j-- > base;) {
            s += r[j];
            suffix[j] = s;
        }
    }
    return r;
}

// Richardson combination of steps h and h/2, sampled on the h grid.
inline std::vector<double> rho_richardson(std::size_t per_unit, std::size_t nodes) {
    auto coarse = rho_trapezoid(per_unit, nodes);
    auto fine = rho_trapezoid(2 * per_unit, 2 * nodes - 1);
    std::vector<double> out(nodes);
    for (std::size_t i = 0; i < nodes; ++i) out[i] = (4.0 * fine[2 * i] - coarse[i]) / 3.0;
    return out;
}

} // namespace detail

inline RhoTable build_rho_table(double t_max = 20.0, double step = 1e-3) {
    if (!(step > 0.0) || step > 0.5)
        throw std::invalid_argument("rho table step must lie in (0, 0.5]");
    const double inv = 1.0 / step;
    const auto per_unit = static_cast<std::size_t>(std::lround(inv));
    if (std::abs(inv - static_cast<double>(per_unit)) > 1e-9 * inv)
        throw std::invalid_argument("rho table step must divide 1");
    if (!(t_max >= 1.0) || t_max > 1e4) throw std::invalid_argument("rho table t_max must lie in [1, 1e4]");

    const auto nodes = static_cast<std::size_t>(std::ceil(t_max * static_cast<double>(per_unit))) + 1;
    RhoTable table;
    table.step = 1.0 / static_cast<double>(per_unit);
    table.t_max = static_cast<double>(nodes - 1) * table.step;
    table.values = detail::rho_richardson(per_unit, nodes);

    auto refined = detail::rho_richardson(2 * per_unit, 2 * nodes - 1);
    for (std::size_t i = 0; i < nodes; ++i)
        table.max_self_consistency_error =
            std::max(table.max_self_consistency_error, std::abs(table.values[i] - refined[2 * i]));
    return table;
}

inline double rho(double t, const RhoTable& table) {
    if (!(t >= 0.0) || t > table.t_max)
        throw std::out_of_range("rho: t = " + std::to_string(t) + " outside [0, " +
                                std::to_string(table.t_max) + "]");
    if (t <= 1.0) return 1.0;
    const std::size_t per_unit = table.nodes_per_unit();
    const double h = table.step;
    auto i = std::max(per_unit, static_cast<std::size_t>(std::floor(t / h)));
    if (i + 1 >= table.values.size()) return table.values.back();
    const double t0 = static_cast<double>(i) * h;
    const double t1 = t0 + h;
    const double y0 = table.values[i];
    const double y1 = table.values[i + 1];
    // i >= per_unit here, so the derivative on [t0, t1] is the right-hand one.
    const double d0 = -table.values[i - per_unit] / t0;
    const double d1 = -table.values[i + 1 - per_unit] / t1;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * h * d1;
}

} // namespace grimm
