#pragma once

// Small 1D numerical kernels shared by the physics modules: bracketing
// bisection, golden-section maximization, grid search with refinement and
// grid generation.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "core_model.hpp"

namespace eotrans::numeric {

/// Root of f on [lo, hi] where f(lo) and f(hi) have opposite signs.
/// Stops when the bracket is narrower than rel_tol * max(|lo|, |hi|).
template <class F>
double bisect(F&& f, double lo, double hi, double rel_tol = 1e-12, int max_iter = 400)
{
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) throw std::domain_error("bisect: root is not bracketed");
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::abs(hi - lo) <= rel_tol * std::max(std::abs(lo), std::abs(hi))) return mid;
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct Extremum {
    double argument = 0.0;
    double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
template <class F>
Extremum golden_section_maximize(F&& f, double lo, double hi, double rel_tol = 1e-4)
{
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    const double scale = std::max(std::abs(lo), std::abs(hi));
    const double tol = rel_tol * (scale > 0.0 ? scale : 1.0);
    while (std::abs(b - a) > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

/// Grid argmax followed by golden-section refinement between the grid
/// neighbours of the best sample. The grid must be sorted ascending.
template <class F>
Extremum maximize_on_grid(F&& f, const std::vector<double>& grid, double rel_tol = 1e-4)
{
    if (grid.empty()) throw InvalidParameter("maximize_on_grid: empty grid");
    std::size_t best = 0;
    double best_value = f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double v = f(grid[i]);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    if (grid.size() < 3) return {grid[best], best_value};
    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[best + 1 == grid.size() ? best : best + 1];
    Extremum refined = golden_section_maximize(f, lo, hi, rel_tol);
    if (refined.value < best_value) return {grid[best], best_value};
    return refined;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t count)
{
    if (count < 2) throw InvalidParameter("linspace: need at least two points");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    out.back() = hi;
    return out;
}

inline std::vector<double> logspace(double lo, double hi, std::size_t count)
{
    if (!(lo > 0.0) || !(hi > 0.0)) throw InvalidParameter("logspace: bounds must be positive");
    std::vector<double> out = linspace(std::log10(lo), std::log10(hi), count);
    for (double& v : out) v = std::pow(10.0, v);
    out.front() = lo;
    out.back() = hi;
    return out;
}

} // namespace eotrans::numeric
