#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace aeriq::detail {

struct NelderMeadOptions {
    double tolerance = 1e-8;  // simplex diameter, in the caller's coordinates
    int max_evaluations = 10000;
};

template <std::size_t D>
struct NelderMeadResult {
    std::array<double, D> x{};
    double value = std::numeric_limits<double>::infinity();
    int evaluations = 0;
    bool converged = false;
};

// Minimizes f over R^D. The best vertex never gets worse, so the result is
// never worse than the starting point.
template <std::size_t D, class F>
NelderMeadResult<D> nelder_mead(F&& f, const std::array<double, D>& x0, const std::array<double, D>& step,
                                const NelderMeadOptions& opt = {}) {
    using Point = std::array<double, D>;
    std::array<Point, D + 1> pts;
    std::array<double, D + 1> val;
    int evals = 0;
    auto eval = [&](const Point& p) {
        ++evals;
        const double v = f(p);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    pts[0] = x0;
    val[0] = eval(x0);
    for (std::size_t i = 0; i < D; ++i) {
        pts[i + 1] = x0;
        pts[i + 1][i] += step[i];
        val[i + 1] = eval(pts[i + 1]);
    }

    std::array<std::size_t, D + 1> order;
    NelderMeadResult<D> res;
    while (true) {
        for (std::size_t i = 0; i <= D; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
        const std::size_t best = order[0], worst = order[D], second = order[D - 1];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= D; ++i) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < D; ++j) d2 += (pts[i][j] - pts[best][j]) * (pts[i][j] - pts[best][j]);
            diameter = std::max(diameter, std::sqrt(d2));
        }
        if (diameter < opt.tolerance) {
            res.converged = true;
            break;
        }
        if (evals >= opt.max_evaluations) break;

        Point centroid{};
        for (std::size_t i = 0; i <= D; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < D; ++j) centroid[j] += pts[i][j] / static_cast<double>(D);
        }
        auto along = [&](double t) {
            Point p;
            for (std::size_t j = 0; j < D; ++j) p[j] = centroid[j] + t * (pts[worst][j] - centroid[j]);
            return p;
        };

        const Point xr = along(-1.0);
        const double fr = eval(xr);
        if (fr < val[best]) {
            const Point xe = along(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe;
                val[worst] = fe;
            } else {
                pts[worst] = xr;
                val[worst] = fr;
            }
            continue;
        }
        if (fr < val[second]) {
            pts[worst] = xr;
            val[worst] = fr;
            continue;
        }
        const bool outside = fr < val[worst];
        const Point xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc < (outside ? fr : val[worst])) {
            pts[worst] = xc;
            val[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= D; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < D; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
            val[i] = eval(pts[i]);
        }
    }
    const std::size_t best = order[0];
    res.x = pts[best];
    res.value = val[best];
    res.evaluations = evals;
    return res;
}

}  // namespace aeriq::detail
