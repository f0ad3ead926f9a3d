#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ptbec/numerics/newton.hpp"

namespace ptbec::num {

enum class OdeStatus {
    Done,
    StepUnderflow,
    NonFiniteState,
};

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0;  // 0 = automatic
    long max_steps = 2'000'000;
};

struct OdeResult {
    Vec y;
    OdeStatus status = OdeStatus::Done;
    long steps = 0;
    [[nodiscard]] bool ok() const { return status == OdeStatus::Done; }
};

namespace dopri {
// Dormand-Prince 5(4) tableau
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
}  // namespace dopri

/// Adaptive embedded Runge-Kutta 4(5) integration of y' = rhs(x, y) from x0
/// to x1. `observe(xl, yl, fl, xr, yr, fr)` is called once per accepted step
/// so callers can build dense output by Hermite interpolation.
template <class Rhs, class Observer>
OdeResult integrate_observed(Rhs&& rhs, double x0, double x1, Vec y0,
                             Observer&& observe, const OdeOptions& opt = {}) {
    OdeResult res;
    const double dir = (x1 >= x0) ? 1.0 : -1.0;
    const double span = std::abs(x1 - x0);
    if (span == 0.0) {
        res.y = std::move(y0);
        return res;
    }
    double x = x0;
    Vec y = std::move(y0);
    Vec k1 = rhs(x, y);
    double h = (opt.initial_step > 0.0) ? opt.initial_step : span / 100.0;
    h = std::min(h, span);

    const double hmin = span * 1e-15;
    while (dir * (x1 - x) > 0.0) {
        if (res.steps++ > opt.max_steps) {
            res.status = OdeStatus::StepUnderflow;
            break;
        }
        h = std::min(h, std::abs(x1 - x));
        const double hs = dir * h;

        using namespace dopri;
        const Vec k2 = rhs(x + c2 * hs, y + hs * (a21 * k1));
        const Vec k3 = rhs(x + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
        const Vec k4 = rhs(x + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec k5 = rhs(x + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec k6 = rhs(x + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec y5 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec k7 = rhs(x + hs, y5);  // FSAL
        const Vec y4 = y + hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        if (!y5.allFinite() || !k7.allFinite()) {
            // retry with a smaller step before giving up
            h *= 0.25;
            if (h < hmin) {
                res.status = OdeStatus::NonFiniteState;
                break;
            }
            continue;
        }

        double err = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const double e = (y5[i] - y4[i]) / sc;
            err += e * e;
        }
        err = std::sqrt(err / static_cast<double>(y.size()));

        if (err <= 1.0) {
            observe(x, y, k1, x + hs, y5, k7);
            x += hs;
            y = y5;
            k1 = k7;
        }
        const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
        if (h < hmin) {
            res.status = OdeStatus::StepUnderflow;
            break;
        }
    }
    res.y = std::move(y);
    return res;
}

template <class Rhs>
OdeResult integrate(Rhs&& rhs, double x0, double x1, Vec y0, const OdeOptions& opt = {}) {
    return integrate_observed(std::forward<Rhs>(rhs), x0, x1, std::move(y0),
                              [](double, const Vec&, const Vec&, double, const Vec&, const Vec&) {},
                              opt);
}

/// Cubic Hermite interpolation over one accepted step (locally O(h^4)).
inline Vec hermite_interp(double x, double xl, const Vec& yl, const Vec& fl, double xr,
                          const Vec& yr, const Vec& fr) {
    const double hw = xr - xl;
    const double t = (x - xl) / hw;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * yl + (t3 - 2 * t2 + t) * hw * fl +
           (-2 * t3 + 3 * t2) * yr + (t3 - t2) * hw * fr;
}

/// Integrate and sample the solution on a grid of abscissae, which must be
/// monotone in the direction of integration.
template <class Rhs>
OdeResult integrate_dense(Rhs&& rhs, double x0, double x1, Vec y0, std::span<const double> grid,
                          std::vector<Vec>& samples, const OdeOptions& opt = {}) {
    samples.clear();
    samples.reserve(grid.size());
    std::size_t next = 0;
    const double dir = (x1 >= x0) ? 1.0 : -1.0;
    auto emit = [&](double xl, const Vec& yl, const Vec& fl, double xr, const Vec& yr, const Vec& fr) {
        while (next < grid.size() && dir * (grid[next] - xl) >= 0.0 && dir * (xr - grid[next]) >= 0.0) {
            samples.push_back(hermite_interp(grid[next], xl, yl, fl, xr, yr, fr));
            ++next;
        }
    };
    OdeResult res = integrate_observed(std::forward<Rhs>(rhs), x0, x1, std::move(y0), emit, opt);
    // grid point exactly at the end of the interval
    while (next < grid.size() && std::abs(grid[next] - x1) <= 1e-12 * std::max(1.0, std::abs(x1))) {
        samples.push_back(res.y);
        ++next;
    }
    return res;
}

}  // namespace ptbec::num
