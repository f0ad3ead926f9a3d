#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace ptbec::num {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class SolveStatus {
    Converged,
    NonConvergence,
    SingularJacobian,
    NonFiniteResidual,
};

constexpr const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::NonConvergence: return "NonConvergence";
        case SolveStatus::SingularJacobian: return "SingularJacobian";
        case SolveStatus::NonFiniteResidual: return "NonFiniteResidual";
    }
    return "Unknown";
}

/// Square nonlinear system F(x) = 0 with an initial guess.
struct RootProblem {
    int dimension = 0;
    std::function<Vec(const Vec&)> residual;
    Vec initial_guess;
    double tolerance = 1e-10;  // on the residual max-norm
    int max_iterations = 200;
};

struct NewtonReport {
    SolveStatus status = SolveStatus::NonConvergence;
    int iterations = 0;
    double residual_norm = 0.0;           // max-norm at exit
    double jacobian_condition = 0.0;      // last condition estimate
    std::vector<double> norm_history;     // max-norm per accepted iterate
    [[nodiscard]] bool ok() const { return status == SolveStatus::Converged; }
};

struct NewtonResult {
    Vec x;
    NewtonReport report;
};

/// Central finite-difference Jacobian with step h_i = 1e-7 * max(1, |x_i|).
template <class F>
Mat fd_jacobian(F&& f, const Vec& x, int m = -1) {
    const int n = static_cast<int>(x.size());
    Vec xp = x, xm = x;
    Mat jac;
    for (int j = 0; j < n; ++j) {
        const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        const Vec fp = f(xp);
        const Vec fm = f(xm);
        if (jac.size() == 0) {
            const int rows = (m > 0) ? m : static_cast<int>(fp.size());
            jac.resize(rows, n);
        }
        jac.col(j) = (fp - fm) / (2.0 * h);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    return jac;
}

namespace detail {
inline bool finite(const Vec& v) { return v.allFinite(); }
}

/// Damped Newton iteration with central-difference Jacobian and a
/// backtracking line search (step halved up to 30 times whenever the
/// residual norm would increase).
inline NewtonResult newton_solve(const RootProblem& p) {
    NewtonResult out;
    NewtonReport& rep = out.report;
    Vec x = p.initial_guess;
    Vec r = p.residual(x);
    if (!detail::finite(r)) {
        rep.status = SolveStatus::NonFiniteResidual;
        out.x = x;
        return out;
    }
    double rmax = r.lpNorm<Eigen::Infinity>();
    rep.norm_history.push_back(rmax);

    for (int it = 0; it < p.max_iterations; ++it) {
        if (rmax <= p.tolerance) {
            rep.status = SolveStatus::Converged;
            rep.iterations = it;
            rep.residual_norm = rmax;
            out.x = x;
            return out;
        }
        Mat jac = fd_jacobian(p.residual, x, static_cast<int>(r.size()));
        if (!jac.allFinite()) {
            rep.status = SolveStatus::NonFiniteResidual;
            break;
        }
        Eigen::JacobiSVD<Mat> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double smax = svd.singularValues()(0);
        const double smin = svd.singularValues()(svd.singularValues().size() - 1);
        rep.jacobian_condition = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
        if (!(rep.jacobian_condition < 1e14)) {
            rep.status = SolveStatus::SingularJacobian;
            break;
        }
        const Vec step = svd.solve(-r);

        // backtracking on the euclidean residual norm
        const double r2 = r.norm();
        double lambda = 1.0;
        Vec xn, rn;
        for (int k = 0; k <= 30; ++k) {
            xn = x + lambda * step;
            rn = p.residual(xn);
            if (detail::finite(rn) && rn.norm() < r2) break;
            if (k == 30) break;  // accept the last trial; the cap guards divergence
            lambda *= 0.5;
        }
        if (!detail::finite(rn)) {
            rep.status = SolveStatus::NonFiniteResidual;
            break;
        }
        x = std::move(xn);
        r = std::move(rn);
        rmax = r.lpNorm<Eigen::Infinity>();
        rep.norm_history.push_back(rmax);
        rep.iterations = it + 1;
    }

    if (rep.status == SolveStatus::NonConvergence && rmax <= p.tolerance)
        rep.status = SolveStatus::Converged;
    rep.residual_norm = rmax;
    out.x = x;
    return out;
}

}  // namespace ptbec::num
