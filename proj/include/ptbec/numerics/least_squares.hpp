#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "ptbec/numerics/newton.hpp"

namespace ptbec::num {

struct FitResult {
    Vec params;
    double residual_norm = 0.0;  // euclidean norm of the residual vector
    int iterations = 0;
    SolveStatus status = SolveStatus::NonConvergence;
    [[nodiscard]] bool ok() const { return status == SolveStatus::Converged; }
};

/// Levenberg-Marquardt minimization of ||resid(p)||^2 for a residual functor
/// returning a vector with at least as many entries as parameters.
template <class R>
FitResult levenberg_marquardt(R&& resid, Vec initial, int max_iterations = 400) {
    FitResult out;
    Vec p = std::move(initial);
    Vec r = resid(p);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    int it = 0;
    for (; it < max_iterations; ++it) {
        const Mat jac = fd_jacobian(resid, p, static_cast<int>(r.size()));
        const Mat jtj = jac.transpose() * jac;
        const Vec g = jac.transpose() * r;
        if (g.lpNorm<Eigen::Infinity>() < 1e-13 * std::max(1.0, std::sqrt(cost))) {
            out.status = SolveStatus::Converged;
            break;
        }
        bool accepted = false;
        for (int trial = 0; trial < 40; ++trial) {
            Mat m = jtj;
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                m(i, i) += lambda * std::max(jtj(i, i), 1e-12);
            const Vec step = m.ldlt().solve(-g);
            const Vec pn = p + step;
            const Vec rn = resid(pn);
            const double cn = rn.squaredNorm();
            if (std::isfinite(cn) && cn < cost) {
                const double drop = cost - cn;
                p = pn;
                r = rn;
                cost = cn;
                lambda = std::max(lambda / 3.0, 1e-14);
                accepted = true;
                if (drop < 1e-15 * std::max(1.0, cost) || step.norm() < 1e-14 * (1.0 + p.norm()))
                    out.status = SolveStatus::Converged;
                break;
            }
            lambda *= 4.0;
        }
        // no descent even under heavy damping: at a numerical minimum
        if (!accepted) out.status = SolveStatus::Converged;
        if (out.status == SolveStatus::Converged) break;
    }
    out.params = std::move(p);
    out.residual_norm = std::sqrt(cost);
    out.iterations = it;
    return out;
}

/// Convenience wrapper fitting model(params, input) -> output against
/// (input, target) pairs.
template <class Model, class Input>
FitResult least_squares_fit(Model&& model, const std::vector<std::pair<Input, double>>& data,
                            Vec initial, int max_iterations = 400) {
    auto resid = [&](const Vec& p) {
        Vec r(static_cast<Eigen::Index>(data.size()));
        for (std::size_t i = 0; i < data.size(); ++i)
            r[static_cast<Eigen::Index>(i)] = model(p, data[i].first) - data[i].second;
        return r;
    };
    return levenberg_marquardt(resid, std::move(initial), max_iterations);
}

}  // namespace ptbec::num
