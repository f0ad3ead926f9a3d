#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ptbec/numerics/newton.hpp"
#include "ptbec/numerics/quartic.hpp"

namespace ptbec::matrix {

using cplx = std::complex<double>;
using CVec4 = Eigen::Vector4cd;
using CMat4 = Eigen::Matrix4cd;

struct MatrixParams {
    double g = 0.0;      // on-site nonlinearity
    double v = 1.0;      // intra-subsystem well coupling
    double gamma = 0.0;  // inter-subsystem coupling
};

enum class PtClass {
    SymmetricStationary,  // mu_A = mu_B real
    BrokenPair,           // mu_A = conj(mu_B), Im != 0
    RealEffective,        // decoupled real states of the effective 2d model
    Continued,            // analytic continuation only
    Unclassified,
};

constexpr const char* to_string(PtClass c) {
    switch (c) {
        case PtClass::SymmetricStationary: return "PT-symmetric-stationary";
        case PtClass::BrokenPair: return "PT-broken-pair";
        case PtClass::RealEffective: return "real-effective";
        case PtClass::Continued: return "continued";
        case PtClass::Unclassified: return "unclassified";
    }
    return "unclassified";
}

struct SubsystemPair {
    cplx mu_A{};
    cplx mu_B{};
    PtClass classification = PtClass::Unclassified;
};

inline PtClass classify_pair(cplx mu_A, cplx mu_B, double tol = 1e-9) {
    if (std::abs(mu_A.imag()) < tol && std::abs(mu_B.imag()) < tol &&
        std::abs(mu_A - mu_B) < tol)
        return PtClass::SymmetricStationary;
    if (std::abs(mu_A - std::conj(mu_B)) < tol) return PtClass::BrokenPair;
    return PtClass::Unclassified;
}

// ---------------------------------------------------------------------------
// 2D reference model (single PT-symmetric double well with complex potential)
// ---------------------------------------------------------------------------

struct Model2dBranches {
    cplx mu_s_plus, mu_s_minus;  // -g/2 +- sqrt(v^2 - gamma^2)
    cplx mu_a_plus, mu_a_minus;  // -g  +- gamma sqrt(4v^2/(g^2+4gamma^2) - 1)
    bool s_exists = true;        // radicand v^2 - gamma^2 >= 0
    bool a_radicand_nonneg = true;  // >= 0: real (continued) values; < 0: complex broken pair
};

inline Model2dBranches model2d_branches(const MatrixParams& p) {
    Model2dBranches out;
    const cplx rs = std::sqrt(cplx(p.v * p.v - p.gamma * p.gamma, 0.0));
    out.mu_s_plus = -0.5 * p.g + rs;
    out.mu_s_minus = -0.5 * p.g - rs;
    out.s_exists = (p.v * p.v - p.gamma * p.gamma) >= 0.0;
    if (p.gamma == 0.0) {
        // gamma * sqrt(...) -> 0 for g != 0 (degenerate pair at -g) and +-|v| for g = 0
        const double lim = (p.g == 0.0) ? std::abs(p.v) : 0.0;
        out.mu_a_plus = -p.g + lim;
        out.mu_a_minus = -p.g - lim;
        out.a_radicand_nonneg = 4.0 * p.v * p.v >= p.g * p.g;
        return out;
    }
    const double rad = 4.0 * p.v * p.v / (p.g * p.g + 4.0 * p.gamma * p.gamma) - 1.0;
    const cplx ra = p.gamma * std::sqrt(cplx(rad, 0.0));
    out.mu_a_plus = -p.g + ra;
    out.mu_a_minus = -p.g - ra;
    out.a_radicand_nonneg = rad >= 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// 4D hermitian matrix model
// ---------------------------------------------------------------------------

/// Normalized per-subsystem state (cos(th_A) e^{i ph_A}, sin(th_A) e^{-i ph_A},
/// cos(th_B) e^{i(ph_B+ph_rel)}, sin(th_B) e^{i(-ph_B+ph_rel)}).
struct WaveVector4 {
    double theta_A = 0.0, theta_B = 0.0;
    double phi_A = 0.0, phi_B = 0.0;
    double phi_rel = 0.0;

    [[nodiscard]] CVec4 psi() const {
        const cplx i(0.0, 1.0);
        CVec4 w;
        w(0) = std::cos(theta_A) * std::exp(i * phi_A);
        w(1) = std::sin(theta_A) * std::exp(-i * phi_A);
        w(2) = std::cos(theta_B) * std::exp(i * (phi_B + phi_rel));
        w(3) = std::sin(theta_B) * std::exp(i * (-phi_B + phi_rel));
        return w;
    }
};

inline CMat4 build_matrix4(const MatrixParams& p, const CVec4& psi) {
    const cplx i(0.0, 1.0);
    CMat4 m = CMat4::Zero();
    for (int k = 0; k < 4; ++k) m(k, k) = -p.g * std::norm(psi(k));
    m(0, 1) = m(1, 0) = m(2, 3) = m(3, 2) = p.v;
    m(0, 2) = -i * p.gamma;
    m(2, 0) = i * p.gamma;
    m(1, 3) = i * p.gamma;
    m(3, 1) = -i * p.gamma;
    return m;
}

struct PtSymmetricState {
    double mu = 0.0;   // real for all gamma
    double phi = 0.0;  // ansatz angle, psi = (e^{i phi}, e^{-i phi}, e^{-i phi}, e^{i phi})/sqrt2
    cplx x{};          // e^{2 i phi}
    [[nodiscard]] WaveVector4 wave() const {
        WaveVector4 w;
        w.theta_A = w.theta_B = M_PI / 4.0;
        w.phi_A = phi;
        w.phi_B = -phi;
        w.phi_rel = 0.0;
        return w;
    }
    [[nodiscard]] SubsystemPair pair() const {
        return {cplx(mu, 0.0), cplx(mu, 0.0), PtClass::SymmetricStationary};
    }
};

/// The two PT-symmetric solutions mu = -g/2 +- sqrt(v^2 + gamma^2).
/// Index 0 is the plus branch (s1), index 1 the minus branch (s2).
inline std::array<PtSymmetricState, 2> analytic_pt_symmetric(const MatrixParams& p) {
    const cplx num(p.v, -p.gamma), den(p.v, p.gamma);
    std::array<PtSymmetricState, 2> out;
    const double root = std::sqrt(p.v * p.v + p.gamma * p.gamma);
    for (int k = 0; k < 2; ++k) {
        const double sign = k == 0 ? 1.0 : -1.0;
        out[k].mu = -0.5 * p.g + sign * root;
        out[k].x = sign * std::sqrt(num / den);
        out[k].phi = 0.5 * std::arg(out[k].x);
    }
    return out;
}

struct PtBrokenState {
    cplx mu_A{};       // mu_B = conj(mu_A)
    cplx theta{}, phi{};
    int sign_P = 0;    // sign in P = 1/2 +- sqrt(g^2+16gamma^2)/(2g)
    bool physical = false;  // theta and phi real (within 1e-9)
    bool gamma0_limit = false;
    [[nodiscard]] WaveVector4 wave() const {
        WaveVector4 w;
        w.theta_A = w.theta_B = theta.real();
        w.phi_A = phi.real();
        w.phi_B = -phi.real();
        w.phi_rel = 0.0;
        return w;
    }
    [[nodiscard]] SubsystemPair pair() const {
        return {mu_A, std::conj(mu_A),
                physical ? PtClass::BrokenPair : PtClass::Continued};
    }
};

namespace detail {

// chemical potential from the first stationary equation of the broken ansatz,
// valid for complex theta/phi by analytic continuation
inline cplx broken_mu_from_angles(const MatrixParams& p, cplx theta, cplx phi) {
    const cplx i(0.0, 1.0);
    const cplx c = std::cos(theta), s = std::sin(theta);
    const cplx em = std::exp(-2.0 * i * phi);
    return -p.g * c * c + (p.v * s / c) * em - i * p.gamma * em;
}

inline cplx broken_mu_second_eq(const MatrixParams& p, cplx theta, cplx phi) {
    const cplx i(0.0, 1.0);
    const cplx c = std::cos(theta), s = std::sin(theta);
    const cplx ep = std::exp(2.0 * i * phi);
    return -p.g * s * s + (p.v * c / s) * ep + i * p.gamma * ep;
}

}  // namespace detail

/// All four PT-broken expressions (two per sign of P). mu is evaluated from
/// the stationary equations at the closed-form (theta, phi), so the branch
/// bookkeeping of the square roots cannot go wrong. States are returned in a
/// deterministic order: sign_P = -1 pair first, within a pair Im mu_A >= 0
/// first.
inline std::vector<PtBrokenState> analytic_pt_broken(const MatrixParams& p) {
    std::vector<PtBrokenState> out;
    if (std::abs(p.g) < 1e-12) return out;  // no broken ansatz solutions at g = 0
    if (p.gamma == 0.0) {
        // degenerate limit: both pair members collapse onto mu = -g
        for (int k = 0; k < 2; ++k) {
            PtBrokenState st;
            st.mu_A = cplx(-p.g, 0.0);
            st.sign_P = -1;
            st.gamma0_limit = true;
            st.physical = std::abs(p.g) > 2.0 * std::abs(p.v);
            out.push_back(st);
        }
        return out;
    }
    const cplx i(0.0, 1.0);
    const double root = std::sqrt(p.g * p.g + 16.0 * p.gamma * p.gamma);
    for (const int sP : {-1, +1}) {
        const double P = 0.5 + sP * root / (2.0 * p.g);
        const cplx z = -i * (p.g / p.gamma) * P;
        const cplx x = 0.5 * (z + std::sqrt(4.0 + z * z));
        const cplx phi = -0.5 * i * std::log(x);
        const cplx s2t = -(p.v / p.g) * (x + 1.0 / x);  // sin 2theta
        const cplx c2t = std::sqrt(1.0 - s2t * s2t);
        for (const int sc : {+1, -1}) {
            const cplx ct = double(sc) * c2t;
            // theta from exp(2 i theta) = cos 2theta + i sin 2theta
            const cplx theta = -0.5 * i * std::log(ct + i * s2t);
            PtBrokenState st;
            st.theta = theta;
            st.phi = phi;
            st.sign_P = sP;
            st.mu_A = detail::broken_mu_from_angles(p, theta, phi);
            st.physical =
                std::abs(theta.imag()) < 1e-9 && std::abs(phi.imag()) < 1e-9;
            out.push_back(st);
        }
        // deterministic pair order: Im mu_A >= 0 first
        if (out[out.size() - 2].mu_A.imag() < out.back().mu_A.imag())
            std::swap(out[out.size() - 2], out.back());
    }
    return out;
}

struct ZeroNonlinearity : std::domain_error {
    ZeroNonlinearity() : std::domain_error("gamma_critical undefined for g = 0") {}
};

/// Pitchfork position gamma_c = sqrt(4 v^4 / g^2 - v^2), defined for |g| <= 2|v|.
inline std::optional<double> gamma_critical(const MatrixParams& p) {
    if (p.g == 0.0) throw ZeroNonlinearity();
    const double rad = 4.0 * std::pow(p.v, 4) / (p.g * p.g) - p.v * p.v;
    if (rad < 0.0) return std::nullopt;
    return std::sqrt(rad);
}

// ---------------------------------------------------------------------------
// effective real 2D model (decoupled states r_i)
// ---------------------------------------------------------------------------

struct Effective2dState {
    double mu = 0.0;
    double theta = 0.0;
    cplx root{};  // y = exp(2 i theta) on the unit circle
};

/// Real decoupled states from g y^4 + 4(gamma + i v) y^3 + 4(-gamma + i v) y - g = 0,
/// keeping unit-circle roots. Sorted by mu descending (r1 = highest), matching
/// the labelling in which r1 meets s1 and r4 meets s2 at gamma = 0.
inline std::vector<Effective2dState> effective_2d_states(const MatrixParams& p) {
    std::vector<num::cplx> roots;
    const cplx i(0.0, 1.0);
    if (std::abs(p.g) < 1e-12) {
        // quartic degenerates: y ((gamma + i v) y^2 + (-gamma + i v)) = 0
        const cplx y2 = (cplx(p.gamma, 0.0) - i * p.v) / (cplx(p.gamma, 0.0) + i * p.v);
        const cplx y = std::sqrt(y2);
        roots = {y, -y};
    } else {
        const auto r = num::quartic_roots(cplx(p.g, 0.0), 4.0 * (p.gamma + i * p.v),
                                          cplx(0.0, 0.0), 4.0 * (-p.gamma + i * p.v),
                                          cplx(-p.g, 0.0));
        roots.assign(r.begin(), r.end());
    }
    std::vector<Effective2dState> out;
    for (const cplx& y : roots) {
        if (std::abs(std::abs(y) - 1.0) > 1e-8) continue;
        Effective2dState st;
        st.theta = 0.5 * std::arg(y);
        st.root = y;
        const double c = std::cos(st.theta);
        if (std::abs(c) < 1e-12) continue;  // tan(theta) pole, not a finite state
        st.mu = -p.g * c * c - p.gamma + p.v * std::tan(st.theta);
        out.push_back(st);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.mu > b.mu; });
    return out;
}

// ---------------------------------------------------------------------------
// numeric root search on the full 4D model
// ---------------------------------------------------------------------------

struct Matrix4Guess {
    WaveVector4 state;
    cplx mu_A{}, mu_B{};
};

struct Matrix4Solution {
    WaveVector4 state;
    SubsystemPair pair;
    num::NewtonReport report;
    [[nodiscard]] bool ok() const { return report.ok(); }
};

/// Residual of M(psi) psi = (mu_A psi_A, mu_B psi_B) over the unknowns
/// (theta_A, phi_A, theta_B, phi_B, Re mu_A, Im mu_A, Re mu_B, Im mu_B).
inline num::Vec matrix4_residual(const MatrixParams& p, double phi_rel, const num::Vec& u) {
    WaveVector4 w;
    w.theta_A = u[0];
    w.phi_A = u[1];
    w.theta_B = u[2];
    w.phi_B = u[3];
    w.phi_rel = phi_rel;
    const cplx mu_A(u[4], u[5]), mu_B(u[6], u[7]);
    const CVec4 psi = w.psi();
    const CVec4 lhs = build_matrix4(p, psi) * psi;
    num::Vec r(8);
    for (int k = 0; k < 4; ++k) {
        const cplx mu = k < 2 ? mu_A : mu_B;
        const cplx d = lhs(k) - mu * psi(k);
        r[2 * k] = d.real();
        r[2 * k + 1] = d.imag();
    }
    return r;
}

inline Matrix4Solution solve_matrix4_numeric(const MatrixParams& p, const Matrix4Guess& guess,
                                             double phi_rel, double tolerance = 1e-11) {
    num::RootProblem prob;
    prob.dimension = 8;
    prob.tolerance = tolerance;
    prob.residual = [&p, phi_rel](const num::Vec& u) { return matrix4_residual(p, phi_rel, u); };
    num::Vec u0(8);
    u0 << guess.state.theta_A, guess.state.phi_A, guess.state.theta_B, guess.state.phi_B,
        guess.mu_A.real(), guess.mu_A.imag(), guess.mu_B.real(), guess.mu_B.imag();
    prob.initial_guess = u0;
    const auto res = num::newton_solve(prob);

    Matrix4Solution sol;
    sol.report = res.report;
    sol.state.theta_A = res.x[0];
    sol.state.phi_A = res.x[1];
    sol.state.theta_B = res.x[2];
    sol.state.phi_B = res.x[3];
    sol.state.phi_rel = phi_rel;
    sol.pair.mu_A = cplx(res.x[4], res.x[5]);
    sol.pair.mu_B = cplx(res.x[6], res.x[7]);
    sol.pair.classification = classify_pair(sol.pair.mu_A, sol.pair.mu_B);
    return sol;
}

}  // namespace ptbec::matrix
