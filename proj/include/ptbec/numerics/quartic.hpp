#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace ptbec::num {

using cplx = std::complex<double>;

struct LeadingCoefficientZero : std::invalid_argument {
    LeadingCoefficientZero() : std::invalid_argument("leading polynomial coefficient is zero") {}
};

namespace poly_detail {

inline bool lex_less(const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// stable quadratic formula, monic x^2 + bx + c
inline std::array<cplx, 2> monic_quadratic(cplx b, cplx c) {
    const cplx d = std::sqrt(b * b - 4.0 * c);
    // pick the sign that avoids cancellation in -b -/+ d
    const cplx q = (std::norm(-b + d) >= std::norm(-b - d)) ? (-b + d) * 0.5 : (-b - d) * 0.5;
    if (q == cplx(0.0, 0.0)) return {cplx(0.0), cplx(0.0)};
    return {q, c / q};
}

// one Cardano root of the monic cubic x^3 + px + q (any root suffices)
inline cplx depressed_cubic_root(cplx p, cplx q) {
    if (p == cplx(0.0) && q == cplx(0.0)) return cplx(0.0);
    const cplx d = std::sqrt(q * q * 0.25 + p * p * p / 27.0);
    cplx u3 = -q * 0.5 + d;
    if (std::norm(u3) < std::norm(-q * 0.5 - d)) u3 = -q * 0.5 - d;
    const cplx u = std::pow(u3, 1.0 / 3.0);
    if (u == cplx(0.0)) return cplx(0.0);
    return u - p / (3.0 * u);
}

}  // namespace poly_detail

inline std::array<cplx, 2> quadratic_roots(cplx c2, cplx c1, cplx c0) {
    if (c2 == cplx(0.0)) throw LeadingCoefficientZero();
    auto r = poly_detail::monic_quadratic(c1 / c2, c0 / c2);
    if (poly_detail::lex_less(r[1], r[0])) std::swap(r[0], r[1]);
    return r;
}

/// Roots of c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0 by Ferrari's closed form,
/// polished with two Newton steps and returned sorted by real part, then
/// imaginary part.
inline std::array<cplx, 4> quartic_roots(cplx c4, cplx c3, cplx c2, cplx c1, cplx c0) {
    if (c4 == cplx(0.0)) throw LeadingCoefficientZero();
    const cplx a = c3 / c4, b = c2 / c4, c = c1 / c4, d = c0 / c4;

    // depress: x = y - a/4  ->  y^4 + p y^2 + q y + r
    const cplx a2 = a * a;
    const cplx p = b - 3.0 * a2 / 8.0;
    const cplx q = c - a * b * 0.5 + a2 * a / 8.0;
    const cplx r = d - a * c * 0.25 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;

    std::array<cplx, 4> y;
    const double scale = std::max({1.0, std::abs(p), std::abs(q), std::abs(r)});
    if (std::abs(q) <= 1e-14 * scale) {
        // biquadratic: y^2 = roots of z^2 + p z + r
        const auto z = poly_detail::monic_quadratic(p, r);
        const cplx s0 = std::sqrt(z[0]), s1 = std::sqrt(z[1]);
        y = {s0, -s0, s1, -s1};
    } else {
        // resolvent 8 m^3 + 8 p m^2 + (2 p^2 - 8 r) m - q^2 = 0
        const cplx B = p;                       // after dividing by 8
        const cplx C = (2.0 * p * p - 8.0 * r) / 8.0;
        const cplx D = -q * q / 8.0;
        // depress the cubic: m = t - B/3
        const cplx pp = C - B * B / 3.0;
        const cplx qq = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
        const cplx m = poly_detail::depressed_cubic_root(pp, qq) - B / 3.0;
        const cplx s = std::sqrt(2.0 * m);
        // y^4 + p y^2 + q y + r = (y^2 + s y + w1)(y^2 - s y + w2)
        const cplx half = p * 0.5 + m;
        const cplx w1 = half - q / (2.0 * s);
        const cplx w2 = half + q / (2.0 * s);
        const auto r1 = poly_detail::monic_quadratic(s, w1);
        const auto r2 = poly_detail::monic_quadratic(-s, w2);
        y = {r1[0], r1[1], r2[0], r2[1]};
    }

    std::array<cplx, 4> roots;
    for (int i = 0; i < 4; ++i) roots[i] = y[i] - a * 0.25;

    // Newton polish on the original polynomial
    for (auto& x : roots) {
        for (int it = 0; it < 2; ++it) {
            const cplx f = (((c4 * x + c3) * x + c2) * x + c1) * x + c0;
            const cplx df = ((4.0 * c4 * x + 3.0 * c3) * x + 2.0 * c2) * x + c1;
            if (df == cplx(0.0)) break;
            x -= f / df;
        }
    }
    std::sort(roots.begin(), roots.end(), poly_detail::lex_less);
    return roots;
}

}  // namespace ptbec::num
