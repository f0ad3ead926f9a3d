#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "ptbec/matrix_models.hpp"

using namespace ptbec;
using matrix::cplx;
using matrix::MatrixParams;

namespace {

double eigen_residual(const MatrixParams& p, const matrix::WaveVector4& w, cplx mu_A, cplx mu_B) {
    const matrix::CVec4 psi = w.psi();
    const matrix::CVec4 lhs = matrix::build_matrix4(p, psi) * psi;
    double worst = 0.0;
    for (int k = 0; k < 4; ++k)
        worst = std::max(worst, std::abs(lhs(k) - (k < 2 ? mu_A : mu_B) * psi(k)));
    return worst;
}

}  // namespace

TEST_CASE("2d model: linear case") {
    const auto b = matrix::model2d_branches({0.0, 1.0, 0.0});
    CHECK(std::abs(b.mu_s_plus - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(b.mu_s_minus - cplx(-1.0, 0.0)) < 1e-14);
    CHECK(b.s_exists);
    CHECK(b.a_radicand_nonneg);  // no physical broken pair at gamma = 0
}

TEST_CASE("2d model: tangent point at gamma = v") {
    const auto b = matrix::model2d_branches({0.0, 1.0, 1.0});
    CHECK(std::abs(b.mu_s_plus) < 1e-14);
    CHECK(std::abs(b.mu_s_minus) < 1e-14);
}

TEST_CASE("2d model: degenerate broken pair at gamma = 0") {
    const auto b = matrix::model2d_branches({1.4, 1.0, 0.0});
    CHECK(std::abs(b.mu_a_plus - cplx(-1.4, 0.0)) < 1e-14);
    CHECK(std::abs(b.mu_a_minus - cplx(-1.4, 0.0)) < 1e-14);
}

TEST_CASE("2d model: broken pair is complex beyond the bifurcation") {
    const MatrixParams p{1.4, 1.0, 0.9};  // gamma_c = sqrt(1 - 0.49) ~ 0.714
    const auto b = matrix::model2d_branches(p);
    CHECK_FALSE(b.a_radicand_nonneg);
    CHECK(b.mu_a_plus.imag() > 0.0);
    CHECK(std::abs(b.mu_a_plus - std::conj(b.mu_a_minus)) < 1e-14);
}

TEST_CASE("matrix4: hermitian by construction") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int t = 0; t < 50; ++t) {
        matrix::WaveVector4 w;
        w.theta_A = u(rng);
        w.theta_B = u(rng);
        w.phi_A = u(rng);
        w.phi_B = u(rng);
        w.phi_rel = u(rng);
        const MatrixParams p{u(rng), u(rng), std::abs(u(rng))};
        const auto m = matrix::build_matrix4(p, w.psi());
        CHECK((m - m.adjoint()).norm() == 0.0);
    }
}

TEST_CASE("matrix4: decoupled blocks at gamma = 0") {
    matrix::WaveVector4 w;
    w.theta_A = w.theta_B = M_PI / 4.0;
    const auto m = matrix::build_matrix4({1.5, 1.0, 0.0}, w.psi());
    CHECK(m.block<2, 2>(0, 2).norm() == 0.0);
    CHECK(m.block<2, 2>(2, 0).norm() == 0.0);
    CHECK((m.block<2, 2>(0, 0) - m.block<2, 2>(2, 2)).norm() == 0.0);
}

TEST_CASE("analytic PT-symmetric states") {
    SECTION("gamma = 0") {
        const auto s = matrix::analytic_pt_symmetric({1.5, 1.0, 0.0});
        CHECK(s[0].mu == Catch::Approx(0.25).margin(1e-14));
        CHECK(s[1].mu == Catch::Approx(-1.75).margin(1e-14));
    }
    SECTION("g = 0 symmetry about zero") {
        for (double gamma : {0.3, 0.9, 1.7}) {
            const auto s = matrix::analytic_pt_symmetric({0.0, 1.0, gamma});
            CHECK(s[0].mu == Catch::Approx(std::sqrt(1.0 + gamma * gamma)).margin(1e-14));
            CHECK(s[0].mu + s[1].mu == Catch::Approx(0.0).margin(1e-14));
        }
    }
    SECTION("values and eigen residual near the pitchfork") {
        const MatrixParams p{1.5, 1.0, 0.882};
        const auto s = matrix::analytic_pt_symmetric(p);
        CHECK(s[0].mu == Catch::Approx(-0.75 + std::sqrt(1.0 + 0.882 * 0.882)).margin(1e-12));
        CHECK(s[1].mu == Catch::Approx(-0.75 - std::sqrt(1.0 + 0.882 * 0.882)).margin(1e-12));
        for (const auto& st : s) {
            CHECK(eigen_residual(p, st.wave(), st.mu, st.mu) < 1e-12);
            CHECK(std::abs(std::abs(st.x) - 1.0) < 1e-14);
        }
    }
    SECTION("mirror symmetry mu+ + mu- = -g for all gamma") {
        for (double g : {0.4, 1.5, 3.2})
            for (double gamma = 0.0; gamma <= 2.0; gamma += 0.05) {
                const auto s = matrix::analytic_pt_symmetric({g, 1.0, gamma});
                CHECK(s[0].mu + s[1].mu == Catch::Approx(-g).margin(1e-13));
            }
    }
}

TEST_CASE("analytic PT-broken states") {
    SECTION("existence window matches gamma_critical for |g| < 2v") {
        const MatrixParams base{1.5, 1.0, 0.0};
        const double gc = matrix::gamma_critical(base).value();
        CHECK(gc == Catch::Approx(0.88192).margin(1e-5));
        for (double gamma = 0.05; gamma <= 2.0; gamma += 0.017) {
            const auto all = matrix::analytic_pt_broken({1.5, 1.0, gamma});
            REQUIRE(all.size() == 4);
            int physical = 0;
            for (const auto& st : all) physical += st.physical ? 1 : 0;
            CHECK(physical == (gamma > gc ? 2 : 0));
        }
    }
    SECTION("branch contact with s2 at the pitchfork") {
        const double gc = matrix::gamma_critical({1.5, 1.0, 0.0}).value();
        const auto all = matrix::analytic_pt_broken({1.5, 1.0, gc});
        const auto s = matrix::analytic_pt_symmetric({1.5, 1.0, gc});
        bool contact = false;
        for (const auto& st : all) {
            if (st.sign_P != -1) continue;
            CHECK(std::abs(st.mu_A.imag()) < 1e-7);
            if (std::abs(st.mu_A.real() - s[1].mu) < 1e-8) contact = true;
        }
        CHECK(contact);
    }
    SECTION("strong nonlinearity: physical pair at every gamma") {
        for (double gamma : {0.05, 0.3, 1.0, 2.0}) {
            const auto all = matrix::analytic_pt_broken({3.5, 1.0, gamma});
            int physical = 0;
            for (const auto& st : all) physical += st.physical ? 1 : 0;
            CHECK(physical == 2);
        }
        CHECK_FALSE(matrix::gamma_critical({3.5, 1.0, 0.0}).has_value());
    }
    SECTION("physical states satisfy the stationary equations and Eq. psi_A = psi_B^*") {
        const MatrixParams p{1.5, 1.0, 1.2};
        for (const auto& st : matrix::analytic_pt_broken(p)) {
            if (!st.physical) continue;
            CHECK(eigen_residual(p, st.wave(), st.mu_A, std::conj(st.mu_A)) < 1e-10);
            const auto psi = st.wave().psi();
            CHECK(std::abs(psi(0) - std::conj(psi(2))) < 1e-12);
            CHECK(std::abs(psi(1) - std::conj(psi(3))) < 1e-12);
        }
    }
    SECTION("closed-form chemical potentials (corrected inner ratio)") {
        // mu = -(g/2) (2 -+ sqrt(P + (v^2/gamma^2) P^2) - P) against the
        // equation-derived values, both signs of P
        for (double gamma : {0.5, 0.95, 1.4}) {
            const MatrixParams p{1.5, 1.0, gamma};
            const double root = std::sqrt(p.g * p.g + 16.0 * gamma * gamma);
            const auto all = matrix::analytic_pt_broken(p);
            for (int sP : {-1, +1}) {
                const double P = 0.5 + sP * root / (2.0 * p.g);
                const cplx S = std::sqrt(
                    cplx(P + (p.v * p.v) / (gamma * gamma) * P * P, 0.0));
                for (const auto& st : all) {
                    if (st.sign_P != sP) continue;
                    const cplx m1 = -0.5 * p.g * (2.0 - S - P);
                    const cplx m2 = -0.5 * p.g * (2.0 + S - P);
                    const double d =
                        std::min(std::abs(st.mu_A - m1), std::abs(st.mu_A - m2));
                    CHECK(d < 1e-10);
                }
            }
        }
    }
    SECTION("gamma = 0 degenerate limit") {
        const auto all = matrix::analytic_pt_broken({1.5, 1.0, 0.0});
        REQUIRE(all.size() == 2);
        for (const auto& st : all) {
            CHECK(st.gamma0_limit);
            CHECK(std::abs(st.mu_A - cplx(-1.5, 0.0)) < 1e-14);
        }
    }
}

TEST_CASE("gamma_critical") {
    CHECK(matrix::gamma_critical({1.5, 1.0, 0.0}).value() == Catch::Approx(0.88192).margin(5e-6));
    CHECK(matrix::gamma_critical({2.0, 1.0, 0.0}).value() == Catch::Approx(0.0).margin(1e-14));
    CHECK_FALSE(matrix::gamma_critical({3.5, 1.0, 0.0}).has_value());
    CHECK_THROWS_AS(matrix::gamma_critical({0.0, 1.0, 0.0}), matrix::ZeroNonlinearity);
}

TEST_CASE("effective 2d states") {
    SECTION("merge with the symmetric states at gamma = 0") {
        const auto r = matrix::effective_2d_states({1.5, 1.0, 0.0});
        const auto s = matrix::analytic_pt_symmetric({1.5, 1.0, 0.0});
        REQUIRE(r.size() == 2);
        CHECK(std::abs(r.front().mu - s[0].mu) < 1e-10);  // r1 meets s1
        CHECK(std::abs(r.back().mu - s[1].mu) < 1e-10);   // r4 meets s2
    }
    SECTION("strong nonlinearity: four states, middle pair dies in a tangent") {
        const auto lo = matrix::effective_2d_states({3.5, 1.0, 0.05});
        CHECK(lo.size() == 4);
        const auto hi = matrix::effective_2d_states({3.5, 1.0, 1.8});
        CHECK(hi.size() == 2);
    }
    SECTION("g = 0 reduces to the linear asymmetric double well") {
        const auto r = matrix::effective_2d_states({0.0, 1.0, 0.5});
        REQUIRE(r.size() == 2);
        const double mu = std::sqrt(1.0 + 0.25);
        CHECK(r.front().mu == Catch::Approx(mu).margin(1e-12));
        CHECK(r.back().mu == Catch::Approx(-mu).margin(1e-12));
    }
}

TEST_CASE("numeric root search reproduces the analytic branches") {
    SECTION("seeded from the symmetric states") {
        const MatrixParams p{1.5, 1.0, 0.5};
        for (const auto& st : matrix::analytic_pt_symmetric(p)) {
            matrix::Matrix4Guess guess{st.wave(), cplx(st.mu, 0.0), cplx(st.mu, 0.0)};
            const auto sol = matrix::solve_matrix4_numeric(p, guess, 0.0);
            REQUIRE(sol.ok());
            CHECK(std::abs(sol.pair.mu_A - cplx(st.mu, 0.0)) < 1e-9);
            CHECK(std::abs(sol.pair.mu_B - cplx(st.mu, 0.0)) < 1e-9);
            CHECK(sol.pair.classification == matrix::PtClass::SymmetricStationary);
        }
    }
    SECTION("seeded from the broken states") {
        const MatrixParams p{1.5, 1.0, 1.2};
        for (const auto& st : matrix::analytic_pt_broken(p)) {
            if (!st.physical) continue;
            matrix::Matrix4Guess guess{st.wave(), st.mu_A, std::conj(st.mu_A)};
            const auto sol = matrix::solve_matrix4_numeric(p, guess, 0.0);
            REQUIRE(sol.ok());
            CHECK(std::abs(sol.pair.mu_A - st.mu_A) < 1e-9);
            CHECK(std::abs(sol.pair.mu_B - std::conj(st.mu_A)) < 1e-9);
            CHECK(sol.pair.classification == matrix::PtClass::BrokenPair);
            // equal in/out flux between the subsystems
            const auto psi = sol.state.psi();
            CHECK(std::abs(psi(0) - std::conj(psi(2))) < 1e-9);
            CHECK(std::abs(psi(1) - std::conj(psi(3))) < 1e-9);
        }
    }
    SECTION("analytic/numeric equivalence on random parameters") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> ug(0.2, 1.9), uv(1.0, 2.0), ugam(0.05, 2.0);
        int checked = 0;
        while (checked < 50) {
            const MatrixParams p{ug(rng), uv(rng), ugam(rng)};
            if (std::abs(p.g) >= 2.0 * p.v) continue;
            ++checked;
            for (const auto& st : matrix::analytic_pt_symmetric(p)) {
                matrix::Matrix4Guess guess{st.wave(), cplx(st.mu, 0.0), cplx(st.mu, 0.0)};
                const auto sol = matrix::solve_matrix4_numeric(p, guess, 0.0);
                REQUIRE(sol.ok());
                CHECK(std::abs(sol.pair.mu_A - cplx(st.mu, 0.0)) < 1e-9);
            }
            for (const auto& st : matrix::analytic_pt_broken(p)) {
                if (!st.physical) continue;
                matrix::Matrix4Guess guess{st.wave(), st.mu_A, std::conj(st.mu_A)};
                const auto sol = matrix::solve_matrix4_numeric(p, guess, 0.0);
                REQUIRE(sol.ok());
                CHECK(std::abs(sol.pair.mu_A - st.mu_A) < 1e-9);
            }
        }
    }
    SECTION("PT pairing: no third class over random seeds") {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> uth(0.05, M_PI / 2 - 0.05),
            uph(-M_PI, M_PI), ug(0.0, 2.0), umu(-4.0, 1.5), uim(-0.5, 0.5);
        for (double g : {0.5, 1.5, 3.5}) {
            for (int t = 0; t < 34; ++t) {
                const MatrixParams p{g, 1.0, ug(rng)};
                matrix::Matrix4Guess guess;
                guess.state.theta_A = uth(rng);
                guess.state.theta_B = uth(rng);
                guess.state.phi_A = uph(rng);
                guess.state.phi_B = uph(rng);
                guess.mu_A = cplx(umu(rng), uim(rng));
                guess.mu_B = cplx(umu(rng), uim(rng));
                const auto sol = matrix::solve_matrix4_numeric(p, guess, 0.0);
                if (!sol.ok()) continue;
                const auto c = sol.pair.classification;
                CHECK((c == matrix::PtClass::SymmetricStationary ||
                       c == matrix::PtClass::BrokenPair));
            }
        }
    }
    SECTION("phi_rel != 0 deforms the central branch off the real axis") {
        const MatrixParams p{1.5, 1.0, 0.5};
        const auto s = matrix::analytic_pt_symmetric(p);
        matrix::Matrix4Guess guess{s[1].wave(), cplx(s[1].mu, 0.0), cplx(s[1].mu, 0.0)};
        const auto sol = matrix::solve_matrix4_numeric(p, guess, 0.03);
        REQUIRE(sol.ok());
        CHECK(std::abs(sol.pair.mu_A.imag()) > 1e-6);
        // total particle number still conserved
        CHECK(std::abs(sol.pair.mu_A.imag() + sol.pair.mu_B.imag()) < 1e-9);
    }
}
