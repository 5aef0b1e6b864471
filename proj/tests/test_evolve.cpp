#include "doctest.h"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "virasq/evolve.hpp"
#include "virasq/states.hpp"

using namespace virasq;

namespace {

const Complex kI(0.0, 1.0);

}  // namespace

TEST_CASE("exponentiate basics") {
    const FockConfig cfg{32, 1, 1.0, 8};
    const OperatorMatrix L = build_L_single(cfg, 0);

    SUBCASE("theta = 0 gives the identity") {
        CHECK((exponentiate(L, 0.0).mat - Matrix::Identity(32, 32)).norm() < 1e-13);
    }

    SUBCASE("group inverse") {
        const OperatorMatrix U = exponentiate(L, 0.4);
        const OperatorMatrix V = exponentiate(L, -0.4);
        CHECK((U.mat * V.mat - Matrix::Identity(32, 32)).norm() < 1e-10);
    }

    SUBCASE("unitarity") {
        for (double theta : {0.1, 0.5, 2.0}) CHECK(unitarity_defect(exponentiate(L, theta)) < 1e-9);
    }

    SUBCASE("rejects non-anti-Hermitian input") {
        const OperatorMatrix x = build_position(cfg, 1);
        CHECK_THROWS_AS(exponentiate(x, 0.1), StructureError);
    }

    SUBCASE("agrees with an independent Pade exponential") {
        const double theta = 0.3;
        const Matrix ref = (theta * L.mat).exp();  // scaling-and-squaring oracle
        CHECK((exponentiate(L, theta).mat - ref).norm() < 1e-12);
    }

    SUBCASE("squeezed vacuum position variance contracts") {
        // <0| U x^2 U^dag |0> = e^(-2 theta) / 2 at omega0 = 1
        const double theta = 0.3;
        const OperatorMatrix U = exponentiate(L, theta);
        const OperatorMatrix x = build_position(cfg, 1);
        const Complex v = expectation(vacuum(cfg), conjugate(U, x * x));
        CHECK(v.real() == doctest::Approx(std::exp(-2.0 * theta) * 0.5).epsilon(1e-8));
    }
}

TEST_CASE("apply_exponential matches the dense exponential") {
    const FockConfig cfg{24, 1, 1.0, 8};
    const OperatorMatrix L = build_L_single(cfg, 1);
    const StateVector v0 = vacuum(cfg);
    const double theta = 0.02;
    const StateVector via_vec = apply_exponential(L, theta, v0);
    const Vector via_mat = exponentiate(L, theta).mat * v0.amps;
    CHECK((via_vec.amps - via_mat).norm() < 1e-12);
}

TEST_CASE("conjugate basics and ladder transformation laws") {
    SUBCASE("identity conjugation") {
        const FockConfig cfg{16, 1, 1.0, 6};
        const OperatorMatrix x = build_position(cfg, 1);
        CHECK((conjugate(identity_op(cfg), x).mat - x.mat).norm() == 0.0);
    }

    SUBCASE("single mode: U a U^dag = a cosh - a^dag sinh") {
        const FockConfig cfg{64, 1, 1.0, 16};
        const double theta = 0.2;
        const OperatorMatrix U = exponentiate(build_L_single(cfg, 0), theta);
        const OperatorMatrix a = build_annihilation(cfg, 1);
        const OperatorMatrix expect =
            Complex(std::cosh(theta)) * a - Complex(std::sinh(theta)) * a.dagger();
        CHECK(subspace_residual(conjugate(U, a) - expect, 8) < 1e-8);
    }

    SUBCASE("two modes: U a1 U^dag = a1 cosh + a2^dag sinh") {
        const FockConfig cfg{32, 2, 1.0, 6};
        const double theta = 0.2;
        const OperatorMatrix U = exponentiate(build_bogoliubov_generator(cfg), theta);
        const OperatorMatrix a1 = build_annihilation(cfg, 1);
        const OperatorMatrix a2 = build_annihilation(cfg, 2);
        const OperatorMatrix expect =
            Complex(std::cosh(theta)) * a1 + Complex(std::sinh(theta)) * a2.dagger();
        CHECK(subspace_residual(conjugate(U, a1) - expect, 6) < 1e-8);
    }
}

TEST_CASE("fn_of_hermitian") {
    const FockConfig cfg{32, 1, 1.0, 8};
    const OperatorMatrix x = build_position(cfg, 1);

    SUBCASE("identity function") {
        CHECK((fn_of_hermitian(x, [](double t) { return t; }).mat - x.mat).norm() < 1e-11);
    }

    SUBCASE("square equals matrix product") {
        const OperatorMatrix sq = fn_of_hermitian(x, [](double t) { return t * t; });
        CHECK(subspace_residual(sq - x * x, 16) < 1e-11);
    }

    SUBCASE("domain check names the offending eigenvalue") {
        const auto log_fn = [](double t) { return std::log(t); };
        const auto positive = [](double t) { return t > 0.0; };
        CHECK_THROWS_AS(fn_of_hermitian(x, log_fn, positive, "log"), DomainError);
        try {
            fn_of_hermitian(x, log_fn, positive, "log");
        } catch (const DomainError& e) {
            CHECK(e.eigenvalue < 0.0);
        }
    }

    SUBCASE("(1+2 theta t^2)^(-1/2) is defined on the whole spectrum") {
        const double theta = 0.01;
        CHECK_NOTHROW(fn_of_hermitian(
            x, [=](double t) { return std::pow(1.0 + 2.0 * theta * t * t, -0.5); },
            [=](double t) { return 1.0 + 2.0 * theta * t * t > 0.0; }));
    }

    SUBCASE("rejects non-Hermitian input") {
        const OperatorMatrix a = build_annihilation(cfg, 1);
        CHECK_THROWS_AS(fn_of_hermitian(a, [](double t) { return t; }), StructureError);
    }
}

TEST_CASE("domain_guard") {
    const FockConfig cfg{32, 1, 1.0, 8};
    const OperatorMatrix x = build_position(cfg, 1);
    const Spectral sx = Spectral::of_hermitian(x);

    CHECK(domain_guard(x, 2, 0.0, +1));
    CHECK(domain_guard(x, 0, 123.0, +1));
    CHECK(domain_guard(x, -1, 5.0, +1));        // affine flow, pole-free
    CHECK(domain_guard(x, 2, 10.0, +1));        // even n, positive theta
    CHECK_FALSE(domain_guard(x, 2, 10.0, -1));  // dilation branch hits the pole

    // n=1, sign=+1: fails exactly when theta = -1/lambda_max
    const double lmax = sx.max_eigenvalue();
    CHECK_FALSE(domain_guard(x, 1, -1.0 / lmax, +1));
    CHECK(domain_guard(x, 1, -0.5 / lmax, +1));
    // margin shrinks the admissible window
    CHECK_FALSE(domain_guard(x, 1, -0.9 / lmax, +1, 0.5));
}

TEST_CASE("single-mode closed-form transformation laws") {
    const FockConfig cfg{128, 1, 1.0, 16};
    const OperatorMatrix x = build_position(cfg, 1);
    const OperatorMatrix p = build_momentum(cfg, 1);
    const Spectral sx = Spectral::of_hermitian(x);

    SUBCASE("n = 0 scaling") {
        const double theta = 0.3;
        const OperatorMatrix xt = closed_form_position(sx, 0, theta, kFlowSignSingle);
        const OperatorMatrix pt = closed_form_momentum(sx, p, 0, theta, kFlowSignSingle);
        CHECK((xt.mat - std::exp(-theta) * x.mat).norm() < 1e-10);
        CHECK((pt.mat - std::exp(theta) * p.mat).norm() < 1e-12);
    }

    SUBCASE("n = -1 translation") {
        const double theta = 0.25;
        const OperatorMatrix xt = closed_form_position(sx, -1, theta, kFlowSignSingle);
        CHECK((xt.mat - (x.mat - theta * Matrix::Identity(128, 128))).norm() < 1e-10);
        const OperatorMatrix pt = closed_form_momentum(sx, p, -1, theta, kFlowSignSingle);
        CHECK((pt.mat - p.mat).norm() == 0.0);
    }

    SUBCASE("n = 2 cross-validation against conjugation") {
        const LawCheckResult res = check_single_mode_laws(cfg, 2, 0.01, 8);
        for (const auto& r : res.reports) {
            CAPTURE(r.target);
            CHECK(r.domain_ok);
            CHECK(r.residual < 1e-7);
        }
        CHECK(res.unitarity_defect < 1e-9);
    }

    SUBCASE("n = 1 momentum law") {
        const LawCheckResult res = check_single_mode_laws(cfg, 1, 0.02, 8);
        CHECK(res.reports[1].target == "p");
        CHECK(res.reports[1].residual < 1e-7);
    }

    SUBCASE("out-of-domain theta is flagged, not computed") {
        const double bad_theta = -1.0 / sx.max_eigenvalue();
        const LawCheckResult res = check_single_mode_laws(cfg, 1, bad_theta, 8);
        for (const auto& r : res.reports) {
            CHECK_FALSE(r.domain_ok);
            CHECK(std::isnan(r.residual));
        }
    }
}

TEST_CASE("canonical pair is preserved by conjugation") {
    const FockConfig cfg{64, 1, 1.0, 16};
    const OperatorMatrix x = build_position(cfg, 1);
    const OperatorMatrix p = build_momentum(cfg, 1);
    const OperatorMatrix U = exponentiate(build_L_single(cfg, 1), 0.02);
    const OperatorMatrix before = commutator(x, p);
    const OperatorMatrix after = commutator(conjugate(U, x), conjugate(U, p));
    CHECK(subspace_residual(after - before, 8) < 1e-9);
}

TEST_CASE("k_omega") {
    const FockConfig cfg{64, 1, 1.0, 16};
    const OperatorMatrix x = build_position(cfg, 1);

    SUBCASE("theta = 0") {
        const KOmegaPair ko = k_omega(x, 2, 0.0, +1, Branch::single);
        CHECK((ko.K_op.mat - Matrix::Identity(64, 64)).norm() < 1e-11);
        CHECK(ko.Omega_op.mat.norm() < 1e-11);
    }

    SUBCASE("spectral mapping keeps K >= 1 for even n, positive theta") {
        const KOmegaPair ko = k_omega(x, 2, 0.01, +1, Branch::single);
        const Spectral sk = Spectral::of_hermitian(ko.K_op);
        CHECK(sk.min_eigenvalue() >= 1.0 - 1e-10);
        CHECK(hermiticity_defect(ko.Omega_op.mat) < 1e-10);
    }

    SUBCASE("scalar n -> 0 limit reproduces e^(-theta)") {
        const double theta = 0.37;
        const double k = k_scalar(1.0, 1, theta * 1e-6, +1);  // K(n theta -> 0) ~ 1
        CHECK(k == doctest::Approx(1.0).epsilon(1e-5));
        // K^(-2/n-1) at n = 1e-6 with moment 1
        const double n = 1e-6;
        const double kk = std::sqrt(1.0 + n * theta);
        CHECK(std::pow(kk, -2.0 / n - 1.0) == doctest::Approx(std::exp(-theta)).epsilon(1e-5));
        CHECK(omega_scalar(1.0, 0, theta, +1) == doctest::Approx(-theta));
    }
}

TEST_CASE("two-mode closed forms and mode reconstruction") {
    const FockConfig cfg{32, 2, 1.0, 6};

    SUBCASE("n = 0 reproduces the Bogoliubov scalings") {
        const double theta = 0.2;
        const LawCheckResult res = check_two_mode_laws(cfg, 0, theta, 6);
        for (const auto& r : res.reports) {
            CAPTURE(r.target);
            CHECK(r.domain_ok);
            CHECK(r.residual < 1e-8);
        }
        CHECK(res.unitarity_defect < 1e-9);
    }

    SUBCASE("theta = 0 reconstruction is the identity") {
        const ModePair m = mode_reconstruction(cfg, 2, 0.0);
        const OperatorMatrix a1 = build_annihilation(cfg, 1);
        CHECK((m.a1.mat - a1.mat).norm() < 1e-10);
    }

    SUBCASE("n = 2 reconstruction matches conjugation") {
        const LawCheckResult res = check_two_mode_laws(cfg, 2, 0.005, 6);
        for (const auto& r : res.reports) {
            CAPTURE(r.target);
            CHECK(r.domain_ok);
            CHECK(r.residual < 1e-6);
        }
    }

    SUBCASE("COM-only generator leaves dx invariant") {
        const ComRel cr = build_com_rel(cfg);
        const Matrix X2 = cr.X.mat * cr.X.mat;  // n = 1 COM half
        const OperatorMatrix com_half{kI * (X2 * cr.P.mat + cr.P.mat * X2), cfg.structure()};
        const OperatorMatrix U = exponentiate(com_half, 0.02);
        CHECK(subspace_residual(conjugate(U, cr.dx) - cr.dx, 6) < 1e-10);
    }
}
