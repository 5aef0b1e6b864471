#include "doctest.h"

#include <cmath>

#include "virasq/fock.hpp"

using namespace virasq;

namespace {

FockConfig single_cfg(int dim, int sub, double omega0 = 1.0) {
    return {dim, 1, omega0, sub};
}
FockConfig two_cfg(int dim, int sub, double omega0 = 1.0) {
    return {dim, 2, omega0, sub};
}

const Complex kI(0.0, 1.0);

}  // namespace

TEST_CASE("FockConfig invariants are enforced") {
    CHECK_THROWS_AS(single_cfg(3, 1).validate(), ConfigError);
    CHECK_THROWS_AS(single_cfg(8, 5).validate(), ConfigError);  // sub > dim/2
    CHECK_THROWS_AS(single_cfg(8, 0).validate(), ConfigError);
    CHECK_THROWS_AS((FockConfig{8, 3, 1.0, 4}.validate()), ConfigError);
    CHECK_THROWS_AS((FockConfig{8, 1, -1.0, 4}.validate()), ConfigError);
    CHECK_NOTHROW(single_cfg(8, 4).validate());
}

TEST_CASE("annihilation matrix elements") {
    const FockConfig cfg = single_cfg(4, 2);
    const OperatorMatrix a = build_annihilation(cfg, 1);
    CHECK(a.mat(0, 1).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a.mat(1, 2).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(a.mat(2, 3).real() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(a.mat(1, 0) == Complex(0.0));
    CHECK(a.mat(0, 2) == Complex(0.0));

    CHECK_THROWS_AS(build_annihilation(cfg, 2), ConfigError);
    CHECK_THROWS_AS(build_annihilation(cfg, 0), ConfigError);
}

TEST_CASE("ladder identity [a, a^dag] = I below the boundary") {
    const FockConfig cfg = single_cfg(16, 8);
    const OperatorMatrix a = build_annihilation(cfg, 1);
    const OperatorMatrix c = commutator(a, a.dagger()) - identity_op(cfg);
    CHECK(subspace_residual(c, cfg.per_mode_dim - 2) < 1e-14);
    // the defect is confined to the very top level
    CHECK(std::abs(c.mat(15, 15) + double(cfg.per_mode_dim)) < 1e-12);
}

TEST_CASE("two-mode tensor embedding") {
    const FockConfig cfg = two_cfg(4, 2);
    const OperatorMatrix a2 = build_annihilation(cfg, 2);
    const int d = cfg.per_mode_dim;
    // a2 |(0,1)> = |(0,0)>
    CHECK(a2.mat(0 * d + 0, 0 * d + 1).real() == doctest::Approx(1.0));
    // a1 acts on the mode-1-major index
    const OperatorMatrix a1 = build_annihilation(cfg, 1);
    CHECK(a1.mat(0 * d + 0, 1 * d + 0).real() == doctest::Approx(1.0));
    // operators on different modes commute exactly
    CHECK(commutator(a1, a2).mat.norm() == 0.0);
    CHECK(commutator(a1, a2.dagger()).mat.norm() == 0.0);
}

TEST_CASE("position/momentum matrix elements and Hermiticity") {
    SUBCASE("omega0 = 1") {
        const FockConfig cfg = single_cfg(8, 4);
        const OperatorMatrix x = build_position(cfg, 1);
        CHECK(x.mat(0, 1).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(hermiticity_defect(x.mat) < 1e-14);
        CHECK(hermiticity_defect(build_momentum(cfg, 1).mat) < 1e-14);
    }
    SUBCASE("omega0 = 2") {
        const FockConfig cfg = single_cfg(8, 4, 2.0);
        const OperatorMatrix x = build_position(cfg, 1);
        CHECK(x.mat(0, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("canonical commutator [x, p] = i I away from the boundary") {
    const FockConfig cfg = single_cfg(32, 16);
    const OperatorMatrix c = commutator(build_position(cfg, 1), build_momentum(cfg, 1));
    const OperatorMatrix dev = c - kI * identity_op(cfg);
    CHECK(subspace_residual(dev, cfg.subspace_dim) < 1e-12);
}

TEST_CASE("COM/relative coordinates") {
    const FockConfig cfg = two_cfg(16, 6);
    const ComRel cr = build_com_rel(cfg);
    CHECK(hermiticity_defect(cr.X.mat) < 1e-14);
    CHECK(hermiticity_defect(cr.P.mat) < 1e-14);
    CHECK(hermiticity_defect(cr.dx.mat) < 1e-14);
    CHECK(hermiticity_defect(cr.dp.mat) < 1e-14);

    const int k = cfg.subspace_dim;
    const OperatorMatrix id = identity_op(cfg);
    CHECK(subspace_residual(commutator(cr.X, cr.P) - (kI * 0.5) * id, k) < 1e-12);
    CHECK(subspace_residual(commutator(cr.dx, cr.dp) - (kI * 2.0) * id, k) < 1e-12);
    CHECK(subspace_residual(commutator(cr.X, cr.dp), k) < 1e-12);
    CHECK(subspace_residual(commutator(cr.X, cr.dx), k) < 1e-12);

    CHECK_THROWS_AS(build_com_rel(single_cfg(8, 4)), ConfigError);
}

TEST_CASE("commutator basics") {
    const FockConfig cfg = single_cfg(8, 4);
    const OperatorMatrix x = build_position(cfg, 1);
    CHECK(commutator(x, x).mat.norm() == 0.0);
    CHECK(commutator(identity_op(cfg), x).mat.norm() == 0.0);

    const FockConfig other = single_cfg(16, 4);
    CHECK_THROWS_AS(commutator(x, build_position(other, 1)), StructureError);
}

TEST_CASE("subspace_residual") {
    const FockConfig cfg = single_cfg(8, 4);
    const OperatorMatrix zero{Matrix::Zero(8, 8), cfg.structure()};
    CHECK(subspace_residual(zero, 4) == 0.0);
    CHECK(subspace_residual(identity_op(cfg), 4) == doctest::Approx(1.0));
    CHECK_THROWS_AS(subspace_residual(identity_op(cfg), 9), ConfigError);

    // projector semantics for two-mode structure: per-mode index cut
    const FockConfig c2 = two_cfg(4, 2);
    const OperatorMatrix n2 = build_number(c2, 2);
    const Matrix blk = project_low(n2, 2);
    CHECK(blk.rows() == 4);
    CHECK(blk(1, 1).real() == doctest::Approx(1.0));  // |(0,1)> has n2 = 1
}

TEST_CASE("state normalization and expectation") {
    const FockConfig cfg = single_cfg(8, 4);
    StateVector s{Vector::Zero(8), cfg.structure()};
    s.amps(0) = 2.0;
    s.normalize();
    CHECK(s.norm() == doctest::Approx(1.0));
    CHECK(expectation(s, build_number(cfg, 1)).real() == doctest::Approx(0.0));

    StateVector zero{Vector::Zero(8), cfg.structure()};
    CHECK_THROWS_AS(zero.normalize(), StructureError);
}
