#include "virasq/fock.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace virasq {

void FockConfig::validate() const {
    if (per_mode_dim < 4)
        throw ConfigError("per_mode_dim must be >= 4, got " + std::to_string(per_mode_dim));
    if (mode_count != 1 && mode_count != 2)
        throw ConfigError("mode_count must be 1 or 2, got " + std::to_string(mode_count));
    if (!(omega0 > 0.0))
        throw ConfigError("omega0 must be positive, got " + std::to_string(omega0));
    if (subspace_dim < 1 || subspace_dim > per_mode_dim / 2)
        throw ConfigError("subspace_dim must satisfy 1 <= subspace_dim <= per_mode_dim/2, got " +
                          std::to_string(subspace_dim));
}

namespace {

void require_same(const OperatorMatrix& a, const OperatorMatrix& b, const char* op) {
    if (a.dim() != b.dim() || !(a.structure == b.structure))
        throw StructureError(std::string(op) + ": operator dimension/structure mismatch");
}

// Ladder matrix on a single d-level mode.
Matrix ladder(int d) {
    Matrix a = Matrix::Zero(d, d);
    for (int k = 0; k + 1 < d; ++k) a(k, k + 1) = std::sqrt(double(k + 1));
    return a;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    const int ra = int(a.rows()), ca = int(a.cols());
    const int rb = int(b.rows()), cb = int(b.cols());
    Matrix out(ra * rb, ca * cb);
    for (int i = 0; i < ra; ++i)
        for (int j = 0; j < ca; ++j)
            out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    return out;
}

void check_mode(const FockConfig& cfg, int mode) {
    if (mode < 1 || mode > cfg.mode_count)
        throw ConfigError("mode index " + std::to_string(mode) + " invalid for mode_count " +
                          std::to_string(cfg.mode_count));
}

}  // namespace

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same(a, b, "operator+");
    return {a.mat + b.mat, a.structure};
}
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same(a, b, "operator-");
    return {a.mat - b.mat, a.structure};
}
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same(a, b, "operator*");
    return {a.mat * b.mat, a.structure};
}
OperatorMatrix operator*(Complex s, const OperatorMatrix& a) { return {s * a.mat, a.structure}; }
OperatorMatrix operator-(const OperatorMatrix& a) { return {-a.mat, a.structure}; }

void StateVector::normalize() {
    const double n = amps.norm();
    if (n <= 0.0) throw StructureError("cannot normalize a zero state");
    amps /= n;
}

Complex expectation(const StateVector& psi, const OperatorMatrix& A) {
    if (psi.dim() != A.dim()) throw StructureError("expectation: dimension mismatch");
    return psi.amps.dot(A.mat * psi.amps);
}

OperatorMatrix identity_op(const FockConfig& cfg) {
    return {Matrix::Identity(cfg.total_dim(), cfg.total_dim()), cfg.structure()};
}

OperatorMatrix build_annihilation(const FockConfig& cfg, int mode) {
    cfg.validate();
    check_mode(cfg, mode);
    const int d = cfg.per_mode_dim;
    if (cfg.mode_count == 1) return {ladder(d), cfg.structure()};
    const Matrix id = Matrix::Identity(d, d);
    Matrix m = (mode == 1) ? kron(ladder(d), id) : kron(id, ladder(d));
    return {std::move(m), cfg.structure()};
}

OperatorMatrix build_creation(const FockConfig& cfg, int mode) {
    return build_annihilation(cfg, mode).dagger();
}

OperatorMatrix build_number(const FockConfig& cfg, int mode) {
    if (mode == 0) {
        OperatorMatrix n = build_number(cfg, 1);
        if (cfg.mode_count == 2) n = n + build_number(cfg, 2);
        return n;
    }
    const OperatorMatrix a = build_annihilation(cfg, mode);
    return a.dagger() * a;
}

OperatorMatrix build_position(const FockConfig& cfg, int mode) {
    const OperatorMatrix a = build_annihilation(cfg, mode);
    const double c = std::sqrt(1.0 / (2.0 * cfg.omega0));
    return {c * (a.mat + a.mat.adjoint()), a.structure};
}

OperatorMatrix build_momentum(const FockConfig& cfg, int mode) {
    const OperatorMatrix a = build_annihilation(cfg, mode);
    const Complex ic(0.0, std::sqrt(cfg.omega0 / 2.0));
    return {ic * (a.mat.adjoint() - a.mat), a.structure};
}

ComRel build_com_rel(const FockConfig& cfg) {
    if (cfg.mode_count != 2)
        throw ConfigError("build_com_rel requires a two-mode configuration");
    const OperatorMatrix x1 = build_position(cfg, 1), x2 = build_position(cfg, 2);
    const OperatorMatrix p1 = build_momentum(cfg, 1), p2 = build_momentum(cfg, 2);
    return {Complex(0.5) * (x1 + x2), Complex(0.5) * (p1 + p2), x1 - x2, p1 - p2};
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same(a, b, "commutator");
    return {a.mat * b.mat - b.mat * a.mat, a.structure};
}

OperatorMatrix anticommutator(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same(a, b, "anticommutator");
    return {a.mat * b.mat + b.mat * a.mat, a.structure};
}

Matrix project_low(const OperatorMatrix& A, int k) {
    if (A.structure.layout == ModeLayout::single_mode) {
        if (k < 0 || k > A.dim())
            throw ConfigError("project_low: k out of range");
        return A.mat.topLeftCorner(k, k);
    }
    const int d = A.structure.per_mode_dim;
    if (k < 0 || k > d) throw ConfigError("project_low: k out of range");
    Matrix out(k * k, k * k);
    for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l)
            for (int j2 = 0; j2 < k; ++j2)
                for (int l2 = 0; l2 < k; ++l2)
                    out(j * k + l, j2 * k + l2) = A.mat(j * d + l, j2 * d + l2);
    return out;
}

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double subspace_residual(const OperatorMatrix& A, int k) {
    return spectral_norm(project_low(A, k));
}

double hermiticity_defect(const Matrix& m) { return (m - m.adjoint()).norm(); }
double anti_hermiticity_defect(const Matrix& m) { return (m + m.adjoint()).norm(); }

}  // namespace virasq
