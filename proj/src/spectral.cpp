#include "virasq/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace virasq {

Spectral Spectral::of_hermitian(const OperatorMatrix& A) {
    const double scale = std::max(1.0, A.mat.norm());
    if (hermiticity_defect(A.mat) > 1e-10 * scale)
        throw StructureError("Spectral::of_hermitian: matrix is not Hermitian");
    // Symmetrize away rounding noise before the solver.
    Matrix H = 0.5 * (A.mat + A.mat.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("Spectral::of_hermitian: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors(), A.structure};
}

OperatorMatrix Spectral::apply(const ScalarFn& f, const DomainPred& defined,
                               const std::string& fname) const {
    const int n = int(values.size());
    Eigen::VectorXd fv(n);
    for (int i = 0; i < n; ++i) {
        const double lambda = values(i);
        if (defined && !defined(lambda))
            throw DomainError(fname + " is undefined at eigenvalue " + std::to_string(lambda),
                              lambda);
        fv(i) = f(lambda);
        if (!std::isfinite(fv(i)))
            throw DomainError(fname + " is non-finite at eigenvalue " + std::to_string(lambda),
                              lambda);
    }
    return {vectors * fv.asDiagonal() * vectors.adjoint(), structure};
}

OperatorMatrix fn_of_hermitian(const OperatorMatrix& A, const ScalarFn& f,
                               const DomainPred& defined, const std::string& fname) {
    return Spectral::of_hermitian(A).apply(f, defined, fname);
}

}  // namespace virasq
