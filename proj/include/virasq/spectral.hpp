#pragma once

#include <functional>
#include <string>

#include "virasq/fock.hpp"

namespace virasq {

using ScalarFn = std::function<double(double)>;
// Returns true where the scalar function is defined.  Null predicate = total.
using DomainPred = std::function<bool(double)>;

// Eigendecomposition of a Hermitian operator, reusable across several
// functional-calculus evaluations of the same operator.
struct Spectral {
    Eigen::VectorXd values;
    Matrix vectors;
    ModeStructure structure;

    // Throws StructureError if A is not Hermitian (tolerance scaled by norm).
    static Spectral of_hermitian(const OperatorMatrix& A);

    // f(A) through the eigenbasis; DomainError names the offending eigenvalue.
    OperatorMatrix apply(const ScalarFn& f, const DomainPred& defined = nullptr,
                         const std::string& fname = "f") const;

    double min_eigenvalue() const { return values.minCoeff(); }
    double max_eigenvalue() const { return values.maxCoeff(); }
};

// Eigendecomposition-based f(A); exact on polynomials to rounding.
OperatorMatrix fn_of_hermitian(const OperatorMatrix& A, const ScalarFn& f,
                               const DomainPred& defined = nullptr,
                               const std::string& fname = "f");

}  // namespace virasq
