#pragma once

#include "virasq/evolve.hpp"

namespace virasq {

StateVector vacuum(const FockConfig& cfg);

// |theta>_n = e^(theta L) |0> for the generator selected by `spec`.
StateVector squeezed_state(const FockConfig& cfg, const GeneratorSpec& spec);

// <state| N |state> for one mode, or the total number when mode == 0.
double number_expectation(const StateVector& state, const FockConfig& cfg, int mode = 0);

// Literal evaluation of the particle-number formula
//   <0| (sinh log(1+n theta x^n)^(-1/n-1/2))^2 a a^dag |0>
// through functional calculus; reduces to sinh^2(theta) at n = 0.  Diagnostic
// only for n != 0 (no exactness claim).
double number_formula_rhs(const FockConfig& cfg, int n, double theta);

struct MeanFieldParams {
    double K = 1.0;
    double Omega = 0.0;
    Branch branch = Branch::com;
    double moment = 0.0;  // vacuum <q^n> of the branch coordinate
};

MeanFieldParams mean_field_params(const FockConfig& cfg, int n, double theta, Branch branch);

// Gaussian ansatz exp(c+ ap^dag^2 + c- am^dag^2)|0> with a± = (a1±a2)/sqrt(2)
// and c± = -(1/2) K tanh(Omega) per branch; normalized.
StateVector mean_field_vacuum(const FockConfig& cfg, int n, double theta);

double fidelity(const StateVector& a, const StateVector& b);

struct DensityMatrix {
    Matrix mat;
    ModeStructure structure;

    int dim() const { return static_cast<int>(mat.rows()); }
    double trace() const { return mat.trace().real(); }
    double purity() const { return (mat * mat).trace().real(); }
};

DensityMatrix density_matrix(const StateVector& state);

// Reduction onto the first ("+") factor: rho_plus[j,j'] = sum_k rho[(j,k),(j',k)]
// in the mode-1-major layout.  See the README note on the +/- identification.
DensityMatrix partial_trace_minus(const DensityMatrix& rho, const FockConfig& cfg);
// Reduction onto the second factor (used for the Schmidt-symmetry checks).
DensityMatrix partial_trace_plus(const DensityMatrix& rho, const FockConfig& cfg);

// Pure-state fast path equivalent to partial_trace_minus(density_matrix(s)).
DensityMatrix reduced_plus(const StateVector& state, const FockConfig& cfg);

// 50/50 beam-splitter unitary mixing the two modes (a1 +/- a2)/sqrt(2);
// diagonalizes the n = 0 squeezed vacuum into a product of single-mode
// squeezed states.
OperatorMatrix pm_rotation(const FockConfig& cfg);

struct GeometricFit {
    double ratio = 0.0;     // in [0, 1)
    double beta = 0.0;      // -log ratio
    double residual = 0.0;  // max relative deviation from the fitted law
    int levels_used = 0;
};

// Least-squares fit of log p_k vs k over the lowest `levels` diagonal entries.
GeometricFit fit_geometric(const DensityMatrix& rho_plus, int levels);

// Mean-field prediction e^(-beta) = K^2 tanh^2(Omega) on the COM branch,
// returned as beta (infinite when Omega = 0).
double beta_prediction(const FockConfig& cfg, int n, double theta);

}  // namespace virasq
