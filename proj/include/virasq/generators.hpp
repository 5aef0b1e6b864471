#pragma once

#include <vector>

#include "virasq/fock.hpp"

namespace virasq {

enum class GeneratorVariant { single_mode, bogoliubov, virasoro_bogoliubov };

struct GeneratorSpec {
    int n = 0;
    double theta = 0.0;
    GeneratorVariant variant = GeneratorVariant::single_mode;
};

// z(theta) solving dz/dtheta = z^(n+1):
//   n = 0:  e^theta z
//   n != 0: z (1 - n theta z^n)^(-1/n)   (n = -1 reduces to z + theta)
// Throws SingularFlowError at the pole 1 - n theta z^n = 0.
Complex classical_flow(int n, double theta, Complex z);

// L_n = -(i/2) (x^(n+1) p + p x^(n+1));  n >= -1; anti-Hermitian.
OperatorMatrix build_L_single(const FockConfig& cfg, int n);

// G = a1 a2 - a1^dag a2^dag (two-mode squeezing generator).
OperatorMatrix build_bogoliubov_generator(const FockConfig& cfg);

// Low-subspace residual of G against its position/momentum form
// i (x1 p2 + x2 p1); diagnostic for the convention checks.
double bogoliubov_xp_residual(const FockConfig& cfg, int k);

// L_n^VB = i (X^(n+1) P + P X^(n+1)) - (i/4) (dx^(n+1) dp + dp dx^(n+1));
// anti-Hermitian; reduces to the Bogoliubov generator at n = 0.
OperatorMatrix build_L_two_mode(const FockConfig& cfg, int n);

// Dispatch on the variant of `spec` (theta is not used here).
OperatorMatrix build_generator(const FockConfig& cfg, const GeneratorSpec& spec);

struct ClosureEntry {
    int n = 0, m = 0;
    double residual = 0.0;
    bool sl2 = false;  // member of the {L_-1, L_0, L_1} triple
};

struct ClosureReport {
    std::vector<ClosureEntry> entries;
    int subspace_dim = 0;

    double max_residual() const;
};

// Residual of [L_n, L_m] - (n-m) L_{n+m} on the lowest-k projector for every
// pair in [n_min, n_max] with n + m >= -1.  Single-mode configurations only.
ClosureReport witt_closure_check(const FockConfig& cfg, int n_min, int n_max, int k);

}  // namespace virasq
