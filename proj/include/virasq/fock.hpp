#pragma once

#include <Eigen/Dense>
#include <complex>

#include "virasq/errors.hpp"

namespace virasq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class ModeLayout { single_mode, two_mode };

// Mode-structure tag carried by every operator and state.  For two_mode the
// index (j, k) maps to row j*per_mode_dim + k (mode-1-major).
struct ModeStructure {
    ModeLayout layout = ModeLayout::single_mode;
    int per_mode_dim = 0;

    bool operator==(const ModeStructure&) const = default;
};

// Truncation and physical parameters defining the simulated Hilbert space.
struct FockConfig {
    int per_mode_dim = 0;   // levels 0 .. per_mode_dim-1 per mode
    int mode_count = 1;     // 1 or 2
    double omega0 = 1.0;    // oscillator frequency
    int subspace_dim = 0;   // low-lying projector size for comparisons

    // Throws ConfigError on violation of any invariant.
    void validate() const;

    int total_dim() const {
        return mode_count == 2 ? per_mode_dim * per_mode_dim : per_mode_dim;
    }
    ModeStructure structure() const {
        return {mode_count == 2 ? ModeLayout::two_mode : ModeLayout::single_mode,
                per_mode_dim};
    }
};

// Dense complex square matrix with mode-structure metadata.
struct OperatorMatrix {
    Matrix mat;
    ModeStructure structure;

    int dim() const { return static_cast<int>(mat.rows()); }
    OperatorMatrix dagger() const { return {mat.adjoint(), structure}; }
};

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(Complex s, const OperatorMatrix& a);
OperatorMatrix operator-(const OperatorMatrix& a);

// Normalized pure state on the truncated space.
struct StateVector {
    Vector amps;
    ModeStructure structure;
    double norm_tolerance = 1e-10;

    int dim() const { return static_cast<int>(amps.size()); }
    double norm() const { return amps.norm(); }
    void normalize();
};

Complex expectation(const StateVector& psi, const OperatorMatrix& A);

// ---- elementary operators ---------------------------------------------------

OperatorMatrix identity_op(const FockConfig& cfg);

// Ladder matrix a[k, k+1] = sqrt(k+1), embedded by tensor product with the
// identity on the other mode when mode_count == 2.  `mode` is 1-based.
OperatorMatrix build_annihilation(const FockConfig& cfg, int mode);
OperatorMatrix build_creation(const FockConfig& cfg, int mode);
OperatorMatrix build_number(const FockConfig& cfg, int mode);  // mode 0 = total

// x = sqrt(1/(2 w0)) (a + a^dag),  p = i sqrt(w0/2) (a^dag - a).
// Both Hermitian; [x, p] = i on the levels below the truncation boundary.
OperatorMatrix build_position(const FockConfig& cfg, int mode);
OperatorMatrix build_momentum(const FockConfig& cfg, int mode);

// Center-of-mass and relative coordinates (two-mode only):
//   X = (x1+x2)/2, P = (p1+p2)/2, dx = x1-x2, dp = p1-p2.
struct ComRel {
    OperatorMatrix X, P, dx, dp;
};
ComRel build_com_rel(const FockConfig& cfg);

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix anticommutator(const OperatorMatrix& a, const OperatorMatrix& b);

// ---- truncation-aware metrics ----------------------------------------------

// Extract the block of A with all mode indices < k (per mode for two_mode).
Matrix project_low(const OperatorMatrix& A, int k);

// Spectral norm of P_k A P_k.
double subspace_residual(const OperatorMatrix& A, int k);

double spectral_norm(const Matrix& m);

// || M - M^dag ||_F  and  || M + M^dag ||_F  (anti-Hermiticity defect).
double hermiticity_defect(const Matrix& m);
double anti_hermiticity_defect(const Matrix& m);

}  // namespace virasq
