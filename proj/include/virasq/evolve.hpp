#pragma once

#include <string>
#include <vector>

#include "virasq/generators.hpp"
#include "virasq/spectral.hpp"

namespace virasq {

// U = e^(theta L) for anti-Hermitian L, through the eigenbasis of iL.
// Rejects inputs with ||L + L^dag|| above tolerance.
OperatorMatrix exponentiate(const OperatorMatrix& L, double theta);

// e^(theta L) |psi> without forming the dense exponential (substepped Taylor
// on the nonzero pattern of L).  Same contract as exponentiate.
StateVector apply_exponential(const OperatorMatrix& L, double theta, const StateVector& psi);

// U A U^dag.
OperatorMatrix conjugate(const OperatorMatrix& U, const OperatorMatrix& A);

double unitarity_defect(const OperatorMatrix& U);

// Flow orientation per coordinate family: single-mode x and relative dx
// contract, the center of mass dilates.
inline constexpr int kFlowSignSingle = +1;
inline constexpr int kFlowSignCom = -1;
inline constexpr int kFlowSignRelative = +1;

struct DomainCheck {
    bool ok = true;
    double offending_eigenvalue = 0.0;
};

// True iff 1 + sign*n*theta*(1+margin)*lambda^n > 0 on the whole retained
// spectrum of Hermitian A.  n in {-1, 0} is unconditionally valid (affine and
// exponential flows have no spectral pole).
DomainCheck domain_check(const Spectral& spec, int n, double theta, int sign,
                         double margin = 0.0);
bool domain_guard(const OperatorMatrix& A, int n, double theta, int sign,
                  double margin = 0.0);

// (1 + s n theta q^n)^(-1/n) q,  n = 0 -> e^(-s theta) q,  n = -1 -> q - s theta.
OperatorMatrix closed_form_position(const Spectral& q, int n, double theta, int flow_sign);
OperatorMatrix closed_form_position(const OperatorMatrix& q, int n, double theta, int flow_sign);

// (1/2) { (1 + s n theta q^n)^(1/n + 1), p };  n = 0 -> e^(+s theta) p,
// n = -1 -> p.  The operator inside the power is always the position-type
// coordinate conjugate to p.
OperatorMatrix closed_form_momentum(const Spectral& q, const OperatorMatrix& p, int n,
                                    double theta, int flow_sign);
OperatorMatrix closed_form_momentum(const OperatorMatrix& q, const OperatorMatrix& p, int n,
                                    double theta, int flow_sign);

enum class Branch { com, relative, single };

struct KOmegaPair {
    OperatorMatrix K_op;
    OperatorMatrix Omega_op;
    Branch branch = Branch::single;
};

// K = (1 + s n theta q^n)^(1/2);  Omega = (-2/n - 1) log K  (n = 0 uses the
// analytic limit Omega = -s theta I).
KOmegaPair k_omega(const OperatorMatrix& q, int n, double theta, int flow_sign, Branch branch);

// Scalar versions, shared with the mean-field layer.
double k_scalar(double moment, int n, double theta, int flow_sign);
double omega_scalar(double moment, int n, double theta, int flow_sign);

struct ModePair {
    OperatorMatrix a1, a2;
};

// Transformed annihilation operators assembled from the closed-form COM and
// relative coordinate transforms.
ModePair mode_reconstruction(const FockConfig& cfg, int n, double theta);

struct TransformReport {
    GeneratorSpec spec;
    std::string target;
    double residual = 0.0;  // NaN when domain_ok is false
    int subspace_dim = 0;
    bool domain_ok = true;
};

struct LawCheckResult {
    std::vector<TransformReport> reports;
    double unitarity_defect = 0.0;
};

// Conjugation vs closed form for x and p (single mode, generator L_n).
LawCheckResult check_single_mode_laws(const FockConfig& cfg, int n, double theta, int k);

// Conjugation vs closed form for X, P, dx, dp, a1, a2 (two modes, L_n^VB).
LawCheckResult check_two_mode_laws(const FockConfig& cfg, int n, double theta, int k);

}  // namespace virasq
