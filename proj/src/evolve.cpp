#include "virasq/evolve.hpp"

#include <Eigen/SparseCore>
#include <cmath>
#include <limits>

namespace virasq {

namespace {

constexpr Complex kImag(0.0, 1.0);

double ipow(double t, int n) {
    double out = 1.0;
    for (int i = 0; i < n; ++i) out *= t;
    return out;
}

void require_anti_hermitian(const OperatorMatrix& L) {
    const double scale = std::max(1.0, L.mat.norm());
    if (anti_hermiticity_defect(L.mat) > 1e-10 * scale)
        throw StructureError("generator is not anti-Hermitian; refusing non-unitary evolution");
}

}  // namespace

OperatorMatrix exponentiate(const OperatorMatrix& L, double theta) {
    require_anti_hermitian(L);
    const Spectral h = Spectral::of_hermitian({kImag * L.mat, L.structure});
    const int n = int(h.values.size());
    Vector phase(n);
    for (int i = 0; i < n; ++i) phase(i) = std::exp(-kImag * theta * h.values(i));
    return {h.vectors * phase.asDiagonal() * h.vectors.adjoint(), L.structure};
}

StateVector apply_exponential(const OperatorMatrix& L, double theta, const StateVector& psi) {
    require_anti_hermitian(L);
    if (L.dim() != psi.dim())
        throw StructureError("apply_exponential: dimension mismatch");

    Eigen::SparseMatrix<Complex> A(L.dim(), L.dim());
    {
        std::vector<Eigen::Triplet<Complex>> trip;
        for (int j = 0; j < L.dim(); ++j)
            for (int i = 0; i < L.dim(); ++i)
                if (L.mat(i, j) != 0.0) trip.emplace_back(i, j, theta * L.mat(i, j));
        A.setFromTriplets(trip.begin(), trip.end());
    }

    double norm1 = 0.0;
    for (int j = 0; j < L.dim(); ++j) norm1 = std::max(norm1, A.col(j).cwiseAbs().sum());
    const int substeps = std::max(1, int(std::ceil(norm1 / 3.0)));
    const double h = 1.0 / double(substeps);

    Vector v = psi.amps;
    for (int s = 0; s < substeps; ++s) {
        Vector acc = v;
        Vector term = v;
        for (int j = 1; j <= 60; ++j) {
            term = (h / double(j)) * (A * term).eval();
            acc += term;
            if (term.norm() <= 1e-16 * acc.norm()) break;
        }
        v = acc;
    }
    StateVector out{std::move(v), psi.structure, psi.norm_tolerance};
    if (std::abs(out.norm() - 1.0) > 1e-8)
        throw StructureError("apply_exponential: norm drifted beyond tolerance");
    out.normalize();
    return out;
}

OperatorMatrix conjugate(const OperatorMatrix& U, const OperatorMatrix& A) {
    if (U.dim() != A.dim())
        throw StructureError("conjugate: dimension mismatch");
    return {U.mat * A.mat * U.mat.adjoint(), A.structure};
}

double unitarity_defect(const OperatorMatrix& U) {
    return (U.mat.adjoint() * U.mat - Matrix::Identity(U.dim(), U.dim())).norm();
}

DomainCheck domain_check(const Spectral& spec, int n, double theta, int sign, double margin) {
    if (n == 0 || n == -1) return {true, 0.0};
    for (int i = 0; i < spec.values.size(); ++i) {
        const double lambda = spec.values(i);
        if (1.0 + double(sign * n) * theta * (1.0 + margin) * ipow(lambda, n) <= 0.0)
            return {false, lambda};
    }
    return {true, 0.0};
}

bool domain_guard(const OperatorMatrix& A, int n, double theta, int sign, double margin) {
    return domain_check(Spectral::of_hermitian(A), n, theta, sign, margin).ok;
}

OperatorMatrix closed_form_position(const Spectral& q, int n, double theta, int flow_sign) {
    const double s = double(flow_sign);
    if (n == 0) {
        Matrix m = std::exp(-s * theta) * (q.vectors * q.values.asDiagonal() * q.vectors.adjoint());
        return {std::move(m), q.structure};
    }
    if (n == -1) {
        Matrix m = q.vectors * q.values.asDiagonal() * q.vectors.adjoint();
        m -= s * theta * Matrix::Identity(m.rows(), m.cols());
        return {std::move(m), q.structure};
    }
    const double c = s * double(n) * theta;
    return q.apply([=](double t) { return t * std::pow(1.0 + c * ipow(t, n), -1.0 / double(n)); },
                   [=](double t) { return 1.0 + c * ipow(t, n) > 0.0; },
                   "(1+n*theta*q^n)^(-1/n)*q");
}

OperatorMatrix closed_form_position(const OperatorMatrix& q, int n, double theta, int flow_sign) {
    return closed_form_position(Spectral::of_hermitian(q), n, theta, flow_sign);
}

OperatorMatrix closed_form_momentum(const Spectral& q, const OperatorMatrix& p, int n,
                                    double theta, int flow_sign) {
    const double s = double(flow_sign);
    if (n == 0) return {std::exp(s * theta) * p.mat, p.structure};
    if (n == -1) return p;
    const double c = s * double(n) * theta;
    const OperatorMatrix w =
        q.apply([=](double t) { return std::pow(1.0 + c * ipow(t, n), 1.0 / double(n) + 1.0); },
                [=](double t) { return 1.0 + c * ipow(t, n) > 0.0; },
                "(1+n*theta*q^n)^(1/n+1)");
    return {0.5 * (w.mat * p.mat + p.mat * w.mat), p.structure};
}

OperatorMatrix closed_form_momentum(const OperatorMatrix& q, const OperatorMatrix& p, int n,
                                    double theta, int flow_sign) {
    return closed_form_momentum(Spectral::of_hermitian(q), p, n, theta, flow_sign);
}

double k_scalar(double moment, int n, double theta, int flow_sign) {
    const double arg = 1.0 + double(flow_sign * n) * theta * moment;
    if (arg <= 0.0)
        throw DomainError("mean-field K undefined: 1 + n*theta*<x^n> = " + std::to_string(arg),
                          moment);
    return std::sqrt(arg);
}

double omega_scalar(double moment, int n, double theta, int flow_sign) {
    if (n == 0) return -double(flow_sign) * theta;
    return (-2.0 / double(n) - 1.0) * std::log(k_scalar(moment, n, theta, flow_sign));
}

KOmegaPair k_omega(const OperatorMatrix& q, int n, double theta, int flow_sign, Branch branch) {
    const Spectral s = Spectral::of_hermitian(q);
    if (n == 0) {
        OperatorMatrix K{Matrix::Identity(q.dim(), q.dim()), q.structure};
        OperatorMatrix Om{-double(flow_sign) * theta * Matrix::Identity(q.dim(), q.dim()),
                          q.structure};
        return {std::move(K), std::move(Om), branch};
    }
    const double c = double(flow_sign * n) * theta;
    auto defined = [=](double t) { return t != 0.0 || n > 0; };
    auto arg = [=](double t) { return 1.0 + c * ipow(t, n); };
    OperatorMatrix K = s.apply([=](double t) { return std::sqrt(arg(t)); },
                               [=](double t) { return defined(t) && arg(t) > 0.0; },
                               "K=(1+n*theta*q^n)^(1/2)");
    OperatorMatrix Om =
        s.apply([=](double t) { return (-2.0 / double(n) - 1.0) * 0.5 * std::log(arg(t)); },
                [=](double t) { return defined(t) && arg(t) > 0.0; },
                "Omega=(-2/n-1)*log K");
    return {std::move(K), std::move(Om), branch};
}

ModePair mode_reconstruction(const FockConfig& cfg, int n, double theta) {
    const ComRel cr = build_com_rel(cfg);
    const Spectral sX = Spectral::of_hermitian(cr.X);
    const Spectral sdx = Spectral::of_hermitian(cr.dx);

    const OperatorMatrix Xt = closed_form_position(sX, n, theta, kFlowSignCom);
    const OperatorMatrix Pt = closed_form_momentum(sX, cr.P, n, theta, kFlowSignCom);
    const OperatorMatrix dxt = closed_form_position(sdx, n, theta, kFlowSignRelative);
    const OperatorMatrix dpt = closed_form_momentum(sdx, cr.dp, n, theta, kFlowSignRelative);

    const Matrix x1 = Xt.mat + 0.5 * dxt.mat;
    const Matrix x2 = Xt.mat - 0.5 * dxt.mat;
    const Matrix p1 = Pt.mat + 0.5 * dpt.mat;
    const Matrix p2 = Pt.mat - 0.5 * dpt.mat;

    const double c = std::sqrt(cfg.omega0 / 2.0);
    ModePair out{{c * (x1 + kImag * p1 / cfg.omega0), cfg.structure()},
                 {c * (x2 + kImag * p2 / cfg.omega0), cfg.structure()}};
    return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TransformReport report_for(const GeneratorSpec& spec, const std::string& target, double residual,
                           int k, bool ok) {
    return {spec, target, ok ? residual : kNaN, k, ok};
}

}  // namespace

LawCheckResult check_single_mode_laws(const FockConfig& cfg, int n, double theta, int k) {
    const GeneratorSpec spec{n, theta, GeneratorVariant::single_mode};
    const OperatorMatrix x = build_position(cfg, 1);
    const OperatorMatrix p = build_momentum(cfg, 1);
    const Spectral sx = Spectral::of_hermitian(x);

    LawCheckResult out;
    if (!domain_check(sx, n, theta, kFlowSignSingle, 0.5).ok) {
        out.reports.push_back(report_for(spec, "x", 0.0, k, false));
        out.reports.push_back(report_for(spec, "p", 0.0, k, false));
        return out;
    }

    const OperatorMatrix U = exponentiate(build_L_single(cfg, n), theta);
    out.unitarity_defect = unitarity_defect(U);

    const OperatorMatrix x_cf = closed_form_position(sx, n, theta, kFlowSignSingle);
    const OperatorMatrix p_cf = closed_form_momentum(sx, p, n, theta, kFlowSignSingle);
    out.reports.push_back(
        report_for(spec, "x", subspace_residual(conjugate(U, x) - x_cf, k), k, true));
    out.reports.push_back(
        report_for(spec, "p", subspace_residual(conjugate(U, p) - p_cf, k), k, true));
    return out;
}

LawCheckResult check_two_mode_laws(const FockConfig& cfg, int n, double theta, int k) {
    const GeneratorSpec spec{n, theta, GeneratorVariant::virasoro_bogoliubov};
    const ComRel cr = build_com_rel(cfg);
    const Spectral sX = Spectral::of_hermitian(cr.X);
    const Spectral sdx = Spectral::of_hermitian(cr.dx);

    static const char* targets[] = {"X", "P", "dx", "dp", "a1", "a2"};
    LawCheckResult out;
    const bool ok = domain_check(sX, n, theta, kFlowSignCom, 0.5).ok &&
                    domain_check(sdx, n, theta, kFlowSignRelative, 0.5).ok;
    if (!ok) {
        for (const char* t : targets) out.reports.push_back(report_for(spec, t, 0.0, k, false));
        return out;
    }

    const OperatorMatrix U = exponentiate(build_L_two_mode(cfg, n), theta);
    out.unitarity_defect = unitarity_defect(U);

    const OperatorMatrix Xt = closed_form_position(sX, n, theta, kFlowSignCom);
    const OperatorMatrix Pt = closed_form_momentum(sX, cr.P, n, theta, kFlowSignCom);
    const OperatorMatrix dxt = closed_form_position(sdx, n, theta, kFlowSignRelative);
    const OperatorMatrix dpt = closed_form_momentum(sdx, cr.dp, n, theta, kFlowSignRelative);
    const ModePair modes = mode_reconstruction(cfg, n, theta);
    const OperatorMatrix a1 = build_annihilation(cfg, 1);
    const OperatorMatrix a2 = build_annihilation(cfg, 2);

    const OperatorMatrix closed[] = {Xt, Pt, dxt, dpt, modes.a1, modes.a2};
    const OperatorMatrix bare[] = {cr.X, cr.P, cr.dx, cr.dp, a1, a2};
    for (int i = 0; i < 6; ++i) {
        const double r = subspace_residual(conjugate(U, bare[i]) - closed[i], k);
        out.reports.push_back(report_for(spec, targets[i], r, k, true));
    }
    return out;
}

}  // namespace virasq
