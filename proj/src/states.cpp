#include "virasq/states.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace virasq {

namespace {

constexpr Complex kImag(0.0, 1.0);

double ipow(double t, int n) {
    double out = 1.0;
    for (int i = 0; i < n; ++i) out *= t;
    return out;
}

}  // namespace

StateVector vacuum(const FockConfig& cfg) {
    cfg.validate();
    Vector v = Vector::Zero(cfg.total_dim());
    v(0) = 1.0;
    return {std::move(v), cfg.structure()};
}

StateVector squeezed_state(const FockConfig& cfg, const GeneratorSpec& spec) {
    const OperatorMatrix L = build_generator(cfg, spec);
    StateVector out = apply_exponential(L, spec.theta, vacuum(cfg));
    if (std::abs(out.norm() - 1.0) > 1e-10)
        throw StructureError("squeezed_state: normalization residual above tolerance");
    return out;
}

double number_expectation(const StateVector& state, const FockConfig& cfg, int mode) {
    return expectation(state, build_number(cfg, mode)).real();
}

double number_formula_rhs(const FockConfig& cfg, int n, double theta) {
    if (cfg.mode_count != 1)
        throw ConfigError("number_formula_rhs: single-mode configurations only");
    if (n == 0) {
        const double s = std::sinh(theta);
        return s * s;
    }
    const OperatorMatrix x = build_position(cfg, 1);
    const double c = double(n) * theta;  // single-mode branch, contraction sign
    const OperatorMatrix s_op = fn_of_hermitian(
        x,
        [=](double t) {
            return std::sinh((-1.0 / double(n) - 0.5) * std::log(1.0 + c * ipow(t, n)));
        },
        [=](double t) { return 1.0 + c * ipow(t, n) > 0.0; },
        "sinh(log(1+n*theta*x^n)^(-1/n-1/2))");
    const OperatorMatrix a = build_annihilation(cfg, 1);
    const OperatorMatrix op = s_op * s_op * a * a.dagger();
    return expectation(vacuum(cfg), op).real();
}

MeanFieldParams mean_field_params(const FockConfig& cfg, int n, double theta, Branch branch) {
    if (n < 0) throw ConfigError("mean_field_params: n must be >= 0");
    OperatorMatrix q{Matrix(), cfg.structure()};
    int flow_sign = kFlowSignSingle;
    switch (branch) {
        case Branch::com: {
            q = build_com_rel(cfg).X;
            flow_sign = kFlowSignCom;
            break;
        }
        case Branch::relative: {
            q = build_com_rel(cfg).dx;
            flow_sign = kFlowSignRelative;
            break;
        }
        case Branch::single: {
            q = build_position(cfg, 1);
            flow_sign = kFlowSignSingle;
            break;
        }
    }
    Matrix qn = Matrix::Identity(q.dim(), q.dim());
    for (int i = 0; i < n; ++i) qn = qn * q.mat;
    const StateVector vac = vacuum(cfg);
    const double moment = expectation(vac, {qn, q.structure}).real();
    return {k_scalar(moment, n, theta, flow_sign), omega_scalar(moment, n, theta, flow_sign),
            branch, moment};
}

StateVector mean_field_vacuum(const FockConfig& cfg, int n, double theta) {
    if (cfg.mode_count != 2)
        throw ConfigError("mean_field_vacuum requires a two-mode configuration");
    const MeanFieldParams com = mean_field_params(cfg, n, theta, Branch::com);
    const MeanFieldParams rel = mean_field_params(cfg, n, theta, Branch::relative);
    const double c_plus = -0.5 * com.K * std::tanh(com.Omega);
    const double c_minus = -0.5 * rel.K * std::tanh(rel.Omega);
    // exp(c a^dag^2)|0> is normalizable iff |2c| < 1.
    if (std::abs(2.0 * c_plus) >= 1.0 || std::abs(2.0 * c_minus) >= 1.0)
        throw DomainError("mean_field_vacuum: ansatz coefficient outside normalizable range",
                          std::max(std::abs(2.0 * c_plus), std::abs(2.0 * c_minus)));

    const OperatorMatrix a1 = build_annihilation(cfg, 1);
    const OperatorMatrix a2 = build_annihilation(cfg, 2);
    const Matrix ap_dag = (a1.mat.adjoint() + a2.mat.adjoint()) / std::sqrt(2.0);
    const Matrix am_dag = (a1.mat.adjoint() - a2.mat.adjoint()) / std::sqrt(2.0);
    const Matrix T = c_plus * ap_dag * ap_dag + c_minus * am_dag * am_dag;

    // T is strictly number-raising: the series on the vacuum terminates.
    Vector v = vacuum(cfg).amps;
    Vector term = v;
    for (int j = 1; j <= cfg.per_mode_dim + 2; ++j) {
        term = (T * term) / double(j);
        v += term;
        if (term.norm() <= 1e-18 * v.norm()) break;
    }
    StateVector out{std::move(v), cfg.structure()};
    out.normalize();
    return out;
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw StructureError("fidelity: dimension mismatch");
    return std::abs(a.amps.dot(b.amps));
}

DensityMatrix density_matrix(const StateVector& state) {
    if (std::abs(state.norm() - 1.0) > state.norm_tolerance)
        throw StructureError("density_matrix: state is not normalized");
    return {state.amps * state.amps.adjoint(), state.structure};
}

namespace {

void require_two_mode(const ModeStructure& s, const char* who) {
    if (s.layout != ModeLayout::two_mode)
        throw StructureError(std::string(who) + ": two-mode structure required");
}

}  // namespace

DensityMatrix partial_trace_minus(const DensityMatrix& rho, const FockConfig& cfg) {
    require_two_mode(rho.structure, "partial_trace_minus");
    const int d = cfg.per_mode_dim;
    Matrix out = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j)
        for (int j2 = 0; j2 < d; ++j2)
            for (int k = 0; k < d; ++k) out(j, j2) += rho.mat(j * d + k, j2 * d + k);
    return {std::move(out), {ModeLayout::single_mode, d}};
}

DensityMatrix partial_trace_plus(const DensityMatrix& rho, const FockConfig& cfg) {
    require_two_mode(rho.structure, "partial_trace_plus");
    const int d = cfg.per_mode_dim;
    Matrix out = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k)
        for (int k2 = 0; k2 < d; ++k2)
            for (int j = 0; j < d; ++j) out(k, k2) += rho.mat(j * d + k, j * d + k2);
    return {std::move(out), {ModeLayout::single_mode, d}};
}

DensityMatrix reduced_plus(const StateVector& state, const FockConfig& cfg) {
    require_two_mode(state.structure, "reduced_plus");
    const int d = cfg.per_mode_dim;
    Matrix out = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j)
        for (int j2 = 0; j2 < d; ++j2)
            for (int k = 0; k < d; ++k)
                out(j, j2) += state.amps(j * d + k) * std::conj(state.amps(j2 * d + k));
    return {std::move(out), {ModeLayout::single_mode, d}};
}

OperatorMatrix pm_rotation(const FockConfig& cfg) {
    const OperatorMatrix a1 = build_annihilation(cfg, 1);
    const OperatorMatrix a2 = build_annihilation(cfg, 2);
    const Matrix gen = a1.mat.adjoint() * a2.mat - a1.mat * a2.mat.adjoint();
    return exponentiate({gen, cfg.structure()}, std::numbers::pi / 4.0);
}

GeometricFit fit_geometric(const DensityMatrix& rho_plus, int levels) {
    if (levels < 3) throw ConfigError("fit_geometric: at least 3 levels required");
    if (levels > rho_plus.dim()) throw ConfigError("fit_geometric: levels exceed dimension");

    Eigen::VectorXd logp(levels);
    for (int k = 0; k < levels; ++k) {
        const double p = rho_plus.mat(k, k).real();
        if (p <= 0.0)
            throw DomainError("fit_geometric: nonpositive diagonal entry at level " +
                                  std::to_string(k),
                              p);
        logp(k) = std::log(p);
    }

    // least squares for logp(k) = intercept + slope*k
    double sk = 0, sk2 = 0, sy = 0, sky = 0;
    for (int k = 0; k < levels; ++k) {
        sk += k;
        sk2 += double(k) * k;
        sy += logp(k);
        sky += k * logp(k);
    }
    const double nl = double(levels);
    const double slope = (nl * sky - sk * sy) / (nl * sk2 - sk * sk);
    const double intercept = (sy - slope * sk) / nl;

    double max_rel = 0.0;
    for (int k = 0; k < levels; ++k) {
        const double fit = std::exp(intercept + slope * k);
        max_rel = std::max(max_rel, std::abs(rho_plus.mat(k, k).real() - fit) / fit);
    }
    return {std::exp(slope), -slope, max_rel, levels};
}

double beta_prediction(const FockConfig& cfg, int n, double theta) {
    const MeanFieldParams com = mean_field_params(cfg, n, theta, Branch::com);
    const double t = std::tanh(com.Omega);
    return -std::log(com.K * com.K * t * t);
}

}  // namespace virasq
