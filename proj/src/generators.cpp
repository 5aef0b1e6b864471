#include "virasq/generators.hpp"

#include <cmath>
#include <string>

namespace virasq {

namespace {

constexpr Complex kImag(0.0, 1.0);

// q^(n+1) by repeated multiplication; n >= -1 so the power is >= 0.
Matrix int_power(const Matrix& q, int e) {
    Matrix out = Matrix::Identity(q.rows(), q.cols());
    for (int i = 0; i < e; ++i) out = out * q;
    return out;
}

void require_index(int n) {
    if (n < -1)
        throw ConfigError("Virasoro index n must be >= -1, got " + std::to_string(n));
}

}  // namespace

Complex classical_flow(int n, double theta, Complex z) {
    if (n == 0) return std::exp(theta) * z;
    if (n == -1) return z + theta;  // pole-free affine flow
    const Complex w = 1.0 - double(n) * theta * std::pow(z, double(n));
    if (std::abs(w) < 1e-12)
        throw SingularFlowError("classical_flow: pole at n=" + std::to_string(n) +
                                ", theta=" + std::to_string(theta));
    return z * std::pow(w, -1.0 / double(n));
}

OperatorMatrix build_L_single(const FockConfig& cfg, int n) {
    require_index(n);
    if (cfg.mode_count != 1)
        throw ConfigError("build_L_single requires a single-mode configuration");
    const OperatorMatrix x = build_position(cfg, 1);
    const OperatorMatrix p = build_momentum(cfg, 1);
    const Matrix xn1 = int_power(x.mat, n + 1);
    return {-0.5 * kImag * (xn1 * p.mat + p.mat * xn1), cfg.structure()};
}

OperatorMatrix build_bogoliubov_generator(const FockConfig& cfg) {
    if (cfg.mode_count != 2)
        throw ConfigError("build_bogoliubov_generator requires a two-mode configuration");
    // a1 a2 = (a (x) I)(I (x) a) = a (x) a; assemble the Kronecker product
    // directly instead of multiplying two dim^2 dense matrices.
    const FockConfig one{cfg.per_mode_dim, 1, cfg.omega0, cfg.subspace_dim};
    const Matrix a = build_annihilation(one, 1).mat;
    const int d = cfg.per_mode_dim;
    Matrix g = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (a(i, j) != Complex(0.0)) {
                g.block(i * d, j * d, d, d) += a(i, j) * a;
                g.block(j * d, i * d, d, d) -= std::conj(a(i, j)) * a.adjoint();
            }
    return {std::move(g), cfg.structure()};
}

double bogoliubov_xp_residual(const FockConfig& cfg, int k) {
    const OperatorMatrix G = build_bogoliubov_generator(cfg);
    const OperatorMatrix x1 = build_position(cfg, 1), x2 = build_position(cfg, 2);
    const OperatorMatrix p1 = build_momentum(cfg, 1), p2 = build_momentum(cfg, 2);
    const Matrix xp = kImag * (x1.mat * p2.mat + x2.mat * p1.mat);
    return subspace_residual({G.mat - xp, cfg.structure()}, k);
}

OperatorMatrix build_L_two_mode(const FockConfig& cfg, int n) {
    require_index(n);
    const ComRel cr = build_com_rel(cfg);
    const Matrix Xn1 = int_power(cr.X.mat, n + 1);
    const Matrix dxn1 = int_power(cr.dx.mat, n + 1);
    Matrix L = kImag * (Xn1 * cr.P.mat + cr.P.mat * Xn1) -
               0.25 * kImag * (dxn1 * cr.dp.mat + cr.dp.mat * dxn1);
    return {std::move(L), cfg.structure()};
}

OperatorMatrix build_generator(const FockConfig& cfg, const GeneratorSpec& spec) {
    switch (spec.variant) {
        case GeneratorVariant::single_mode: return build_L_single(cfg, spec.n);
        case GeneratorVariant::bogoliubov: return build_bogoliubov_generator(cfg);
        case GeneratorVariant::virasoro_bogoliubov: return build_L_two_mode(cfg, spec.n);
    }
    throw ConfigError("build_generator: unknown variant");
}

double ClosureReport::max_residual() const {
    double r = 0.0;
    for (const auto& e : entries) r = std::max(r, e.residual);
    return r;
}

ClosureReport witt_closure_check(const FockConfig& cfg, int n_min, int n_max, int k) {
    if (cfg.mode_count != 1)
        throw ConfigError("witt_closure_check: single-mode configurations only");
    if (n_min < -1) throw ConfigError("witt_closure_check: n_min must be >= -1");
    if (k > cfg.subspace_dim)
        throw ConfigError("witt_closure_check: k exceeds subspace_dim");

    std::vector<OperatorMatrix> L;  // cache L_{-1} .. L_{n_max+n_max}
    const int top = 2 * n_max;
    for (int n = -1; n <= std::max(top, n_max); ++n) L.push_back(build_L_single(cfg, n));
    auto gen = [&](int n) -> const OperatorMatrix& { return L[size_t(n + 1)]; };

    ClosureReport report;
    report.subspace_dim = k;
    for (int n = n_min; n <= n_max; ++n) {
        for (int m = n_min; m <= n_max; ++m) {
            if (n + m < -1) continue;
            const OperatorMatrix lhs = commutator(gen(n), gen(m));
            const OperatorMatrix rhs = Complex(double(n - m)) * gen(n + m);
            const bool sl2 = (n >= -1 && n <= 1 && m >= -1 && m <= 1);
            report.entries.push_back({n, m, subspace_residual(lhs - rhs, k), sl2});
        }
    }
    return report;
}

}  // namespace virasq
