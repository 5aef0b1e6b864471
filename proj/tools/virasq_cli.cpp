// virasq command-line front end.
//
// Exit codes: 0 success, 1 tolerance failure, 2 usage/config error,
// 3 domain-guard failure, 4 I/O failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "virasq/opexpr.hpp"
#include "virasq/states.hpp"

using namespace virasq;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitIo = 4;

// All floating-point output with 9 significant digits.
std::string fnum(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string fnum(Complex v) {
    if (v.imag() == 0.0) return fnum(v.real());
    if (v.real() == 0.0) return fnum(v.imag()) + "i";
    return fnum(v.real()) + (v.imag() < 0 ? "" : "+") + fnum(v.imag()) + "i";
}

bool parse_range(const std::string& text, int& lo, int& hi) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) return false;
    try {
        lo = std::stoi(text.substr(0, colon));
        hi = std::stoi(text.substr(colon + 1));
    } catch (...) {
        return false;
    }
    return lo <= hi;
}

// ---------------------------------------------------------------------------

int cmd_verify(int dim, int sub, const std::string& n_range, const std::string& mode, int n,
               double theta) {
    int lo = 0, hi = 0;
    if (!parse_range(n_range, lo, hi)) {
        std::fprintf(stderr, "invalid --n-range '%s' (expected lo:hi)\n", n_range.c_str());
        return kExitUsage;
    }
    bool all_ok = true;
    try {
        if (mode == "one") {
            const FockConfig cfg{dim, 1, 1.0, sub};
            const ClosureReport rep = witt_closure_check(cfg, lo, hi, sub);
            std::printf("closure residuals (dim=%d, k=%d, tolerance 1e-10):\n", dim, sub);
            std::printf("%4s %4s %14s %s\n", "n", "m", "residual", "sl2");
            for (const auto& e : rep.entries) {
                const bool ok = e.residual < 1e-10;
                all_ok = all_ok && ok;
                std::printf("%4d %4d %14s %s%s\n", e.n, e.m, fnum(e.residual).c_str(),
                            e.sl2 ? "*" : " ", ok ? "" : "  FAIL");
            }
            if (theta != 0.0) {
                std::printf("\ntransformation laws (theta=%s, tolerance 1e-6):\n",
                            fnum(theta).c_str());
                for (int m = std::max(lo, -1); m <= hi; ++m) {
                    const LawCheckResult res = check_single_mode_laws(cfg, m, theta, sub);
                    for (const auto& r : res.reports) {
                        const bool ok = r.domain_ok && r.residual < 1e-6;
                        all_ok = all_ok && ok;
                        std::printf("  n=%-3d %-3s %14s %s\n", m, r.target.c_str(),
                                    r.domain_ok ? fnum(r.residual).c_str() : "out-of-domain",
                                    ok ? "" : "FAIL");
                    }
                }
            }
        } else if (mode == "two") {
            const FockConfig cfg{dim, 2, 1.0, sub};
            const double tol = (n == 0) ? 1e-8 : 1e-5;
            const LawCheckResult res = check_two_mode_laws(cfg, n, theta, sub);
            std::printf("two-mode laws (n=%d, theta=%s, dim=%d, tolerance %s):\n", n,
                        fnum(theta).c_str(), dim, fnum(tol).c_str());
            for (const auto& r : res.reports) {
                const bool ok = r.domain_ok && r.residual < tol;
                all_ok = all_ok && ok;
                std::printf("  %-3s %14s %s\n", r.target.c_str(),
                            r.domain_ok ? fnum(r.residual).c_str() : "out-of-domain",
                            ok ? "" : "FAIL");
            }
            std::printf("unitarity defect: %s\n", fnum(res.unitarity_defect).c_str());
        } else {
            std::fprintf(stderr, "invalid --mode '%s' (one|two)\n", mode.c_str());
            return kExitUsage;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    }
    return all_ok ? kExitOk : kExitTolerance;
}

// ---------------------------------------------------------------------------

int cmd_vb(int n, double theta, int dim, int sub, int levels, const std::string& out_path) {
    try {
        const FockConfig cfg{dim, 2, 1.0, sub};
        cfg.validate();
        if (n < -1) throw ConfigError("n must be >= -1");

        // Domain guard on both coordinate branches.  x1 and x2 commute, so the
        // spectra of X = (x1+x2)/2 and dx = x1-x2 are pairwise sums/differences
        // of the single-mode x spectrum -- no dim^2 eigensolve needed.
        if (n != -1 && n != 0) {
            const FockConfig one{dim, 1, 1.0, sub};
            const Spectral sx = Spectral::of_hermitian(build_position(one, 1));
            auto guard = [&](double lambda, int sign, const char* name) {
                const double base = 1.0 + sign * n * theta * std::pow(lambda, double(n));
                if (base <= 0.0) {
                    std::fprintf(stderr,
                                 "domain-guard failure on %s: eigenvalue %s leaves "
                                 "1 + s*n*theta*lambda^n positive-domain\n",
                                 name, fnum(lambda).c_str());
                    return false;
                }
                return true;
            };
            for (int i = 0; i < sx.values.size(); ++i)
                for (int j = 0; j < sx.values.size(); ++j) {
                    if (!guard(0.5 * (sx.values(i) + sx.values(j)), kFlowSignCom, "X"))
                        return kExitDomain;
                    if (!guard(sx.values(i) - sx.values(j), kFlowSignRelative, "dx"))
                        return kExitDomain;
                }
        }

        const GeneratorVariant variant =
            (n == 0) ? GeneratorVariant::bogoliubov : GeneratorVariant::virasoro_bogoliubov;
        const StateVector state = squeezed_state(cfg, {n, theta, variant});
        const DensityMatrix rho = reduced_plus(state, cfg);
        std::printf("reduced '+'-mode state: trace %s, purity %s\n", fnum(rho.trace()).c_str(),
                    fnum(rho.purity()).c_str());

        std::FILE* csv = stdout;
        if (!out_path.empty()) {
            csv = std::fopen(out_path.c_str(), "w");
            if (!csv) {
                std::fprintf(stderr, "cannot open '%s' for writing\n", out_path.c_str());
                return kExitIo;
            }
        }
        std::fprintf(csv, "level,probability\n");
        for (int k = 0; k < dim; ++k)
            std::fprintf(csv, "%d,%s\n", k, fnum(rho.mat(k, k).real()).c_str());
        if (csv != stdout) std::fclose(csv);

        if (theta == 0.0) {
            std::printf("degenerate: zero-temperature (pure reduced state); fit skipped\n");
            return kExitOk;
        }

        const GeometricFit fit = fit_geometric(rho, levels);
        std::printf("geometric fit over %d levels: ratio %s, beta %s, residual %s\n",
                    fit.levels_used, fnum(fit.ratio).c_str(), fnum(fit.beta).c_str(),
                    fnum(fit.residual).c_str());
        const MeanFieldParams mf = mean_field_params(cfg, std::max(n, 0), theta, Branch::com);
        const double pred = mf.K * mf.K * std::tanh(mf.Omega) * std::tanh(mf.Omega);
        std::printf("mean-field prediction K^2 tanh^2(Omega) = %s (beta %s)\n",
                    fnum(pred).c_str(), fnum(-std::log(pred)).c_str());
        return kExitOk;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "domain-guard failure: %s (eigenvalue %s)\n", e.what(),
                     fnum(e.eigenvalue).c_str());
        return kExitDomain;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    }
}

// ---------------------------------------------------------------------------

int cmd_flow(int n, double theta, double z_re, double z_im) {
    try {
        const Complex out = classical_flow(n, theta, Complex(z_re, z_im));
        std::printf("%s\n", fnum(out).c_str());
        return kExitOk;
    } catch (const SingularFlowError& e) {
        std::fprintf(stderr, "singular flow: %s\n", e.what());
        return kExitDomain;
    }
}

int cmd_squeeze(int n, double theta, int dim, int sub) {
    try {
        const FockConfig cfg{dim, 1, 1.0, sub};
        const StateVector s = squeezed_state(cfg, {n, theta, GeneratorVariant::single_mode});
        std::printf("N = %s\n", fnum(number_expectation(s, cfg)).c_str());
        if (n == 0)
            std::printf("sinh^2(theta) = %s\n",
                        fnum(std::sinh(theta) * std::sinh(theta)).c_str());
        return kExitOk;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    }
}

int cmd_eval(const std::string& expr, int dim, int sub, const std::string& mode) {
    try {
        const FockConfig cfg{dim, mode == "two" ? 2 : 1, 1.0, sub};
        cfg.validate();
        const opexpr::Node ast = opexpr::parse(expr);
        const OperatorMatrix A = opexpr::eval(ast, cfg);
        std::printf("parsed: %s\n", opexpr::pretty(ast).c_str());
        std::printf("dim %d, norm %s, hermiticity defect %s\n", A.dim(), fnum(A.mat.norm()).c_str(),
                    fnum(hermiticity_defect(A.mat)).c_str());

        // low-subspace scalar detection: P_k A P_k ~ c I
        const Matrix blk = project_low(A, sub);
        const Complex c = blk.trace() / double(blk.rows());
        const double res = (blk - c * Matrix::Identity(blk.rows(), blk.cols())).norm();
        if (res < 1e-9 * std::max(1.0, std::abs(c)))
            std::printf("low subspace (k=%d): ~ (%s) I, residual %s\n", sub, fnum(c).c_str(),
                        fnum(res).c_str());
        return kExitOk;
    } catch (const opexpr::ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    }
}

// ---------------------------------------------------------------------------

struct SweepRow {
    int n = 0;
    double theta = 0.0;
    int dim = 0;
    double closure_residual = 0.0;
    double x_law_residual = 0.0;
    double p_law_residual = 0.0;
    double N_expect = 0.0;
    double N_formula_rhs = 0.0;
    double beta_fit = 0.0;
    double beta_pred = 0.0;
    bool domain_ok = true;
};

SweepRow sweep_point(int n, double theta, int dim, int sub) {
    constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
    SweepRow row{n, theta, dim};
    const FockConfig cfg{dim, 1, 1.0, sub};

    double closure = 0.0;
    for (int m = -1; m <= 1; ++m) {
        if (n + m < -1) continue;
        const OperatorMatrix c =
            commutator(build_L_single(cfg, n), build_L_single(cfg, m)) -
            Complex(double(n - m)) * build_L_single(cfg, n + m);
        closure = std::max(closure, subspace_residual(c, sub));
    }
    row.closure_residual = closure;

    const LawCheckResult laws = check_single_mode_laws(cfg, n, theta, sub);
    row.x_law_residual = laws.reports[0].residual;
    row.p_law_residual = laws.reports[1].residual;
    row.domain_ok = laws.reports[0].domain_ok && laws.reports[1].domain_ok;

    row.N_expect = number_expectation(
        squeezed_state(cfg, {n, theta, GeneratorVariant::single_mode}), cfg);
    try {
        row.N_formula_rhs = number_formula_rhs(cfg, n, theta);
    } catch (const DomainError&) {
        row.N_formula_rhs = kNan;
    }

    // thermodynamic columns on a memory-bounded two-mode companion space
    const int d2 = std::min(dim, 32);
    const FockConfig two{d2, 2, 1.0, std::min(sub, d2 / 2)};
    try {
        const GeneratorVariant variant =
            (n == 0) ? GeneratorVariant::bogoliubov : GeneratorVariant::virasoro_bogoliubov;
        const StateVector s = squeezed_state(two, {n, theta, variant});
        row.beta_fit = fit_geometric(reduced_plus(s, two), std::min(8, d2)).beta;
    } catch (const std::exception&) {
        row.beta_fit = kNan;
    }
    try {
        row.beta_pred = beta_prediction(two, std::max(n, 0), theta);
    } catch (const std::exception&) {
        row.beta_pred = kNan;
    }
    return row;
}

int cmd_sweep(std::string config_path, std::vector<int> n_values,
              std::vector<double> theta_values, int dim, int sub, std::string out_path,
              std::string format) {
    // JSON config provides defaults; explicit flags override.
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::fprintf(stderr, "cannot read config '%s'\n", config_path.c_str());
            return kExitIo;
        }
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            std::fprintf(stderr, "invalid JSON config: %s\n", e.what());
            return kExitUsage;
        }
        if (n_values.empty() && j.contains("n_values"))
            n_values = j["n_values"].get<std::vector<int>>();
        if (theta_values.empty() && j.contains("theta_values"))
            theta_values = j["theta_values"].get<std::vector<double>>();
        if (dim == 0 && j.contains("per_mode_dim")) dim = j["per_mode_dim"].get<int>();
        if (sub == 0 && j.contains("subspace_dim")) sub = j["subspace_dim"].get<int>();
        if (out_path.empty() && j.contains("outputs")) {
            if (j["outputs"].is_array() && !j["outputs"].empty())
                out_path = j["outputs"][0].get<std::string>();
            else if (j["outputs"].is_string())
                out_path = j["outputs"].get<std::string>();
        }
        if (format.empty() && j.contains("format")) format = j["format"].get<std::string>();
    }
    if (dim == 0) dim = 64;
    if (sub == 0) sub = 8;
    if (format.empty()) format = "csv";
    if (n_values.empty() || theta_values.empty()) {
        std::fprintf(stderr, "sweep requires nonempty n and theta lists\n");
        return kExitUsage;
    }
    if (format != "csv" && format != "json") {
        std::fprintf(stderr, "invalid format '%s' (csv|json)\n", format.c_str());
        return kExitUsage;
    }
    try {
        FockConfig{dim, 1, 1.0, sub}.validate();
        for (int n : n_values)
            if (n < -1) throw ConfigError("sweep n values must be >= -1");
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    }

    // deterministic row order: lexicographic in (n, theta)
    std::sort(n_values.begin(), n_values.end());
    n_values.erase(std::unique(n_values.begin(), n_values.end()), n_values.end());
    std::sort(theta_values.begin(), theta_values.end());

    std::vector<SweepRow> rows;
    for (int n : n_values)
        for (double theta : theta_values) rows.push_back(sweep_point(n, theta, dim, sub));

    std::FILE* out = stdout;
    if (!out_path.empty()) {
        out = std::fopen(out_path.c_str(), "w");
        if (!out) {
            std::fprintf(stderr, "cannot open '%s' for writing\n", out_path.c_str());
            return kExitIo;
        }
    }
    if (format == "csv") {
        std::fprintf(out,
                     "n,theta,dim,closure_residual,x_law_residual,p_law_residual,"
                     "N_expect,N_formula_rhs,beta_fit,beta_pred,domain_ok\n");
        for (const auto& r : rows)
            std::fprintf(out, "%d,%s,%d,%s,%s,%s,%s,%s,%s,%s,%d\n", r.n, fnum(r.theta).c_str(),
                         r.dim, fnum(r.closure_residual).c_str(),
                         fnum(r.x_law_residual).c_str(), fnum(r.p_law_residual).c_str(),
                         fnum(r.N_expect).c_str(), fnum(r.N_formula_rhs).c_str(),
                         fnum(r.beta_fit).c_str(), fnum(r.beta_pred).c_str(),
                         r.domain_ok ? 1 : 0);
    } else {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"n", r.n},
                           {"theta", r.theta},
                           {"dim", r.dim},
                           {"closure_residual", r.closure_residual},
                           {"x_law_residual", r.x_law_residual},
                           {"p_law_residual", r.p_law_residual},
                           {"N_expect", r.N_expect},
                           {"N_formula_rhs", r.N_formula_rhs},
                           {"beta_fit", r.beta_fit},
                           {"beta_pred", r.beta_pred},
                           {"domain_ok", r.domain_ok}});
        std::fprintf(out, "%s\n", arr.dump(2).c_str());
    }
    if (out != stdout) std::fclose(out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"virasq: truncated-Fock-space verification of Virasoro squeezing "
                 "and Bogoliubov transformations"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "run closure and transformation-law suites");
    int v_dim = 128, v_sub = 16, v_n = 0;
    double v_theta = 0.0;
    std::string v_range = "-1:2", v_mode = "one";
    verify->add_option("--dim", v_dim, "per-mode dimension");
    verify->add_option("--sub", v_sub, "comparison subspace size");
    verify->add_option("--n-range", v_range, "Virasoro index range lo:hi");
    verify->add_option("--mode", v_mode, "one|two");
    verify->add_option("--n", v_n, "Virasoro index (two-mode laws)");
    verify->add_option("--theta", v_theta, "flow parameter");

    // vb
    auto* vb = app.add_subcommand("vb", "Virasoro-Bogoliubov reduced-state analysis");
    int b_n = 0, b_dim = 64, b_sub = 8, b_levels = 8;
    double b_theta = 0.0;
    std::string b_out;
    vb->add_option("--n", b_n, "Virasoro index")->required();
    vb->add_option("--theta", b_theta, "flow parameter")->required();
    vb->add_option("--dim", b_dim, "per-mode dimension");
    vb->add_option("--sub", b_sub, "subspace size");
    vb->add_option("--levels", b_levels, "levels used by the geometric fit");
    vb->add_option("--out", b_out, "CSV output path for the level populations");

    // flow
    auto* flow = app.add_subcommand("flow", "evaluate the classical flow z(theta)");
    int f_n = 0;
    double f_theta = 0.0, f_zre = 1.0, f_zim = 0.0;
    flow->add_option("--n", f_n, "flow index")->required();
    flow->add_option("--theta", f_theta, "flow parameter")->required();
    flow->add_option("--z", f_zre, "initial point (real part)");
    flow->add_option("--zim", f_zim, "initial point (imaginary part)");

    // squeeze
    auto* squeeze = app.add_subcommand("squeeze", "particle number of the squeezed vacuum");
    int s_n = 0, s_dim = 64, s_sub = 8;
    double s_theta = 0.0;
    squeeze->add_option("--n", s_n, "Virasoro index");
    squeeze->add_option("--theta", s_theta, "flow parameter")->required();
    squeeze->add_option("--dim", s_dim, "dimension");
    squeeze->add_option("--sub", s_sub, "subspace size");

    // eval
    auto* eval = app.add_subcommand("eval", "parse and evaluate an operator expression");
    std::string e_expr, e_mode = "one";
    int e_dim = 32, e_sub = 8;
    eval->add_option("expr", e_expr, "operator expression")->required();
    eval->add_option("--dim", e_dim, "per-mode dimension");
    eval->add_option("--sub", e_sub, "subspace size");
    eval->add_option("--mode", e_mode, "one|two");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "parameter sweep over (n, theta)");
    std::string w_config, w_out, w_format;
    std::vector<int> w_n;
    std::vector<double> w_theta;
    int w_dim = 0, w_sub = 0;
    sweep->add_option("--config", w_config, "JSON config file");
    sweep->add_option("--n", w_n, "Virasoro indices");
    sweep->add_option("--theta", w_theta, "flow parameters");
    sweep->add_option("--dim", w_dim, "dimension");
    sweep->add_option("--sub", w_sub, "subspace size");
    sweep->add_option("--out", w_out, "output path");
    sweep->add_option("--format", w_format, "csv|json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") ? kExitOk
                                                                                   : kExitUsage;
    }

    try {
        if (verify->parsed()) return cmd_verify(v_dim, v_sub, v_range, v_mode, v_n, v_theta);
        if (vb->parsed()) return cmd_vb(b_n, b_theta, b_dim, b_sub, b_levels, b_out);
        if (flow->parsed()) return cmd_flow(f_n, f_theta, f_zre, f_zim);
        if (squeeze->parsed()) return cmd_squeeze(s_n, s_theta, s_dim, s_sub);
        if (eval->parsed()) return cmd_eval(e_expr, e_dim, e_sub, e_mode);
        if (sweep->parsed())
            return cmd_sweep(w_config, w_n, w_theta, w_dim, w_sub, w_out, w_format);
    } catch (const DomainError& e) {
        std::fprintf(stderr, "domain-guard failure: %s (eigenvalue %s)\n", e.what(),
                     fnum(e.eigenvalue).c_str());
        return kExitDomain;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const StructureError& e) {
        std::fprintf(stderr, "structure error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
