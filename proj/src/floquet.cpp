#include "rabicd/floquet.hpp"

#include <cmath>
#include <numbers>

#include "rabicd/dynamics.hpp"
#include "rabicd/errors.hpp"

namespace rabicd {

using std::numbers::pi;

double FloquetConfig::period() const { return 2.0 * pi / nu; }

void validate(const FloquetConfig& cfg, const ModelParams& params) {
    const double scale = std::max({1.0, params.gamma, params.eta});
    if (!(cfg.nu >= 10.0 * scale)) {
        throw DomainError("Floquet drive frequency nu = " + std::to_string(cfg.nu) + " must be >= " +
                          std::to_string(10.0 * scale));
    }
    if (!(cfg.nu0 > 0.0)) throw DomainError("Floquet reference frequency nu0 must be positive");
    if (cfg.steps_per_period < 200) throw DomainError("Floquet steps_per_period must be >= 200");
    if (cfg.beta.empty()) throw DomainError("Floquet beta must have at least one harmonic");
    if (cfg.samples_per_period < 1) throw DomainError("Floquet samples_per_period must be >= 1");
}

Envelopes envelopes_for(const FloquetConfig& cfg, double gamma, CoefficientPair target) {
    const double b1 = cfg.beta.front();
    if (b1 == 0.0) {
        if (target.alpha_c == 0.0 && target.alpha_a == 0.0) return {};
        throw DomainError("Floquet beta_1 = 0 cannot engineer a nonzero CD coefficient");
    }
    return {2.0 * cfg.nu0 * target.alpha_c / b1, cfg.nu0 * gamma * target.alpha_a / b1};
}

CoefficientPair engineered_coefficients(const FloquetConfig& cfg, double gamma, Envelopes env) {
    const double b1 = cfg.beta.front();
    if (b1 == 0.0) return {};
    const double aa = gamma == 0.0 ? 0.0 : b1 * env.atomic / (cfg.nu0 * gamma);
    return {b1 * env.cavity / (2.0 * cfg.nu0), aa};
}

double drive_profile(const FloquetConfig& cfg, double t) {
    double f = 0.0;
    for (std::size_t k = 0; k < cfg.beta.size(); ++k) {
        f += cfg.beta[k] * std::sin(static_cast<double>(2 * k + 1) * cfg.nu * t);
    }
    return f;
}

Mat floquet_matrix(const SpinBosonOps& ops, double gamma, double eta, const FloquetConfig& cfg, double lam,
                   double lamdot, Envelopes env, double t) {
    const double mod = (cfg.nu / cfg.nu0) * std::cos(cfg.nu * t);
    return rabi_matrix(ops, gamma, eta, lam) + (mod * env.cavity) * ops.number + (mod * env.atomic) * ops.sz +
           (lamdot * drive_profile(cfg, t) * eta) * ops.sx_x;
}

OperatorMatrix floquet_hamiltonian(double t, const ModelParams& params, const FloquetConfig& cfg,
                                   const AgpCoefficients& coeffs_target) {
    validate(cfg, params);
    const SpinBosonOps ops(params.space);
    const Envelopes env = envelopes_for(cfg, params.gamma, coeffs_target.at(t));
    return OperatorMatrix::hermitian(floquet_matrix(ops, params.gamma, params.eta, cfg, params.schedule.lambda(t),
                                                    params.schedule.lambda_dot(t), env, t));
}

Mat effective_matrix(const SpinBosonOps& ops, double gamma, double eta, const FloquetConfig& cfg, double lam,
                     double lamdot, Envelopes env) {
    const Mat f = (cfg.nu / cfg.nu0) * (env.cavity * ops.number + env.atomic * ops.sz);
    Mat h = rabi_matrix(ops, gamma, eta, lam);
    const double period = cfg.period();
    for (std::size_t k = 0; k < cfg.beta.size(); ++k) {
        const double ik = magnus_integral(static_cast<int>(k) + 1, cfg.nu);
        if (ik == 0.0) continue;
        const Mat s = (lamdot * cfg.beta[k] * eta) * ops.sx_x;
        h += cplx(0.0, -ik / period) * commutator(f, s);
    }
    return h;
}

OperatorMatrix effective_hamiltonian(double t, const ModelParams& params, const FloquetConfig& cfg,
                                     const AgpCoefficients& coeffs_target) {
    validate(cfg, params);
    const SpinBosonOps ops(params.space);
    const Envelopes env = envelopes_for(cfg, params.gamma, coeffs_target.at(t));
    return OperatorMatrix::hermitian(effective_matrix(ops, params.gamma, params.eta, cfg, params.schedule.lambda(t),
                                                      params.schedule.lambda_dot(t), env));
}

double magnus_integral(int k, double nu) {
    if (k < 1) throw DomainError("magnus_integral: k must be >= 1");
    if (!(nu > 0.0)) throw DomainError("magnus_integral: nu must be positive");
    return k == 1 ? -pi / (nu * nu) : 0.0;
}

namespace {

// 10-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr double kGlx[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244, 0.8650633666889845,
                            0.9739065285171717};
constexpr double kGlw[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                            0.0666713443086881};

template <class F>
double gauss_legendre(F&& f, double a, double b, int panels) {
    double sum = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (int i = 0; i < 5; ++i) {
            const double dx = 0.5 * h * kGlx[i];
            sum += kGlw[i] * (f(mid - dx) + f(mid + dx));
        }
    }
    return 0.5 * h * sum;
}

}  // namespace

double magnus_integral_quadrature(int k, double nu, int panels) {
    if (k < 1) throw DomainError("magnus_integral: k must be >= 1");
    const double period = 2.0 * pi / nu;
    const double w = static_cast<double>(2 * k - 1) * nu;
    auto inner = [&](double t) {
        if (t <= 0.0) return 0.0;
        const int p = std::max(1, static_cast<int>(std::ceil(panels * t / period)));
        return gauss_legendre([&](double s) { return std::sin(w * s); }, 0.0, t, p);
    };
    return gauss_legendre([&](double t) { return std::cos(nu * t) * inner(t); }, 0.0, period, panels);
}

StroboscopicReport stroboscopic_compare(const ModelParams& params, const FloquetConfig& cfg,
                                        const AgpCoefficients& coeffs) {
    validate(cfg, params);
    const SpinBosonOps ops(params.space);
    const AgpBasis basis = agp_basis(ops, params.gamma, params.eta);
    const double tau = params.tau();
    const double period = cfg.period();
    const Schedule& sch = params.schedule;

    auto h_floquet = [&](double t) {
        const Envelopes env = envelopes_for(cfg, params.gamma, coeffs.at(t));
        return floquet_matrix(ops, params.gamma, params.eta, cfg, sch.lambda(t), sch.lambda_dot(t), env, t);
    };
    auto h_exact = [&](double t) {
        const CoefficientPair c = coeffs.at(t);
        const double ld = sch.lambda_dot(t);
        return Mat(rabi_matrix(ops, params.gamma, params.eta, sch.lambda(t)) +
                   (ld * c.alpha_c) * basis.cavity.matrix() + (ld * c.alpha_a) * basis.atomic.matrix());
    };

    std::vector<double> grid{0.0};
    const double sample_dt = period / cfg.samples_per_period;
    for (long long j = 1;; ++j) {
        const double t = sample_dt * static_cast<double>(j);
        if (t > tau * (1.0 - 1e-12)) break;
        grid.push_back(t);
    }
    if (tau - grid.back() > 1e-12 * tau) grid.push_back(tau);

    EvolveOptions eo;
    eo.adaptive = false;
    // Nominal step T/steps_per_period, so each sample interval gets an integer step count.
    eo.base_steps = static_cast<int>(std::ceil(tau * cfg.steps_per_period / period - 1e-9));
    eo.observables = {ops.number, ops.sz, ops.parity.cast<cplx>().asDiagonal().toDenseMatrix()};

    const StateVector psi0(basis_state(params.space, 1, 0));
    const Trajectory tf = evolve(h_floquet, psi0, grid, eo);
    const Trajectory te = evolve(h_exact, psi0, grid, eo);

    StroboscopicReport rep;
    rep.trace_times = grid;
    rep.n_floquet = tf.observables[0];
    rep.sz_floquet = tf.observables[1];
    rep.n_exact = te.observables[0];
    rep.sz_exact = te.observables[1];
    rep.max_norm_defect = std::max(tf.max_norm_defect, te.max_norm_defect);
    const double p0 = tf.observables[2].front();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        rep.max_parity_drift = std::max({rep.max_parity_drift, std::abs(tf.observables[2][i] - p0),
                                         std::abs(te.observables[2][i] - p0)});
    }
    const long long full_periods = static_cast<long long>(std::floor(tau / period + 1e-9));
    double sum = 0.0;
    for (long long m = 1; m <= full_periods; ++m) {
        const std::size_t idx = static_cast<std::size_t>(m * cfg.samples_per_period);
        rep.strobe_times.push_back(grid[idx]);
        rep.fidelities.push_back(fidelity(tf.states[idx], te.states[idx]));
        sum += rep.fidelities.back();
    }
    rep.mean_fidelity = rep.fidelities.empty() ? 1.0 : sum / static_cast<double>(rep.fidelities.size());
    return rep;
}

}  // namespace rabicd
