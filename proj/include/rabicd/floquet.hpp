#pragma once

#include <vector>

#include "rabicd/agp.hpp"

namespace rabicd {

struct FloquetConfig {
    double nu = 40.0;
    double nu0 = 1.0;
    // Amplitudes of sin((2k-1) nu t); beta_2 = -3 beta_1 cancels the stroboscopic kick.
    std::vector<double> beta{5.0, -15.0};
    int steps_per_period = 200;
    int samples_per_period = 4;  // observable trace resolution

    double period() const;
};

// Throws DomainError unless nu >= 10 max(1, Gamma, eta), steps_per_period >= 200 and beta is nonempty.
void validate(const FloquetConfig& cfg, const ModelParams& params);

struct Envelopes {
    double cavity = 0.0;  // A_c
    double atomic = 0.0;  // A_a
};

// Envelope values whose first-order Magnus term equals the target CD coefficients.
// With beta_1 = 0 only the zero target is reachable.
Envelopes envelopes_for(const FloquetConfig& cfg, double gamma, CoefficientPair target);
CoefficientPair engineered_coefficients(const FloquetConfig& cfg, double gamma, Envelopes env);

// sum_k beta_k sin((2k-1) nu t).
double drive_profile(const FloquetConfig& cfg, double t);

Mat floquet_matrix(const SpinBosonOps& ops, double gamma, double eta, const FloquetConfig& cfg, double lam,
                   double lamdot, Envelopes env, double t);
OperatorMatrix floquet_hamiltonian(double t, const ModelParams& params, const FloquetConfig& cfg,
                                   const AgpCoefficients& coeffs_target);

// H_R - (i/T) sum_k I_k [F, S_k] with F = (nu/nu0)(A_c N + A_a sigma_z), S_k = lamdot beta_k eta sigma_x X.
Mat effective_matrix(const SpinBosonOps& ops, double gamma, double eta, const FloquetConfig& cfg, double lam,
                     double lamdot, Envelopes env);
OperatorMatrix effective_hamiltonian(double t, const ModelParams& params, const FloquetConfig& cfg,
                                     const AgpCoefficients& coeffs_target);

// Int_0^T dt cos(nu t) Int_0^t dt' sin((2k-1) nu t').
double magnus_integral(int k, double nu);
double magnus_integral_quadrature(int k, double nu, int panels = 64);

struct StroboscopicReport {
    std::vector<double> strobe_times;
    std::vector<double> fidelities;
    double mean_fidelity = 1.0;
    std::vector<double> trace_times;
    std::vector<double> n_floquet;
    std::vector<double> sz_floquet;
    std::vector<double> n_exact;
    std::vector<double> sz_exact;
    double max_norm_defect = 0.0;
    double max_parity_drift = 0.0;
};

StroboscopicReport stroboscopic_compare(const ModelParams& params, const FloquetConfig& cfg,
                                        const AgpCoefficients& coeffs);

}  // namespace rabicd
