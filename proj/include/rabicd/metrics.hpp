#pragma once

#include <limits>
#include <string>

#include "rabicd/agp.hpp"

namespace rabicd {

enum class MetricKind { FullTrace, CoherentWeighted, SuperradiantVariance, FilteredTrace };
enum class FilterMode { Magnitude, Raw };
enum class SpinBasis { Z, X };

std::string to_string(MetricKind kind);
MetricKind parse_metric_kind(const std::string& name);

struct MetricSpec {
    MetricKind kind = MetricKind::FullTrace;
    // Displacement scale; evaluate_metric overwrites it with lambda(t) eta.
    double alpha = 0.0;
    double gamma_threshold = 1e-3;
    double beta_inv_temp = std::numeric_limits<double>::infinity();
    FilterMode filter_mode = FilterMode::Magnitude;
    SpinBasis spin_basis = SpinBasis::Z;
    CommutatorMode commutator = CommutatorMode::Canonical;
};

// D(alpha) rho_thermal(beta) D(alpha)^dag on the field space.
Mat displaced_thermal_density(double alpha, double beta, const FockSpace& space);
// (1/2)(rho_c(alpha) + rho_c(-alpha)) on the field space.
Mat displaced_mixture(double alpha, double beta, const FockSpace& space);

// (1/4) I_2 x (rho_c(alpha) + rho_c(-alpha)).
OperatorMatrix coherent_reference(double alpha, const FockSpace& space,
                                  double beta = std::numeric_limits<double>::infinity());
// (|up>|alpha> + |down>|-alpha>)/sqrt(2); SpinBasis::X uses |+x>, |-x>.
StateVector superradiant_state(double alpha, const FockSpace& space, SpinBasis basis = SpinBasis::Z);
// Field-space mask: 1/N on entries of the displaced mixture passing the threshold.
OperatorMatrix filtered_reference(double alpha, double gamma, const FockSpace& space,
                                  FilterMode mode = FilterMode::Magnitude,
                                  double beta = std::numeric_limits<double>::infinity());
// Composite weighting (1/2) I_2 x mask.
Mat filtered_weight(double alpha, double gamma, const FockSpace& space, FilterMode mode, double beta);

double action_trace(const OperatorMatrix& g);
double action_weighted(const OperatorMatrix& g, const OperatorMatrix& rho);
// Re Tr(w G^dag G) without validating w.
double weighted_trace(const Mat& g, const Mat& w);
double action_variance(const OperatorMatrix& g, const StateVector& psi);

double evaluate_metric(MetricSpec spec, const ModelParams& params, double t, CoefficientPair coeffs);
double evaluate_metric_at_lambda(MetricSpec spec, const ModelParams& params, double lam, CoefficientPair coeffs);

// Exact quadratic form S(a_c, a_a) = w^T M w with w = (1, a_c, a_a) at fixed lambda.
class MetricForm {
public:
    MetricForm(const MetricSpec& spec, const SpinBosonOps& ops, double gamma, double eta, double lam);

    double value(double alpha_c, double alpha_a) const;
    double value(CoefficientPair c) const { return value(c.alpha_c, c.alpha_a); }
    const Eigen::Matrix3d& matrix() const { return m_; }

private:
    Eigen::Matrix3d m_;
};

}  // namespace rabicd
