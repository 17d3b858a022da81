#pragma once

#include <utility>
#include <vector>

#include "rabicd/model.hpp"

namespace rabicd {

struct AgpBasis {
    OperatorMatrix cavity;  // A_c = i eta sigma_x (a^dag - a)
    OperatorMatrix atomic;  // A_a = -eta Gamma sigma_y (a^dag + a)
};

struct CoefficientPair {
    double alpha_c = 0.0;
    double alpha_a = 0.0;
    bool operator==(const CoefficientPair&) const = default;
};

// Constant pair or a per-slice trajectory with linear interpolation.
class AgpCoefficients {
public:
    enum class Kind { Constant, Trajectory };

    AgpCoefficients() = default;
    static AgpCoefficients constant(double alpha_c, double alpha_a);
    static AgpCoefficients trajectory(std::vector<double> times, std::vector<CoefficientPair> values);

    Kind kind() const { return kind_; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<CoefficientPair>& values() const { return values_; }
    // Throws DomainError outside the trajectory grid.
    CoefficientPair at(double t) const;
    CoefficientPair max_abs() const;
    CoefficientPair mean() const;

private:
    Kind kind_ = Kind::Constant;
    std::vector<double> times_;
    std::vector<CoefficientPair> values_{CoefficientPair{}};
};

// How commutators with the Hamiltonian are formed inside G.
enum class CommutatorMode {
    Canonical,  // closed form from [a, a^dag] = 1, evaluated with truncated matrices
    Truncated,  // raw matrix commutators in the truncated space
};

AgpBasis agp_basis(const ModelParams& params);
AgpBasis agp_basis(const SpinBosonOps& ops, double gamma, double eta);

// Minimizer of the single-coefficient full-trace action.
double analytic_x1(double gamma, double eta, double lam, long long n);

// dH - i[H, A].
OperatorMatrix g_operator(const OperatorMatrix& h, const OperatorMatrix& dh, const OperatorMatrix& a);

// G = G0 + alpha_c Gc + alpha_a Ga for the Rabi model at fixed lambda.
struct GComponents {
    Mat g0;
    Mat gc;
    Mat ga;
    Mat combine(double alpha_c, double alpha_a) const { return g0 + alpha_c * gc + alpha_a * ga; }
};

GComponents rabi_g_components(const SpinBosonOps& ops, double gamma, double eta, double lam, CommutatorMode mode);
OperatorMatrix rabi_g_operator(const ModelParams& params, double lam, CoefficientPair coeffs,
                               CommutatorMode mode = CommutatorMode::Canonical);

// lamdot (alpha_c(t) A_c + alpha_a(t) A_a).
OperatorMatrix cd_hamiltonian(double lamdot, const AgpCoefficients& coeffs, double t, const AgpBasis& basis);

// i sum_k x_k ad_H^{2k-1}(dH).
OperatorMatrix nested_commutator_agp(const OperatorMatrix& h, const OperatorMatrix& dh, int order,
                                     const std::vector<double>& coeffs);

}  // namespace rabicd
