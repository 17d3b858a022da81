#include "rabicd/metrics.hpp"

#include <array>
#include <cmath>

#include "rabicd/errors.hpp"

namespace rabicd {

std::string to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::FullTrace: return "full_trace";
        case MetricKind::CoherentWeighted: return "coherent";
        case MetricKind::SuperradiantVariance: return "superradiant";
        case MetricKind::FilteredTrace: return "filtered";
    }
    return "unknown";
}

MetricKind parse_metric_kind(const std::string& name) {
    if (name == "full_trace" || name == "trace") return MetricKind::FullTrace;
    if (name == "coherent") return MetricKind::CoherentWeighted;
    if (name == "superradiant" || name == "variance") return MetricKind::SuperradiantVariance;
    if (name == "filtered" || name == "filter") return MetricKind::FilteredTrace;
    throw DomainError("unknown metric '" + name + "'");
}

Mat displaced_thermal_density(double alpha, double beta, const FockSpace& space) {
    const Mat d = displacement(alpha, space).matrix();
    if (std::isinf(beta)) {
        const Vec v = d.col(0);
        return v * v.adjoint();
    }
    if (!(beta > 0.0)) throw DomainError("inverse temperature must be positive");
    Vec w(space.field_dim());
    for (int m = 0; m < space.field_dim(); ++m) w(m) = std::exp(-beta * m);
    w /= w.sum();
    return d * w.asDiagonal() * d.adjoint();
}

Mat displaced_mixture(double alpha, double beta, const FockSpace& space) {
    return 0.5 * (displaced_thermal_density(alpha, beta, space) + displaced_thermal_density(-alpha, beta, space));
}

OperatorMatrix coherent_reference(double alpha, const FockSpace& space, double beta) {
    return OperatorMatrix::hermitian(kron(0.5 * identity(2), displaced_mixture(alpha, beta, space)));
}

StateVector superradiant_state(double alpha, const FockSpace& space, SpinBasis basis) {
    const Vec plus = coherent_state(alpha, space);
    const Vec minus = coherent_state(-alpha, space);
    Vec s0 = Vec::Zero(2);
    Vec s1 = Vec::Zero(2);
    if (basis == SpinBasis::Z) {
        s0(0) = 1.0;
        s1(1) = 1.0;
    } else {
        s0 << M_SQRT1_2, M_SQRT1_2;
        s1 << M_SQRT1_2, -M_SQRT1_2;
    }
    const Vec psi = M_SQRT1_2 * (kron(s0, plus) + kron(s1, minus));
    // The spin branches are orthogonal, so only truncation error in |alpha> can shift the norm.
    return StateVector::normalized(psi);
}

OperatorMatrix filtered_reference(double alpha, double gamma, const FockSpace& space, FilterMode mode, double beta) {
    if (!(gamma >= 0.0)) throw DomainError("filter threshold must be >= 0");
    const Mat rho = displaced_mixture(alpha, beta, space);
    const int nf = space.field_dim();
    Mat mask = Mat::Zero(nf, nf);
    int count = 0;
    for (int i = 0; i < nf; ++i) {
        for (int j = 0; j < nf; ++j) {
            const double v = mode == FilterMode::Magnitude ? std::abs(rho(i, j)) : rho(i, j).real();
            if (v > gamma) {
                mask(i, j) = 1.0;
                ++count;
            }
        }
    }
    if (count == 0) throw EmptySupport("filter threshold removes every entry of the reference");
    return OperatorMatrix(mask / static_cast<double>(count));
}

Mat filtered_weight(double alpha, double gamma, const FockSpace& space, FilterMode mode, double beta) {
    return kron(0.5 * identity(2), filtered_reference(alpha, gamma, space, mode, beta).matrix());
}

double action_trace(const OperatorMatrix& g) { return g.matrix().squaredNorm(); }

double weighted_trace(const Mat& g, const Mat& w) {
    if (g.rows() != w.rows()) throw DimensionMismatch("weighted trace: dimension mismatch");
    // Tr(w G^dag G) = Tr(G w G^dag) = <G, G w>_F.
    return (g.conjugate().cwiseProduct(g * w)).sum().real();
}

double action_weighted(const OperatorMatrix& g, const OperatorMatrix& rho) {
    if (g.dim() != rho.dim()) throw DimensionMismatch("action_weighted: dimension mismatch");
    if (!rho.is_hermitian()) throw NotHermitian("action_weighted: rho must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.matrix(), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) throw NotPositive("action_weighted: rho is not positive semidefinite");
    if (std::abs(rho.matrix().trace().real() - 1.0) > 1e-8) throw DomainError("action_weighted: rho must have unit trace");
    return std::max(0.0, weighted_trace(g.matrix(), rho.matrix()));
}

double action_variance(const OperatorMatrix& g, const StateVector& psi) {
    if (g.dim() != psi.dim()) throw DimensionMismatch("action_variance: dimension mismatch");
    if (!g.is_hermitian()) throw NotHermitian("action_variance: G must be Hermitian");
    const Vec gp = g.matrix() * psi.amplitudes();
    const double mean = psi.amplitudes().dot(gp).real();
    return std::max(0.0, gp.squaredNorm() - mean * mean);
}

double evaluate_metric_at_lambda(MetricSpec spec, const ModelParams& params, double lam, CoefficientPair coeffs) {
    spec.alpha = lam * params.eta;
    const OperatorMatrix g = rabi_g_operator(params, lam, coeffs, spec.commutator);
    switch (spec.kind) {
        case MetricKind::FullTrace: return action_trace(g);
        case MetricKind::CoherentWeighted:
            return action_weighted(g, coherent_reference(spec.alpha, params.space, spec.beta_inv_temp));
        case MetricKind::SuperradiantVariance:
            return action_variance(g, superradiant_state(spec.alpha, params.space, spec.spin_basis));
        case MetricKind::FilteredTrace:
            return weighted_trace(g.matrix(), filtered_weight(spec.alpha, spec.gamma_threshold, params.space,
                                                              spec.filter_mode, spec.beta_inv_temp));
    }
    throw DomainError("unknown metric kind");
}

double evaluate_metric(MetricSpec spec, const ModelParams& params, double t, CoefficientPair coeffs) {
    return evaluate_metric_at_lambda(spec, params, params.schedule.lambda(t), coeffs);
}

MetricForm::MetricForm(const MetricSpec& spec, const SpinBosonOps& ops, double gamma, double eta, double lam) {
    const GComponents g = rabi_g_components(ops, gamma, eta, lam, spec.commutator);
    const std::array<const Mat*, 3> parts{&g.g0, &g.gc, &g.ga};
    const double alpha = lam * eta;
    auto gram = [&](const Mat& w) {
        std::array<Mat, 3> gw;
        for (int q = 0; q < 3; ++q) gw[q] = *parts[q] * w;
        for (int p = 0; p < 3; ++p) {
            for (int q = p; q < 3; ++q) {
                const double v = (parts[p]->conjugate().cwiseProduct(gw[q])).sum().real();
                m_(p, q) = v;
                m_(q, p) = v;
            }
        }
    };
    switch (spec.kind) {
        case MetricKind::FullTrace:
            for (int p = 0; p < 3; ++p) {
                for (int q = p; q < 3; ++q) {
                    const double v = (parts[p]->conjugate().cwiseProduct(*parts[q])).sum().real();
                    m_(p, q) = v;
                    m_(q, p) = v;
                }
            }
            break;
        case MetricKind::CoherentWeighted:
            gram(coherent_reference(alpha, ops.space, spec.beta_inv_temp).matrix());
            break;
        case MetricKind::FilteredTrace:
            gram(filtered_weight(alpha, spec.gamma_threshold, ops.space, spec.filter_mode, spec.beta_inv_temp));
            break;
        case MetricKind::SuperradiantVariance: {
            const Vec psi = superradiant_state(alpha, ops.space, spec.spin_basis).amplitudes();
            std::array<Vec, 3> v;
            std::array<double, 3> mean{};
            for (int p = 0; p < 3; ++p) {
                v[p] = *parts[p] * psi;
                mean[p] = psi.dot(v[p]).real();
            }
            for (int p = 0; p < 3; ++p) {
                for (int q = p; q < 3; ++q) {
                    const double c = v[p].dot(v[q]).real() - mean[p] * mean[q];
                    m_(p, q) = c;
                    m_(q, p) = c;
                }
            }
            break;
        }
    }
}

double MetricForm::value(double alpha_c, double alpha_a) const {
    const Eigen::Vector3d w(1.0, alpha_c, alpha_a);
    return w.dot(m_ * w);
}

}  // namespace rabicd
