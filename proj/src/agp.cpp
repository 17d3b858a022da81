#include "rabicd/agp.hpp"

#include <algorithm>
#include <cmath>

#include "rabicd/errors.hpp"

namespace rabicd {

AgpCoefficients AgpCoefficients::constant(double alpha_c, double alpha_a) {
    AgpCoefficients c;
    c.kind_ = Kind::Constant;
    c.values_ = {CoefficientPair{alpha_c, alpha_a}};
    return c;
}

AgpCoefficients AgpCoefficients::trajectory(std::vector<double> times, std::vector<CoefficientPair> values) {
    if (times.size() < 2) throw DomainError("coefficient trajectory needs at least two slices");
    if (times.size() != values.size()) throw DimensionMismatch("trajectory times and values differ in length");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw DomainError("trajectory grid must be strictly increasing");
    }
    AgpCoefficients c;
    c.kind_ = Kind::Trajectory;
    c.times_ = std::move(times);
    c.values_ = std::move(values);
    return c;
}

CoefficientPair AgpCoefficients::at(double t) const {
    if (kind_ == Kind::Constant) return values_.front();
    const double lo = times_.front();
    const double hi = times_.back();
    const double slack = 1e-12 * std::max(1.0, hi - lo);
    if (t < lo - slack || t > hi + slack) throw DomainError("time outside coefficient trajectory grid");
    if (t <= lo) return values_.front();
    if (t >= hi) return values_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
    const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
    return {(1 - w) * values_[k].alpha_c + w * values_[k + 1].alpha_c,
            (1 - w) * values_[k].alpha_a + w * values_[k + 1].alpha_a};
}

CoefficientPair AgpCoefficients::max_abs() const {
    CoefficientPair m;
    for (const auto& v : values_) {
        m.alpha_c = std::max(m.alpha_c, std::abs(v.alpha_c));
        m.alpha_a = std::max(m.alpha_a, std::abs(v.alpha_a));
    }
    return m;
}

CoefficientPair AgpCoefficients::mean() const {
    CoefficientPair m;
    for (const auto& v : values_) {
        m.alpha_c += v.alpha_c;
        m.alpha_a += v.alpha_a;
    }
    m.alpha_c /= static_cast<double>(values_.size());
    m.alpha_a /= static_cast<double>(values_.size());
    return m;
}

AgpBasis agp_basis(const SpinBosonOps& ops, double gamma, double eta) {
    return {OperatorMatrix::hermitian(eta * ops.i_sx_p), OperatorMatrix::hermitian((-eta * gamma) * ops.sy_x)};
}

AgpBasis agp_basis(const ModelParams& params) {
    return agp_basis(SpinBosonOps(params.space), params.gamma, params.eta);
}

double analytic_x1(double gamma, double eta, double lam, long long n) {
    if (n < 1) throw DomainError("analytic_x1 requires n >= 1");
    const double g2 = gamma * gamma;
    const double nn = static_cast<double>(n);
    const double denom = 1.0 + g2 * g2 + 6.0 * g2 + 4.0 * lam * lam * eta * eta * (1.0 / nn + (2.0 * nn - 1.0) * g2);
    return -(1.0 + g2) / denom;
}

OperatorMatrix g_operator(const OperatorMatrix& h, const OperatorMatrix& dh, const OperatorMatrix& a) {
    if (h.dim() != dh.dim() || h.dim() != a.dim()) throw DimensionMismatch("g_operator: dimension mismatch");
    if (!h.is_hermitian()) throw NotHermitian("g_operator: H must be Hermitian");
    const Mat g = dh.matrix() - cplx(0, 1) * commutator(h.matrix(), a.matrix());
    return OperatorMatrix::hermitian(g, 1e-9);
}

GComponents rabi_g_components(const SpinBosonOps& ops, double gamma, double eta, double lam, CommutatorMode mode) {
    GComponents g;
    g.g0 = eta * ops.sx_x;
    if (mode == CommutatorMode::Canonical) {
        g.gc = eta * (ops.sx_x + gamma * ops.i_sy_p + (2.0 * lam * eta) * ops.id);
        g.ga = eta * ((gamma * gamma) * ops.sx_x + gamma * ops.i_sy_p - (2.0 * gamma * lam * eta) * ops.sz_x2);
    } else {
        const Mat h = rabi_matrix(ops, gamma, eta, lam);
        const AgpBasis basis = agp_basis(ops, gamma, eta);
        g.gc = cplx(0, -1) * commutator(h, basis.cavity.matrix());
        g.ga = cplx(0, -1) * commutator(h, basis.atomic.matrix());
    }
    return g;
}

OperatorMatrix rabi_g_operator(const ModelParams& params, double lam, CoefficientPair coeffs, CommutatorMode mode) {
    const SpinBosonOps ops(params.space);
    const GComponents g = rabi_g_components(ops, params.gamma, params.eta, lam, mode);
    return OperatorMatrix::hermitian(g.combine(coeffs.alpha_c, coeffs.alpha_a), 1e-9);
}

OperatorMatrix cd_hamiltonian(double lamdot, const AgpCoefficients& coeffs, double t, const AgpBasis& basis) {
    const CoefficientPair c = coeffs.at(t);
    const Mat h = lamdot * (c.alpha_c * basis.cavity.matrix() + c.alpha_a * basis.atomic.matrix());
    return OperatorMatrix::hermitian(h);
}

OperatorMatrix nested_commutator_agp(const OperatorMatrix& h, const OperatorMatrix& dh, int order,
                                     const std::vector<double>& coeffs) {
    if (order < 1) throw DomainError("nested commutator order must be >= 1");
    if (static_cast<int>(coeffs.size()) != order) throw DimensionMismatch("need one coefficient per order");
    if (h.dim() != dh.dim()) throw DimensionMismatch("nested_commutator_agp: dimension mismatch");
    Mat term = commutator(h.matrix(), dh.matrix());
    Mat acc = coeffs[0] * term;
    for (int k = 1; k < order; ++k) {
        term = commutator(h.matrix(), commutator(h.matrix(), term));
        acc += coeffs[static_cast<std::size_t>(k)] * term;
    }
    return OperatorMatrix::hermitian(cplx(0, 1) * acc, 1e-9);
}

}  // namespace rabicd
