#include "rabicd/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rabicd/errors.hpp"

namespace rabicd {

using std::numbers::pi;

Schedule::Schedule(double tau, std::string name, Profile f, Profile df)
    : tau_(tau), name_(std::move(name)), f_(std::move(f)), df_(std::move(df)) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("schedule duration tau must be positive");
}

Schedule Schedule::sin_squared(double tau) {
    auto f = [](double s) {
        const double u = 0.5 * pi * std::pow(std::sin(0.5 * pi * s), 2);
        return std::pow(std::sin(u), 2);
    };
    // d/ds: sin(2u) du/ds with du/ds = (pi^2/4) sin(2v), v = pi s / 2.
    auto df = [](double s) {
        const double v = 0.5 * pi * s;
        const double u = 0.5 * pi * std::pow(std::sin(v), 2);
        return 0.25 * pi * pi * std::sin(2.0 * u) * std::sin(2.0 * v);
    };
    return Schedule(tau, "sin2sin2", f, df);
}

Schedule Schedule::single_sin_squared(double tau) {
    auto f = [](double s) { return std::pow(std::sin(0.5 * pi * s), 2); };
    auto df = [](double s) { return 0.5 * pi * std::sin(pi * s); };
    return Schedule(tau, "sin2", f, df);
}

Schedule Schedule::custom(double tau, std::string name, Profile f, Profile df) {
    return Schedule(tau, std::move(name), std::move(f), std::move(df));
}

Schedule Schedule::by_name(const std::string& name, double tau) {
    if (name == "sin2sin2") return sin_squared(tau);
    if (name == "sin2") return single_sin_squared(tau);
    throw DomainError("unknown schedule '" + name + "' (expected sin2sin2 or sin2)");
}

void Schedule::check_time(double t) const {
    const double slack = 1e-12 * tau_;
    if (!(t >= -slack && t <= tau_ + slack)) {
        throw DomainError("time " + std::to_string(t) + " outside [0, " + std::to_string(tau_) + "]");
    }
}

double Schedule::lambda(double t) const {
    check_time(t);
    return f_(std::clamp(t / tau_, 0.0, 1.0));
}

double Schedule::lambda_dot(double t) const {
    check_time(t);
    return df_(std::clamp(t / tau_, 0.0, 1.0)) / tau_;
}

Schedule Schedule::with_tau(double tau) const { return Schedule(tau, name_, f_, df_); }

double lambda(double t, const Schedule& schedule) { return schedule.lambda(t); }
double lambda_dot(double t, const Schedule& schedule) { return schedule.lambda_dot(t); }

int default_cutoff(double eta) {
    return std::max(20, static_cast<int>(std::ceil(4.0 * eta * eta + 10.0 * eta - 1e-12)) + 10);
}

namespace {

void check_couplings(double gamma, double eta) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("Gamma must be finite and >= 0");
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw DomainError("eta must be finite and >= 0");
}

}  // namespace

ModelParams::ModelParams(double gamma_, double eta_, double tau_, int cutoff)
    : gamma(gamma_), eta(eta_), schedule(Schedule::sin_squared(tau_)),
      space(cutoff > 0 ? cutoff : default_cutoff(eta_)) {
    check_couplings(gamma, eta);
}

ModelParams::ModelParams(double gamma_, double eta_, Schedule schedule_, FockSpace space_)
    : gamma(gamma_), eta(eta_), schedule(std::move(schedule_)), space(space_) {
    check_couplings(gamma, eta);
}

ModelParams ModelParams::with_cutoff(int n) const { return ModelParams(gamma, eta, schedule, FockSpace(n)); }

ModelParams ModelParams::with_tau(double tau) const {
    return ModelParams(gamma, eta, schedule.with_tau(tau), space);
}

SpinBosonOps::SpinBosonOps(const FockSpace& s) : space(s) {
    const Mat a = annihilation(s).matrix();
    const Mat ad = a.adjoint();
    const Mat x = ad + a;
    const Mat p = ad - a;
    const Mat sx = pauli_x().matrix();
    const Mat sy = pauli_y().matrix();
    const Mat szq = pauli_z().matrix();
    Mat sp = Mat::Zero(2, 2);
    sp(0, 1) = 1.0;
    id = identity(s.dim());
    number = kron(identity(2), number_operator(s).matrix());
    sz = kron(szq, identity(s.field_dim()));
    sx_x = kron(sx, x);
    i_sx_p = kron(cplx(0, 1) * sx, p);
    sy_x = kron(sy, x);
    i_sy_p = kron(cplx(0, 1) * sy, p);
    sz_x2 = kron(szq, x * x);
    sp_a = kron(sp, a);
    parity = parity_diagonal(s);
}

Mat rabi_matrix(const SpinBosonOps& ops, double gamma, double eta, double lam) {
    return ops.number + (0.5 * gamma) * ops.sz + (lam * eta) * ops.sx_x;
}

Mat jc_matrix(const SpinBosonOps& ops, double gamma, double eta) {
    return ops.number + (0.5 * gamma) * ops.sz + eta * (ops.sp_a + ops.sp_a.adjoint());
}

OperatorMatrix rabi_hamiltonian(const ModelParams& params, double lam) {
    if (!(lam >= 0.0 && lam <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
    const SpinBosonOps ops(params.space);
    return OperatorMatrix::hermitian(rabi_matrix(ops, params.gamma, params.eta, lam));
}

OperatorMatrix rabi_hamiltonian_derivative(const ModelParams& params) {
    const SpinBosonOps ops(params.space);
    return OperatorMatrix::hermitian(params.eta * ops.sx_x);
}

OperatorMatrix jc_hamiltonian(const ModelParams& params) {
    const SpinBosonOps ops(params.space);
    return OperatorMatrix::hermitian(jc_matrix(ops, params.gamma, params.eta));
}

}  // namespace rabicd
