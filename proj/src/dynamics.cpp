#include "rabicd/dynamics.hpp"

#include <cmath>
#include <limits>

#include "rabicd/errors.hpp"

namespace rabicd {

namespace {

FockSpace space_for_dim(int dim) {
    if (dim % 2 != 0 || dim < 4) throw DimensionMismatch("parity sector needs a composite-space operator");
    return FockSpace(dim / 2 - 1);
}

StateVector fix_phase(Vec v) {
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    const cplx z = v(k);
    v *= std::conj(z) / std::abs(z);
    return StateVector::normalized(std::move(v));
}

}  // namespace

ParitySector::ParitySector(const FockSpace& space, int sector) : sector_(sector), full_(space.dim()) {
    if (sector != 1 && sector != -1) throw DomainError("parity sector must be +1 or -1");
    const Eigen::VectorXi p = parity_diagonal(space);
    for (int i = 0; i < p.size(); ++i) {
        if (p(i) == sector) idx_.push_back(i);
    }
}

Mat ParitySector::restrict(const Mat& m) const {
    if (m.rows() != full_) throw DimensionMismatch("ParitySector::restrict: dimension mismatch");
    Mat out(dim(), dim());
    for (int i = 0; i < dim(); ++i) {
        for (int j = 0; j < dim(); ++j) out(i, j) = m(idx_[i], idx_[j]);
    }
    return out;
}

Vec ParitySector::restrict(const Vec& v) const {
    if (v.size() != full_) throw DimensionMismatch("ParitySector::restrict: dimension mismatch");
    Vec out(dim());
    for (int i = 0; i < dim(); ++i) out(i) = v(idx_[i]);
    return out;
}

Vec ParitySector::expand(const Vec& v) const {
    if (v.size() != dim()) throw DimensionMismatch("ParitySector::expand: dimension mismatch");
    Vec out = Vec::Zero(full_);
    for (int i = 0; i < dim(); ++i) out(idx_[i]) = v(i);
    return out;
}

GroundState ground_state(const OperatorMatrix& h, std::optional<int> parity_sector) {
    if (!h.is_hermitian()) throw NotHermitian("ground_state: H must be Hermitian");
    if (!parity_sector) {
        Eigen::SelfAdjointEigenSolver<Mat> es(h.matrix());
        return {es.eigenvalues()(0), fix_phase(es.eigenvectors().col(0))};
    }
    const ParitySector sector(space_for_dim(h.dim()), *parity_sector);
    Eigen::SelfAdjointEigenSolver<Mat> es(sector.restrict(h.matrix()));
    return {es.eigenvalues()(0), fix_phase(sector.expand(es.eigenvectors().col(0)))};
}

void apply_exponential(const Mat& h, double dt, Vec& psi) {
    const double norm1 = h.cwiseAbs().colwise().sum().maxCoeff();
    const long long sub = std::max(1LL, static_cast<long long>(std::ceil(norm1 * std::abs(dt))));
    const cplx factor(0.0, -dt / static_cast<double>(sub));
    Vec term(psi.size());
    for (long long s = 0; s < sub; ++s) {
        term = psi;
        for (int k = 1; k <= 60; ++k) {
            term = (factor / static_cast<double>(k)) * (h * term);
            psi += term;
            if (term.squaredNorm() <= 1e-34 * psi.squaredNorm()) break;
        }
    }
}

void propagate(const HamiltonianFn& h, Vec& psi, double t0, double t1, long long steps) {
    const double dt = (t1 - t0) / static_cast<double>(steps);
    for (long long k = 0; k < steps; ++k) {
        const double tm = t0 + (static_cast<double>(k) + 0.5) * dt;
        apply_exponential(h(tm), dt, psi);
    }
}

namespace {

struct RunResult {
    std::vector<Vec> states;
    long long steps = 0;
};

RunResult run_fixed(const HamiltonianFn& h, const Vec& psi0, const std::vector<double>& grid, double dt_nominal) {
    RunResult r;
    Vec psi = psi0;
    r.states.push_back(psi);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double span = grid[i] - grid[i - 1];
        const long long steps = std::max(1LL, static_cast<long long>(std::ceil(span / dt_nominal - 1e-9)));
        propagate(h, psi, grid[i - 1], grid[i], steps);
        r.steps += steps;
        r.states.push_back(psi);
    }
    return r;
}

}  // namespace

Trajectory evolve(const HamiltonianFn& h, const StateVector& psi0, const std::vector<double>& t_grid,
                  const EvolveOptions& options) {
    if (t_grid.size() < 2) throw DomainError("evolve: time grid needs at least two points");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("evolve: time grid must be strictly increasing");
    }
    if (options.base_steps < 1) throw DomainError("evolve: base_steps must be >= 1");
    const double span = t_grid.back() - t_grid.front();
    double dt = span / options.base_steps;
    RunResult run = run_fixed(h, psi0.amplitudes(), t_grid, dt);
    double delta = 0.0;
    if (options.adaptive) {
        delta = std::numeric_limits<double>::infinity();
        for (int d = 0; d < options.max_doublings; ++d) {
            dt *= 0.5;
            RunResult finer = run_fixed(h, psi0.amplitudes(), t_grid, dt);
            delta = (finer.states.back() - run.states.back()).norm();
            run = std::move(finer);
            if (delta < options.tolerance) break;
        }
        if (!(delta < options.tolerance)) {
            throw ConvergenceError("evolve: step doubling did not converge", delta);
        }
    }
    Trajectory traj;
    traj.times = t_grid;
    traj.steps = run.steps;
    traj.final_delta = delta;
    traj.observables.assign(options.observables.size(), {});
    for (const Vec& v : run.states) {
        for (std::size_t o = 0; o < options.observables.size(); ++o) {
            traj.observables[o].push_back(v.dot(options.observables[o] * v).real());
        }
        traj.states.push_back(StateVector::normalized(v));
    }
    for (const Vec& v : run.states) traj.max_norm_defect = std::max(traj.max_norm_defect, std::abs(v.norm() - 1.0));
    if (traj.max_norm_defect > 1e-8) throw Error("evolve: norm drift exceeded 1e-8");
    return traj;
}

double fidelity(const StateVector& psi, const StateVector& phi) {
    if (psi.dim() != phi.dim()) throw DimensionMismatch("fidelity: dimension mismatch");
    return std::min(1.0, std::norm(psi.amplitudes().dot(phi.amplitudes())));
}

ProtocolHamiltonian::ProtocolHamiltonian(const ModelParams& params, std::optional<AgpCoefficients> coeffs,
                                         std::optional<ParitySector> sector)
    : schedule_(params.schedule), coeffs_(std::move(coeffs)) {
    const SpinBosonOps ops(params.space);
    const AgpBasis basis = agp_basis(ops, params.gamma, params.eta);
    auto r = [&](const Mat& m) { return sector ? sector->restrict(m) : m; };
    h0_ = r(rabi_matrix(ops, params.gamma, params.eta, 0.0));
    v_ = r(params.eta * ops.sx_x);
    ac_ = r(basis.cavity.matrix());
    aa_ = r(basis.atomic.matrix());
}

Mat ProtocolHamiltonian::at_lambda(double lam) const { return h0_ + lam * v_; }

Mat ProtocolHamiltonian::operator()(double t) const {
    Mat h = h0_ + schedule_.lambda(t) * v_;
    if (coeffs_) {
        const double ld = schedule_.lambda_dot(t);
        const CoefficientPair c = coeffs_->at(t);
        h += (ld * c.alpha_c) * ac_ + (ld * c.alpha_a) * aa_;
    }
    return h;
}

ProtocolResult run_protocol(const ModelParams& params, const std::optional<AgpCoefficients>& coeffs,
                            const ProtocolOptions& options) {
    if (!(params.gamma >= 1e-8)) throw DomainError("protocol_fidelity requires Gamma >= 1e-8");
    const FockSpace& space = params.space;
    // Bare ground state |down, 0> has parity -1.
    const int sector_sign = -1;
    const ParitySector sector(space, sector_sign);
    const ProtocolHamiltonian h(params, coeffs, sector);
    const Vec psi0_full = basis_state(space, 1, 0);
    const StateVector psi0(sector.restrict(psi0_full));

    EvolveOptions eo = options.evolve;
    eo.observables.clear();
    const Trajectory traj = evolve(std::cref(h), psi0, {0.0, params.tau()}, eo);

    Eigen::SelfAdjointEigenSolver<Mat> target(h.at_lambda(1.0));
    const StateVector target_sector = StateVector::normalized(target.eigenvectors().col(0));
    const OperatorMatrix h1 = rabi_hamiltonian(params, 1.0);
    const GroundState global = ground_state(h1);

    ProtocolResult res;
    res.parity_sector = sector_sign;
    res.fidelity = fidelity(traj.states.back(), target_sector);
    res.fidelity_global = fidelity(StateVector::normalized(sector.expand(traj.states.back().amplitudes())), global.psi);
    res.steps = traj.steps;
    res.final_delta = traj.final_delta;
    return res;
}

double protocol_fidelity(const ModelParams& params, const std::optional<AgpCoefficients>& coeffs,
                         const ProtocolOptions& options) {
    return run_protocol(params, coeffs, options).fidelity;
}

}  // namespace rabicd
