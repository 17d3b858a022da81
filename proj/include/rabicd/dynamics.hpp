#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rabicd/agp.hpp"

namespace rabicd {

struct GroundState {
    double energy;
    StateVector psi;
};

// Lowest eigenpair; with a parity sector the search is restricted to that block.
// The dimension must be 2(n+1) when a sector is requested.
GroundState ground_state(const OperatorMatrix& h, std::optional<int> parity_sector = std::nullopt);

// Index subset of one parity block.
class ParitySector {
public:
    ParitySector(const FockSpace& space, int sector);

    int sector() const { return sector_; }
    int dim() const { return static_cast<int>(idx_.size()); }
    int full_dim() const { return full_; }
    const std::vector<int>& indices() const { return idx_; }
    Mat restrict(const Mat& m) const;
    Vec restrict(const Vec& v) const;
    Vec expand(const Vec& v) const;

private:
    int sector_;
    int full_;
    std::vector<int> idx_;
};

using HamiltonianFn = std::function<Mat(double)>;

struct EvolveOptions {
    int base_steps = 1000;   // steps over the whole grid span at the coarsest resolution
    double tolerance = 1e-8; // final-state change between successive doublings
    int max_doublings = 6;
    bool adaptive = true;    // false: single run at base_steps
    std::vector<Mat> observables;  // expectation values recorded at grid times
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<std::vector<double>> observables;  // [observable][time]
    long long steps = 0;
    double final_delta = 0.0;  // last doubling change, 0 when not adaptive
    double max_norm_defect = 0.0;
};

// psi <- exp(-i h dt) psi, converged to rounding level.
void apply_exponential(const Mat& h, double dt, Vec& psi);
// Midpoint-frozen propagation over [t0, t1] with a fixed step count.
void propagate(const HamiltonianFn& h, Vec& psi, double t0, double t1, long long steps);

Trajectory evolve(const HamiltonianFn& h, const StateVector& psi0, const std::vector<double>& t_grid,
                  const EvolveOptions& options = {});

double fidelity(const StateVector& psi, const StateVector& phi);

struct ProtocolOptions {
    EvolveOptions evolve;
};

struct ProtocolResult {
    double fidelity = 0.0;         // against the lambda=1 ground state in the sector of psi0
    double fidelity_global = 0.0;  // against the global lambda=1 ground state
    int parity_sector = -1;
    long long steps = 0;
    double final_delta = 0.0;
};

ProtocolResult run_protocol(const ModelParams& params, const std::optional<AgpCoefficients>& coeffs,
                            const ProtocolOptions& options = {});
double protocol_fidelity(const ModelParams& params, const std::optional<AgpCoefficients>& coeffs,
                         const ProtocolOptions& options = {});

// Time-dependent H_R(lambda(t)) + lambdot(t) A(t), restricted to a parity sector.
class ProtocolHamiltonian {
public:
    ProtocolHamiltonian(const ModelParams& params, std::optional<AgpCoefficients> coeffs,
                        std::optional<ParitySector> sector);
    Mat operator()(double t) const;
    Mat at_lambda(double lam) const;

private:
    Schedule schedule_;
    std::optional<AgpCoefficients> coeffs_;
    Mat h0_;
    Mat v_;
    Mat ac_;
    Mat aa_;
};

}  // namespace rabicd
