#pragma once

#include <optional>

#include "rabicd/dynamics.hpp"
#include "rabicd/metrics.hpp"

namespace rabicd {

struct ConstraintSpec {
    double bound = 5.0;  // |alpha_c|, |alpha_a| <= bound
};

struct OptimizerConfig {
    int grid_points = 21;        // per axis over [-bound, bound]
    double ftol = 1e-8;
    double xtol = 1e-9;          // simplex size for action slices
    double fidelity_xtol = 1e-6; // simplex size for the fidelity search
    int max_iterations = 500;
    bool lock_coefficients = false;  // alpha_c = alpha_a
    bool warm_start = true;
    int search_steps = 1000;     // fixed evolution resolution inside the fidelity search
    int workers = 1;
    ConstraintSpec constraint;
};

struct SliceResult {
    double alpha_c = 0.0;
    double alpha_a = 0.0;
    double value = 0.0;
    bool converged = true;
    bool on_boundary = false;
};

SliceResult minimize_form(const MetricForm& form, const OptimizerConfig& cfg,
                          std::optional<CoefficientPair> warm = std::nullopt);
SliceResult minimize_action_slice(const MetricSpec& spec, const ModelParams& params, double t,
                                  const OptimizerConfig& cfg, std::optional<CoefficientPair> warm = std::nullopt);

struct TrajectoryResult {
    AgpCoefficients coeffs;
    std::vector<SliceResult> slices;
    bool all_converged = true;
};

TrajectoryResult optimize_trajectory(const MetricSpec& spec, const ModelParams& params, int slices,
                                     const OptimizerConfig& cfg);
AgpCoefficients coefficient_trajectory(const MetricSpec& spec, const ModelParams& params, int slices,
                                       const OptimizerConfig& cfg);

struct FidelityOptimum {
    double alpha_c = 0.0;
    double alpha_a = 0.0;
    double fidelity = 0.0;         // converged re-evaluation at the optimum
    double fidelity_global = 0.0;
    double search_fidelity = 0.0;  // objective value at the search resolution
    bool converged = true;
    bool on_boundary = false;
    int evaluations = 0;
};

FidelityOptimum optimize_fidelity(const ModelParams& params, const ConstraintSpec& constraint,
                                  const OptimizerConfig& cfg, const ProtocolOptions& final_options = {});

}  // namespace rabicd
