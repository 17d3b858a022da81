#pragma once

#include <string>
#include <vector>

#include "rabicd/optimize.hpp"

namespace rabicd {

// Composite Simpson integral of the metric over lambda in [0, 1] at fixed coefficients.
double accumulated_action(const MetricSpec& spec, const ModelParams& params, CoefficientPair coeffs,
                          int quad_points = 101);
// Same integral on a uniform time grid, int S(lambda(t)) lambdot(t) dt.
double accumulated_action_time(const MetricSpec& spec, const ModelParams& params, CoefficientPair coeffs,
                               int quad_points = 101);

std::vector<double> average_ranks(const std::vector<double>& x);
double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct CoefficientGrid {
    int points = 15;  // per axis
    double lower = -5.0;
    double upper = 5.0;
    bool exclude_origin = true;

    std::vector<CoefficientPair> pairs() const;
    std::string describe() const;
};

struct CorrelationSample {
    CoefficientPair coeffs;
    std::vector<double> actions;  // one per metric
    double fidelity = 0.0;
};

struct CorrelationOptions {
    int quad_points = 101;
    int steps = 1000;  // fixed evolution resolution per sample
    int workers = 1;
};

struct CorrelationReport {
    std::vector<MetricSpec> metrics;
    std::vector<CorrelationSample> samples;
    std::vector<double> spearman;  // one per metric
    CoefficientGrid grid;
};

CorrelationReport correlation_study(const ModelParams& params, const std::vector<MetricSpec>& metrics,
                                    const CoefficientGrid& grid, const CorrelationOptions& options = {});

struct LandscapeGrid {
    double c_lower = -5.0, c_upper = 5.0;
    double a_lower = -5.0, a_upper = 5.0;
    int c_points = 41, a_points = 41;
};

struct LandscapeReport {
    std::vector<double> alpha_c;
    std::vector<double> alpha_a;
    Eigen::MatrixXd values;  // (c index, a index)
    Eigen::MatrixXd grad_c;  // NaN on the grid boundary
    Eigen::MatrixXd grad_a;
};

LandscapeReport landscape(const MetricSpec& spec, const ModelParams& params, double t, const LandscapeGrid& grid);

enum class Regime { SC, USC, DSC };
enum class RwaProbe { Dynamic, Ground };

std::string to_string(Regime r);
std::string to_string(RwaProbe p);
RwaProbe parse_rwa_probe(const std::string& name);

struct RegimeReport {
    Regime label = Regime::SC;
    double rwa_fidelity = 1.0;
    double photon_number = 0.0;
    double eta_critical = 0.0;
    RwaProbe probe = RwaProbe::Dynamic;
};

// DSC if the Rabi ground state has <n> >= 1, else USC if the JC/Rabi fidelity probe <= threshold, else SC.
// The dynamic probe takes the worst fidelity of JC- and Rabi-evolved |up,0> over t in [0, pi/eta].
RegimeReport regime_classify(double gamma, double eta, const FockSpace& space, RwaProbe probe = RwaProbe::Dynamic,
                             double threshold = 0.9);

enum class ProtocolKind { CdFree, Metric, Dispersive, Optimized };

struct Protocol {
    ProtocolKind kind = ProtocolKind::CdFree;
    MetricSpec metric;
    std::string name;
};

Protocol parse_protocol(const std::string& name, const MetricSpec& base);

struct SweepOptions {
    OptimizerConfig optimizer;
    ProtocolOptions protocol;
    int slices = 101;
    int cutoff = 0;  // 0 selects default_cutoff(eta) per cell
    int workers = 1;
};

struct CellRecord {
    double gamma = 0.0;
    double eta = 0.0;
    std::string protocol;
    bool ok = true;
    std::string error;
    double fidelity = 0.0;
    double fidelity_global = 0.0;
    int parity_sector = -1;
    CoefficientPair coeffs;  // constant value, or slice mean for trajectories
    CoefficientPair peak;    // largest magnitudes
    double norm_atomic_rel = 0.0;
    double norm_cavity_rel = 0.0;
    int cutoff = 0;
    double wall_seconds = 0.0;
};

struct SweepResult {
    std::vector<double> gammas;
    std::vector<double> etas;
    std::vector<std::string> protocols;
    std::vector<CellRecord> records;  // gamma-major, then eta, then protocol
    std::size_t failures() const;
    const CellRecord& at(std::size_t gi, std::size_t ei, std::size_t pi) const;
};

CellRecord run_cell(const ModelParams& params, const Protocol& protocol, const SweepOptions& options);
SweepResult sweep(const ModelParams& templ, const std::vector<double>& gammas, const std::vector<double>& etas,
                  const std::vector<Protocol>& protocols, const SweepOptions& options);

}  // namespace rabicd
