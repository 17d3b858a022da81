#include "rabicd/optimize.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "rabicd/errors.hpp"
#include "rabicd/nelder_mead.hpp"
#include "rabicd/parallel.hpp"

namespace rabicd {

namespace {

std::vector<double> axis(int points, double bound) {
    if (points < 2) throw DomainError("coarse grid needs at least two points per axis");
    std::vector<double> a(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) a[static_cast<std::size_t>(i)] = -bound + 2.0 * bound * i / (points - 1);
    return a;
}

bool at_boundary(double x, double bound) { return std::abs(x) >= bound * (1.0 - 1e-9); }

CoefficientPair to_pair(const std::vector<double>& x, bool locked) {
    return locked ? CoefficientPair{x[0], x[0]} : CoefficientPair{x[0], x[1]};
}

struct Objective {
    std::function<double(CoefficientPair)> f;
    bool locked;
    double operator()(const std::vector<double>& x) const { return f(to_pair(x, locked)); }
};

// Coarse grid scan returning the best start point. Values within ftol of the best count as ties,
// resolved toward the smallest coefficient norm and then the first index.
std::vector<double> coarse_best(const Objective& obj, const OptimizerConfig& cfg, int workers, int* evals) {
    const std::vector<double> a = axis(cfg.grid_points, cfg.constraint.bound);
    std::vector<std::vector<double>> pts;
    if (obj.locked) {
        for (double x : a) pts.push_back({x});
    } else {
        for (double x : a) {
            for (double y : a) pts.push_back({x, y});
        }
    }
    std::vector<double> vals(pts.size());
    parallel_for(pts.size(), workers, [&](std::size_t i) { vals[i] = obj(pts[i]); });
    if (evals) *evals += static_cast<int>(pts.size());
    std::size_t best = 0;
    for (std::size_t i = 1; i < vals.size(); ++i) {
        if (vals[i] < vals[best]) best = i;
    }
    const double tie = vals[best] + cfg.ftol * std::max(1.0, std::abs(vals[best]));
    auto norm2 = [&](std::size_t i) {
        double s = 0.0;
        for (double x : pts[i]) s += x * x;
        return s;
    };
    std::size_t pick = best;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] <= tie && norm2(i) < norm2(pick)) pick = i;
    }
    return pts[pick];
}

}  // namespace

SliceResult minimize_form(const MetricForm& form, const OptimizerConfig& cfg, std::optional<CoefficientPair> warm) {
    const bool locked = cfg.lock_coefficients;
    const Objective obj{[&form](CoefficientPair c) { return form.value(c); }, locked};
    const double spacing = 2.0 * cfg.constraint.bound / (cfg.grid_points - 1);
    std::vector<double> start;
    double step = spacing;
    if (warm) {
        start = locked ? std::vector<double>{warm->alpha_c} : std::vector<double>{warm->alpha_c, warm->alpha_a};
        step = 0.25 * spacing;
    } else {
        start = coarse_best(obj, cfg, 1, nullptr);
    }
    SimplexOptions so;
    so.initial_step = step;
    so.lower = -cfg.constraint.bound;
    so.upper = cfg.constraint.bound;
    so.ftol = cfg.ftol;
    so.xtol = cfg.xtol;
    so.max_iterations = cfg.max_iterations;
    const SimplexResult r = nelder_mead(obj, start, so);
    const CoefficientPair c = to_pair(r.x, locked);
    SliceResult out;
    out.alpha_c = c.alpha_c;
    out.alpha_a = c.alpha_a;
    out.value = r.f;
    out.converged = r.converged;
    out.on_boundary = at_boundary(c.alpha_c, cfg.constraint.bound) || at_boundary(c.alpha_a, cfg.constraint.bound);
    return out;
}

SliceResult minimize_action_slice(const MetricSpec& spec, const ModelParams& params, double t,
                                  const OptimizerConfig& cfg, std::optional<CoefficientPair> warm) {
    const double lam = params.schedule.lambda(t);
    const SpinBosonOps ops(params.space);
    const MetricForm form(spec, ops, params.gamma, params.eta, lam);
    if (params.eta == 0.0) return {0.0, 0.0, form.value(0.0, 0.0), true, false};
    return minimize_form(form, cfg, warm);
}

TrajectoryResult optimize_trajectory(const MetricSpec& spec, const ModelParams& params, int slices,
                                     const OptimizerConfig& cfg) {
    if (slices < 2) throw DomainError("coefficient trajectory needs at least two slices");
    const SpinBosonOps ops(params.space);
    const double tau = params.tau();
    std::vector<double> times(static_cast<std::size_t>(slices));
    for (int k = 0; k < slices; ++k) times[static_cast<std::size_t>(k)] = tau * k / (slices - 1);
    times.back() = tau;

    TrajectoryResult res;
    res.slices.resize(times.size());
    auto solve = [&](std::size_t k, std::optional<CoefficientPair> warm) {
        const MetricForm form(spec, ops, params.gamma, params.eta, params.schedule.lambda(times[k]));
        if (params.eta == 0.0) return SliceResult{0.0, 0.0, form.value(0.0, 0.0), true, false};
        return minimize_form(form, cfg, warm);
    };
    if (cfg.warm_start) {
        std::optional<CoefficientPair> warm;
        for (std::size_t k = 0; k < times.size(); ++k) {
            res.slices[k] = solve(k, warm);
            warm = CoefficientPair{res.slices[k].alpha_c, res.slices[k].alpha_a};
        }
    } else {
        parallel_for(times.size(), cfg.workers, [&](std::size_t k) { res.slices[k] = solve(k, std::nullopt); });
    }
    std::vector<CoefficientPair> values;
    for (const auto& s : res.slices) {
        values.push_back({s.alpha_c, s.alpha_a});
        res.all_converged = res.all_converged && s.converged;
    }
    res.coeffs = AgpCoefficients::trajectory(std::move(times), std::move(values));
    return res;
}

AgpCoefficients coefficient_trajectory(const MetricSpec& spec, const ModelParams& params, int slices,
                                       const OptimizerConfig& cfg) {
    return optimize_trajectory(spec, params, slices, cfg).coeffs;
}

FidelityOptimum optimize_fidelity(const ModelParams& params, const ConstraintSpec& constraint,
                                  const OptimizerConfig& cfg_in, const ProtocolOptions& final_options) {
    if (!(params.gamma >= 1e-8)) throw DomainError("optimize_fidelity requires Gamma >= 1e-8");
    OptimizerConfig cfg = cfg_in;
    cfg.constraint = constraint;
    ProtocolOptions search;
    search.evolve.adaptive = false;
    search.evolve.base_steps = cfg.search_steps;

    std::atomic<int> evals{0};
    const Objective obj{[&](CoefficientPair c) {
                            ++evals;
                            return 1.0 - protocol_fidelity(params, AgpCoefficients::constant(c.alpha_c, c.alpha_a),
                                                           search);
                        },
                        cfg.lock_coefficients};
    FidelityOptimum out;
    if (params.eta == 0.0) {
        out.search_fidelity = 1.0 - obj(cfg.lock_coefficients ? std::vector<double>{0.0} : std::vector<double>{0.0, 0.0});
    } else {
        const std::vector<double> start = coarse_best(obj, cfg, cfg.workers, nullptr);
        SimplexOptions so;
        so.initial_step = 2.0 * constraint.bound / (cfg.grid_points - 1);
        so.lower = -constraint.bound;
        so.upper = constraint.bound;
        so.ftol = cfg.ftol;
        so.xtol = cfg.fidelity_xtol;
        so.max_iterations = cfg.max_iterations;
        const SimplexResult r = nelder_mead(obj, start, so);
        const CoefficientPair c = to_pair(r.x, cfg.lock_coefficients);
        out.alpha_c = c.alpha_c;
        out.alpha_a = c.alpha_a;
        out.search_fidelity = 1.0 - r.f;
        out.converged = r.converged;
        out.on_boundary = at_boundary(c.alpha_c, constraint.bound) || at_boundary(c.alpha_a, constraint.bound);
    }
    const ProtocolResult fin =
        run_protocol(params, AgpCoefficients::constant(out.alpha_c, out.alpha_a), final_options);
    out.fidelity = fin.fidelity;
    out.fidelity_global = fin.fidelity_global;
    out.evaluations = evals.load();
    return out;
}

}  // namespace rabicd
