// Acceptance checks: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion numbers...]; no arguments runs all eleven.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rabicd/analysis.hpp"
#include "rabicd/floquet.hpp"
#include "rabicd/parallel.hpp"

using namespace rabicd;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

template <class... T>
std::string fmt(const char* f, T... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const int kWorkers = hardware_workers();

// Lambda nodes 0, 1/2, 1 sit at t = 0, tau/2, tau.
double time_for_lambda(double lam) { return lam; }

Outcome trace_identities() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int n = 1; n <= 50; ++n) {
        const FockSpace sp(n);
        const Mat a = annihilation(sp).matrix();
        const Mat x = a.adjoint() + a;
        const Mat p = a.adjoint() - a;
        const double nn = n;
        const Mat x2 = x * x;
        worst = std::max({worst, std::abs(x2.trace() - nn * (nn + 1)), std::abs((p * p).trace() + nn * (nn + 1)),
                          std::abs(Mat::Identity(n + 1, n + 1).trace() - (nn + 1)),
                          std::abs((x2 * x2).trace() - nn * (2 * nn * nn + nn - 1))});
        const Mat lifted = embed(qubit_identity(), OperatorMatrix(x2)).matrix();
        worst = std::max(worst, std::abs(lifted.trace() - 2 * nn * (nn + 1)));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst <= 1e-10 && secs < 1.0,
            fmt("max |identity error| = %.3g over n = 1..50 (tol 1e-10) in %.3f s (limit 1 s)", worst, secs)};
}

Outcome analytic_minimizer() {
    OptimizerConfig cfg;
    cfg.lock_coefficients = true;
    const MetricSpec spec;
    double worst = 0.0;
    int cells = 0;
    for (double g : {0.1, 1.0, 10.0})
        for (double eta : {0.25, 0.8})
            for (double lam : {0.0, 0.5, 1.0})
                for (int n : {1, 5, 20}) {
                    const ModelParams p(g, eta, 1.0, n);
                    const SliceResult r = minimize_action_slice(spec, p, time_for_lambda(lam), cfg);
                    worst = std::max(worst, std::abs(r.alpha_c - analytic_x1(g, eta, p.schedule.lambda(lam), n)));
                    ++cells;
                }
    return {worst <= 1e-6, fmt("max |x1 - analytic| = %.3g over %d cells (tol 1e-6)", worst, cells)};
}

Outcome dispersive_limit() {
    OptimizerConfig cfg;
    cfg.lock_coefficients = true;
    const MetricSpec spec;
    const double eta = 0.25;
    std::vector<double> dist;
    double err50 = 0.0;
    for (int n : {50, 100, 200, 400}) {
        const SliceResult r = minimize_action_slice(spec, ModelParams(1e-4, eta, 1.0, n), 1.0, cfg);
        if (n == 50) err50 = std::abs(r.alpha_c + 1.0 / (1.0 + 4 * eta * eta / n));
        dist.push_back(std::abs(r.alpha_c + 1.0));
    }
    const bool approach = std::is_sorted(dist.rbegin(), dist.rend()) && dist.back() < dist.front();
    return {err50 <= 1e-6 && approach,
            fmt("n=50 error %.3g (tol 1e-6); |x1+1| at n=50,100,200,400: %.3g %.3g %.3g %.3g", err50, dist[0],
                dist[1], dist[2], dist[3])};
}

bool close_component(double a, double b) {
    const double m = std::max(std::abs(a), std::abs(b));
    return m <= 1e-6 || std::abs(a - b) < 0.05 * m;
}

Outcome cutoff_pathology() {
    OptimizerConfig locked;
    locked.lock_coefficients = true;
    const MetricSpec trace;
    const SliceResult t30 = minimize_action_slice(trace, ModelParams(1.0, 0.8, 1.0, 30), 0.5, locked);
    const SliceResult t60 = minimize_action_slice(trace, ModelParams(1.0, 0.8, 1.0, 60), 0.5, locked);
    const double lam = Schedule::sin_squared(1.0).lambda(0.5);
    const bool shrinks = std::abs(t60.alpha_c) < std::abs(t30.alpha_c) &&
                         std::abs(t30.alpha_c - analytic_x1(1.0, 0.8, lam, 30)) <= 1e-6 &&
                         std::abs(t60.alpha_c - analytic_x1(1.0, 0.8, lam, 60)) <= 1e-6;
    std::string detail = fmt("trace x1(30)=%.4f x1(60)=%.4f", t30.alpha_c, t60.alpha_c);
    bool stable = true;
    for (MetricKind k : {MetricKind::CoherentWeighted, MetricKind::SuperradiantVariance}) {
        MetricSpec spec;
        spec.kind = k;
        const SliceResult a = minimize_action_slice(spec, ModelParams(1.0, 0.8, 1.0, 30), 0.5, OptimizerConfig{});
        const SliceResult b = minimize_action_slice(spec, ModelParams(1.0, 0.8, 1.0, 60), 0.5, OptimizerConfig{});
        stable = stable && close_component(a.alpha_c, b.alpha_c) && close_component(a.alpha_a, b.alpha_a);
        detail += fmt("; %s (%.4f,%.4f)->(%.4f,%.4f)", to_string(k).c_str(), a.alpha_c, a.alpha_a, b.alpha_c,
                      b.alpha_a);
    }
    return {shrinks && stable, detail + " (tol 5% per component)"};
}

Protocol metric_protocol(MetricKind k, double gamma_threshold, const std::string& name) {
    Protocol p;
    p.kind = ProtocolKind::Metric;
    p.metric.kind = k;
    p.metric.gamma_threshold = gamma_threshold;
    p.name = name;
    return p;
}

Outcome fig3() {
    const std::vector<double> gammas{0.1, 1.0, 10.0};
    const std::vector<double> etas{0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
    std::vector<Protocol> protos{Protocol{ProtocolKind::CdFree, {}, "cd_free"},
                                 metric_protocol(MetricKind::CoherentWeighted, 1e-3, "coherent"),
                                 metric_protocol(MetricKind::SuperradiantVariance, 1e-3, "superradiant"),
                                 metric_protocol(MetricKind::FilteredTrace, 1e-2, "filtered(1e-2)"),
                                 metric_protocol(MetricKind::FilteredTrace, 1e-3, "filtered(1e-3)"),
                                 metric_protocol(MetricKind::FilteredTrace, 1e-4, "filtered(1e-4)")};
    SweepOptions so;
    so.workers = kWorkers;
    const SweepResult r = sweep(ModelParams(1.0, 0.25, 1.0), gammas, etas, protos, so);
    bool all_ge = r.failures() == 0;
    double worst_margin = 1.0;
    std::string worst_cell;
    std::string gains;
    bool gain_ok = true;
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        for (std::size_t ei = 0; ei < etas.size(); ++ei) {
            const double free = r.at(gi, ei, 0).fidelity;
            double best_gain = -1.0;
            for (std::size_t pi = 1; pi < protos.size(); ++pi) {
                const double m = r.at(gi, ei, pi).fidelity - free;
                best_gain = std::max(best_gain, m);
                if (m < worst_margin) {
                    worst_margin = m;
                    worst_cell = fmt("G=%g eta=%g %s", gammas[gi], etas[ei], protos[pi].name.c_str());
                }
                if (m < 0.0) all_ge = false;
            }
            if (ei + 1 == etas.size() && gi < 2) {
                gains += fmt(" panel G=%g eta=%g gain %.4f;", gammas[gi], etas[ei], best_gain);
                gain_ok = gain_ok && best_gain >= 0.02;
            }
        }
    }
    return {all_ge && gain_ok, fmt("min(F_metric - F_free) = %.3g at %s;", worst_margin, worst_cell.c_str()) + gains +
                                   " (need >= 0 everywhere, >= 0.02 at largest eta in Gamma=0.1, 1)"};
}

Outcome fig5() {
    const std::vector<double> gammas{0.1, 1.0, 10.0};
    const std::vector<double> etas{0.25, 0.5, 1.0};
    const std::vector<Protocol> protos{Protocol{ProtocolKind::Dispersive, {}, "dispersive"},
                                       Protocol{ProtocolKind::Optimized, {}, "optimized"}};
    SweepOptions so;
    so.workers = kWorkers;
    const SweepResult r = sweep(ModelParams(1.0, 0.25, 1.0), gammas, etas, protos, so);
    bool dominate = r.failures() == 0;
    std::vector<double> factors;
    for (std::size_t gi = 0; gi < gammas.size(); ++gi)
        for (std::size_t ei = 0; ei < etas.size(); ++ei) {
            const double d = 1.0 - r.at(gi, ei, 0).fidelity;
            const double o = 1.0 - r.at(gi, ei, 1).fidelity;
            dominate = dominate && o <= d;
            factors.push_back(o > 0.0 ? d / o : std::numeric_limits<double>::infinity());
        }
    std::vector<double> sorted = factors;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    return {dominate && median >= 3.0,
            fmt("optimized <= dispersive infidelity in all cells: %s; median improvement %.3g, min %.3g (need >= 3)",
                dominate ? "yes" : "no", median, sorted.front())};
}

Outcome floquet() {
    const ModelParams p(1.0, 1.5, 1.0);
    MetricSpec spec;
    spec.kind = MetricKind::SuperradiantVariance;
    const AgpCoefficients coeffs = coefficient_trajectory(spec, p, 101, OptimizerConfig{});
    FloquetConfig c40;
    FloquetConfig c80;
    c80.nu = 80.0;
    const double f40 = stroboscopic_compare(p, c40, coeffs).mean_fidelity;
    const double f80 = stroboscopic_compare(p, c80, coeffs).mean_fidelity;
    const double ratio = (1.0 - f40) / (1.0 - f80);
    return {f40 >= 0.995 && ratio >= 2.5 && ratio <= 6.0,
            fmt("mean fidelity nu=40: %.5f (need >= 0.995), nu=80: %.5f; deviation ratio %.3g (need [2.5, 6])", f40,
                f80, ratio)};
}

Outcome magnus() {
    double worst = 0.0;
    for (double nu : {10.0, 40.0, 80.0}) {
        worst = std::max(worst, std::abs(magnus_integral_quadrature(1, nu) + std::numbers::pi / (nu * nu)));
        worst = std::max({worst, std::abs(magnus_integral_quadrature(2, nu)), std::abs(magnus_integral_quadrature(3, nu))});
        worst = std::max(worst, std::abs(magnus_integral(1, nu) + std::numbers::pi / (nu * nu)));
    }
    return {worst <= 1e-8, fmt("max |quadrature - analytic| = %.3g for k = 1..3, nu in {10, 40, 80} (tol 1e-8)", worst)};
}

Outcome table1() {
    struct Row {
        double gamma, eta;
        bool ordered;
    };
    const std::vector<Row> rows{{1.0, 0.25, true}, {1.0, 0.8, false}, {0.1, 1.0, true}, {10.0, 1.0, false}};
    std::vector<MetricSpec> metrics(4);
    metrics[0].kind = MetricKind::FullTrace;
    metrics[1].kind = MetricKind::CoherentWeighted;
    metrics[2].kind = MetricKind::SuperradiantVariance;
    metrics[3].kind = MetricKind::FilteredTrace;
    CorrelationOptions o;
    o.workers = kWorkers;
    bool ok = true;
    std::string detail;
    for (const Row& row : rows) {
        const CorrelationReport r = correlation_study(ModelParams(row.gamma, row.eta, 1.0), metrics, CoefficientGrid{}, o);
        bool neg = true;
        for (double s : r.spearman) neg = neg && s < 0.0;
        const bool ord = !row.ordered || std::abs(r.spearman[2]) > std::abs(r.spearman[0]);
        ok = ok && neg && ord;
        detail += fmt(" (G=%g,eta=%g): trace %.2f coherent %.2f superradiant %.2f filtered %.2f;", row.gamma, row.eta,
                      r.spearman[0], r.spearman[1], r.spearman[2], r.spearman[3]);
    }
    return {ok, "r_s" + detail + " (need all < 0, |superradiant| > |trace| in rows 1 and 3)"};
}

Outcome dynamics_integrity() {
    // Full-space CD evolution so that parity drift is observable.
    const ModelParams p(1.0, 0.8, 1.0);
    MetricSpec spec;
    spec.kind = MetricKind::CoherentWeighted;
    const AgpCoefficients coeffs = coefficient_trajectory(spec, p, 101, OptimizerConfig{});
    const ProtocolHamiltonian h(p, coeffs, std::nullopt);
    const SpinBosonOps ops(p.space);
    EvolveOptions eo;
    eo.observables = {ops.parity.cast<cplx>().asDiagonal().toDenseMatrix()};
    std::vector<double> grid;
    for (int k = 0; k <= 50; ++k) grid.push_back(k / 50.0);
    const StateVector psi0 = StateVector::normalized(basis_state(p.space, 1, 0) + 0.5 * basis_state(p.space, 0, 1));
    const Trajectory tr = evolve(std::cref(h), psi0, grid, eo);
    double drift = 0.0;
    for (double v : tr.observables[0]) drift = std::max(drift, std::abs(v - tr.observables[0].front()));

    double adiabatic = 1.0;
    for (double eta : {0.25, 0.8}) adiabatic = std::min(adiabatic, protocol_fidelity(ModelParams(1.0, eta, 100.0), std::nullopt));

    auto run = [&](long long steps) {
        Vec psi = psi0.amplitudes();
        propagate(std::cref(h), psi, 0.0, 1.0, steps);
        return psi;
    };
    const Vec ref = run(1600);
    const double ratio = (run(200) - ref).norm() / (run(400) - ref).norm();
    const bool ok = tr.max_norm_defect <= 1e-8 && drift <= 1e-6 && adiabatic >= 0.999 && ratio >= 3.0 && ratio <= 5.0;
    return {ok, fmt("norm defect %.3g (tol 1e-8), parity drift %.3g (tol 1e-6), min adiabatic fidelity %.6f "
                    "(need >= 0.999), halving ratio %.3f (need [3, 5])",
                    tr.max_norm_defect, drift, adiabatic, ratio)};
}

Outcome regime_map() {
    const Regime a = regime_classify(1.0, 0.1, FockSpace(default_cutoff(0.1))).label;
    const Regime b = regime_classify(1.0, 0.4, FockSpace(default_cutoff(0.4))).label;
    std::vector<int> labels(100);
    parallel_for(labels.size(), kWorkers, [&](std::size_t k) {
        const double eta = 0.02 * static_cast<double>(k + 1);
        labels[k] = static_cast<int>(regime_classify(1.0, eta, FockSpace(default_cutoff(eta))).label);
    });
    const bool monotone = std::is_sorted(labels.begin(), labels.end());
    const std::set<int> seen(labels.begin(), labels.end());
    double first_usc = 0, first_dsc = 0;
    for (std::size_t k = labels.size(); k-- > 0;) {
        if (labels[k] >= 1) first_usc = 0.02 * static_cast<double>(k + 1);
        if (labels[k] == 2) first_dsc = 0.02 * static_cast<double>(k + 1);
    }
    const bool ok = a == Regime::SC && b == Regime::USC && monotone && seen.size() == 3;
    return {ok, fmt("(1,0.1)=%s (1,0.4)=%s; eta sweep 0.02..2 monotone: %s, USC from %.2f, DSC from %.2f",
                    to_string(a).c_str(), to_string(b).c_str(), monotone ? "yes" : "no", first_usc, first_dsc)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"trace identities", trace_identities},   {"analytic minimizer", analytic_minimizer},
        {"dispersive limit", dispersive_limit},   {"cutoff pathology and cure", cutoff_pathology},
        {"regularized metrics vs CD-free", fig3}, {"optimized vs dispersive CD", fig5},
        {"Floquet fidelity", floquet},            {"Magnus integrals", magnus},
        {"rank correlation signs", table1},       {"dynamics integrity", dynamics_integrity},
        {"regime map", regime_map}};
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %s: %s: %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
