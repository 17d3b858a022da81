#include "rabicd/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rabicd/parallel.hpp"

namespace rabicd::cli {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

std::vector<double> grid(const RunConfig& cfg, const std::string& key) {
    const std::vector<double> v = cfg.reals(key);
    require(!v.empty(), "key '" + key + "': grid is empty");
    return v;
}

void check_common(const RunConfig& cfg) {
    require(cfg.integer("workers") >= 0, "key 'workers': must be >= 0");
    require(cfg.integer("cutoff") >= 0, "key 'cutoff': must be >= 0");
    require(cfg.real("tau") > 0.0, "key 'tau': must be positive");
}

Table sweep_table(const SweepResult& res, bool with_norms) {
    Table t;
    t.name = "records";
    t.columns = {"gamma_ratio", "eta", "protocol", "fidelity", "infidelity", "alpha_c", "alpha_a", "parity_sector",
                 "fidelity_global"};
    if (with_norms) {
        t.columns.insert(t.columns.end(), {"norm_atomic_rel", "norm_cavity_rel", "alpha_c_peak", "alpha_a_peak"});
    }
    t.columns.insert(t.columns.end(), {"cutoff", "status"});
    const double nan = std::nan("");
    for (const CellRecord& r : res.records) {
        std::vector<Cell> row{r.gamma, r.eta, r.protocol};
        if (r.ok) {
            row.insert(row.end(), {r.fidelity, 1.0 - r.fidelity, r.coeffs.alpha_c, r.coeffs.alpha_a,
                                   static_cast<long long>(r.parity_sector), r.fidelity_global});
        } else {
            row.insert(row.end(), {nan, nan, nan, nan, static_cast<long long>(r.parity_sector), nan});
        }
        if (with_norms) {
            for (double v : {r.norm_atomic_rel, r.norm_cavity_rel, r.peak.alpha_c, r.peak.alpha_a})
                row.push_back(r.ok ? v : nan);
        }
        row.push_back(static_cast<long long>(r.cutoff));
        row.push_back(r.ok ? std::string("ok") : "error: " + r.error);
        t.add(std::move(row));
    }
    return t;
}

CommandResult cmd_sweep(const RunConfig& cfg, bool manifold) {
    const std::vector<double> gammas = grid(cfg, "gammas");
    const std::vector<double> etas = grid(cfg, "etas");
    const std::vector<std::string> names = cfg.texts("protocols");
    require(!names.empty(), "key 'protocols': list is empty");
    const MetricSpec base = metric_spec(cfg, "full_trace");
    std::vector<Protocol> protocols;
    for (const auto& n : names) {
        try {
            protocols.push_back(parse_protocol(n, base));
        } catch (const DomainError& e) {
            throw ConfigError(std::string("key 'protocols': ") + e.what());
        }
    }
    for (double g : gammas) require(g >= 0.0, "key 'gammas': values must be >= 0");
    for (double e : etas) require(e >= 0.0, "key 'etas': values must be >= 0");
    SweepOptions so;
    so.optimizer = optimizer_config(cfg);
    so.protocol = protocol_options(cfg);
    so.slices = cfg.integer("slices");
    so.cutoff = cfg.integer("cutoff");
    so.workers = cfg.workers();
    require(so.slices >= 2, "key 'slices': must be >= 2");
    const ModelParams templ = model_params(cfg, gammas.front(), etas.front());
    const SweepResult res = sweep(templ, gammas, etas, protocols, so);

    CommandResult out;
    out.report.command = manifold ? "manifold" : "fidelity-sweep";
    out.report.config = cfg;
    out.report.meta = {{"cells", std::to_string(gammas.size() * etas.size())},
                       {"failures", std::to_string(res.failures())}};
    out.report.tables.push_back(sweep_table(res, manifold));
    out.exit_code = res.failures() > 0 ? kPartialFailure : kOk;
    return out;
}

CommandResult cmd_floquet(const RunConfig& cfg) {
    const ModelParams p = model_params(cfg, cfg.real("gamma"), cfg.real("eta"));
    const FloquetConfig fc = floquet_config(cfg);
    validate(fc, p);
    const MetricSpec spec = metric_spec(cfg, cfg.raw("metric"));
    const TrajectoryResult tr = optimize_trajectory(spec, p, cfg.integer("slices"), optimizer_config(cfg));
    const StroboscopicReport rep = stroboscopic_compare(p, fc, tr.coeffs);

    CommandResult out;
    out.report.command = "floquet";
    out.report.config = cfg;
    out.report.meta = {{"cutoff", std::to_string(p.space.cutoff())}};
    Table s;
    s.name = "summary";
    s.columns = {"gamma_ratio", "eta", "nu", "periods", "mean_fidelity", "mean_infidelity", "max_norm_defect",
                 "max_parity_drift"};
    s.add({p.gamma, p.eta, fc.nu, static_cast<long long>(rep.fidelities.size()), rep.mean_fidelity,
           1.0 - rep.mean_fidelity, rep.max_norm_defect, rep.max_parity_drift});
    Table st;
    st.name = "stroboscopic";
    st.columns = {"period", "time", "fidelity"};
    for (std::size_t m = 0; m < rep.fidelities.size(); ++m)
        st.add({static_cast<long long>(m + 1), rep.strobe_times[m], rep.fidelities[m]});
    Table tr_t;
    tr_t.name = "traces";
    tr_t.columns = {"time", "n_floquet", "sz_floquet", "n_exact", "sz_exact"};
    for (std::size_t i = 0; i < rep.trace_times.size(); ++i)
        tr_t.add({rep.trace_times[i], rep.n_floquet[i], rep.sz_floquet[i], rep.n_exact[i], rep.sz_exact[i]});
    out.report.tables = {s, st, tr_t};
    out.exit_code = tr.all_converged ? kOk : kNonConvergence;
    return out;
}

CommandResult cmd_correlate(const RunConfig& cfg) {
    const ModelParams p = model_params(cfg, cfg.real("gamma"), cfg.real("eta"));
    std::vector<MetricSpec> metrics;
    for (const auto& n : cfg.texts("corr_metrics")) metrics.push_back(metric_spec(cfg, n));
    require(!metrics.empty(), "key 'corr_metrics': list is empty");
    CoefficientGrid g;
    g.points = cfg.integer("corr_points");
    g.lower = cfg.real("corr_lower");
    g.upper = cfg.real("corr_upper");
    g.exclude_origin = cfg.boolean("corr_exclude_origin");
    require(g.points >= 1 && g.upper >= g.lower, "correlation grid: need corr_points >= 1 and corr_upper >= corr_lower");
    CorrelationOptions o;
    o.quad_points = cfg.integer("quad_points");
    o.steps = cfg.integer("corr_steps");
    o.workers = cfg.workers();
    require(o.steps >= 1, "key 'corr_steps': must be >= 1");
    const CorrelationReport rep = correlation_study(p, metrics, g, o);

    CommandResult out;
    out.report.command = "correlate";
    out.report.config = cfg;
    out.report.meta = {{"grid", g.describe()},
                       {"samples", std::to_string(rep.samples.size())},
                       {"cutoff", std::to_string(p.space.cutoff())}};
    Table sp;
    sp.name = "spearman";
    sp.columns = {"metric", "spearman"};
    for (std::size_t k = 0; k < metrics.size(); ++k) sp.add({to_string(metrics[k].kind), rep.spearman[k]});
    Table sm;
    sm.name = "samples";
    sm.columns = {"alpha_c", "alpha_a", "fidelity"};
    for (const auto& m : metrics) sm.columns.push_back("action_" + to_string(m.kind));
    for (const auto& s : rep.samples) {
        std::vector<Cell> row{s.coeffs.alpha_c, s.coeffs.alpha_a, s.fidelity};
        for (double a : s.actions) row.push_back(a);
        sm.add(std::move(row));
    }
    out.report.tables = {sp, sm};
    return out;
}

CommandResult cmd_landscape(const RunConfig& cfg) {
    const ModelParams p = model_params(cfg, cfg.real("gamma"), cfg.real("eta"));
    const MetricSpec spec = metric_spec(cfg, cfg.raw("metric"));
    const double frac = cfg.real("t_fraction");
    require(frac >= 0.0 && frac <= 1.0, "key 't_fraction': must lie in [0, 1]");
    const double t = frac * p.tau();
    LandscapeGrid g;
    g.c_lower = g.a_lower = cfg.real("landscape_lower");
    g.c_upper = g.a_upper = cfg.real("landscape_upper");
    g.c_points = g.a_points = cfg.integer("landscape_points");
    require(g.c_upper > g.c_lower, "landscape: need landscape_upper > landscape_lower");
    const LandscapeReport rep = landscape(spec, p, t, g);
    const SliceResult best = minimize_action_slice(spec, p, t, optimizer_config(cfg));

    CommandResult out;
    out.report.command = "landscape";
    out.report.config = cfg;
    out.report.meta = {{"time", format_real(t)},
                       {"lambda", format_real(p.schedule.lambda(t))},
                       {"cutoff", std::to_string(p.space.cutoff())}};
    Table m;
    m.name = "minimum";
    m.columns = {"alpha_c", "alpha_a", "value", "converged", "on_boundary"};
    m.add({best.alpha_c, best.alpha_a, best.value, static_cast<long long>(best.converged),
           static_cast<long long>(best.on_boundary)});
    Table l;
    l.name = "landscape";
    l.columns = {"alpha_c", "alpha_a", "value", "grad_c", "grad_a"};
    for (std::size_t i = 0; i < rep.alpha_c.size(); ++i)
        for (std::size_t j = 0; j < rep.alpha_a.size(); ++j) {
            const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
            l.add({rep.alpha_c[i], rep.alpha_a[j], rep.values(ii, jj), rep.grad_c(ii, jj), rep.grad_a(ii, jj)});
        }
    out.report.tables = {m, l};
    out.exit_code = best.converged ? kOk : kNonConvergence;
    return out;
}

CommandResult cmd_classify(const RunConfig& cfg) {
    const std::vector<double> gammas = grid(cfg, "gammas");
    const std::vector<double> etas = grid(cfg, "etas");
    const RwaProbe probe = parse_rwa_probe(cfg.raw("rwa_probe"));
    const double threshold = cfg.real("rwa_threshold");
    const int cutoff = cfg.integer("cutoff");
    std::vector<RegimeReport> reps(gammas.size() * etas.size());
    std::vector<int> cuts(reps.size());
    parallel_for(reps.size(), cfg.workers(), [&](std::size_t k) {
        const double eta = etas[k % etas.size()];
        cuts[k] = cutoff > 0 ? cutoff : default_cutoff(eta);
        reps[k] = regime_classify(gammas[k / etas.size()], eta, FockSpace(cuts[k]), probe, threshold);
    });
    CommandResult out;
    out.report.command = "classify";
    out.report.config = cfg;
    out.report.meta = {{"rwa_probe", to_string(probe)}};
    Table t;
    t.name = "regimes";
    t.columns = {"gamma_ratio", "eta", "label", "rwa_fidelity", "photon_number", "eta_critical", "cutoff"};
    for (std::size_t k = 0; k < reps.size(); ++k) {
        const RegimeReport& r = reps[k];
        t.add({gammas[k / etas.size()], etas[k % etas.size()], to_string(r.label), r.rwa_fidelity, r.photon_number,
               r.eta_critical, static_cast<long long>(cuts[k])});
    }
    out.report.tables = {t};
    return out;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"fidelity-sweep", "manifold",  "floquet",
                                                "correlate",      "landscape", "classify"};
    return names;
}

ModelParams model_params(const RunConfig& cfg, double gamma, double eta) {
    require(gamma >= 0.0, "Gamma must be >= 0");
    require(eta >= 0.0, "eta must be >= 0");
    const int n = cfg.integer("cutoff");
    return ModelParams(gamma, eta, Schedule::by_name(cfg.raw("schedule"), cfg.real("tau")),
                       FockSpace(n > 0 ? n : default_cutoff(eta)));
}

MetricSpec metric_spec(const RunConfig& cfg, const std::string& kind) {
    MetricSpec s;
    try {
        s.kind = parse_metric_kind(kind);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    s.gamma_threshold = cfg.real("filter_gamma");
    require(s.gamma_threshold > 0.0, "key 'filter_gamma': must be positive");
    s.beta_inv_temp = cfg.real("beta_inv_temp");
    require(s.beta_inv_temp > 0.0, "key 'beta_inv_temp': must be positive");
    s.filter_mode = cfg.raw("filter_mode") == "raw" ? FilterMode::Raw : FilterMode::Magnitude;
    s.spin_basis = cfg.raw("spin_basis") == "x" ? SpinBasis::X : SpinBasis::Z;
    s.commutator = cfg.raw("commutator") == "truncated" ? CommutatorMode::Truncated : CommutatorMode::Canonical;
    return s;
}

OptimizerConfig optimizer_config(const RunConfig& cfg) {
    OptimizerConfig o;
    o.grid_points = cfg.integer("grid_points");
    o.ftol = cfg.real("ftol");
    o.xtol = cfg.real("xtol");
    o.fidelity_xtol = cfg.real("fidelity_xtol");
    o.max_iterations = cfg.integer("max_iterations");
    o.lock_coefficients = cfg.boolean("lock_coefficients");
    o.warm_start = cfg.boolean("warm_start");
    o.search_steps = cfg.integer("search_steps");
    o.workers = cfg.workers();
    o.constraint.bound = cfg.real("bound");
    require(o.grid_points >= 2, "key 'grid_points': must be >= 2");
    require(o.constraint.bound > 0.0, "key 'bound': must be positive");
    require(o.ftol > 0.0 && o.xtol > 0.0 && o.fidelity_xtol > 0.0, "simplex tolerances must be positive");
    require(o.max_iterations >= 1, "key 'max_iterations': must be >= 1");
    require(o.search_steps >= 1, "key 'search_steps': must be >= 1");
    return o;
}

ProtocolOptions protocol_options(const RunConfig& cfg) {
    ProtocolOptions p;
    p.evolve.base_steps = cfg.integer("base_steps");
    p.evolve.tolerance = cfg.real("step_tolerance");
    p.evolve.max_doublings = cfg.integer("max_doublings");
    require(p.evolve.base_steps >= 1, "key 'base_steps': must be >= 1");
    require(p.evolve.tolerance > 0.0, "key 'step_tolerance': must be positive");
    require(p.evolve.max_doublings >= 0, "key 'max_doublings': must be >= 0");
    return p;
}

FloquetConfig floquet_config(const RunConfig& cfg) {
    FloquetConfig f;
    f.nu = cfg.real("nu");
    f.nu0 = cfg.real("nu0");
    f.beta = cfg.reals("beta");
    f.steps_per_period = cfg.integer("steps_per_period");
    f.samples_per_period = cfg.integer("samples_per_period");
    return f;
}

CommandResult run_command(const std::string& name, const RunConfig& cfg) {
    check_common(cfg);
    if (name == "fidelity-sweep") return cmd_sweep(cfg, false);
    if (name == "manifold") return cmd_sweep(cfg, true);
    if (name == "floquet") return cmd_floquet(cfg);
    if (name == "correlate") return cmd_correlate(cfg);
    if (name == "landscape") return cmd_landscape(cfg);
    if (name == "classify") return cmd_classify(cfg);
    throw ConfigError("unknown command '" + name + "'");
}

int execute(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    CommandResult res;
    try {
        res = run_command(name, cfg);
    } catch (const ConfigError& e) {
        err << "rabicd: config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        err << "rabicd: invalid parameters: " << e.what() << "\n";
        return kConfigError;
    } catch (const ConvergenceError& e) {
        err << "rabicd: not converged: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const std::exception& e) {
        err << "rabicd: error: " << e.what() << "\n";
        return kFailure;
    }
    const std::string& path = cfg.raw("output");
    if (path == "-") {
        write_report(res.report, out);
    } else {
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            err << "rabicd: cannot write '" << path << "'\n";
            return kFailure;
        }
        write_report(res.report, f);
    }
    if (res.exit_code == kPartialFailure) err << "rabicd: some sweep cells failed; see the status column\n";
    if (res.exit_code == kNonConvergence) err << "rabicd: optimizer did not converge everywhere\n";
    return res.exit_code;
}

}  // namespace rabicd::cli
