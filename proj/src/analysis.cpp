#include "rabicd/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "rabicd/errors.hpp"
#include "rabicd/parallel.hpp"

namespace rabicd {

namespace {

// Composite Simpson weights on a uniform grid; an even point count closes with the 3/8 rule.
std::vector<double> quadrature_weights(int points, double span) {
    const int intervals = points - 1;
    const double h = span / intervals;
    std::vector<double> w(static_cast<std::size_t>(points), 0.0);
    const int simpson = intervals % 2 == 0 ? intervals : intervals - 3;
    for (int i = 0; i < simpson; i += 2) {
        w[static_cast<std::size_t>(i)] += h / 3.0;
        w[static_cast<std::size_t>(i + 1)] += 4.0 * h / 3.0;
        w[static_cast<std::size_t>(i + 2)] += h / 3.0;
    }
    if (simpson != intervals) {
        const double c[4] = {1.0, 3.0, 3.0, 1.0};
        for (int k = 0; k < 4; ++k) w[static_cast<std::size_t>(simpson + k)] += 3.0 * h / 8.0 * c[k];
    }
    return w;
}

}  // namespace

double accumulated_action(const MetricSpec& spec, const ModelParams& params, CoefficientPair coeffs, int quad_points) {
    if (quad_points < 11) throw DomainError("accumulated_action needs at least 11 quadrature points");
    const SpinBosonOps ops(params.space);
    const std::vector<double> w = quadrature_weights(quad_points, 1.0);
    double s = 0.0;
    for (int j = 0; j < quad_points; ++j) {
        const double lam = static_cast<double>(j) / (quad_points - 1);
        s += w[static_cast<std::size_t>(j)] * std::abs(MetricForm(spec, ops, params.gamma, params.eta, lam).value(coeffs));
    }
    return s;
}

double accumulated_action_time(const MetricSpec& spec, const ModelParams& params, CoefficientPair coeffs,
                               int quad_points) {
    if (quad_points < 11) throw DomainError("accumulated_action needs at least 11 quadrature points");
    const SpinBosonOps ops(params.space);
    const double tau = params.tau();
    const std::vector<double> w = quadrature_weights(quad_points, tau);
    double s = 0.0;
    for (int j = 0; j < quad_points; ++j) {
        const double t = tau * j / (quad_points - 1);
        const double lam = params.schedule.lambda(t);
        const double v = std::abs(MetricForm(spec, ops, params.gamma, params.eta, lam).value(coeffs));
        s += w[static_cast<std::size_t>(j)] * v * params.schedule.lambda_dot(t);
    }
    return s;
}

std::vector<double> average_ranks(const std::vector<double>& x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DimensionMismatch("spearman: inputs differ in length");
    if (x.size() < 3) throw DomainError("spearman: need at least 3 samples");
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("spearman: zero rank variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<CoefficientPair> CoefficientGrid::pairs() const {
    if (points < 1) throw DomainError("coefficient grid needs at least one point per axis");
    std::vector<CoefficientPair> out;
    for (int i = 0; i < points; ++i) {
        const double c = points == 1 ? lower : lower + (upper - lower) * i / (points - 1);
        for (int j = 0; j < points; ++j) {
            const double a = points == 1 ? lower : lower + (upper - lower) * j / (points - 1);
            if (exclude_origin && std::abs(c) < 1e-12 && std::abs(a) < 1e-12) continue;
            out.push_back({c, a});
        }
    }
    return out;
}

std::string CoefficientGrid::describe() const {
    std::ostringstream os;
    os << points << "x" << points << " uniform over [" << lower << ", " << upper << "]^2"
       << (exclude_origin ? " minus origin" : "");
    return os.str();
}

CorrelationReport correlation_study(const ModelParams& params, const std::vector<MetricSpec>& metrics,
                                    const CoefficientGrid& grid, const CorrelationOptions& options) {
    const std::vector<CoefficientPair> pairs = grid.pairs();
    if (pairs.size() < 3) throw DomainError("correlation study needs at least 3 coefficient samples");
    if (metrics.empty()) throw DomainError("correlation study needs at least one metric");
    if (options.quad_points < 11) throw DomainError("accumulated_action needs at least 11 quadrature points");

    // Quadratic forms per (metric, lambda node) are shared by all samples.
    const SpinBosonOps ops(params.space);
    const std::vector<double> w = quadrature_weights(options.quad_points, 1.0);
    std::vector<std::vector<MetricForm>> forms(metrics.size());
    for (std::size_t m = 0; m < metrics.size(); ++m) {
        for (int j = 0; j < options.quad_points; ++j) {
            const double lam = static_cast<double>(j) / (options.quad_points - 1);
            forms[m].emplace_back(metrics[m], ops, params.gamma, params.eta, lam);
        }
    }

    CorrelationReport rep;
    rep.metrics = metrics;
    rep.grid = grid;
    rep.samples.resize(pairs.size());
    ProtocolOptions po;
    po.evolve.adaptive = false;
    po.evolve.base_steps = options.steps;
    parallel_for(pairs.size(), options.workers, [&](std::size_t i) {
        CorrelationSample& s = rep.samples[i];
        s.coeffs = pairs[i];
        for (std::size_t m = 0; m < metrics.size(); ++m) {
            double acc = 0.0;
            for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * std::abs(forms[m][j].value(pairs[i]));
            s.actions.push_back(acc);
        }
        s.fidelity = protocol_fidelity(params, AgpCoefficients::constant(pairs[i].alpha_c, pairs[i].alpha_a), po);
    });
    std::vector<double> fid;
    for (const auto& s : rep.samples) fid.push_back(s.fidelity);
    for (std::size_t m = 0; m < metrics.size(); ++m) {
        std::vector<double> act;
        for (const auto& s : rep.samples) act.push_back(s.actions[m]);
        rep.spearman.push_back(spearman(act, fid));
    }
    return rep;
}

LandscapeReport landscape(const MetricSpec& spec, const ModelParams& params, double t, const LandscapeGrid& grid) {
    if (grid.c_points < 3 || grid.a_points < 3) throw DomainError("landscape grid needs at least 3 points per axis");
    const SpinBosonOps ops(params.space);
    const MetricForm form(spec, ops, params.gamma, params.eta, params.schedule.lambda(t));
    LandscapeReport rep;
    for (int i = 0; i < grid.c_points; ++i) {
        rep.alpha_c.push_back(grid.c_lower + (grid.c_upper - grid.c_lower) * i / (grid.c_points - 1));
    }
    for (int j = 0; j < grid.a_points; ++j) {
        rep.alpha_a.push_back(grid.a_lower + (grid.a_upper - grid.a_lower) * j / (grid.a_points - 1));
    }
    const double hc = (grid.c_upper - grid.c_lower) / (grid.c_points - 1);
    const double ha = (grid.a_upper - grid.a_lower) / (grid.a_points - 1);
    rep.values.resize(grid.c_points, grid.a_points);
    for (int i = 0; i < grid.c_points; ++i) {
        for (int j = 0; j < grid.a_points; ++j) {
            rep.values(i, j) = form.value(rep.alpha_c[static_cast<std::size_t>(i)], rep.alpha_a[static_cast<std::size_t>(j)]);
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rep.grad_c = Eigen::MatrixXd::Constant(grid.c_points, grid.a_points, nan);
    rep.grad_a = Eigen::MatrixXd::Constant(grid.c_points, grid.a_points, nan);
    for (int i = 1; i + 1 < grid.c_points; ++i) {
        for (int j = 1; j + 1 < grid.a_points; ++j) {
            rep.grad_c(i, j) = (rep.values(i + 1, j) - rep.values(i - 1, j)) / (2.0 * hc);
            rep.grad_a(i, j) = (rep.values(i, j + 1) - rep.values(i, j - 1)) / (2.0 * ha);
        }
    }
    return rep;
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::SC: return "SC";
        case Regime::USC: return "USC";
        case Regime::DSC: return "DSC";
    }
    return "unknown";
}

std::string to_string(RwaProbe p) { return p == RwaProbe::Dynamic ? "dynamic" : "ground"; }

RwaProbe parse_rwa_probe(const std::string& name) {
    if (name == "dynamic") return RwaProbe::Dynamic;
    if (name == "ground") return RwaProbe::Ground;
    throw DomainError("unknown RWA probe '" + name + "' (expected dynamic or ground)");
}

RegimeReport regime_classify(double gamma, double eta, const FockSpace& space, RwaProbe probe, double threshold) {
    if (!(gamma > 0.0)) throw DomainError("regime_classify requires Gamma > 0");
    if (!(eta >= 0.0)) throw DomainError("regime_classify requires eta >= 0");
    const SpinBosonOps ops(space);
    const Mat hr = rabi_matrix(ops, gamma, eta, 1.0);
    const Mat hj = jc_matrix(ops, gamma, eta);
    RegimeReport rep;
    rep.probe = probe;
    rep.eta_critical = std::sqrt(gamma / 4.0);

    const GroundState gr = ground_state(OperatorMatrix::hermitian(hr), -1);
    rep.photon_number = gr.psi.amplitudes().dot(ops.number * gr.psi.amplitudes()).real();

    if (probe == RwaProbe::Ground) {
        const GroundState gj = ground_state(OperatorMatrix::hermitian(hj), -1);
        rep.rwa_fidelity = fidelity(gj.psi, gr.psi);
    } else if (eta > 0.0) {
        Eigen::SelfAdjointEigenSolver<Mat> er(hr);
        Eigen::SelfAdjointEigenSolver<Mat> ej(hj);
        const Vec psi0 = basis_state(space, 0, 0);
        const Vec cr = er.eigenvectors().adjoint() * psi0;
        const Vec cj = ej.eigenvectors().adjoint() * psi0;
        const int samples = 201;
        const double t_end = std::numbers::pi / eta;
        rep.rwa_fidelity = 1.0;
        for (int k = 0; k < samples; ++k) {
            const double t = t_end * k / (samples - 1);
            const Vec pr = er.eigenvectors() * (cr.array() * (cplx(0, -t) * er.eigenvalues().cast<cplx>()).array().exp()).matrix();
            const Vec pj = ej.eigenvectors() * (cj.array() * (cplx(0, -t) * ej.eigenvalues().cast<cplx>()).array().exp()).matrix();
            rep.rwa_fidelity = std::min(rep.rwa_fidelity, std::norm(pr.dot(pj)));
        }
    }
    if (rep.photon_number >= 1.0) {
        rep.label = Regime::DSC;
    } else if (rep.rwa_fidelity <= threshold) {
        rep.label = Regime::USC;
    } else {
        rep.label = Regime::SC;
    }
    return rep;
}

Protocol parse_protocol(const std::string& name, const MetricSpec& base) {
    Protocol p;
    p.name = name;
    p.metric = base;
    if (name == "cd_free") {
        p.kind = ProtocolKind::CdFree;
    } else if (name == "dispersive") {
        p.kind = ProtocolKind::Dispersive;
    } else if (name == "optimized") {
        p.kind = ProtocolKind::Optimized;
    } else {
        p.kind = ProtocolKind::Metric;
        p.metric.kind = parse_metric_kind(name);
        p.name = to_string(p.metric.kind);
    }
    return p;
}

CellRecord run_cell(const ModelParams& params, const Protocol& protocol, const SweepOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    CellRecord rec;
    rec.gamma = params.gamma;
    rec.eta = params.eta;
    rec.protocol = protocol.name;
    rec.cutoff = params.space.cutoff();
    try {
        std::optional<AgpCoefficients> coeffs;
        switch (protocol.kind) {
            case ProtocolKind::CdFree: break;
            case ProtocolKind::Dispersive: coeffs = AgpCoefficients::constant(-1.0, 0.0); break;
            case ProtocolKind::Metric:
                coeffs = coefficient_trajectory(protocol.metric, params, options.slices, options.optimizer);
                break;
            case ProtocolKind::Optimized: {
                OptimizerConfig cfg = options.optimizer;
                cfg.workers = 1;
                const FidelityOptimum opt = optimize_fidelity(params, cfg.constraint, cfg, options.protocol);
                coeffs = AgpCoefficients::constant(opt.alpha_c, opt.alpha_a);
                break;
            }
        }
        const ProtocolResult res = run_protocol(params, coeffs, options.protocol);
        rec.fidelity = res.fidelity;
        rec.fidelity_global = res.fidelity_global;
        rec.parity_sector = res.parity_sector;
        if (coeffs) {
            rec.coeffs = coeffs->mean();
            rec.peak = coeffs->max_abs();
            const SpinBosonOps ops(params.space);
            const AgpBasis basis = agp_basis(ops, params.gamma, params.eta);
            const double hnorm = spectral_norm(OperatorMatrix::hermitian(rabi_matrix(ops, params.gamma, params.eta, 1.0)));
            rec.norm_atomic_rel = rec.peak.alpha_a * spectral_norm(basis.atomic) / hnorm;
            rec.norm_cavity_rel = rec.peak.alpha_c * spectral_norm(basis.cavity) / hnorm;
        }
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::size_t SweepResult::failures() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const CellRecord& r) { return !r.ok; }));
}

const CellRecord& SweepResult::at(std::size_t gi, std::size_t ei, std::size_t pi) const {
    return records.at((gi * etas.size() + ei) * protocols.size() + pi);
}

SweepResult sweep(const ModelParams& templ, const std::vector<double>& gammas, const std::vector<double>& etas,
                  const std::vector<Protocol>& protocols, const SweepOptions& options) {
    if (gammas.empty() || etas.empty()) throw DomainError("sweep grids must be nonempty");
    if (protocols.empty()) throw DomainError("sweep needs at least one protocol");
    SweepResult res;
    res.gammas = gammas;
    res.etas = etas;
    for (const auto& p : protocols) res.protocols.push_back(p.name);
    const std::size_t np = protocols.size();
    res.records.resize(gammas.size() * etas.size() * np);
    parallel_for(res.records.size(), options.workers, [&](std::size_t k) {
        const std::size_t pi = k % np;
        const std::size_t ei = (k / np) % etas.size();
        const std::size_t gi = k / (np * etas.size());
        const double eta = etas[ei];
        const int n = options.cutoff > 0 ? options.cutoff : default_cutoff(eta);
        try {
            const ModelParams params(gammas[gi], eta, templ.schedule, FockSpace(n));
            res.records[k] = run_cell(params, protocols[pi], options);
        } catch (const std::exception& e) {
            CellRecord rec;
            rec.gamma = gammas[gi];
            rec.eta = eta;
            rec.protocol = protocols[pi].name;
            rec.ok = false;
            rec.error = e.what();
            res.records[k] = rec;
        }
    });
    return res;
}

}  // namespace rabicd
