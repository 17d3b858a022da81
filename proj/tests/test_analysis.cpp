#include "doctest.h"
#include "oracles.hpp"
#include "rabicd/analysis.hpp"
#include "rabicd/errors.hpp"

#include <random>

using namespace rabicd;

TEST_CASE("accumulated action") {
    MetricSpec trace;
    // With Gamma = 0 and no CD the trace metric is 2 eta^2 n(n+1) for every lambda.
    const ModelParams flat(0.0, 0.7, 1.0, 6);
    CHECK(accumulated_action(trace, flat, {0.0, 0.0}) == doctest::Approx(2 * 0.49 * 42).epsilon(1e-12));

    const ModelParams p(1.0, 0.25, 1.0, 30);
    for (MetricKind k : {MetricKind::FullTrace, MetricKind::CoherentWeighted, MetricKind::SuperradiantVariance,
                         MetricKind::FilteredTrace}) {
        MetricSpec spec;
        spec.kind = k;
        const double s101 = accumulated_action(spec, p, {-0.7, 0.3}, 101);
        const double s201 = accumulated_action(spec, p, {-0.7, 0.3}, 201);
        // The filter mask jumps with lambda, which limits quadrature convergence.
        CHECK(std::abs(s101 - s201) < (k == MetricKind::FilteredTrace ? 1e-2 * s201 : 1e-6));
        // Same integral taken on the time grid.
        const double st = accumulated_action_time(spec, p, {-0.7, 0.3}, 2001);
        CHECK(std::abs(st - s201) < (k == MetricKind::FilteredTrace ? 1e-2 : 1e-6) * std::max(1.0, s201));
    }

    const ModelParams off(1.0, 0.0, 1.0, 10);
    CHECK(accumulated_action(trace, off, {3.0, -2.0}) == accumulated_action(trace, off, {0.0, 0.0}));
    CHECK_THROWS_AS(accumulated_action(trace, p, {0.0, 0.0}, 5), DomainError);
}

TEST_CASE("rank correlation") {
    CHECK(spearman({1, 2, 3}, {10, 20, 30}) == doctest::Approx(1.0));
    CHECK(spearman({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0));

    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(0, 4);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(25), y(25);
        for (int i = 0; i < 25; ++i) {
            x[i] = d(rng);
            y[i] = d(rng) + 0.1 * x[i];
        }
        const double ref = oracle::pearson(oracle::count_ranks(x), oracle::count_ranks(y));
        CHECK(std::abs(spearman(x, y) - ref) < 1e-12);

        // Strictly monotone transforms leave ranks unchanged.
        std::vector<double> fx(25);
        for (int i = 0; i < 25; ++i) fx[i] = std::exp(3 * x[i]) - 5;
        CHECK(std::abs(spearman(fx, y) - spearman(x, y)) < 1e-14);
    }
    CHECK_THROWS_AS(spearman({1, 1, 1}, {1, 2, 3}), UndefinedCorrelation);
    CHECK_THROWS_AS(spearman({1, 2}, {1, 2}), DomainError);
    CHECK_THROWS_AS(spearman({1, 2, 3}, {1, 2}), DimensionMismatch);
}

TEST_CASE("correlation study inputs") {
    const ModelParams p(1.0, 0.25, 1.0, 20);
    CoefficientGrid one;
    one.points = 1;
    one.exclude_origin = false;
    CHECK_THROWS_AS(correlation_study(p, {MetricSpec{}}, one), DomainError);

    CoefficientGrid g;
    CHECK(g.pairs().size() == 224);
    g.points = 3;
    CorrelationOptions o;
    o.quad_points = 21;
    o.steps = 200;
    const CorrelationReport r = correlation_study(p, {MetricSpec{}}, g, o);
    CHECK(r.samples.size() == 8);
    CHECK(r.spearman.size() == 1);
    for (const auto& s : r.samples) CHECK(std::abs(s.actions[0] - accumulated_action(MetricSpec{}, p, s.coeffs, 21)) <
                                          1e-9 * s.actions[0]);
}

TEST_CASE("action landscape") {
    MetricSpec spec;
    const ModelParams p(1.0, 0.6, 1.0, 8);
    const double t = 0.5;
    const oracle::Quadratic q =
        oracle::fit_quadratic([&](double x, double y) { return evaluate_metric(spec, p, t, {x, y}); });
    LandscapeGrid grid;
    grid.c_lower = -1.0;
    grid.c_upper = 1.0;
    grid.a_lower = -1.0;
    grid.a_upper = 1.0;
    grid.c_points = 41;
    grid.a_points = 41;
    const LandscapeReport r = landscape(spec, p, t, grid);
    double worst = 0.0;
    for (int i = 1; i + 1 < 41; ++i)
        for (int j = 1; j + 1 < 41; ++j) {
            const double x = r.alpha_c[i], y = r.alpha_a[j];
            const double gx = q.c(1) + 2 * q.c(3) * x + q.c(4) * y;
            const double gy = q.c(2) + q.c(4) * x + 2 * q.c(5) * y;
            worst = std::max({worst, std::abs(r.grad_c(i, j) - gx), std::abs(r.grad_a(i, j) - gy)});
        }
    CHECK(worst < 1e-6 * std::max(1.0, q(0, 0)));
    CHECK(std::isnan(r.grad_c(0, 5)));

    // Grid centred on the minimizer: the quadratic is point symmetric.
    const Eigen::Vector2d xs = q.argmin();
    LandscapeGrid c;
    c.c_lower = xs(0) - 0.5;
    c.c_upper = xs(0) + 0.5;
    c.a_lower = xs(1) - 0.5;
    c.a_upper = xs(1) + 0.5;
    c.c_points = c.a_points = 21;
    const LandscapeReport s = landscape(spec, p, t, c);
    for (int i = 0; i < 21; ++i)
        for (int j = 0; j < 21; ++j)
            CHECK(std::abs(s.values(i, j) - s.values(20 - i, 20 - j)) < 1e-8 * std::max(1.0, s.values(i, j)));
    const double gmin = std::hypot(s.grad_c(10, 10), s.grad_a(10, 10));
    CHECK(gmin < 1e-6 * std::max(1.0, q(0, 0)));
}

TEST_CASE("regime classification") {
    const FockSpace sp(40);
    CHECK(regime_classify(1.0, 0.1, sp).label == Regime::SC);
    CHECK(regime_classify(1.0, 0.4, sp).label == Regime::USC);
    const RegimeReport d = regime_classify(1.0, 2.0, FockSpace(60));
    CHECK(d.label == Regime::DSC);
    CHECK(d.eta_critical == doctest::Approx(0.5));

    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::rabi(1.0, 2.0, 1.0, 120));
    const oracle::Vec g = es.eigenvectors().col(0);
    const oracle::Mat a = oracle::lowering(120);
    const oracle::Mat num = oracle::kron(oracle::Mat::Identity(2, 2), a.adjoint() * a);
    const double n_oracle = (g.adjoint() * num * g)(0).real();
    CHECK(n_oracle >= 1.0);
    CHECK(std::abs(d.photon_number - n_oracle) < 1e-6);

    int last = 0;
    for (int k = 0; k <= 100; ++k) {
        const int label = static_cast<int>(regime_classify(1.0, 0.02 * k, sp).label);
        CHECK(label >= last);
        last = label;
    }
    CHECK(last == static_cast<int>(Regime::DSC));
    CHECK_THROWS_AS(regime_classify(0.0, 0.5, sp), DomainError);
    CHECK_THROWS_AS(parse_rwa_probe("sideways"), DomainError);
    CHECK(regime_classify(1.0, 0.1, sp, RwaProbe::Ground).probe == RwaProbe::Ground);
}

TEST_CASE("sweep bookkeeping") {
    const ModelParams templ(1.0, 0.5, 1.0);
    const MetricSpec base;
    const std::vector<Protocol> protos{parse_protocol("cd_free", base), parse_protocol("dispersive", base),
                                       parse_protocol("coherent", base)};
    const SweepResult r = sweep(templ, {1.0}, {0.5}, protos, SweepOptions{});
    CHECK(r.records.size() == 3);
    CHECK(r.failures() == 0);
    const ModelParams p(1.0, 0.5, 1.0);
    CHECK(r.at(0, 0, 0).fidelity == protocol_fidelity(p, std::nullopt));
    CHECK(r.at(0, 0, 1).fidelity == protocol_fidelity(p, AgpCoefficients::constant(-1.0, 0.0)));
    MetricSpec coh;
    coh.kind = MetricKind::CoherentWeighted;
    CHECK(r.at(0, 0, 2).fidelity == protocol_fidelity(p, coefficient_trajectory(coh, p, 101, OptimizerConfig{})));
    CHECK(r.at(0, 0, 1).coeffs == CoefficientPair{-1.0, 0.0});

    // Failures are recorded per cell and the sweep carries on.
    const SweepResult bad = sweep(templ, {0.0, 1.0}, {0.5}, {protos[0]}, SweepOptions{});
    CHECK(bad.failures() == 1);
    CHECK_FALSE(bad.at(0, 0, 0).ok);
    CHECK(bad.at(1, 0, 0).ok);
    CHECK_THROWS_AS(parse_protocol("bogus", base), DomainError);
}
