#pragma once

#include <functional>
#include <string>

#include "rabicd/hilbert.hpp"

namespace rabicd {

// Driving ramp lambda(t) on [0, tau] built from a unit-interval profile f(s), s = t/tau.
class Schedule {
public:
    using Profile = std::function<double(double)>;

    // sin^2((pi/2) sin^2(pi t / (2 tau))).
    static Schedule sin_squared(double tau);
    // sin^2(pi t / (2 tau)); exposed for alternative readings of the ramp.
    static Schedule single_sin_squared(double tau);
    // f and its derivative df/ds on [0, 1].
    static Schedule custom(double tau, std::string name, Profile f, Profile df);
    static Schedule by_name(const std::string& name, double tau);

    double tau() const { return tau_; }
    const std::string& name() const { return name_; }
    double lambda(double t) const;
    double lambda_dot(double t) const;
    Schedule with_tau(double tau) const;

private:
    Schedule(double tau, std::string name, Profile f, Profile df);
    void check_time(double t) const;

    double tau_;
    std::string name_;
    Profile f_;
    Profile df_;
};

double lambda(double t, const Schedule& schedule);
double lambda_dot(double t, const Schedule& schedule);

// max(20, ceil(4 eta^2 + 10 eta) + 10).
int default_cutoff(double eta);

struct ModelParams {
    ModelParams(double gamma, double eta, double tau, int cutoff = 0);
    ModelParams(double gamma, double eta, Schedule schedule, FockSpace space);

    double gamma;
    double eta;
    Schedule schedule;
    FockSpace space;

    double tau() const { return schedule.tau(); }
    ModelParams with_cutoff(int n) const;
    ModelParams with_tau(double tau) const;
};

// Composite-space building blocks for one cutoff; X = a^dag + a, P = a^dag - a.
struct SpinBosonOps {
    explicit SpinBosonOps(const FockSpace& space);

    FockSpace space;
    Mat id;
    Mat number;    // I x a^dag a
    Mat sz;        // sigma_z x I
    Mat sx_x;      // sigma_x x X
    Mat i_sx_p;    // i sigma_x x P
    Mat sy_x;      // sigma_y x X
    Mat i_sy_p;    // i sigma_y x P
    Mat sz_x2;     // sigma_z x X X (truncated product)
    Mat sp_a;      // sigma_+ x a
    Eigen::VectorXi parity;
};

// a^dag a + (Gamma/2) sigma_z + lam eta sigma_x (a^dag + a).
OperatorMatrix rabi_hamiltonian(const ModelParams& params, double lam);
// d H_R / d lambda = eta sigma_x (a^dag + a).
OperatorMatrix rabi_hamiltonian_derivative(const ModelParams& params);
// a^dag a + (Gamma/2) sigma_z + eta (sigma_+ a + sigma_- a^dag).
OperatorMatrix jc_hamiltonian(const ModelParams& params);

Mat rabi_matrix(const SpinBosonOps& ops, double gamma, double eta, double lam);
Mat jc_matrix(const SpinBosonOps& ops, double gamma, double eta);

}  // namespace rabicd
