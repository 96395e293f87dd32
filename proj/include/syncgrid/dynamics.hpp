#pragma once

#include "syncgrid/graph.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace syncgrid {

/// Mixed first/second-order oscillator network.
/// Second-order nodes: M_i theta_i'' + D_i theta_i' = omega_i - sum_j a_ij sin(theta_i - theta_j).
/// First-order nodes:  D_i theta_i' = omega_i - sum_j a_ij sin(theta_i - theta_j).
struct OscillatorNetwork {
    WeightedGraph graph;
    Eigen::VectorXd omega;
    std::vector<bool> second_order;  // membership in V1
    Eigen::VectorXd inertia;         // read on V1 only
    Eigen::VectorXd damping;

    /// Throws InvalidNetwork on dimension or positivity violations.
    void validate() const;

    /// Every node first order with unit damping.
    static OscillatorNetwork kuramoto(WeightedGraph g, Eigen::VectorXd omega);
    /// Every node second order with the given inertia and damping.
    static OscillatorNetwork swing(WeightedGraph g, Eigen::VectorXd omega, double inertia, double damping);

    [[nodiscard]] int size() const { return graph.node_count(); }
};

double sync_frequency(const OscillatorNetwork& net);

/// omega_i <- omega_i - D_i * omega_sync
OscillatorNetwork rotating_frame(const OscillatorNetwork& net);

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> theta;
    std::vector<Eigen::VectorXd> theta_dot;
    std::string method = "rk4";
    double step = 0.0;

    [[nodiscard]] std::size_t samples() const { return times.size(); }
};

struct SimulationOptions {
    double t_end = 100.0;
    double step = 1e-3;
    double sample_interval = 1e-2;
    /// Stop once |theta' - omega_sync|_inf stays below this over one sample window. Zero disables.
    double steady_state_tol = 0.0;
};

using VectorField = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

/// One classical fourth-order Runge-Kutta step.
Eigen::VectorXd rk4_step(const VectorField& f, double t, const Eigen::VectorXd& y, double h);

/// Fixed-step RK4 from t = 0 to t_end, calling observe(t, y) every sample_every steps and at the end.
/// observe may return false to stop early. Throws NonFiniteState on divergence.
void integrate_rk4(const VectorField& f, Eigen::VectorXd& y, double t_end, double h, int sample_every,
                   const std::function<bool(double, const Eigen::VectorXd&)>& observe);

/// theta_dot0 is read on second-order nodes only.
Trajectory simulate(const OscillatorNetwork& net, const Eigen::VectorXd& theta0, const Eigen::VectorXd& theta_dot0,
                    const SimulationOptions& options = {});

struct SyncDetection {
    bool freq_synced = false;
    bool cohesive = false;
    std::optional<double> t_sync;
};

SyncDetection detect_sync(const Trajectory& traj, const WeightedGraph& g, double tol_freq, double gamma);

/// sum_E a_ij (1 - cos(theta_i - theta_j)) - sum_i omega_i theta_i
double energy(const OscillatorNetwork& net, const Eigen::VectorXd& theta);
/// sum_E a_ij (theta_i - theta_j)^2 / 2 - sum_i omega_i theta_i
double quadratic_energy(const OscillatorNetwork& net, const Eigen::VectorXd& theta);

struct CriticalCouplingOptions {
    double gamma = 1.5707963267948966;
    double relative_tolerance = 1e-4;
    int max_doublings = 10;
    double sim_step = 1e-2;
    double sim_t_max = 500.0;
    double steady_tol = 1e-6;
};

struct CriticalCouplingResult {
    double k_min = 0.0;
    double k_critical = 0.0;  // |L^+ omega|_{E,inf} of the unit graph
    double ratio = 0.0;       // k_min / k_critical
    int evaluations = 0;
    int simulations = 0;
};

/// Smallest gain K such that K * A admits an equilibrium with cohesiveness <= gamma.
CriticalCouplingResult critical_coupling_search(const WeightedGraph& g, const Eigen::VectorXd& omega,
                                                const CriticalCouplingOptions& options = {});

}  // namespace syncgrid
