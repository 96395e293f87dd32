#pragma once

#include "syncgrid/dynamics.hpp"
#include "syncgrid/equilibrium.hpp"
#include "syncgrid/power_case.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace syncgrid {

struct ModelOptions {
    bool strict_lossless = false;  // throw NonLosslessCase instead of dropping resistances
    double generator_inertia = 1.0;
    double generator_damping = 1.0;
    double load_damping = 0.1;
};

/// Oscillator model of a power case. Node k is case.buses[k]; parallel branches are merged.
struct PowerNetwork {
    OscillatorNetwork net;          // omega in the rotating frame
    Eigen::VectorXd raw_injections; // p.u., before recentring
    std::vector<int> bus_ids;
    std::vector<double> angle_limits;      // per edge, rad
    std::vector<double> flow_limits_pu;    // per edge, 0 when unrated
    std::vector<std::pair<int, int>> edge_buses;  // bus ids per edge
    double sync_frequency = 0.0;           // p.u. frequency offset absorbed by recentring

    [[nodiscard]] std::string edge_label(int l) const;
};

PowerNetwork build_oscillator_model(const PowerCase& c, const ModelOptions& options = {});

struct DcFlowResult {
    Eigen::VectorXd delta;  // gauge delta_1 = 0
    double max_angle_diff = 0.0;
};

DcFlowResult dc_power_flow(const PowerNetwork& pn);
DcFlowResult dc_power_flow(const PowerCase& c);

struct AcFlowResult {
    bool feasible = false;
    NewtonResult newton;
    double margin = 0.0;
    std::string diagnostics;
};

/// Newton on the lossless AC balance seeded with the DC solution. Feasible when it converges
/// to a solution with cohesiveness below pi/2.
AcFlowResult ac_power_flow(const PowerNetwork& pn);
AcFlowResult ac_power_flow(const PowerCase& c);

struct ScenarioConfig {
    double load_fluct_fraction = 0.5;
    double gen_fluct_fraction = 0.33;
    double sigma = 0.3;  // p.u.
    double fast_ramp_fraction = 0.10;
    double controllable_load_fraction = 0.10;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Gaussian fluctuations on randomly chosen loads and generators, with the total imbalance
/// spread evenly over randomly chosen fast-ramping generators and controllable loads.
/// A nonzero fraction selects max(1, round(fraction * count)) units.
PowerCase randomize_scenario(const PowerCase& c, const ScenarioConfig& cfg, std::uint64_t sample = 0);

struct Trip {
    enum class Kind { Generator, Branch } kind = Kind::Generator;
    int a = 0;  // generator bus, or branch endpoint
    int b = 0;
};

/// "gen:323" or "branch:121-325".
Trip parse_trip(const std::string& text);

struct LoadingRamp {
    std::vector<int> load_areas;
    std::vector<int> gen_areas;
};

/// "southeast" (loads in area 3, generation in areas 1 and 2) or "loads=3;gens=1,2".
LoadingRamp parse_ramp(const std::string& text);

/// Applies trips (all units at a generator bus, or every branch between two buses).
PowerCase apply_trips(const PowerCase& c, const std::vector<Trip>& trips);

/// Raises every load in the load areas by the same amount so the total rises by
/// loading * (nominal area load); generators in the gen areas share the extra output equally.
PowerCase apply_loading(const PowerCase& c, const LoadingRamp& ramp, double loading);

struct ContingencyOptions {
    double max_loading = 3.0;
    double sweep_step = 0.01;
    bool simulate_check = false;
    SimulationOptions simulation{};
    ModelOptions model{};
};

struct ContingencyPoint {
    double loading = 0.0;
    double margin = 0.0;
    double worst_limit_ratio = 0.0;  // max_e arcsin|psi_e| / gamma_e (infinity when |psi_e| > 1)
    int limiting_edge = -1;
};

struct SimulationCheck {
    double loading = 0.0;
    bool freq_synced = false;
    bool within_limits = false;
    double final_cohesiveness = 0.0;
};

struct ContingencyResult {
    std::vector<ContingencyPoint> sweep;
    std::optional<double> predicted_limit_loading;  // first line reaches its thermal angle
    std::string limiting_branch;
    std::optional<double> margin_one_loading;        // margin crosses 1
    std::vector<double> nominal_line_angles;         // arcsin|psi_e| at zero loading
    std::optional<SimulationCheck> simulation;
};

/// Throws IslandingDetected when the trips disconnect the network.
ContingencyResult contingency_scan(const PowerCase& c, const std::vector<Trip>& trips, const LoadingRamp& ramp,
                                   const ContingencyOptions& options = {});

}  // namespace syncgrid
