#pragma once

#include "syncgrid/dynamics.hpp"
#include "syncgrid/experiments.hpp"
#include "syncgrid/powerflow.hpp"
#include "syncgrid/sync_analysis.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace syncgrid {

inline constexpr const char* kReportSchema = "syncgrid-report/1";

/// %.12g
std::string format_real(double x);
/// Rounds through %.12g so JSON dumps stay byte-stable.
nlohmann::json json_real(double x);
nlohmann::json json_vector(const Eigen::VectorXd& v);

/// One row per cell: n, model, p, alpha, samples, failures, probability, Chernoff epsilon.
std::string hypothesis_table_csv(const std::vector<HypothesisResult>& cells, std::uint64_t master_seed);
/// Per-sample rows of one cell.
std::string hypothesis_samples_csv(const HypothesisResult& r);

/// Long-form grid: model, distribution, p, n, samples, mean/min/max ratio, seed.
std::string accuracy_csv(const std::vector<AccuracyCell>& cells, std::uint64_t master_seed);
/// One CSV per (model, distribution) keyed "model_distribution", columns p, n, mean_ratio.
std::map<std::string, std::string> accuracy_group_csvs(const std::vector<AccuracyCell>& cells, std::uint64_t master_seed);

std::string scenario_csv(const ScenarioBatch& batch, const ScenarioConfig& cfg, const std::string& case_name);
std::string contingency_csv(const ContingencyResult& r, const std::string& trips, const std::string& ramp);
/// "t,theta_1..theta_n,thetadot_1..thetadot_n"
std::string trajectory_csv(const Trajectory& traj);

nlohmann::json analysis_json(const WeightedGraph& g, const Eigen::VectorXd& omega, const SyncAssessment& a,
                             const std::optional<double>& gamma);
nlohmann::json equilibrium_json(const NewtonResult& r);

/// {"n", "edges": [[i, j, w]], "omega", optional "inertia", "damping", "second_order"} with 1-based ids.
nlohmann::json network_to_json(const OscillatorNetwork& net);
/// Missing dynamic fields default to first-order nodes with unit damping.
OscillatorNetwork network_from_json(const nlohmann::json& j);

/// Writes contents to path; "-" writes to stdout. Throws IoError.
void emit_report(const std::string& path, const std::string& contents);
void emit_report(const std::string& path, const nlohmann::json& j);

}  // namespace syncgrid
