#include "syncgrid/report.hpp"

#include "syncgrid/errors.hpp"
#include "syncgrid/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <tuple>

namespace syncgrid {

namespace {

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string opt_real(const std::optional<double>& x) { return x ? format_real(*x) : ""; }

std::string newton_status(NewtonStatus s) {
    switch (s) {
        case NewtonStatus::Converged: return "converged";
        case NewtonStatus::NoConvergence: return "no_convergence";
        case NewtonStatus::SingularJacobian: return "singular_jacobian";
    }
    return "unknown";
}

}  // namespace

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

nlohmann::json json_real(double x) {
    if (!std::isfinite(x)) return nullptr;
    return std::stod(format_real(x));
}

nlohmann::json json_vector(const Eigen::VectorXd& v) {
    auto arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(json_real(v[i]));
    return arr;
}

std::string hypothesis_table_csv(const std::vector<HypothesisResult>& cells, std::uint64_t master_seed) {
    std::ostringstream o;
    o << "# schema=" << kReportSchema << " kind=hypothesis master_seed=" << master_seed << "\n";
    o << "n,model,p,alpha,distribution,samples,failures,empirical_probability,tolerance,chernoff_epsilon,seed\n";
    for (const auto& c : cells) {
        o << c.spec.n << ',' << to_string(c.spec.model) << ',' << format_real(c.spec.p) << ','
          << format_real(c.spec.alpha) << ',' << to_string(c.spec.distribution) << ',' << c.samples << ','
          << c.failures << ',' << format_real(c.empirical_probability) << ',' << format_real(c.tolerance_used) << ','
          << format_real(c.chernoff_epsilon) << ',' << c.spec.seed << "\n";
    }
    return o.str();
}

std::string hypothesis_samples_csv(const HypothesisResult& r) {
    std::ostringstream o;
    o << "# schema=" << kReportSchema << " kind=hypothesis_samples n=" << r.spec.n << " model=" << to_string(r.spec.model)
      << " p=" << format_real(r.spec.p) << " alpha=" << format_real(r.spec.alpha) << " seed=" << r.spec.seed << "\n";
    o << "index,margin,gamma,cohesiveness,attempts,rejections,success\n";
    for (const auto& s : r.rows)
        o << s.index << ',' << format_real(s.margin) << ',' << format_real(s.gamma) << ','
          << format_real(s.cohesiveness) << ',' << s.attempts << ',' << s.rejections << ',' << bool_text(s.success)
          << "\n";
    return o.str();
}

std::string accuracy_csv(const std::vector<AccuracyCell>& cells, std::uint64_t master_seed) {
    std::ostringstream o;
    o << "# schema=" << kReportSchema << " kind=accuracy master_seed=" << master_seed << "\n";
    o << "model,distribution,p,n,samples,mean_ratio,min_ratio,max_ratio,seed\n";
    for (const auto& c : cells)
        o << to_string(c.model) << ',' << to_string(c.distribution) << ',' << format_real(c.p) << ',' << c.n << ','
          << c.samples << ',' << format_real(c.mean_ratio) << ',' << format_real(c.min_ratio) << ','
          << format_real(c.max_ratio) << ',' << c.seed << "\n";
    return o.str();
}

std::map<std::string, std::string> accuracy_group_csvs(const std::vector<AccuracyCell>& cells, std::uint64_t master_seed) {
    std::map<std::string, std::vector<const AccuracyCell*>> groups;
    for (const auto& c : cells) groups[to_string(c.model) + "_" + to_string(c.distribution)].push_back(&c);
    std::map<std::string, std::string> out;
    for (auto& [key, list] : groups) {
        std::sort(list.begin(), list.end(), [](const AccuracyCell* a, const AccuracyCell* b) {
            return std::tie(a->p, a->n) < std::tie(b->p, b->n);
        });
        std::ostringstream o;
        o << "# schema=" << kReportSchema << " kind=accuracy_group group=" << key << " master_seed=" << master_seed
          << "\n";
        o << "p,n,mean_ratio\n";
        for (const auto* c : list) o << format_real(c->p) << ',' << c->n << ',' << format_real(c->mean_ratio) << "\n";
        out[key] = o.str();
    }
    return out;
}

std::string scenario_csv(const ScenarioBatch& batch, const ScenarioConfig& cfg, const std::string& case_name) {
    std::ostringstream o;
    o << "# schema=" << kReportSchema << " kind=scenario case=" << case_name << " seed=" << cfg.seed
      << " load_fraction=" << format_real(cfg.load_fluct_fraction) << " gen_fraction="
      << format_real(cfg.gen_fluct_fraction) << " sigma=" << format_real(cfg.sigma)
      << " fast_ramp_fraction=" << format_real(cfg.fast_ramp_fraction)
      << " controllable_load_fraction=" << format_real(cfg.controllable_load_fraction) << "\n";
    o << "# samples=" << batch.samples << " infeasible=" << batch.infeasible << " mean_error="
      << format_real(batch.mean_error) << " mean_abs_error=" << format_real(batch.mean_abs_error)
      << " max_abs_error=" << format_real(batch.max_abs_error) << "\n";
    o << "index,margin,gamma_pred,cohesiveness,error,feasible\n";
    for (const auto& s : batch.rows)
        o << s.index << ',' << format_real(s.margin) << ',' << format_real(s.gamma_pred) << ','
          << format_real(s.cohesiveness) << ',' << format_real(s.error) << ',' << bool_text(s.feasible) << "\n";
    return o.str();
}

std::string contingency_csv(const ContingencyResult& r, const std::string& trips, const std::string& ramp) {
    std::ostringstream o;
    o << "# schema=" << kReportSchema << " kind=contingency trips=" << trips << " ramp=" << ramp << "\n";
    o << "# predicted_limit_loading=" << opt_real(r.predicted_limit_loading) << " limiting_branch=" << r.limiting_branch
      << " margin_one_loading=" << opt_real(r.margin_one_loading) << "\n";
    if (r.simulation)
        o << "# simulation loading=" << format_real(r.simulation->loading)
          << " freq_synced=" << bool_text(r.simulation->freq_synced)
          << " within_limits=" << bool_text(r.simulation->within_limits)
          << " final_cohesiveness=" << format_real(r.simulation->final_cohesiveness) << "\n";
    o << "loading,margin,worst_limit_ratio,limiting_edge\n";
    for (const auto& p : r.sweep)
        o << format_real(p.loading) << ',' << format_real(p.margin) << ',' << format_real(p.worst_limit_ratio) << ','
          << p.limiting_edge + 1 << "\n";
    return o.str();
}

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream o;
    const Eigen::Index n = traj.theta.empty() ? 0 : traj.theta.front().size();
    o << "t";
    for (Eigen::Index i = 1; i <= n; ++i) o << ",theta_" << i;
    for (Eigen::Index i = 1; i <= n; ++i) o << ",thetadot_" << i;
    o << "\n";
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        o << format_real(traj.times[k]);
        for (Eigen::Index i = 0; i < n; ++i) o << ',' << format_real(traj.theta[k][i]);
        for (Eigen::Index i = 0; i < n; ++i) o << ',' << format_real(traj.theta_dot[k][i]);
        o << "\n";
    }
    return o.str();
}

nlohmann::json analysis_json(const WeightedGraph& g, const Eigen::VectorXd& omega, const SyncAssessment& a,
                             const std::optional<double>& gamma) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["n"] = g.node_count();
    j["edges"] = g.edge_count();
    j["margin"] = json_real(a.margin);
    j["gamma_pred"] = a.gamma_pred ? json_real(*a.gamma_pred) : nlohmann::json(nullptr);
    auto psi = nlohmann::json::array();
    for (int l = 0; l < g.edge_count(); ++l) {
        const auto& e = g.edges()[l];
        psi.push_back({{"i", e.source + 1}, {"j", e.sink + 1}, {"psi", json_real(a.psi_particular[l])}});
    }
    j["psi"] = psi;
    j["phases"] = json_vector(a.phases);
    if (gamma) {
        j["gamma"] = json_real(*gamma);
        j["condition_holds"] = a.holds(*gamma);
        const auto nc = necessary_conditions(g, omega, *gamma);
        nlohmann::json nj;
        nj["absolute_ok"] = nc.absolute_ok;
        nj["incremental_ok"] = nc.incremental_ok;
        auto nodes = nlohmann::json::array();
        for (int v : nc.violating_nodes) nodes.push_back(v + 1);
        auto edges = nlohmann::json::array();
        for (int l : nc.violating_edges) edges.push_back({g.edges()[l].source + 1, g.edges()[l].sink + 1});
        nj["violating_nodes"] = nodes;
        nj["violating_edges"] = edges;
        j["necessary"] = nj;
    }
    return j;
}

nlohmann::json equilibrium_json(const NewtonResult& r) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["status"] = newton_status(r.status);
    j["iterations"] = r.iterations;
    j["theta"] = json_vector(r.solution.theta);
    j["cohesiveness"] = json_real(r.solution.cohesiveness);
    j["residual"] = json_real(r.solution.residual);
    j["stable"] = r.solution.stable;
    j["lambda2_minus_J"] = json_real(r.solution.lambda2_minus_J);
    return j;
}

nlohmann::json network_to_json(const OscillatorNetwork& net) {
    nlohmann::json j = graph_to_json(net.graph);
    j["schema"] = "syncgrid-net/1";
    j["omega"] = json_vector(net.omega);
    j["damping"] = json_vector(net.damping);
    j["inertia"] = json_vector(net.inertia);
    j["second_order"] = net.second_order;
    return j;
}

OscillatorNetwork network_from_json(const nlohmann::json& j) {
    try {
        WeightedGraph g = graph_from_json(j);
        const int n = g.node_count();
        auto vec = [&](const char* key, double fallback) {
            Eigen::VectorXd v = Eigen::VectorXd::Constant(n, fallback);
            if (!j.contains(key)) return v;
            const auto& arr = j.at(key);
            if (!arr.is_array() || static_cast<int>(arr.size()) != n)
                throw Error(ErrorCode::DimensionMismatch, std::string(key) + " must have n entries");
            for (int i = 0; i < n; ++i) v[i] = arr[static_cast<std::size_t>(i)].get<double>();
            return v;
        };
        OscillatorNetwork net = OscillatorNetwork::kuramoto(std::move(g), vec("omega", 0.0));
        net.damping = vec("damping", 1.0);
        net.inertia = vec("inertia", 0.0);
        if (j.contains("second_order")) {
            const auto so = j.at("second_order").get<std::vector<bool>>();
            if (static_cast<int>(so.size()) != n) throw Error(ErrorCode::DimensionMismatch, "second_order must have n entries");
            net.second_order = so;
        }
        net.validate();
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("network JSON: ") + e.what());
    }
}

void emit_report(const std::string& path, const std::string& contents) {
    if (path == "-") {
        std::cout << contents;
        if (!std::cout) throw Error(ErrorCode::IoError, "write to stdout failed");
        return;
    }
    write_text_file(path, contents);
}

void emit_report(const std::string& path, const nlohmann::json& j) { emit_report(path, j.dump(2) + "\n"); }

}  // namespace syncgrid
