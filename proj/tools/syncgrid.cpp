#include "syncgrid/dynamics.hpp"
#include "syncgrid/equilibrium.hpp"
#include "syncgrid/errors.hpp"
#include "syncgrid/experiments.hpp"
#include "syncgrid/graph_io.hpp"
#include "syncgrid/power_case.hpp"
#include "syncgrid/powerflow.hpp"
#include "syncgrid/random_networks.hpp"
#include "syncgrid/report.hpp"
#include "syncgrid/sync_analysis.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

using namespace syncgrid;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

Eigen::VectorXd load_omega(const std::string& path, int n) {
    Eigen::VectorXd w = load_vector(path);
    if (w.size() != n) throw Error(ErrorCode::DimensionMismatch, "omega has " + std::to_string(w.size()) + " entries, graph has " + std::to_string(n) + " nodes");
    return recentred(w);
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    const auto dot = path.rfind('.');
    const auto slash = path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + "_" + suffix;
    return path.substr(0, dot) + "_" + suffix + path.substr(dot);
}

std::vector<NominalNetworkSpec> read_cells(const std::string& path, std::uint64_t master_seed) {
    nlohmann::json j;
    if (path.empty()) {
        j = nlohmann::json::parse(R"([{"n":10,"model":"erg","p":0.3,"alpha":8},
                                      {"n":20,"model":"erg","p":0.3,"alpha":15},
                                      {"n":30,"model":"smn","p":0.2,"alpha":13}])");
    } else {
        j = parse_json_text(read_text_file(path));
        if (j.is_object()) j = j.at("cells");
    }
    std::vector<NominalNetworkSpec> cells;
    try {
        for (const auto& c : j) {
            NominalNetworkSpec s;
            s.n = c.at("n").get<int>();
            s.model = parse_graph_model(c.at("model").get<std::string>());
            s.p = c.at("p").get<double>();
            s.alpha = c.value("alpha", 1.0);
            s.distribution = parse_distribution(c.value("distribution", std::string("uniform-alpha")));
            s.unit_weights = c.value("unit_weights", false);
            s.seed = cell_seed(master_seed, cells.size());
            s.validate();
            cells.push_back(s);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("cells file: ") + e.what());
    }
    return cells;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"syncgrid: synchronization analysis of oscillator networks and power grids"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Sync margin, predicted cohesiveness and necessary conditions");
    std::string graph_path, omega_path, out_path = "-";
    std::optional<double> gamma;
    analyze->add_option("--graph", graph_path, "Graph JSON or edge CSV")->required();
    analyze->add_option("--omega", omega_path, "Natural frequencies")->required();
    analyze->add_option("--gamma", gamma, "Target cohesiveness (rad)");
    analyze->add_option("--out", out_path, "Report JSON path");

    // solve
    auto* solve = app.add_subcommand("solve", "Newton solve for a cohesive equilibrium");
    std::string theta0_path;
    solve->add_option("--graph", graph_path)->required();
    solve->add_option("--omega", omega_path)->required();
    solve->add_option("--theta0", theta0_path, "Initial phases (defaults to the DC solution)");
    solve->add_option("--out", out_path);

    // simulate
    auto* sim = app.add_subcommand("simulate", "RK4 simulation of a network file");
    std::string net_path, theta_init;
    SimulationOptions sim_opts;
    sim->add_option("--net", net_path, "Network JSON")->required();
    sim->add_option("--t-end", sim_opts.t_end);
    sim->add_option("--step", sim_opts.step);
    sim->add_option("--sample", sim_opts.sample_interval, "Sampling interval");
    sim->add_option("--theta0", theta_init, "Initial phases (defaults to zero)");
    sim->add_option("--out", out_path, "Trajectory CSV path");

    // kcritical
    auto* kcrit = app.add_subcommand("kcritical", "Critical coupling search on a unit-weight graph");
    kcrit->add_option("--graph", graph_path)->required();
    kcrit->add_option("--omega", omega_path)->required();
    kcrit->add_option("--out", out_path);

    // gen
    auto* gen = app.add_subcommand("gen", "Sample a nominal random network");
    NominalNetworkSpec spec;
    std::string model_name = "erg", dist_name = "uniform-alpha";
    std::uint64_t sample_index = 0;
    gen->add_option("--model", model_name, "erg|rgg|smn");
    gen->add_option("--n", spec.n);
    gen->add_option("--p", spec.p);
    gen->add_option("--alpha", spec.alpha);
    gen->add_option("--dist", dist_name, "uniform-alpha|uniform|bipolar");
    gen->add_flag("--unit-weights", spec.unit_weights);
    gen->add_option("--seed", spec.seed);
    gen->add_option("--sample", sample_index);
    gen->add_option("--out", out_path);

    // powerflow
    auto* pf = app.add_subcommand("powerflow", "DC or lossless AC power flow");
    std::string case_path, mode = "ac";
    pf->add_option("--case", case_path, "Case JSON or MATPOWER .m")->required();
    pf->add_option("--mode", mode)->check(CLI::IsMember({"dc", "ac"}));
    pf->add_option("--out", out_path);

    // scenario
    auto* scen = app.add_subcommand("scenario", "Randomised smart-grid scenarios");
    ScenarioConfig cfg;
    long samples = 1000;
    scen->add_option("--case", case_path)->required();
    scen->add_option("--samples", samples);
    scen->add_option("--seed", cfg.seed);
    scen->add_option("--sigma", cfg.sigma);
    scen->add_option("--out", out_path);

    // contingency
    auto* cont = app.add_subcommand("contingency", "Trip elements and ramp area load");
    std::vector<std::string> trips;
    std::string ramp = "southeast";
    ContingencyOptions copt;
    cont->add_option("--case", case_path)->required();
    cont->add_option("--trip", trips, "gen:BUS or branch:I-J (repeatable)");
    cont->add_option("--ramp", ramp, "southeast or loads=A;gens=B,C");
    cont->add_option("--max-loading", copt.max_loading);
    cont->add_option("--sweep-step", copt.sweep_step);
    cont->add_flag("--simulate", copt.simulate_check, "Simulate at the predicted limit");
    cont->add_option("--out", out_path);

    // montecarlo
    auto* mc = app.add_subcommand("montecarlo", "Hypothesis test over nominal random networks");
    std::string cells_path;
    bool rows = false;
    std::uint64_t master_seed = 1;
    samples = 1000;
    mc->add_option("--cells", cells_path, "JSON list of {n, model, p, alpha}");
    mc->add_option("--samples", samples);
    mc->add_option("--seed", master_seed);
    mc->add_option("--out", out_path);
    mc->add_flag("--rows", rows, "Also write per-sample CSVs next to --out");

    // accuracy
    auto* acc = app.add_subcommand("accuracy", "Critical coupling versus the sync margin");
    std::string models = "erg,rgg,smn", dists = "bipolar,uniform", sizes = "10,20", ps = "0.2,0.5,1";
    long acc_samples = 20;
    acc->add_option("--models", models);
    acc->add_option("--dists", dists);
    acc->add_option("--sizes", sizes);
    acc->add_option("--ps", ps, "Model parameters");
    acc->add_option("--samples", acc_samples);
    acc->add_option("--seed", master_seed);
    acc->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            const auto g = load_graph(graph_path);
            const auto w = load_omega(omega_path, g.node_count());
            if (gamma) require_gamma(*gamma);
            emit_report(out_path, analysis_json(g, w, sync_margin(g, w), gamma));
        } else if (solve->parsed()) {
            const auto g = load_graph(graph_path);
            const auto w = load_omega(omega_path, g.node_count());
            std::optional<Eigen::VectorXd> seed;
            if (!theta0_path.empty()) seed = load_vector(theta0_path);
            const auto r = solve_equilibrium(g, w, seed);
            emit_report(out_path, equilibrium_json(r));
            return r.converged() ? 0 : 3;
        } else if (sim->parsed()) {
            const auto net = network_from_json(parse_json_text(read_text_file(net_path)));
            Eigen::VectorXd th0 = Eigen::VectorXd::Zero(net.size());
            if (!theta_init.empty()) th0 = load_vector(theta_init);
            emit_report(out_path, trajectory_csv(simulate(net, th0, Eigen::VectorXd::Zero(net.size()), sim_opts)));
        } else if (kcrit->parsed()) {
            const auto g = load_graph(graph_path);
            const auto w = load_omega(omega_path, g.node_count());
            const auto r = critical_coupling_search(g, w);
            nlohmann::json j;
            j["schema"] = kReportSchema;
            j["k_min"] = json_real(r.k_min);
            j["k_critical"] = json_real(r.k_critical);
            j["ratio"] = json_real(r.ratio);
            j["evaluations"] = r.evaluations;
            j["simulations"] = r.simulations;
            emit_report(out_path, j);
        } else if (gen->parsed()) {
            spec.model = parse_graph_model(model_name);
            spec.distribution = parse_distribution(dist_name);
            spec.validate();
            const auto nn = nominal_network(spec, sample_index);
            auto j = network_to_json(OscillatorNetwork::kuramoto(nn.graph, nn.omega));
            j["margin"] = json_real(nn.margin);
            j["attempts"] = nn.attempts;
            j["spec"] = {{"n", spec.n},           {"model", to_string(spec.model)},
                         {"p", json_real(spec.p)}, {"alpha", json_real(spec.alpha)},
                         {"distribution", to_string(spec.distribution)},
                         {"unit_weights", spec.unit_weights},
                         {"seed", spec.seed},     {"sample", sample_index}};
            emit_report(out_path, j);
        } else if (pf->parsed()) {
            const auto c = load_case(case_path);
            for (const auto& w : c.warnings) std::cerr << "warning: " << w << "\n";
            const auto pn = build_oscillator_model(c);
            const auto dc = dc_power_flow(pn);
            nlohmann::json j;
            j["schema"] = kReportSchema;
            j["case"] = c.name;
            j["mode"] = mode;
            j["margin"] = json_real(dc.max_angle_diff);
            j["bus_ids"] = pn.bus_ids;
            j["sync_frequency_pu"] = json_real(pn.sync_frequency);
            if (mode == "dc") {
                j["delta"] = json_vector(dc.delta);
            } else {
                const auto ac = ac_power_flow(pn);
                j["feasible"] = ac.feasible;
                j["diagnostics"] = ac.diagnostics;
                j["theta"] = json_vector(ac.newton.solution.theta);
                j["cohesiveness"] = json_real(ac.newton.solution.cohesiveness);
                if (dc.max_angle_diff <= 1.0)
                    j["prediction_error"] = json_real(ac.newton.solution.cohesiveness - std::asin(dc.max_angle_diff));
                emit_report(out_path, j);
                return ac.feasible ? 0 : 3;
            }
            emit_report(out_path, j);
        } else if (scen->parsed()) {
            const auto c = load_case(case_path);
            const auto batch = scenario_experiment(c, cfg, samples, threads);
            emit_report(out_path, scenario_csv(batch, cfg, c.name));
            std::cerr << "mean error " << format_real(batch.mean_error) << " rad over " << samples - batch.infeasible
                      << " feasible samples (" << batch.infeasible << " infeasible)\n";
        } else if (cont->parsed()) {
            const auto c = load_case(case_path);
            std::vector<Trip> parsed;
            for (const auto& t : trips) parsed.push_back(parse_trip(t));
            const auto r = contingency_scan(c, parsed, parse_ramp(ramp), copt);
            std::string trip_text;
            for (const auto& t : trips) trip_text += (trip_text.empty() ? "" : ";") + t;
            emit_report(out_path, contingency_csv(r, trip_text.empty() ? "none" : trip_text, ramp));
            if (r.predicted_limit_loading)
                std::cerr << "thermal limit of " << r.limiting_branch << " reached at additional loading "
                          << format_real(100.0 * *r.predicted_limit_loading) << "%\n";
            if (r.margin_one_loading)
                std::cerr << "margin reaches 1 at additional loading " << format_real(100.0 * *r.margin_one_loading)
                          << "%\n";
        } else if (mc->parsed()) {
            const auto cells = read_cells(cells_path, master_seed);
            std::vector<HypothesisResult> results;
            HypothesisOptions hopt;
            hopt.threads = threads;
            for (const auto& cell : cells) results.push_back(hypothesis_experiment(cell, samples, hopt));
            emit_report(out_path, hypothesis_table_csv(results, master_seed));
            if (rows && out_path != "-")
                for (std::size_t k = 0; k < results.size(); ++k)
                    emit_report(with_suffix(out_path, "cell" + std::to_string(k + 1)), hypothesis_samples_csv(results[k]));
        } else if (acc->parsed()) {
            std::vector<AccuracyCell> cells;
            AccuracyOptions aopt;
            aopt.threads = threads;
            std::uint64_t index = 0;
            for (const auto& m : split(models, ','))
                for (const auto& d : split(dists, ','))
                    for (const auto& p : split(ps, ','))
                        for (const auto& n : split(sizes, ','))
                            cells.push_back(accuracy_experiment(std::stoi(n), parse_graph_model(m), std::stod(p),
                                                                parse_distribution(d), acc_samples,
                                                                cell_seed(master_seed, index++), aopt));
            emit_report(out_path, accuracy_csv(cells, master_seed));
            if (out_path != "-")
                for (const auto& [key, text] : accuracy_group_csvs(cells, master_seed))
                    emit_report(with_suffix(out_path, key), text);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
