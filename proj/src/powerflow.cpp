#include "syncgrid/powerflow.hpp"

#include "syncgrid/errors.hpp"
#include "syncgrid/rng.hpp"
#include "syncgrid/sync_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace syncgrid {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

struct MergedBranch {
    double a = 0.0;
    double flow_limit = 0.0;
    bool unrated = false;
    std::optional<double> angle_limit;
};

std::vector<int> choose(std::size_t count, std::size_t k, CounterRng& rng) {
    std::vector<int> idx(count);
    for (std::size_t i = 0; i < count; ++i) idx[i] = static_cast<int>(i);
    k = std::min(k, count);
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(count - i)]);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::size_t selection_size(double fraction, std::size_t count) {
    if (fraction <= 0.0 || count == 0) return 0;
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(fraction * static_cast<double>(count))), 1, count);
}

}  // namespace

std::string PowerNetwork::edge_label(int l) const {
    return std::to_string(edge_buses.at(l).first) + "-" + std::to_string(edge_buses.at(l).second);
}

PowerNetwork build_oscillator_model(const PowerCase& c, const ModelOptions& options) {
    c.validate();
    const int n = static_cast<int>(c.buses.size());
    std::map<std::pair<int, int>, MergedBranch> merged;
    for (const auto& br : c.branches) {
        if (!br.in_service) continue;
        if (options.strict_lossless && br.r != 0.0)
            throw Error(ErrorCode::NonLosslessCase, "branch " + std::to_string(br.from) + "-" + std::to_string(br.to) +
                                                        " has resistance");
        int i = c.bus_index(br.from), j = c.bus_index(br.to);
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        const double tap = br.ratio == 0.0 ? 1.0 : br.ratio;
        auto& m = merged[{i, j}];
        m.a += c.buses[i].vm * c.buses[j].vm / (br.x * tap);
        if (br.rate_a_mva > 0.0)
            m.flow_limit += br.rate_a_mva / c.base_mva;
        else
            m.unrated = true;
        if (br.angle_limit) m.angle_limit = m.angle_limit ? std::min(*m.angle_limit, *br.angle_limit) : *br.angle_limit;
    }

    PowerNetwork pn;
    std::vector<Edge> edges;
    for (const auto& [key, m] : merged) {
        edges.push_back({key.first, key.second, m.a});
        pn.edge_buses.emplace_back(c.buses[key.first].id, c.buses[key.second].id);
        const double flow = m.unrated ? 0.0 : m.flow_limit;
        pn.flow_limits_pu.push_back(flow);
        double limit = kHalfPi;
        if (m.angle_limit)
            limit = std::min(kHalfPi, *m.angle_limit);
        else if (flow > 0.0 && flow / m.a < 1.0)
            limit = std::asin(flow / m.a);
        pn.angle_limits.push_back(limit);
    }
    WeightedGraph g(n, std::move(edges));

    const auto gen_bus = c.generator_buses();
    const auto inj = c.injections_pu();
    OscillatorNetwork net;
    net.graph = std::move(g);
    net.second_order = gen_bus;
    net.inertia = Eigen::VectorXd::Zero(n);
    net.damping = Eigen::VectorXd::Zero(n);
    pn.raw_injections = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) {
        const auto& b = c.buses[i];
        pn.bus_ids.push_back(b.id);
        pn.raw_injections[i] = inj[i];
        if (gen_bus[i]) {
            net.inertia[i] = b.inertia.value_or(options.generator_inertia);
            net.damping[i] = b.damping.value_or(options.generator_damping);
        } else {
            net.damping[i] = b.damping.value_or(options.load_damping);
        }
    }
    net.omega = pn.raw_injections;
    net.validate();
    pn.sync_frequency = sync_frequency(net);
    pn.net = rotating_frame(net);
    return pn;
}

DcFlowResult dc_power_flow(const PowerNetwork& pn) {
    const auto& g = pn.net.graph;
    if (!g.is_connected()) throw Error(ErrorCode::SingularSystem, "branch graph is disconnected");
    DcFlowResult r;
    r.delta = LaplacianSolver(g).solve(pn.net.omega);
    r.delta.array() -= r.delta[0];
    r.max_angle_diff = edge_infinity_norm(g, r.delta);
    return r;
}

DcFlowResult dc_power_flow(const PowerCase& c) { return dc_power_flow(build_oscillator_model(c)); }

AcFlowResult ac_power_flow(const PowerNetwork& pn) {
    const auto dc = dc_power_flow(pn);
    AcFlowResult r;
    r.margin = dc.max_angle_diff;
    r.newton = solve_equilibrium(pn.net.graph, pn.net.omega, dc.delta);
    const auto& sol = r.newton.solution;
    r.feasible = r.newton.converged() && sol.cohesiveness < kHalfPi;
    std::ostringstream d;
    switch (r.newton.status) {
        case NewtonStatus::Converged: d << "converged"; break;
        case NewtonStatus::NoConvergence: d << "no convergence"; break;
        case NewtonStatus::SingularJacobian: d << "singular Jacobian"; break;
    }
    d << " after " << r.newton.iterations << " iterations, residual " << sol.residual << ", cohesiveness "
      << sol.cohesiveness << ", DC margin " << r.margin;
    r.diagnostics = d.str();
    return r;
}

AcFlowResult ac_power_flow(const PowerCase& c) { return ac_power_flow(build_oscillator_model(c)); }

void ScenarioConfig::validate() const {
    for (double f : {load_fluct_fraction, gen_fluct_fraction, fast_ramp_fraction, controllable_load_fraction})
        if (!(f >= 0.0 && f <= 1.0)) throw Error(ErrorCode::InvalidArgument, "scenario fractions must lie in [0, 1]");
    if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be nonnegative");
}

PowerCase randomize_scenario(const PowerCase& c, const ScenarioConfig& cfg, std::uint64_t sample) {
    cfg.validate();
    PowerCase out = c;
    std::vector<int> loads, gens;
    for (std::size_t i = 0; i < out.buses.size(); ++i)
        if (out.buses[i].pd_mw > 0.0) loads.push_back(static_cast<int>(i));
    for (std::size_t k = 0; k < out.generators.size(); ++k)
        if (out.generators[k].in_service) gens.push_back(static_cast<int>(k));

    const std::size_t n_fast = selection_size(cfg.fast_ramp_fraction, gens.size());
    const std::size_t n_ctrl = selection_size(cfg.controllable_load_fraction, loads.size());
    if (n_fast + n_ctrl == 0) throw Error(ErrorCode::NoAdjustableSources, "no fast-ramping units or controllable loads");

    CounterRng pick(cfg.seed, {sample, 11});
    CounterRng noise(cfg.seed, {sample, 12});
    const double sd = cfg.sigma * c.base_mva;

    for (int k : choose(loads.size(), selection_size(cfg.load_fluct_fraction, loads.size()), pick))
        out.buses[loads[k]].pd_mw += sd * noise.normal();
    for (int k : choose(gens.size(), selection_size(cfg.gen_fluct_fraction, gens.size()), pick))
        out.generators[gens[k]].pg_mw += sd * noise.normal();

    const double imbalance = out.total_generation_mw() - out.total_load_mw();
    const double share = imbalance / static_cast<double>(n_fast + n_ctrl);
    for (int k : choose(gens.size(), n_fast, pick)) out.generators[gens[k]].pg_mw -= share;
    for (int k : choose(loads.size(), n_ctrl, pick)) out.buses[loads[k]].pd_mw += share;
    return out;
}

Trip parse_trip(const std::string& text) {
    Trip t;
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "trip must look like gen:BUS or branch:I-J");
    const std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
    try {
        if (kind == "gen") {
            t.kind = Trip::Kind::Generator;
            t.a = std::stoi(rest);
        } else if (kind == "branch") {
            t.kind = Trip::Kind::Branch;
            const auto dash = rest.find('-');
            if (dash == std::string::npos) throw Error(ErrorCode::InvalidArgument, "branch trip needs I-J");
            t.a = std::stoi(rest.substr(0, dash));
            t.b = std::stoi(rest.substr(dash + 1));
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown trip kind '" + kind + "'");
        }
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::InvalidArgument, "malformed trip '" + text + "'");
    }
    return t;
}

LoadingRamp parse_ramp(const std::string& text) {
    if (text == "southeast") return {{3}, {1, 2}};
    LoadingRamp r;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ';')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "ramp must be 'southeast' or loads=..;gens=..");
        const std::string key = part.substr(0, eq);
        std::istringstream vals(part.substr(eq + 1));
        std::string v;
        auto& target = key == "loads" ? r.load_areas : r.gen_areas;
        if (key != "loads" && key != "gens") throw Error(ErrorCode::InvalidArgument, "unknown ramp key '" + key + "'");
        while (std::getline(vals, v, ',')) target.push_back(std::stoi(v));
    }
    if (r.load_areas.empty() || r.gen_areas.empty())
        throw Error(ErrorCode::InvalidArgument, "ramp needs both load and generator areas");
    return r;
}

PowerCase apply_trips(const PowerCase& c, const std::vector<Trip>& trips) {
    PowerCase out = c;
    for (const auto& t : trips) {
        int hits = 0;
        if (t.kind == Trip::Kind::Generator) {
            for (auto& g : out.generators)
                if (g.bus == t.a && g.in_service) {
                    g.in_service = false;
                    ++hits;
                }
        } else {
            for (auto& br : out.branches)
                if (br.in_service && ((br.from == t.a && br.to == t.b) || (br.from == t.b && br.to == t.a))) {
                    br.in_service = false;
                    ++hits;
                }
        }
        if (hits == 0) throw Error(ErrorCode::InvalidArgument, "trip matches no in-service element");
    }
    return out;
}

PowerCase apply_loading(const PowerCase& c, const LoadingRamp& ramp, double loading) {
    PowerCase out = c;
    auto in = [](const std::vector<int>& areas, int a) { return std::find(areas.begin(), areas.end(), a) != areas.end(); };
    std::vector<int> loads, gens;
    double area_load = 0.0;
    for (std::size_t i = 0; i < out.buses.size(); ++i)
        if (in(ramp.load_areas, out.buses[i].area) && out.buses[i].pd_mw > 0.0) {
            loads.push_back(static_cast<int>(i));
            area_load += out.buses[i].pd_mw;
        }
    for (std::size_t k = 0; k < out.generators.size(); ++k)
        if (out.generators[k].in_service && in(ramp.gen_areas, out.buses[out.bus_index(out.generators[k].bus)].area))
            gens.push_back(static_cast<int>(k));
    if (loads.empty() || gens.empty()) throw Error(ErrorCode::InvalidArgument, "ramp areas contain no loads or no generators");
    const double extra = loading * area_load;
    for (int i : loads) out.buses[i].pd_mw += extra / static_cast<double>(loads.size());
    for (int k : gens) out.generators[k].pg_mw += extra / static_cast<double>(gens.size());
    return out;
}

ContingencyResult contingency_scan(const PowerCase& c, const std::vector<Trip>& trips, const LoadingRamp& ramp,
                                   const ContingencyOptions& options) {
    const PowerCase tripped = apply_trips(c, trips);
    const PowerNetwork base = build_oscillator_model(tripped, options.model);
    if (!base.net.graph.is_connected()) throw Error(ErrorCode::IslandingDetected, "trips split the network into islands");

    const PowerNetwork unit = build_oscillator_model(apply_loading(tripped, ramp, 1.0), options.model);
    const LaplacianSolver solver(base.net.graph);
    const Eigen::VectorXd psi0 = base.net.graph.edge_differences(solver.solve(base.net.omega));
    const Eigen::VectorXd psi1 = base.net.graph.edge_differences(solver.solve(unit.net.omega)) - psi0;
    const int E = base.net.graph.edge_count();

    auto evaluate = [&](double s) {
        ContingencyPoint p;
        p.loading = s;
        const Eigen::VectorXd psi = psi0 + s * psi1;
        p.margin = psi.cwiseAbs().maxCoeff();
        for (int l = 0; l < E; ++l) {
            const double v = std::abs(psi[l]);
            const double ratio = v > 1.0 ? std::numeric_limits<double>::infinity() : std::asin(v) / base.angle_limits[l];
            if (ratio > p.worst_limit_ratio || p.limiting_edge < 0) {
                p.worst_limit_ratio = ratio;
                p.limiting_edge = l;
            }
        }
        return p;
    };
    auto refine = [&](double lo, double hi, auto crossed) {
        for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            (crossed(evaluate(mid)) ? hi : lo) = mid;
        }
        return hi;
    };

    ContingencyResult res;
    for (int l = 0; l < E; ++l) res.nominal_line_angles.push_back(std::asin(std::min(1.0, std::abs(psi0[l]))));
    const int steps = static_cast<int>(std::ceil(options.max_loading / options.sweep_step - 1e-9));
    auto thermal = [](const ContingencyPoint& p) { return p.worst_limit_ratio >= 1.0; };
    auto stability = [](const ContingencyPoint& p) { return p.margin >= 1.0; };
    for (int k = 0; k <= steps; ++k) {
        const double s = std::min(options.max_loading, k * options.sweep_step);
        res.sweep.push_back(evaluate(s));
        const auto& cur = res.sweep.back();
        const double prev = k == 0 ? s : res.sweep[k - 1].loading;
        if (!res.predicted_limit_loading && thermal(cur)) {
            const double at = k == 0 ? 0.0 : refine(prev, s, thermal);
            res.predicted_limit_loading = at;
            res.limiting_branch = base.edge_label(evaluate(at).limiting_edge);
        }
        if (!res.margin_one_loading && stability(cur)) res.margin_one_loading = k == 0 ? 0.0 : refine(prev, s, stability);
    }

    if (options.simulate_check) {
        const double s = res.predicted_limit_loading.value_or(res.margin_one_loading.value_or(options.max_loading));
        const PowerNetwork at = build_oscillator_model(apply_loading(tripped, ramp, s), options.model);
        const Eigen::VectorXd delta = LaplacianSolver(at.net.graph).solve(at.net.omega);
        const auto traj = simulate(at.net, delta, Eigen::VectorXd::Zero(delta.size()), options.simulation);
        SimulationCheck chk;
        chk.loading = s;
        const auto& th = traj.theta.back();
        const auto& w = traj.theta_dot.back();
        chk.freq_synced = (w.array() - w.mean()).abs().maxCoeff() <= 1e-3;
        chk.final_cohesiveness = phase_cohesiveness(th, at.net.graph);
        chk.within_limits = true;
        for (int l = 0; l < E; ++l) {
            const auto& e = at.net.graph.edges()[l];
            if (std::abs(wrap_angle(th[e.sink] - th[e.source])) > at.angle_limits[l] + 1e-3) chk.within_limits = false;
        }
        res.simulation = chk;
    }
    return res;
}

}  // namespace syncgrid
