#include "syncgrid/dynamics.hpp"

#include "syncgrid/equilibrium.hpp"
#include "syncgrid/errors.hpp"
#include "syncgrid/sync_analysis.hpp"

#include <algorithm>
#include <cmath>

namespace syncgrid {

void OscillatorNetwork::validate() const {
    const int n = graph.node_count();
    if (omega.size() != n || damping.size() != n || inertia.size() != n ||
        static_cast<int>(second_order.size()) != n)
        throw Error(ErrorCode::InvalidNetwork, "network vectors must all have length n");
    for (int i = 0; i < n; ++i) {
        if (!(damping[i] > 0.0)) throw Error(ErrorCode::InvalidNetwork, "damping must be positive at every node");
        if (second_order[i] && !(inertia[i] > 0.0))
            throw Error(ErrorCode::InvalidNetwork, "inertia must be positive on second-order nodes");
    }
}

OscillatorNetwork OscillatorNetwork::kuramoto(WeightedGraph g, Eigen::VectorXd omega) {
    const int n = g.node_count();
    return {std::move(g), std::move(omega), std::vector<bool>(static_cast<std::size_t>(n), false),
            Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n)};
}

OscillatorNetwork OscillatorNetwork::swing(WeightedGraph g, Eigen::VectorXd omega, double inertia, double damping) {
    const int n = g.node_count();
    return {std::move(g), std::move(omega), std::vector<bool>(static_cast<std::size_t>(n), true),
            Eigen::VectorXd::Constant(n, inertia), Eigen::VectorXd::Constant(n, damping)};
}

double sync_frequency(const OscillatorNetwork& net) { return net.omega.sum() / net.damping.sum(); }

OscillatorNetwork rotating_frame(const OscillatorNetwork& net) {
    OscillatorNetwork out = net;
    const double ws = sync_frequency(net);
    out.omega = net.omega - ws * net.damping;
    return out;
}

Eigen::VectorXd rk4_step(const VectorField& f, double t, const Eigen::VectorXd& y, double h) {
    const Eigen::VectorXd k1 = f(t, y);
    const Eigen::VectorXd k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(t + h, y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void integrate_rk4(const VectorField& f, Eigen::VectorXd& y, double t_end, double h, int sample_every,
                   const std::function<bool(double, const Eigen::VectorXd&)>& observe) {
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
    if (sample_every < 1) sample_every = 1;
    const long steps = std::max(0L, std::lround(t_end / h));
    if (!observe(0.0, y)) return;
    for (long k = 1; k <= steps; ++k) {
        y = rk4_step(f, static_cast<double>(k - 1) * h, y, h);
        if (!y.allFinite())
            throw Error(ErrorCode::NonFiniteState, "state diverged at t = " + std::to_string(static_cast<double>(k) * h));
        if (k % sample_every == 0 || k == steps)
            if (!observe(static_cast<double>(k) * h, y)) return;
    }
}

namespace {

struct MixedSystem {
    const OscillatorNetwork& net;
    std::vector<int> slot;  // velocity slot for V1 nodes, -1 otherwise
    int n1 = 0;

    explicit MixedSystem(const OscillatorNetwork& network) : net(network), slot(network.size(), -1) {
        for (int i = 0; i < network.size(); ++i)
            if (network.second_order[i]) slot[i] = n1++;
    }

    [[nodiscard]] Eigen::VectorXd coupling(const Eigen::VectorXd& theta) const {
        Eigen::VectorXd f = net.omega;
        for (const auto& e : net.graph.edges()) {
            const double flow = e.weight * std::sin(theta[e.source] - theta[e.sink]);
            f[e.source] -= flow;
            f[e.sink] += flow;
        }
        return f;
    }

    [[nodiscard]] Eigen::VectorXd rhs(const Eigen::VectorXd& y) const {
        const int n = net.size();
        const Eigen::VectorXd f = coupling(y.head(n));
        Eigen::VectorXd dy(n + n1);
        for (int i = 0; i < n; ++i) {
            if (slot[i] >= 0) {
                const double v = y[n + slot[i]];
                dy[i] = v;
                dy[n + slot[i]] = (f[i] - net.damping[i] * v) / net.inertia[i];
            } else {
                dy[i] = f[i] / net.damping[i];
            }
        }
        return dy;
    }

    [[nodiscard]] Eigen::VectorXd frequencies(const Eigen::VectorXd& y) const { return rhs(y).head(net.size()); }
};

}  // namespace

Trajectory simulate(const OscillatorNetwork& net, const Eigen::VectorXd& theta0, const Eigen::VectorXd& theta_dot0,
                    const SimulationOptions& options) {
    net.validate();
    const int n = net.size();
    if (theta0.size() != n) throw Error(ErrorCode::DimensionMismatch, "theta0 length differs from n");
    if (!(options.step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
    MixedSystem sys(net);
    if (sys.n1 > 0 && theta_dot0.size() != n)
        throw Error(ErrorCode::DimensionMismatch, "theta_dot0 length differs from n");

    Eigen::VectorXd y(n + sys.n1);
    y.head(n) = theta0;
    for (int i = 0; i < n; ++i)
        if (sys.slot[i] >= 0) y[n + sys.slot[i]] = theta_dot0[i];

    Trajectory traj;
    traj.step = options.step;
    const int every = std::max(1, static_cast<int>(std::lround(options.sample_interval / options.step)));
    const double ws = sync_frequency(net);
    int quiet_samples = 0;
    integrate_rk4([&](double, const Eigen::VectorXd& s) { return sys.rhs(s); }, y, options.t_end, options.step, every,
                  [&](double t, const Eigen::VectorXd& s) {
                      traj.times.push_back(t);
                      traj.theta.push_back(s.head(n));
                      traj.theta_dot.push_back(sys.frequencies(s));
                      if (options.steady_state_tol > 0.0) {
                          const double dev = (traj.theta_dot.back().array() - ws).abs().maxCoeff();
                          quiet_samples = dev <= options.steady_state_tol ? quiet_samples + 1 : 0;
                          if (quiet_samples >= 2) return false;
                      }
                      return true;
                  });
    return traj;
}

SyncDetection detect_sync(const Trajectory& traj, const WeightedGraph& g, double tol_freq, double gamma) {
    SyncDetection d;
    if (traj.samples() == 0) return d;
    auto freq_ok = [&](std::size_t k) {
        const auto& w = traj.theta_dot[k];
        return (w.array() - w.mean()).abs().maxCoeff() <= tol_freq;
    };
    auto cohesive_ok = [&](std::size_t k) { return phase_cohesiveness(traj.theta[k], g) <= gamma + kBoundarySlack; };
    const std::size_t last = traj.samples() - 1;
    d.freq_synced = freq_ok(last);
    d.cohesive = cohesive_ok(last);
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        if (freq_ok(k) && cohesive_ok(k)) {
            d.t_sync = traj.times[k];
            break;
        }
    }
    return d;
}

double energy(const OscillatorNetwork& net, const Eigen::VectorXd& theta) {
    if (theta.size() != net.size()) throw Error(ErrorCode::DimensionMismatch, "theta length differs from n");
    double e = -net.omega.dot(theta);
    for (const auto& edge : net.graph.edges()) e += edge.weight * (1.0 - std::cos(theta[edge.source] - theta[edge.sink]));
    return e;
}

double quadratic_energy(const OscillatorNetwork& net, const Eigen::VectorXd& theta) {
    if (theta.size() != net.size()) throw Error(ErrorCode::DimensionMismatch, "theta length differs from n");
    double e = -net.omega.dot(theta);
    for (const auto& edge : net.graph.edges()) {
        const double d = theta[edge.source] - theta[edge.sink];
        e += 0.5 * edge.weight * d * d;
    }
    return e;
}

namespace {

enum class Verdict { Synced, NotSynced, Unknown };

struct CouplingProbe {
    const WeightedGraph& g;
    const Eigen::VectorXd& omega;
    const CriticalCouplingOptions& opt;
    CriticalCouplingResult& stats;

    Verdict newton(double K, const Eigen::VectorXd& seed, Eigen::VectorXd& out) {
        ++stats.evaluations;
        const auto r = solve_equilibrium(g.scaled(K), omega, seed);
        if (!r.converged()) return Verdict::Unknown;
        out = r.theta_unwrapped;
        return r.solution.cohesiveness <= opt.gamma + 1e-9 ? Verdict::Synced : Verdict::NotSynced;
    }

    Verdict simulate_at(double K, const Eigen::VectorXd& seed, Eigen::VectorXd& out) {
        ++stats.simulations;
        SimulationOptions so;
        so.step = opt.sim_step;
        so.t_end = opt.sim_t_max;
        so.sample_interval = opt.sim_step * 10;
        so.steady_state_tol = opt.steady_tol;
        const auto net = OscillatorNetwork::kuramoto(g.scaled(K), omega);
        const auto traj = simulate(net, seed, Eigen::VectorXd::Zero(g.node_count()), so);
        const double dev = traj.theta_dot.back().cwiseAbs().maxCoeff();
        if (dev > opt.steady_tol) return Verdict::NotSynced;
        Eigen::VectorXd polished;
        if (newton(K, traj.theta.back(), polished) == Verdict::Synced) {
            out = polished;
            return Verdict::Synced;
        }
        out = traj.theta.back();
        return phase_cohesiveness(out, g) <= opt.gamma + 1e-9 ? Verdict::Synced : Verdict::NotSynced;
    }

    /// Follows the cohesive branch from (k_from, theta_from) down or up to k_to.
    Verdict continue_to(double k_from, Eigen::VectorXd theta_from, double k_to, Eigen::VectorXd& out) {
        double k = k_from;
        double step = k_to - k_from;
        while (k != k_to) {
            const double next = std::abs(step) >= std::abs(k_to - k) ? k_to : k + step;
            Eigen::VectorXd sol;
            const Verdict v = newton(next, theta_from, sol);
            if (v == Verdict::Synced) {
                k = next;
                theta_from = sol;
                continue;
            }
            if (v == Verdict::NotSynced) return Verdict::NotSynced;
            step *= 0.5;
            if (std::abs(step) < 1e-7 * std::abs(k_to)) return Verdict::NotSynced;
        }
        out = theta_from;
        return Verdict::Synced;
    }
};

}  // namespace

CriticalCouplingResult critical_coupling_search(const WeightedGraph& g, const Eigen::VectorXd& omega,
                                                const CriticalCouplingOptions& options) {
    require_connected(g);
    for (const auto& e : g.edges())
        if (e.weight != 1.0) throw Error(ErrorCode::InvalidArgument, "critical coupling search expects unit weights");
    require_gamma(options.gamma);

    CriticalCouplingResult res;
    const auto assessment = sync_margin(g, omega);
    res.k_critical = assessment.margin;
    if (res.k_critical == 0.0) {
        res.ratio = 1.0;
        return res;
    }

    const double s = std::sin(options.gamma);
    const Eigen::VectorXd deg = g.weighted_degrees();
    double lo = 0.0;
    for (int i = 0; i < g.node_count(); ++i) lo = std::max(lo, std::abs(omega[i]) / (deg[i] * s));
    for (const auto& e : g.edges())
        lo = std::max(lo, std::abs(omega[e.source] - omega[e.sink]) / ((deg[e.source] + deg[e.sink]) * s));
    lo = std::max(lo, min_infinity_norm_solution(g, omega).norm / s);
    lo *= 1.0 - 1e-9;

    CouplingProbe probe{g, omega, options, res};
    double hi = res.k_critical;
    Eigen::VectorXd theta_hi;
    int doublings = 0;
    for (;;) {
        const Eigen::VectorXd seed = assessment.phases / hi;
        Verdict v = probe.newton(hi, seed, theta_hi);
        if (v == Verdict::Unknown) v = probe.simulate_at(hi, seed, theta_hi);
        if (v == Verdict::Synced) break;
        if (++doublings > options.max_doublings)
            throw Error(ErrorCode::NoSyncInBracket, "no cohesive equilibrium up to 2^" +
                                                        std::to_string(options.max_doublings) + " K_critical");
        lo = std::max(lo, hi);
        hi *= 2.0;
    }

    lo = std::min(lo, hi);
    while ((hi - lo) > options.relative_tolerance * hi) {
        const double mid = 0.5 * (lo + hi);
        Eigen::VectorXd theta_mid;
        if (probe.continue_to(hi, theta_hi, mid, theta_mid) == Verdict::Synced) {
            hi = mid;
            theta_hi = theta_mid;
        } else {
            lo = mid;
        }
    }
    res.k_min = hi;
    res.ratio = res.k_min / res.k_critical;
    return res;
}

}  // namespace syncgrid
