#include "syncgrid/experiments.hpp"

#include "syncgrid/dynamics.hpp"
#include "syncgrid/equilibrium.hpp"
#include "syncgrid/errors.hpp"
#include "syncgrid/rng.hpp"
#include "syncgrid/sync_analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace syncgrid {

long chernoff_samples(double epsilon, double eta) {
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(eta > 0.0 && eta < 1.0))
        throw Error(ErrorCode::InvalidLevel, "epsilon and eta must lie in (0, 1)");
    const double bound = std::log(2.0 / eta) / (2.0 * epsilon * epsilon);
    return std::max(1L, static_cast<long>(std::ceil(bound)));
}

double chernoff_accuracy(long samples, double eta) {
    if (samples < 1 || !(eta > 0.0 && eta < 1.0)) throw Error(ErrorCode::InvalidLevel, "need samples >= 1 and eta in (0, 1)");
    return std::sqrt(std::log(2.0 / eta) / (2.0 * static_cast<double>(samples)));
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::uint64_t index) {
    return CounterRng(master_seed, {index, 0xce11}).next_u64();
}

void parallel_for(long count, unsigned threads, const std::function<void(long)>& job) {
    if (count <= 0) return;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<long>(threads, count));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::atomic<long> next{0};
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (long i = next++; i < count && !failed; i = next++) {
            try {
                job(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
                failed = true;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

HypothesisResult hypothesis_experiment(const NominalNetworkSpec& spec, long samples, const HypothesisOptions& options) {
    if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be at least 1");
    spec.validate();
    HypothesisResult res;
    res.spec = spec;
    res.samples = samples;
    res.tolerance_used = options.cohesion_tolerance;
    res.chernoff_epsilon = chernoff_accuracy(samples, 0.01);
    res.rows.resize(static_cast<std::size_t>(samples));

    NewtonOptions newton;
    newton.tolerance = options.newton_tolerance;

    parallel_for(samples, options.threads, [&](long i) {
        const auto idx = static_cast<std::uint64_t>(i);
        const auto nn = nominal_network(spec, idx);
        HypothesisSample row;
        row.index = idx;
        row.margin = nn.margin;
        row.gamma = std::asin(nn.margin);
        row.rejections = nn.attempts - 1;
        row.cohesiveness = std::numeric_limits<double>::infinity();
        const double allowed = row.gamma + options.cohesion_tolerance;

        auto attempt = [&](const std::optional<Eigen::VectorXd>& seed) {
            ++row.attempts;
            const auto r = solve_equilibrium(nn.graph, nn.omega, seed, newton);
            if (!r.converged()) return false;
            row.cohesiveness = std::min(row.cohesiveness, r.solution.cohesiveness);
            return r.solution.cohesiveness <= allowed;
        };

        row.success = attempt(std::nullopt);
        if (!row.success) {
            const Eigen::VectorXd dc = LaplacianSolver(nn.graph).solve(nn.omega);
            CounterRng rng(spec.seed, {idx, 0xfeed});
            for (int r = 0; r < options.restarts && !row.success; ++r) {
                Eigen::VectorXd seed = rng.uniform(0.5, 1.5) * dc;
                for (Eigen::Index k = 0; k < seed.size(); ++k) seed[k] += 0.1 * row.gamma * rng.normal();
                const double coh = phase_cohesiveness(seed, nn.graph);
                if (coh > row.gamma && coh > 0.0) seed *= row.gamma / coh;
                row.success = attempt(seed);
            }
        }
        res.rows[static_cast<std::size_t>(i)] = row;
    });

    for (const auto& row : res.rows)
        if (!row.success) ++res.failures;
    res.empirical_probability = static_cast<double>(samples - res.failures) / static_cast<double>(samples);
    return res;
}

AccuracyCell accuracy_experiment(int n, GraphModel model, double p, FrequencyDistribution distribution, long samples,
                                 std::uint64_t seed, const AccuracyOptions& options) {
    if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be at least 1");
    NominalNetworkSpec spec;
    spec.n = n;
    spec.model = model;
    spec.p = p;
    spec.distribution = distribution;
    spec.unit_weights = true;
    spec.seed = seed;
    spec.validate();

    AccuracyCell cell;
    cell.n = n;
    cell.model = model;
    cell.p = p;
    cell.distribution = distribution;
    cell.seed = seed;
    cell.samples = samples;
    cell.ratios.resize(static_cast<std::size_t>(samples));

    parallel_for(samples, options.threads, [&](long i) {
        for (std::uint64_t a = 0; a < static_cast<std::uint64_t>(kMaxRetries); ++a) {
            const std::uint64_t key = static_cast<std::uint64_t>(i) * 1024 + a;
            const auto g = generate_graph(spec, key);
            const auto omega = sample_frequencies(n, distribution, 1.0, seed, key);
            if (sync_margin(g, omega).margin == 0.0) continue;
            cell.ratios[static_cast<std::size_t>(i)] = critical_coupling_search(g, omega).ratio;
            return;
        }
        throw Error(ErrorCode::MarginRetryExceeded, "only zero-margin samples drawn");
    });

    double sum = 0.0;
    cell.min_ratio = std::numeric_limits<double>::infinity();
    cell.max_ratio = 0.0;
    for (double r : cell.ratios) {
        sum += r;
        cell.min_ratio = std::min(cell.min_ratio, r);
        cell.max_ratio = std::max(cell.max_ratio, r);
    }
    cell.mean_ratio = sum / static_cast<double>(samples);
    return cell;
}

ScenarioBatch scenario_experiment(const PowerCase& c, const ScenarioConfig& cfg, long samples, unsigned threads) {
    if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be at least 1");
    ScenarioBatch batch;
    batch.samples = samples;
    batch.rows.resize(static_cast<std::size_t>(samples));
    parallel_for(samples, threads, [&](long i) {
        const auto idx = static_cast<std::uint64_t>(i);
        const auto pn = build_oscillator_model(randomize_scenario(c, cfg, idx));
        const auto ac = ac_power_flow(pn);
        ScenarioSample row;
        row.index = idx;
        row.margin = ac.margin;
        row.gamma_pred = std::asin(std::min(1.0, ac.margin));
        row.feasible = ac.feasible;
        row.cohesiveness = ac.newton.solution.cohesiveness;
        row.error = row.cohesiveness - row.gamma_pred;
        batch.rows[static_cast<std::size_t>(i)] = row;
    });
    long ok = 0;
    for (const auto& row : batch.rows) {
        if (!row.feasible) {
            ++batch.infeasible;
            continue;
        }
        ++ok;
        batch.mean_error += row.error;
        batch.mean_abs_error += std::abs(row.error);
        batch.max_abs_error = std::max(batch.max_abs_error, std::abs(row.error));
    }
    if (ok > 0) {
        batch.mean_error /= static_cast<double>(ok);
        batch.mean_abs_error /= static_cast<double>(ok);
    }
    return batch;
}

}  // namespace syncgrid
