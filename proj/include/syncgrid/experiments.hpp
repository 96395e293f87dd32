#pragma once

#include "syncgrid/power_case.hpp"
#include "syncgrid/powerflow.hpp"
#include "syncgrid/random_networks.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace syncgrid {

/// Smallest N with N >= ln(2/eta) / (2 eps^2). Throws InvalidLevel outside (0, 1).
long chernoff_samples(double epsilon, double eta);
/// Accuracy eps guaranteed by N samples at confidence 1 - eta.
double chernoff_accuracy(long samples, double eta);

struct HypothesisOptions {
    double newton_tolerance = 1e-6;
    double cohesion_tolerance = 1e-4;
    int restarts = 5;
    unsigned threads = 0;  // 0 picks hardware concurrency
};

struct HypothesisSample {
    std::uint64_t index = 0;
    double margin = 0.0;
    double gamma = 0.0;
    double cohesiveness = 0.0;  // best found, infinity when nothing converged
    int attempts = 0;           // Newton starts used
    int rejections = 0;         // nominal-network resamples
    bool success = false;
};

struct HypothesisResult {
    NominalNetworkSpec spec;
    long samples = 0;
    long failures = 0;
    double empirical_probability = 0.0;
    double tolerance_used = 0.0;
    double chernoff_epsilon = 0.0;  // at eta = 0.01
    std::vector<HypothesisSample> rows;
};

/// For each nominal network, checks that an equilibrium with cohesiveness <= arcsin(margin) + tol exists.
HypothesisResult hypothesis_experiment(const NominalNetworkSpec& spec, long samples, const HypothesisOptions& options = {});

struct AccuracyOptions {
    unsigned threads = 0;
};

struct AccuracyCell {
    int n = 0;
    GraphModel model = GraphModel::ERG;
    double p = 0.0;
    FrequencyDistribution distribution = FrequencyDistribution::Bipolar;
    std::uint64_t seed = 0;
    long samples = 0;
    double mean_ratio = 0.0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::vector<double> ratios;
};

/// Mean K_min / |L^+ omega|_{E,inf} over unit-weight random networks.
AccuracyCell accuracy_experiment(int n, GraphModel model, double p, FrequencyDistribution distribution, long samples,
                                 std::uint64_t seed, const AccuracyOptions& options = {});

struct ScenarioSample {
    std::uint64_t index = 0;
    double margin = 0.0;
    double gamma_pred = 0.0;
    double cohesiveness = 0.0;
    double error = 0.0;  // cohesiveness - arcsin(margin)
    bool feasible = false;
};

struct ScenarioBatch {
    long samples = 0;
    long infeasible = 0;
    double mean_error = 0.0;
    double mean_abs_error = 0.0;
    double max_abs_error = 0.0;
    std::vector<ScenarioSample> rows;
};

ScenarioBatch scenario_experiment(const PowerCase& c, const ScenarioConfig& cfg, long samples, unsigned threads = 0);

/// Seed of cell `index` derived from a master seed.
std::uint64_t cell_seed(std::uint64_t master_seed, std::uint64_t index);

/// Runs job(i) for i in [0, count) over worker threads. Results must be written to per-index slots.
/// After a failure no new indices start; the exception of the lowest failing index is rethrown.
void parallel_for(long count, unsigned threads, const std::function<void(long)>& job);

}  // namespace syncgrid
