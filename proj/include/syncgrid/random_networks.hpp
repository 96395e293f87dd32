#pragma once

#include "syncgrid/graph.hpp"

#include <cstdint>
#include <string>

namespace syncgrid {

enum class GraphModel { ERG, RGG, SMN };
enum class FrequencyDistribution {
    UniformAlpha,  // q_i ~ U[-alpha/2, alpha/2]
    UniformUnit,   // q_i ~ U[-1, 1]
    Bipolar,       // q_i in {-1, +1} with equal probability
};

GraphModel parse_graph_model(const std::string& name);
std::string to_string(GraphModel m);
FrequencyDistribution parse_distribution(const std::string& name);
std::string to_string(FrequencyDistribution d);

struct NominalNetworkSpec {
    int n = 10;
    GraphModel model = GraphModel::ERG;
    double p = 0.3;
    FrequencyDistribution distribution = FrequencyDistribution::UniformAlpha;
    double alpha = 1.0;
    bool unit_weights = false;  // otherwise U[0.5, 5]
    std::uint64_t seed = 0;

    /// Throws InvalidArgument for n < 2, p outside [0, 1] or alpha <= 0.
    void validate() const;
};

inline constexpr int kMaxRetries = 10000;

/// Connected unit-weight topology for the given sample index. Disconnected
/// realisations are discarded; throws ConnectivityRetryExceeded after kMaxRetries.
WeightedGraph generate_graph(const NominalNetworkSpec& spec, std::uint64_t sample = 0);

/// Same topology with i.i.d. U[0.5, 5] weights.
WeightedGraph sample_weights(const WeightedGraph& g, std::uint64_t seed, std::uint64_t sample = 0);

/// Zero-mean frequencies.
Eigen::VectorXd sample_frequencies(int n, FrequencyDistribution dist, double alpha, std::uint64_t seed,
                                   std::uint64_t sample = 0);

struct NominalNetwork {
    WeightedGraph graph;
    Eigen::VectorXd omega;
    double margin = 0.0;
    int attempts = 0;
};

/// Rejection-samples (graph, omega) until the sync margin is below 1.
/// Throws MarginRetryExceeded after kMaxRetries.
NominalNetwork nominal_network(const NominalNetworkSpec& spec, std::uint64_t sample = 0);

}  // namespace syncgrid
