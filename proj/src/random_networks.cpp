#include "syncgrid/random_networks.hpp"

#include "syncgrid/errors.hpp"
#include "syncgrid/rng.hpp"
#include "syncgrid/sync_analysis.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>
#include <vector>

namespace syncgrid {

namespace {

enum Stage : std::uint64_t { kTopology = 1, kWeights = 2, kFrequencies = 3 };

std::vector<Edge> erdos_renyi(int n, double p, CounterRng& rng) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < p) edges.push_back({i, j, 1.0});
    return edges;
}

std::vector<Edge> geometric(int n, double radius, CounterRng& rng) {
    std::vector<std::pair<double, double>> pts(static_cast<std::size_t>(n));
    for (auto& pt : pts) {
        pt.first = rng.uniform();
        pt.second = rng.uniform();
    }
    std::vector<Edge> edges;
    const double r2 = radius * radius;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double dx = pts[i].first - pts[j].first, dy = pts[i].second - pts[j].second;
            if (dx * dx + dy * dy <= r2) edges.push_back({i, j, 1.0});
        }
    return edges;
}

std::vector<Edge> small_world(int n, double p, CounterRng& rng) {
    if (n == 2) return {{0, 1, 1.0}};
    std::vector<std::set<int>> nbr(static_cast<std::size_t>(n));
    std::vector<std::pair<int, int>> ring;
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        ring.emplace_back(i, j);
        nbr[i].insert(j);
        nbr[j].insert(i);
    }
    for (auto& [i, j] : ring) {
        if (rng.uniform() >= p) continue;
        std::vector<int> candidates;
        for (int k = 0; k < n; ++k)
            if (k != i && !nbr[i].count(k)) candidates.push_back(k);
        if (candidates.empty()) continue;
        const int k = candidates[rng.below(candidates.size())];
        nbr[i].erase(j);
        nbr[j].erase(i);
        nbr[i].insert(k);
        nbr[k].insert(i);
        j = k;
    }
    std::vector<Edge> edges;
    for (const auto& [i, j] : ring) edges.push_back({i, j, 1.0});
    return edges;
}

WeightedGraph topology(const NominalNetworkSpec& spec, std::uint64_t sample, std::uint64_t outer) {
    spec.validate();
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        CounterRng rng(spec.seed, {sample, outer, static_cast<std::uint64_t>(attempt), kTopology});
        std::vector<Edge> edges;
        switch (spec.model) {
            case GraphModel::ERG: edges = erdos_renyi(spec.n, spec.p, rng); break;
            case GraphModel::RGG: edges = geometric(spec.n, spec.p, rng); break;
            case GraphModel::SMN: edges = small_world(spec.n, spec.p, rng); break;
        }
        auto g = WeightedGraph::canonical(spec.n, std::move(edges));
        if (g.is_connected()) return g;
    }
    throw Error(ErrorCode::ConnectivityRetryExceeded,
                "no connected realisation in " + std::to_string(kMaxRetries) + " attempts");
}

WeightedGraph weights_for(const WeightedGraph& g, CounterRng rng) {
    Eigen::VectorXd w(g.edge_count());
    for (int l = 0; l < w.size(); ++l) w[l] = rng.uniform(0.5, 5.0);
    return g.with_weights(w);
}

Eigen::VectorXd frequencies_for(int n, FrequencyDistribution dist, double alpha, CounterRng rng) {
    Eigen::VectorXd q(n);
    for (int i = 0; i < n; ++i) {
        switch (dist) {
            case FrequencyDistribution::UniformAlpha: q[i] = rng.uniform(-alpha / 2, alpha / 2); break;
            case FrequencyDistribution::UniformUnit: q[i] = rng.uniform(-1.0, 1.0); break;
            case FrequencyDistribution::Bipolar: q[i] = rng.uniform() < 0.5 ? -1.0 : 1.0; break;
        }
    }
    return recentred(q);
}

}  // namespace

GraphModel parse_graph_model(const std::string& name) {
    std::string s = name;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "erg") return GraphModel::ERG;
    if (s == "rgg") return GraphModel::RGG;
    if (s == "smn") return GraphModel::SMN;
    throw Error(ErrorCode::InvalidArgument, "unknown graph model '" + name + "'");
}

std::string to_string(GraphModel m) {
    switch (m) {
        case GraphModel::ERG: return "ERG";
        case GraphModel::RGG: return "RGG";
        case GraphModel::SMN: return "SMN";
    }
    return "?";
}

FrequencyDistribution parse_distribution(const std::string& name) {
    if (name == "uniform-alpha" || name == "alpha") return FrequencyDistribution::UniformAlpha;
    if (name == "uniform") return FrequencyDistribution::UniformUnit;
    if (name == "bipolar") return FrequencyDistribution::Bipolar;
    throw Error(ErrorCode::InvalidArgument, "unknown frequency distribution '" + name + "'");
}

std::string to_string(FrequencyDistribution d) {
    switch (d) {
        case FrequencyDistribution::UniformAlpha: return "uniform-alpha";
        case FrequencyDistribution::UniformUnit: return "uniform";
        case FrequencyDistribution::Bipolar: return "bipolar";
    }
    return "?";
}

void NominalNetworkSpec::validate() const {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "n must be at least 2");
    if (!(p >= 0.0 && p <= (model == GraphModel::RGG ? 2.0 : 1.0)))
        throw Error(ErrorCode::InvalidArgument, "p out of range");
    if (distribution == FrequencyDistribution::UniformAlpha && !(alpha > 0.0))
        throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
}

WeightedGraph generate_graph(const NominalNetworkSpec& spec, std::uint64_t sample) { return topology(spec, sample, 0); }

WeightedGraph sample_weights(const WeightedGraph& g, std::uint64_t seed, std::uint64_t sample) {
    return weights_for(g, CounterRng(seed, {sample, 0, kWeights}));
}

Eigen::VectorXd sample_frequencies(int n, FrequencyDistribution dist, double alpha, std::uint64_t seed,
                                   std::uint64_t sample) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "n must be at least 2");
    return frequencies_for(n, dist, alpha, CounterRng(seed, {sample, 0, kFrequencies}));
}

NominalNetwork nominal_network(const NominalNetworkSpec& spec, std::uint64_t sample) {
    spec.validate();
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        const auto outer = static_cast<std::uint64_t>(attempt);
        WeightedGraph g = topology(spec, sample, outer);
        if (!spec.unit_weights) g = weights_for(g, CounterRng(spec.seed, {sample, outer, kWeights}));
        Eigen::VectorXd omega =
            frequencies_for(spec.n, spec.distribution, spec.alpha, CounterRng(spec.seed, {sample, outer, kFrequencies}));
        const double margin = sync_margin(g, omega).margin;
        if (margin < 1.0) return {std::move(g), std::move(omega), margin, attempt + 1};
    }
    throw Error(ErrorCode::MarginRetryExceeded, "no sample with margin < 1 in " + std::to_string(kMaxRetries) + " attempts");
}

}  // namespace syncgrid
