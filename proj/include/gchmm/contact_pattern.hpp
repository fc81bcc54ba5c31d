#ifndef GCHMM_CONTACT_PATTERN_HPP
#define GCHMM_CONTACT_PATTERN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dynamic_graph.hpp"
#include "error.hpp"
#include "random.hpp"

namespace gchmm {

// Periodic random-geometric contact pattern: nodes get fixed positions in
// the unit square, the closest pairs form a base graph, and each of
// `period` snapshots keeps every base edge independently with probability
// `activity`. Step t uses snapshot t mod period.
struct ContactPatternConfig {
    std::size_t num_nodes = 84;
    std::size_t period = 7;
    double mean_degree = 8.0;
    double activity = 0.5;
    std::uint64_t seed = 20090101;
};

inline DynamicGraph generate_contact_pattern(const ContactPatternConfig& cfg, std::size_t num_steps)
{
    if (cfg.num_nodes < 2 || cfg.period == 0 || !(cfg.activity > 0.0 && cfg.activity <= 1.0) || cfg.mean_degree < 0.0)
        throw Error("invalid contact pattern configuration");
    Rng rng(cfg.seed);
    const std::size_t N = cfg.num_nodes;
    std::vector<double> px(N), py(N);
    for (std::size_t n = 0; n < N; ++n) {
        px[n] = uniform01(rng);
        py[n] = uniform01(rng);
    }
    struct Pair {
        double d2;
        Edge e;
    };
    std::vector<Pair> pairs;
    for (NodeId u = 0; u < N; ++u)
        for (NodeId v = u + 1; v < N; ++v) {
            const double dx = px[u] - px[v], dy = py[u] - py[v];
            pairs.push_back({dx * dx + dy * dy, {u, v}});
        }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d2 != b.d2 ? a.d2 < b.d2 : a.e < b.e; });
    const double base_degree = std::min(cfg.mean_degree / cfg.activity, static_cast<double>(N - 1));
    const auto base_edges = std::min(pairs.size(), static_cast<std::size_t>(std::llround(base_degree * static_cast<double>(N) / 2.0)));

    std::vector<std::vector<Edge>> snapshots(cfg.period);
    for (auto& snap : snapshots)
        for (std::size_t i = 0; i < base_edges; ++i)
            if (bernoulli(rng, cfg.activity))
                snap.push_back(pairs[i].e);

    std::vector<std::vector<Edge>> edges(num_steps);
    for (std::size_t t = 0; t < num_steps; ++t)
        edges[t] = snapshots[t % cfg.period];
    return DynamicGraph(N, num_steps, std::move(edges));
}

} // namespace gchmm

#endif
