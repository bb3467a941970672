#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfswarm/mdpso.hpp"

namespace cfswarm {

struct KMeansResult {
    std::vector<std::size_t> assignment; // per point, in [0, k_effective)
    std::vector<std::vector<double>> centroids;
    std::size_t k_effective = 0;
    bool collapsed = false; // fewer clusters than requested (duplicate points)
};

/// Lloyd iteration with greedy farthest-point seeding from the seed; empty
/// clusters are re-seeded from the farthest point. Requesting more clusters
/// than distinct points yields fewer clusters and sets `collapsed`.
KMeansResult kmeans(const std::vector<std::vector<double>>& points, std::size_t k,
                    std::uint64_t seed);

enum class SelectionStrategy {
    Cluster, // k-means over converged particles, one random valid CF per cluster
    TopK,    // best k valid final positions by objective
    PBest    // best k valid personal bests by objective
};

SelectionStrategy selection_strategy_from_string(const std::string& s);

struct CounterfactualRecord {
    std::vector<double> x; // snapped, box- and one-hot-consistent
    bool valid = false;
    ObjectiveBreakdown breakdown;
};

/// Selected counterfactuals for one query. Emitted records are always valid
/// and pairwise distinct under the sparsity tolerance; an empty `cfs` with
/// swarm_valid_count == 0 marks a run that produced no counterfactual.
struct CounterfactualSet {
    QueryPoint query;
    std::size_t query_row = 0;
    std::size_t requested_k = 0;
    std::vector<CounterfactualRecord> cfs;
    std::string method;
    std::size_t swarm_valid_count = 0; // valid candidates before selection
    bool collapsed = false;            // dedup or cluster collapse occurred
};

/// Turn a converged swarm into at most k counterfactuals. Positions are
/// snapped before the validity check; validity is recomputed at emission.
CounterfactualSet select_cfs(const SwarmResult& swarm, const DecisionFunction& f,
                             const QueryPoint& query, std::size_t query_row,
                             const FeatureSchema& schema, std::size_t k,
                             std::uint64_t seed, SelectionStrategy strategy,
                             double sparsity_tol);

} // namespace cfswarm
