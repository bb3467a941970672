#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfswarm/config.hpp"
#include "cfswarm/metrics.hpp"

namespace cfswarm {

/// One counterfactual generation for one query point: the selected set,
/// its metrics, and (for MD-PSO) the global-best objective trace.
struct QueryRun {
    CounterfactualSet set;
    MetricsReport metrics;
    std::vector<double> trace;
};

/// Aggregated results of one method over a list of queries.
struct MethodResult {
    std::string method;
    std::vector<QueryRun> runs;
    MetricsReport aggregate;
};

/// Rows whose prediction should be explained: test rows, by default only
/// those predicted correctly; sample_class restricts the predicted class
/// (-1 accepts both). Queries already in the desired class are never
/// produced because the desired class is the complement of the prediction.
std::vector<std::size_t> sample_queries(const Dataset& data,
                                        const DecisionFunction& f, std::size_t n,
                                        std::uint64_t seed, bool correct_only,
                                        int sample_class);

/// Per-query master seed, derived from the run seed by query list position.
std::uint64_t query_seed(std::uint64_t master, std::size_t query_index);

QueryRun run_query_mdpso(const Dataset& data, const DecisionFunction& f,
                         const ActiveSet& active, std::size_t row,
                         const RunConfig& cfg, std::uint64_t seed,
                         std::size_t threads = 1);

QueryRun run_query_gs(const Dataset& data, const DecisionFunction& f,
                      const ActiveSet& active, std::size_t row,
                      const RunConfig& cfg, std::uint64_t seed);

/// Run one method over the given query rows; query-level work is spread
/// over `threads` without affecting results.
MethodResult run_method(const Dataset& data, const DecisionFunction& f,
                        const ActiveSet& active, const std::string& method,
                        const std::vector<std::size_t>& query_rows,
                        const RunConfig& cfg, std::size_t threads = 1);

/// The full benchmark protocol: MD-PSO and Growing Spheres over the same
/// queries and per-query seeds.
std::vector<MethodResult> run_benchmark(const Dataset& data,
                                        const DecisionFunction& f,
                                        const ActiveSet& active,
                                        const std::vector<std::size_t>& query_rows,
                                        const RunConfig& cfg,
                                        std::size_t threads = 1);

} // namespace cfswarm
