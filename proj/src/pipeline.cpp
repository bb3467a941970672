#include "cfswarm/pipeline.hpp"

#include <algorithm>

#include "cfswarm/errors.hpp"
#include "cfswarm/parallel.hpp"
#include "cfswarm/rng.hpp"

namespace cfswarm {

std::vector<std::size_t> sample_queries(const Dataset& data,
                                        const DecisionFunction& f, std::size_t n,
                                        std::uint64_t seed, bool correct_only,
                                        int sample_class) {
    std::vector<std::size_t> pool;
    for (std::size_t i : data.test_idx) {
        const int predicted = f.predict_class(data.rows[i]);
        if (correct_only && predicted != data.labels[i]) continue;
        if (sample_class >= 0 && predicted != sample_class) continue;
        pool.push_back(i);
    }
    if (pool.size() <= n) return pool;
    RngStream rng = RngStream::derive(seed, {stream_id::kQuerySample});
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + rng.uniform_index(pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(n);
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::uint64_t query_seed(std::uint64_t master, std::size_t query_index) {
    return derive_seed(master, {stream_id::kQuery, query_index});
}

namespace {

QueryPoint query_for_row(const Dataset& data, const DecisionFunction& f,
                         std::size_t row) {
    const int predicted = f.predict_class(data.rows[row]);
    return make_query(data, row, predicted, 1 - predicted);
}

} // namespace

QueryRun run_query_mdpso(const Dataset& data, const DecisionFunction& f,
                         const ActiveSet& active, std::size_t row,
                         const RunConfig& cfg, std::uint64_t seed,
                         std::size_t threads) {
    const QueryPoint query = query_for_row(data, f, row);
    SwarmConfig swarm_cfg = cfg.swarm_config(threads);
    swarm_cfg.seed = seed;

    QueryRun run;
    const SwarmResult swarm = optimize(f, query, active, data.schema, swarm_cfg);
    run.trace = swarm.trace;
    run.set = select_cfs(swarm, f, query, row, data.schema, cfg.selection.k, seed,
                         cfg.strategy(), cfg.swarm.sparsity_tol);
    run.metrics =
        evaluate_set(run.set, data.schema, data.stats, cfg.swarm.sparsity_tol);
    return run;
}

QueryRun run_query_gs(const Dataset& data, const DecisionFunction& f,
                      const ActiveSet& active, std::size_t row,
                      const RunConfig& cfg, std::uint64_t seed) {
    const QueryPoint query = query_for_row(data, f, row);
    QueryRun run;
    run.set = growing_spheres(f, query, row, data.schema, active, cfg.selection.k,
                              seed, cfg.gs_config());
    run.metrics =
        evaluate_set(run.set, data.schema, data.stats, cfg.swarm.sparsity_tol);
    return run;
}

MethodResult run_method(const Dataset& data, const DecisionFunction& f,
                        const ActiveSet& active, const std::string& method,
                        const std::vector<std::size_t>& query_rows,
                        const RunConfig& cfg, std::size_t threads) {
    if (method != "mdpso" && method != "gs")
        throw ConfigError("unknown method '" + method + "'");
    MethodResult result;
    result.method = method;
    result.runs.resize(query_rows.size());

    // Parallelize across queries when there are several; otherwise let the
    // swarm use the workers for fitness evaluation.
    const bool query_parallel = query_rows.size() > 1;
    const std::size_t outer = query_parallel ? threads : 1;
    const std::size_t inner = query_parallel ? 1 : threads;

    parallel_for(query_rows.size(), outer, [&](std::size_t q) {
        const std::uint64_t seed = query_seed(cfg.seed, q);
        result.runs[q] =
            method == "mdpso"
                ? run_query_mdpso(data, f, active, query_rows[q], cfg, seed, inner)
                : run_query_gs(data, f, active, query_rows[q], cfg, seed);
    });

    std::vector<CounterfactualSet> sets;
    sets.reserve(result.runs.size());
    for (const auto& r : result.runs) sets.push_back(r.set);
    if (!sets.empty())
        result.aggregate = aggregate_metrics(sets, data.schema, data.stats,
                                             cfg.swarm.sparsity_tol, cfg.selection.k);
    return result;
}

std::vector<MethodResult> run_benchmark(const Dataset& data,
                                        const DecisionFunction& f,
                                        const ActiveSet& active,
                                        const std::vector<std::size_t>& query_rows,
                                        const RunConfig& cfg, std::size_t threads) {
    std::vector<MethodResult> out;
    out.push_back(run_method(data, f, active, "mdpso", query_rows, cfg, threads));
    out.push_back(run_method(data, f, active, "gs", query_rows, cfg, threads));
    return out;
}

} // namespace cfswarm
