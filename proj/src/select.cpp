#include "cfswarm/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "cfswarm/errors.hpp"

namespace cfswarm {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

std::size_t nearest_centroid(const std::vector<double>& p,
                             const std::vector<std::vector<double>>& centroids) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = sq_dist(p, centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

} // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points, std::size_t k,
                    std::uint64_t seed) {
    if (points.empty()) throw UsageError("kmeans: no points");
    if (k == 0) throw UsageError("kmeans: k must be >= 1");
    const std::size_t n = points.size();

    const std::size_t n_distinct =
        std::set<std::vector<double>>(points.begin(), points.end()).size();
    KMeansResult result;
    result.k_effective = std::min(k, n_distinct);
    result.collapsed = result.k_effective < k;

    // Greedy farthest-point seeding; the first centroid is a seeded draw.
    RngStream rng = RngStream::derive(seed, {stream_id::kKMeansSeed});
    std::vector<std::size_t> chosen = {rng.uniform_index(n)};
    std::vector<double> min_d(n);
    for (std::size_t i = 0; i < n; ++i) min_d[i] = sq_dist(points[i], points[chosen[0]]);
    while (chosen.size() < result.k_effective) {
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (min_d[i] > min_d[far]) far = i;
        if (min_d[far] == 0.0) break; // only duplicates remain
        chosen.push_back(far);
        for (std::size_t i = 0; i < n; ++i)
            min_d[i] = std::min(min_d[i], sq_dist(points[i], points[far]));
    }
    result.k_effective = chosen.size();
    result.collapsed = result.k_effective < k;
    for (std::size_t c : chosen) result.centroids.push_back(points[c]);

    const std::size_t dim = points[0].size();
    result.assignment.resize(n);
    for (std::size_t iter = 0; iter < 100; ++iter) {
        for (std::size_t i = 0; i < n; ++i)
            result.assignment[i] = nearest_centroid(points[i], result.centroids);

        std::vector<std::vector<double>> next(result.k_effective,
                                              std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(result.k_effective, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[result.assignment[i]];
            for (std::size_t d = 0; d < dim; ++d)
                next[result.assignment[i]][d] += points[i][d];
        }
        for (std::size_t c = 0; c < result.k_effective; ++c) {
            if (counts[c] == 0) {
                // Re-seed an empty cluster from the farthest point.
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d =
                        sq_dist(points[i], result.centroids[result.assignment[i]]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                next[c] = points[far];
            } else {
                for (std::size_t d = 0; d < dim; ++d)
                    next[c][d] /= static_cast<double>(counts[c]);
            }
        }

        double moved = 0.0;
        for (std::size_t c = 0; c < result.k_effective; ++c)
            moved = std::max(moved, std::sqrt(sq_dist(next[c], result.centroids[c])));
        result.centroids = std::move(next);
        if (moved < 1e-8) break;
    }
    for (std::size_t i = 0; i < n; ++i)
        result.assignment[i] = nearest_centroid(points[i], result.centroids);
    return result;
}

SelectionStrategy selection_strategy_from_string(const std::string& s) {
    if (s == "cluster") return SelectionStrategy::Cluster;
    if (s == "topk") return SelectionStrategy::TopK;
    if (s == "pbest") return SelectionStrategy::PBest;
    throw ConfigError("unknown selection strategy '" + s + "'");
}

namespace {

bool distinct_under_tol(const std::vector<double>& a, const std::vector<double>& b,
                        const FeatureSchema& schema, double tol) {
    return l3_sparsity(a, b, schema, tol) > 0;
}

} // namespace

CounterfactualSet select_cfs(const SwarmResult& swarm, const DecisionFunction& f,
                             const QueryPoint& query, std::size_t query_row,
                             const FeatureSchema& schema, std::size_t k,
                             std::uint64_t seed, SelectionStrategy strategy,
                             double sparsity_tol) {
    if (k == 0) throw UsageError("select_cfs: k must be >= 1");

    CounterfactualSet out;
    out.query = query;
    out.query_row = query_row;
    out.requested_k = k;
    out.method = "mdpso";

    const std::size_t n = swarm.particles.size();
    std::vector<std::vector<double>> snapped(n);
    std::vector<char> valid(n);
    auto candidate_of = [&](std::size_t i) -> const std::vector<double>& {
        return strategy == SelectionStrategy::PBest ? swarm.particles[i].pbest
                                                    : swarm.particles[i].x;
    };
    for (std::size_t i = 0; i < n; ++i) {
        snapped[i] = snap_categoricals(candidate_of(i), schema);
        valid[i] = f.predict_class(snapped[i]) == query.desired_class;
        if (valid[i]) ++out.swarm_valid_count;
    }

    std::vector<std::size_t> picks;
    if (strategy == SelectionStrategy::Cluster) {
        const KMeansResult clusters = kmeans(snapped, k, seed);
        if (clusters.collapsed) out.collapsed = true;
        for (std::size_t c = 0; c < clusters.k_effective; ++c) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < n; ++i)
                if (clusters.assignment[i] == c && valid[i]) members.push_back(i);
            if (members.empty()) continue;
            RngStream rng = RngStream::derive(seed, {stream_id::kClusterPick, c});
            picks.push_back(members[rng.uniform_index(members.size())]);
        }
    } else {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double ta = strategy == SelectionStrategy::PBest
                                  ? swarm.particles[a].pbest_eval.total
                                  : swarm.particles[a].last_eval.total;
            const double tb = strategy == SelectionStrategy::PBest
                                  ? swarm.particles[b].pbest_eval.total
                                  : swarm.particles[b].last_eval.total;
            return ta < tb;
        });
        for (std::size_t i : order) {
            if (!valid[i]) continue;
            picks.push_back(i);
            if (picks.size() == k) break;
        }
    }

    for (std::size_t i : picks) {
        bool dup = false;
        for (const auto& cf : out.cfs) {
            if (!distinct_under_tol(cf.x, snapped[i], schema, sparsity_tol)) {
                dup = true;
                break;
            }
        }
        if (dup) {
            out.collapsed = true;
            continue;
        }
        CounterfactualRecord rec;
        rec.x = snapped[i];
        rec.valid = f.predict_class(rec.x) == query.desired_class;
        rec.breakdown = evaluate_objective(f, query.x, rec.x, query.desired_class,
                                           schema, sparsity_tol);
        out.cfs.push_back(std::move(rec));
        if (out.cfs.size() == k) break;
    }
    return out;
}

} // namespace cfswarm
