#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cfswarm/dataset.hpp"
#include "cfswarm/select.hpp"

namespace cfswarm {

/// The action-ability metric suite for one generation run. Metrics that are
/// undefined for the run (no continuous features, fewer than two CFs, ...)
/// are absent rather than zero.
struct MetricsReport {
    std::optional<double> proximity_cont;
    std::optional<double> proximity_cat;
    std::optional<double> sparsity;
    std::optional<double> diversity;
    std::optional<double> diversity_norm;
    double coverage = 0.0;
    std::size_t k_effective = 0;
    std::size_t skipped_pairs = 0; // zero-proximity pairs in diversity_norm
};

/// MAD-scaled mean absolute difference over continuous features; MADs of
/// zero fall back to 1.
double d_cont(std::span<const double> a, std::span<const double> b,
              const FeatureSchema& schema, const std::vector<FeatureStats>& stats);

/// Mean mismatch indicator over categorical features.
double d_cat(std::span<const double> a, std::span<const double> b,
             const FeatureSchema& schema);

/// Combined distance: d_cont + d_cat, each term present only when that
/// feature kind exists.
double cf_distance(std::span<const double> a, std::span<const double> b,
                   const FeatureSchema& schema,
                   const std::vector<FeatureStats>& stats);

using Positions = std::vector<std::vector<double>>;

std::optional<double> proximity_cont(const Positions& cfs,
                                     std::span<const double> x0,
                                     const FeatureSchema& schema,
                                     const std::vector<FeatureStats>& stats);

std::optional<double> proximity_cat(const Positions& cfs, std::span<const double> x0,
                                    const FeatureSchema& schema);

/// Mean over CFs of the changed-feature fraction.
std::optional<double> sparsity(const Positions& cfs, std::span<const double> x0,
                               const FeatureSchema& schema, double tol);

/// Mean pairwise distance among the CFs; undefined for fewer than two.
std::optional<double> diversity(const Positions& cfs, const FeatureSchema& schema,
                                const std::vector<FeatureStats>& stats);

/// Mean over pairs of distance / (prox_i + prox_j); pairs whose proximity
/// sum is zero are skipped and counted in skipped_pairs.
std::optional<double> diversity_norm(const Positions& cfs, std::span<const double> x0,
                                     const FeatureSchema& schema,
                                     const std::vector<FeatureStats>& stats,
                                     std::size_t* skipped_pairs = nullptr);

/// Valid CFs across runs over requested_k * runs.
double coverage(const std::vector<CounterfactualSet>& runs, std::size_t requested_k);

/// Full per-run report; coverage is the run's own valid count over its
/// requested k.
MetricsReport evaluate_set(const CounterfactualSet& set, const FeatureSchema& schema,
                           const std::vector<FeatureStats>& stats, double tol);

/// Mean of the per-run metrics (each over the runs where it is defined)
/// plus overall coverage.
MetricsReport aggregate_metrics(const std::vector<CounterfactualSet>& runs,
                                const FeatureSchema& schema,
                                const std::vector<FeatureStats>& stats, double tol,
                                std::size_t requested_k);

} // namespace cfswarm
