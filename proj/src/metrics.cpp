#include "cfswarm/metrics.hpp"

#include <cmath>

#include "cfswarm/errors.hpp"
#include "cfswarm/objective.hpp"

namespace cfswarm {

double d_cont(std::span<const double> a, std::span<const double> b,
              const FeatureSchema& schema, const std::vector<FeatureStats>& stats) {
    const std::size_t n_cont = schema.n_continuous();
    if (n_cont == 0) throw UsageError("d_cont with no continuous features");
    double sum = 0.0;
    for (std::size_t j = 0; j < schema.n_features(); ++j) {
        if (schema.feature(j).kind != FeatureKind::Continuous) continue;
        const std::size_t off = schema.block_offset(j);
        const double denom = stats[j].mad > 0.0 ? stats[j].mad : 1.0;
        sum += std::abs(a[off] - b[off]) / denom;
    }
    return sum / static_cast<double>(n_cont);
}

double d_cat(std::span<const double> a, std::span<const double> b,
             const FeatureSchema& schema) {
    const std::size_t n_cat = schema.n_categorical();
    if (n_cat == 0) throw UsageError("d_cat with no categorical features");
    double sum = 0.0;
    for (std::size_t j = 0; j < schema.n_features(); ++j) {
        if (schema.feature(j).kind != FeatureKind::Categorical) continue;
        if (level_of(a, schema, j) != level_of(b, schema, j)) sum += 1.0;
    }
    return sum / static_cast<double>(n_cat);
}

double cf_distance(std::span<const double> a, std::span<const double> b,
                   const FeatureSchema& schema,
                   const std::vector<FeatureStats>& stats) {
    double d = 0.0;
    if (schema.n_continuous() > 0) d += d_cont(a, b, schema, stats);
    if (schema.n_categorical() > 0) d += d_cat(a, b, schema);
    return d;
}

std::optional<double> proximity_cont(const Positions& cfs,
                                     std::span<const double> x0,
                                     const FeatureSchema& schema,
                                     const std::vector<FeatureStats>& stats) {
    if (cfs.empty() || schema.n_continuous() == 0) return std::nullopt;
    double sum = 0.0;
    for (const auto& cf : cfs) sum += d_cont(cf, x0, schema, stats);
    return sum / static_cast<double>(cfs.size());
}

std::optional<double> proximity_cat(const Positions& cfs, std::span<const double> x0,
                                    const FeatureSchema& schema) {
    if (cfs.empty() || schema.n_categorical() == 0) return std::nullopt;
    double sum = 0.0;
    for (const auto& cf : cfs) sum += d_cat(cf, x0, schema);
    return sum / static_cast<double>(cfs.size());
}

std::optional<double> sparsity(const Positions& cfs, std::span<const double> x0,
                               const FeatureSchema& schema, double tol) {
    if (cfs.empty()) return std::nullopt;
    double sum = 0.0;
    for (const auto& cf : cfs)
        sum += static_cast<double>(l3_sparsity(x0, cf, schema, tol)) /
               static_cast<double>(schema.n_features());
    return sum / static_cast<double>(cfs.size());
}

std::optional<double> diversity(const Positions& cfs, const FeatureSchema& schema,
                                const std::vector<FeatureStats>& stats) {
    if (cfs.size() < 2) return std::nullopt;
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i + 1 < cfs.size(); ++i) {
        for (std::size_t j = i + 1; j < cfs.size(); ++j) {
            sum += cf_distance(cfs[i], cfs[j], schema, stats);
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

std::optional<double> diversity_norm(const Positions& cfs, std::span<const double> x0,
                                     const FeatureSchema& schema,
                                     const std::vector<FeatureStats>& stats,
                                     std::size_t* skipped_pairs) {
    if (skipped_pairs) *skipped_pairs = 0;
    if (cfs.size() < 2) return std::nullopt;
    std::vector<double> prox;
    prox.reserve(cfs.size());
    for (const auto& cf : cfs) prox.push_back(cf_distance(cf, x0, schema, stats));

    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i + 1 < cfs.size(); ++i) {
        for (std::size_t j = i + 1; j < cfs.size(); ++j) {
            const double denom = prox[i] + prox[j];
            if (denom == 0.0) {
                if (skipped_pairs) ++*skipped_pairs;
                continue;
            }
            sum += cf_distance(cfs[i], cfs[j], schema, stats) / denom;
            ++pairs;
        }
    }
    if (pairs == 0) return std::nullopt;
    return sum / static_cast<double>(pairs);
}

double coverage(const std::vector<CounterfactualSet>& runs, std::size_t requested_k) {
    if (runs.empty()) throw UsageError("coverage over zero runs");
    if (requested_k == 0) throw UsageError("coverage: requested_k must be >= 1");
    std::size_t valid = 0;
    for (const auto& run : runs)
        for (const auto& cf : run.cfs)
            if (cf.valid) ++valid;
    return static_cast<double>(valid) /
           static_cast<double>(requested_k * runs.size());
}

namespace {

Positions positions_of(const CounterfactualSet& set) {
    Positions out;
    out.reserve(set.cfs.size());
    for (const auto& cf : set.cfs) out.push_back(cf.x);
    return out;
}

} // namespace

MetricsReport evaluate_set(const CounterfactualSet& set, const FeatureSchema& schema,
                           const std::vector<FeatureStats>& stats, double tol) {
    MetricsReport r;
    const Positions cfs = positions_of(set);
    r.k_effective = cfs.size();
    r.proximity_cont = proximity_cont(cfs, set.query.x, schema, stats);
    r.proximity_cat = proximity_cat(cfs, set.query.x, schema);
    r.sparsity = sparsity(cfs, set.query.x, schema, tol);
    r.diversity = diversity(cfs, schema, stats);
    r.diversity_norm = diversity_norm(cfs, set.query.x, schema, stats, &r.skipped_pairs);
    r.coverage = coverage({set}, set.requested_k);
    return r;
}

MetricsReport aggregate_metrics(const std::vector<CounterfactualSet>& runs,
                                const FeatureSchema& schema,
                                const std::vector<FeatureStats>& stats, double tol,
                                std::size_t requested_k) {
    MetricsReport agg;
    auto fold = [](std::optional<double>& acc, std::size_t& count,
                   const std::optional<double>& v) {
        if (!v) return;
        acc = acc.value_or(0.0) + *v;
        ++count;
    };
    std::size_t nc = 0, ncat = 0, ns = 0, nd = 0, ndn = 0;
    for (const auto& run : runs) {
        const MetricsReport r = evaluate_set(run, schema, stats, tol);
        fold(agg.proximity_cont, nc, r.proximity_cont);
        fold(agg.proximity_cat, ncat, r.proximity_cat);
        fold(agg.sparsity, ns, r.sparsity);
        fold(agg.diversity, nd, r.diversity);
        fold(agg.diversity_norm, ndn, r.diversity_norm);
        agg.k_effective += r.k_effective;
        agg.skipped_pairs += r.skipped_pairs;
    }
    auto finish = [](std::optional<double>& acc, std::size_t count) {
        if (count > 0) acc = *acc / static_cast<double>(count);
    };
    finish(agg.proximity_cont, nc);
    finish(agg.proximity_cat, ncat);
    finish(agg.sparsity, ns);
    finish(agg.diversity, nd);
    finish(agg.diversity_norm, ndn);
    agg.coverage = coverage(runs, requested_k);
    return agg;
}

} // namespace cfswarm
