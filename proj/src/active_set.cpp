#include "cfswarm/active_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cfswarm/errors.hpp"

namespace cfswarm {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double h = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

std::pair<double, double> tukey_fences(std::span<const double> values) {
    if (values.empty()) throw UsageError("tukey_fences of empty list");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double q1 = quantile_sorted(sorted, 0.25);
    const double q3 = quantile_sorted(sorted, 0.75);
    const double iqr = q3 - q1;
    return {q1 - 1.5 * iqr, q3 + 1.5 * iqr};
}

std::vector<double> remove_outliers(std::span<const double> values) {
    const auto [lo, hi] = tukey_fences(values);
    std::vector<double> kept;
    kept.reserve(values.size());
    for (double v : values)
        if (v >= lo && v <= hi) kept.push_back(v);
    return kept;
}

double iv_from_counts(std::span<const IVBin> bins, IVVariant variant) {
    bool smooth = false;
    for (const auto& b : bins)
        if (b.n_pos == 0 || b.n_neg == 0) smooth = true;

    const double add = smooth ? 0.5 : 0.0;
    double n_pos = 0.0, n_neg = 0.0;
    for (const auto& b : bins) {
        n_pos += static_cast<double>(b.n_pos) + add;
        n_neg += static_cast<double>(b.n_neg) + add;
    }
    if (n_pos == 0.0 || n_neg == 0.0)
        throw UsageError("information value requires both classes");

    double iv = 0.0;
    for (const auto& b : bins) {
        const double p = (static_cast<double>(b.n_pos) + add) / n_pos;
        const double q = (static_cast<double>(b.n_neg) + add) / n_neg;
        if (variant == IVVariant::Paper) {
            iv += (p - q) * (p / q);
        } else {
            iv += (p - q) * std::log(p / q);
        }
    }
    return iv;
}

double information_value(std::span<const double> values, std::span<const int> labels,
                         std::size_t n_bins, IVVariant variant,
                         std::vector<IVBin>* bins_out) {
    if (values.size() != labels.size())
        throw UsageError("information_value: values and labels differ in length");
    if (values.empty()) throw UsageError("information_value of empty list");
    if (n_bins == 0) throw UsageError("information_value: n_bins must be >= 1");

    bool has_pos = false, has_neg = false;
    for (int l : labels) (l == 1 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw UsageError("information value requires both classes");

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    // Interior equal-frequency edges, deduplicated to stay strictly increasing.
    std::vector<double> edges;
    for (std::size_t k = 1; k < n_bins; ++k) {
        const double e = quantile_sorted(sorted, static_cast<double>(k) /
                                                     static_cast<double>(n_bins));
        if (edges.empty() || e > edges.back()) edges.push_back(e);
    }
    while (!edges.empty() && edges.back() >= sorted.back()) edges.pop_back();

    std::vector<IVBin> bins(edges.size() + 1);
    for (std::size_t b = 0; b < bins.size(); ++b) {
        bins[b].lo = b == 0 ? sorted.front() : edges[b - 1];
        bins[b].hi = b == edges.size() ? sorted.back() : edges[b];
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t b = static_cast<std::size_t>(
            std::upper_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
        if (labels[i] == 1) {
            ++bins[b].n_pos;
        } else {
            ++bins[b].n_neg;
        }
    }
    const double iv = iv_from_counts(bins, variant);
    if (bins_out) *bins_out = std::move(bins);
    return iv;
}

IVTable build_iv_table(const Dataset& data, std::size_t n_bins, IVVariant variant) {
    IVTable table;
    table.entries.reserve(data.schema.n_features());
    for (std::size_t j = 0; j < data.schema.n_features(); ++j) {
        const auto& f = data.schema.feature(j);
        IVEntry entry;
        entry.name = f.name;
        if (f.kind == FeatureKind::Continuous) {
            const std::size_t off = data.schema.block_offset(j);
            std::vector<double> col;
            col.reserve(data.train_idx.size());
            for (std::size_t i : data.train_idx) col.push_back(data.rows[i][off]);
            const auto [lo, hi] = tukey_fences(col);
            std::vector<double> vals;
            std::vector<int> labs;
            for (std::size_t i : data.train_idx) {
                const double v = data.rows[i][off];
                if (v >= lo && v <= hi) {
                    vals.push_back(v);
                    labs.push_back(data.labels[i]);
                }
            }
            entry.iv = information_value(vals, labs, n_bins, variant, &entry.bins);
        } else {
            std::vector<IVBin> bins(f.levels.size());
            for (std::size_t c = 0; c < bins.size(); ++c) {
                bins[c].lo = bins[c].hi = static_cast<double>(c);
            }
            for (std::size_t i : data.train_idx) {
                const std::size_t level = level_of(data.rows[i], data.schema, j);
                if (data.labels[i] == 1) {
                    ++bins[level].n_pos;
                } else {
                    ++bins[level].n_neg;
                }
            }
            entry.iv = iv_from_counts(bins, variant);
            entry.bins = std::move(bins);
        }
        table.entries.push_back(std::move(entry));
    }
    return table;
}

std::vector<std::size_t> IVTable::ranks() const {
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return entries[a].iv > entries[b].iv;
    });
    std::vector<std::size_t> rank(entries.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;
    return rank;
}

bool ActiveSet::contains(std::size_t feature) const {
    return std::find(feature_indices.begin(), feature_indices.end(), feature) !=
           feature_indices.end();
}

std::vector<char> ActiveSet::coordinate_mask(const FeatureSchema& schema) const {
    std::vector<char> mask(schema.encoded_width(), 0);
    for (std::size_t j : feature_indices) {
        const std::size_t off = schema.block_offset(j);
        for (std::size_t c = 0; c < schema.block_width(j); ++c) mask[off + c] = 1;
    }
    return mask;
}

ActiveSet build_active_set(const Dataset& data, std::size_t h, std::size_t n_bins,
                           IVVariant variant) {
    if (h == 0) throw UsageError("build_active_set: h must be >= 1");
    if (data.schema.n_mutable() == 0)
        throw ConfigError("no mutable features; active set would be empty");

    const IVTable table = build_iv_table(data, n_bins, variant);

    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < data.schema.n_features(); ++j)
        if (data.schema.feature(j).is_mutable) order.push_back(j);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return table.entries[a].iv > table.entries[b].iv;
    });
    if (order.size() > h) order.resize(h);

    ActiveSet active;
    for (std::size_t j : order) {
        active.feature_indices.push_back(j);
        active.names.push_back(table.entries[j].name);
        active.ivs.push_back(table.entries[j].iv);
    }
    return active;
}

} // namespace cfswarm
