#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cfswarm/dataset.hpp"

namespace cfswarm {

enum class IVVariant {
    Paper, // sum of (p_i - q_i) * (p_i / q_i), no logarithm
    Log    // classical weight-of-evidence: sum of (p_i - q_i) * ln(p_i / q_i)
};

struct IVBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
};

struct IVEntry {
    std::string name;
    double iv = 0.0;
    std::vector<IVBin> bins;
};

struct IVTable {
    std::vector<IVEntry> entries; // one per feature, in schema order

    /// 1-based ranks by descending IV, ties broken by schema order.
    std::vector<std::size_t> ranks() const;
};

/// The top-h mutable features by descending IV; the only features the
/// optimizer may change.
struct ActiveSet {
    std::vector<std::size_t> feature_indices; // ordered by descending IV
    std::vector<std::string> names;
    std::vector<double> ivs;

    std::size_t size() const { return feature_indices.size(); }
    bool contains(std::size_t feature) const;

    /// Per encoded-coordinate activity mask.
    std::vector<char> coordinate_mask(const FeatureSchema& schema) const;
};

/// Evaluate the IV statistic from per-bin class counts. If any bin has a
/// zero count on either class, 0.5 is added to every bin's class counts
/// before the ratios are formed; otherwise raw counts are used.
double iv_from_counts(std::span<const IVBin> bins, IVVariant variant);

/// Tukey fences: [Q1 - 1.5*IQR, Q3 + 1.5*IQR] with linear-interpolation
/// quartiles.
std::pair<double, double> tukey_fences(std::span<const double> values);

/// Drop values outside the Tukey fences.
std::vector<double> remove_outliers(std::span<const double> values);

/// IV of one continuous feature over equal-frequency bins. Values must be
/// outlier-filtered already; both classes must be present.
double information_value(std::span<const double> values, std::span<const int> labels,
                         std::size_t n_bins, IVVariant variant = IVVariant::Paper,
                         std::vector<IVBin>* bins_out = nullptr);

/// Per-feature IV over the train split: 10-bin equal-frequency binning after
/// Tukey outlier removal for continuous features, one bin per level for
/// categorical features.
IVTable build_iv_table(const Dataset& data, std::size_t n_bins = 10,
                       IVVariant variant = IVVariant::Paper);

/// Rank mutable features by descending IV and keep the top h.
ActiveSet build_active_set(const Dataset& data, std::size_t h,
                           std::size_t n_bins = 10,
                           IVVariant variant = IVVariant::Paper);

} // namespace cfswarm
