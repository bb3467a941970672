#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cfswarm/schema.hpp"

namespace cfswarm {

/// Per continuous feature: scaling endpoints in original units, median
/// absolute deviation in scaled units, and the Gower normalizer R_j.
/// R_j is the train-split range in scaled space, which is 1 by construction;
/// constant features fall back to 1 so the normalizer stays positive.
struct FeatureStats {
    double min = 0.0;
    double max = 0.0;
    double mad = 0.0;
    double range = 1.0;
};

/// One original-feature value: a number for continuous features, a level
/// name for categorical ones.
using FeatureValue = std::variant<double, std::string>;
using DecodedRow = std::vector<FeatureValue>;

/// Encoded tabular dataset: rows scaled to [0,1] with one-hot categorical
/// blocks, binary labels, a deterministic 80/20 train/test split, and
/// per-feature statistics fitted on the train split only.
/// Immutable after construction; safe to share across threads.
struct Dataset {
    FeatureSchema schema;
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    std::vector<FeatureStats> stats; // indexed by feature; categorical entries unused
    std::size_t clamped_cells = 0;   // test cells outside the train range

    std::size_t n_rows() const { return rows.size(); }
    std::span<const double> row(std::size_t i) const { return rows[i]; }

    nlohmann::json to_json() const;
    static Dataset from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static Dataset load(const std::string& path);
};

/// The instance whose unfavorable prediction is being explained.
struct QueryPoint {
    std::vector<double> x;
    int original_class = 0;
    int desired_class = 1;
};

QueryPoint make_query(const Dataset& data, std::size_t row, int original_class,
                      int desired_class);

/// Median absolute deviation: median of |v - median(values)|.
double mad(std::span<const double> values);

double median(std::span<const double> values);

/// Load a CSV with a header matching the schema's feature names plus a
/// "label" column. Scaling and statistics are fitted on the train split of a
/// deterministic seeded 80/20 shuffle; test cells falling outside the train
/// range are clamped to [0,1] and counted in clamped_cells.
Dataset load_csv(const std::string& csv_path, const std::string& schema_path,
                 std::uint64_t seed);

/// Two Gaussian blobs in continuous space plus class-correlated categorical
/// features. Classes alternate so both are always present; the blob centers
/// are `separation` apart in Euclidean distance and the categorical
/// class-correlation fades to zero as separation goes to zero.
Dataset synth_dataset(std::uint64_t seed, std::size_t n, std::size_t n_cont,
                      std::size_t n_cat, double separation = 4.0);

/// Build a dataset from rows in original units (used by both loaders).
Dataset build_dataset(FeatureSchema schema, const std::vector<DecodedRow>& raw,
                      std::vector<int> labels, std::uint64_t seed);

/// Encode one row from original units into scaled one-hot layout.
std::vector<double> encode_row(const DecodedRow& row, const FeatureSchema& schema,
                               const std::vector<FeatureStats>& stats);

/// Inverse of encode_row: continuous features back to original units,
/// categorical blocks to level names. Throws InternalError on a block that
/// is not exactly one-hot.
DecodedRow decode_row(std::span<const double> x, const FeatureSchema& schema,
                      const std::vector<FeatureStats>& stats);

/// Level index of categorical feature `feature` in encoded row x
/// (argmax over the block; ties resolve to the lowest index).
std::size_t level_of(std::span<const double> x, const FeatureSchema& schema,
                     std::size_t feature);

} // namespace cfswarm
