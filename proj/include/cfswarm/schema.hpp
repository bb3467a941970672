#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cfswarm {

enum class FeatureKind { Continuous, Categorical };

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::Continuous;
    std::vector<std::string> levels; // categorical only, >= 2 entries
    bool is_mutable = true;
};

/// Ordered feature list plus the encoded-column layout derived from it.
/// Continuous features occupy one column, categorical features one column
/// per level (one-hot). Immutable after construction; safe to share across
/// threads.
class FeatureSchema {
public:
    explicit FeatureSchema(std::vector<FeatureSpec> features);

    const std::vector<FeatureSpec>& features() const { return features_; }
    const FeatureSpec& feature(std::size_t i) const { return features_[i]; }

    std::size_t n_features() const { return features_.size(); }
    std::size_t n_continuous() const { return n_continuous_; }
    std::size_t n_categorical() const { return features_.size() - n_continuous_; }
    std::size_t encoded_width() const { return encoded_width_; }

    /// First encoded column of feature i.
    std::size_t block_offset(std::size_t i) const { return offsets_[i]; }
    /// Number of encoded columns of feature i (1 or level count).
    std::size_t block_width(std::size_t i) const {
        return features_[i].kind == FeatureKind::Continuous
                   ? 1
                   : features_[i].levels.size();
    }
    /// Feature owning encoded column c.
    std::size_t feature_of_column(std::size_t c) const { return column_feature_[c]; }

    std::optional<std::size_t> index_of(std::string_view name) const;
    std::size_t n_mutable() const;

    nlohmann::json to_json() const;
    static FeatureSchema from_json(const nlohmann::json& j);
    static FeatureSchema load(const std::string& path);

private:
    std::vector<FeatureSpec> features_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> column_feature_;
    std::size_t encoded_width_ = 0;
    std::size_t n_continuous_ = 0;
};

} // namespace cfswarm
