#include "cfswarm/schema.hpp"

#include <fstream>
#include <unordered_set>

#include "cfswarm/errors.hpp"

namespace cfswarm {

namespace {

void check_token(const std::string& s, const char* what) {
    if (s.empty())
        throw SchemaViolation(std::string(what) + " must not be empty");
    if (s.find_first_of(",\n\"") != std::string::npos)
        throw SchemaViolation(std::string(what) + " '" + s +
                              "' contains a comma, quote or newline");
}

} // namespace

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> features)
    : features_(std::move(features)) {
    if (features_.empty())
        throw SchemaViolation("schema has no features");

    std::unordered_set<std::string> seen;
    for (const auto& f : features_) {
        check_token(f.name, "feature name");
        if (!seen.insert(f.name).second)
            throw SchemaViolation("duplicate feature name '" + f.name + "'");
        if (f.kind == FeatureKind::Categorical) {
            if (f.levels.size() < 2)
                throw SchemaViolation("categorical feature '" + f.name +
                                      "' needs at least 2 levels");
            std::unordered_set<std::string> lv;
            for (const auto& level : f.levels) {
                check_token(level, "level");
                if (!lv.insert(level).second)
                    throw SchemaViolation("duplicate level '" + level +
                                          "' in feature '" + f.name + "'");
            }
        } else if (!f.levels.empty()) {
            throw SchemaViolation("continuous feature '" + f.name +
                                  "' must not declare levels");
        }
    }

    offsets_.reserve(features_.size());
    for (std::size_t i = 0; i < features_.size(); ++i) {
        offsets_.push_back(encoded_width_);
        const std::size_t w = block_width(i);
        for (std::size_t c = 0; c < w; ++c) column_feature_.push_back(i);
        encoded_width_ += w;
        if (features_[i].kind == FeatureKind::Continuous) ++n_continuous_;
    }
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < features_.size(); ++i)
        if (features_[i].name == name) return i;
    return std::nullopt;
}

std::size_t FeatureSchema::n_mutable() const {
    std::size_t n = 0;
    for (const auto& f : features_)
        if (f.is_mutable) ++n;
    return n;
}

nlohmann::json FeatureSchema::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : features_) {
        nlohmann::json jf;
        jf["name"] = f.name;
        jf["kind"] = f.kind == FeatureKind::Continuous ? "continuous" : "categorical";
        if (f.kind == FeatureKind::Categorical) jf["levels"] = f.levels;
        jf["mutable"] = f.is_mutable;
        arr.push_back(std::move(jf));
    }
    return nlohmann::json{{"features", std::move(arr)}};
}

FeatureSchema FeatureSchema::from_json(const nlohmann::json& j) {
    if (!j.contains("features") || !j["features"].is_array())
        throw SchemaViolation("schema json: missing 'features' array");
    std::vector<FeatureSpec> specs;
    for (const auto& jf : j["features"]) {
        FeatureSpec f;
        f.name = jf.at("name").get<std::string>();
        const std::string kind = jf.at("kind").get<std::string>();
        if (kind == "continuous") {
            f.kind = FeatureKind::Continuous;
        } else if (kind == "categorical") {
            f.kind = FeatureKind::Categorical;
            f.levels = jf.at("levels").get<std::vector<std::string>>();
        } else {
            throw SchemaViolation("schema json: unknown kind '" + kind +
                                  "' for feature '" + f.name + "'");
        }
        f.is_mutable = jf.value("mutable", true);
        specs.push_back(std::move(f));
    }
    return FeatureSchema(std::move(specs));
}

FeatureSchema FeatureSchema::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open schema file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaViolation("schema file " + path + ": " + e.what());
    }
    return from_json(j);
}

} // namespace cfswarm
