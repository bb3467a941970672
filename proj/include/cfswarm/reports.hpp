#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cfswarm/pipeline.hpp"

namespace cfswarm {

/// Serialized outcome of generate/benchmark runs; the input of `evaluate`.
struct RunReport {
    std::string dataset;
    std::size_t requested_k = 5;
    std::vector<MethodResult> methods;

    nlohmann::json to_json() const;
    static RunReport from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static RunReport load(const std::string& path);
};

/// One row per CF (plus one per query) with decoded feature values.
std::string cfs_csv(const RunReport& report, const Dataset& data);

/// Per-run and aggregate metric rows.
std::string metrics_csv(const RunReport& report);

/// Table-shaped comparison: dataset, method, proximity, sparsity, diversity,
/// norm_div, coverage. Proximity is the continuous proximity when the schema
/// has continuous features, otherwise the categorical one.
std::string comparison_csv(const std::vector<RunReport>& reports,
                           const Dataset& data, double sparsity_tol);

/// Global-best objective trace of one MD-PSO run.
std::string trace_csv(const QueryRun& run);

std::string fmt_opt(const std::optional<double>& v);

void write_text_file(const std::string& path, const std::string& content);

} // namespace cfswarm
