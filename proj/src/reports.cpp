#include "cfswarm/reports.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "cfswarm/errors.hpp"
#include "cfswarm/text.hpp"

namespace cfswarm {

std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write file: " + path);
    out << content;
}

namespace {

nlohmann::json breakdown_json(const ObjectiveBreakdown& b) {
    return {{"l1", b.l1}, {"l2", b.l2}, {"l3", b.l3}, {"total", b.total}};
}

ObjectiveBreakdown breakdown_from(const nlohmann::json& j) {
    return ObjectiveBreakdown{j.at("l1").get<double>(), j.at("l2").get<double>(),
                              j.at("l3").get<double>(), j.at("total").get<double>()};
}

} // namespace

nlohmann::json RunReport::to_json() const {
    nlohmann::json jm = nlohmann::json::array();
    for (const auto& m : methods) {
        nlohmann::json jr = nlohmann::json::array();
        for (const auto& run : m.runs) {
            nlohmann::json jcfs = nlohmann::json::array();
            for (const auto& cf : run.set.cfs) {
                nlohmann::json jc = breakdown_json(cf.breakdown);
                jc["x"] = cf.x;
                jc["valid"] = cf.valid;
                jcfs.push_back(std::move(jc));
            }
            jr.push_back({{"query_row", run.set.query_row},
                          {"query",
                           {{"x", run.set.query.x},
                            {"original", run.set.query.original_class},
                            {"desired", run.set.query.desired_class}}},
                          {"requested_k", run.set.requested_k},
                          {"valid_candidates", run.set.swarm_valid_count},
                          {"collapsed", run.set.collapsed},
                          {"cfs", std::move(jcfs)}});
        }
        jm.push_back({{"method", m.method}, {"runs", std::move(jr)}});
    }
    return {{"format", "cfswarm.report"},
            {"version", 1},
            {"dataset", dataset},
            {"requested_k", requested_k},
            {"methods", std::move(jm)}};
}

RunReport RunReport::from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "cfswarm.report")
        throw ConfigError("not a cfswarm report file");
    if (j.value("version", 0) != 1)
        throw ConfigError("unsupported report version");
    RunReport r;
    r.dataset = j.value("dataset", "");
    r.requested_k = j.at("requested_k").get<std::size_t>();
    for (const auto& jm : j.at("methods")) {
        MethodResult m;
        m.method = jm.at("method").get<std::string>();
        for (const auto& jr : jm.at("runs")) {
            QueryRun run;
            run.set.query_row = jr.at("query_row").get<std::size_t>();
            run.set.query.x = jr.at("query").at("x").get<std::vector<double>>();
            run.set.query.original_class = jr.at("query").at("original").get<int>();
            run.set.query.desired_class = jr.at("query").at("desired").get<int>();
            run.set.requested_k = jr.at("requested_k").get<std::size_t>();
            run.set.swarm_valid_count = jr.at("valid_candidates").get<std::size_t>();
            run.set.collapsed = jr.at("collapsed").get<bool>();
            run.set.method = m.method;
            for (const auto& jc : jr.at("cfs")) {
                CounterfactualRecord cf;
                cf.x = jc.at("x").get<std::vector<double>>();
                cf.valid = jc.at("valid").get<bool>();
                cf.breakdown = breakdown_from(jc);
                run.set.cfs.push_back(std::move(cf));
            }
            m.runs.push_back(std::move(run));
        }
        r.methods.push_back(std::move(m));
    }
    return r;
}

void RunReport::save(const std::string& path) const {
    write_text_file(path, to_json().dump(1) + "\n");
}

RunReport RunReport::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open report file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("report file " + path + ": " + e.what());
    }
    return from_json(j);
}

std::string cfs_csv(const RunReport& report, const Dataset& data) {
    std::ostringstream out;
    out << "method,query_row,role,cf_index,valid,l1,l2,l3,total";
    for (const auto& f : data.schema.features()) out << "," << f.name;
    out << "\n";

    auto emit_row = [&](std::span<const double> x) {
        const DecodedRow decoded = decode_row(x, data.schema, data.stats);
        for (const auto& v : decoded) {
            out << ",";
            if (std::holds_alternative<double>(v)) {
                out << fmt_double(std::get<double>(v));
            } else {
                out << std::get<std::string>(v);
            }
        }
        out << "\n";
    };

    for (const auto& m : report.methods) {
        for (const auto& run : m.runs) {
            out << m.method << "," << run.set.query_row << ",query,-1,,,,,";
            emit_row(run.set.query.x);
            for (std::size_t i = 0; i < run.set.cfs.size(); ++i) {
                const auto& cf = run.set.cfs[i];
                out << m.method << "," << run.set.query_row << ",cf," << i << ","
                    << (cf.valid ? 1 : 0) << "," << fmt_double(cf.breakdown.l1) << ","
                    << fmt_double(cf.breakdown.l2) << "," << fmt_double(cf.breakdown.l3)
                    << "," << fmt_double(cf.breakdown.total);
                emit_row(cf.x);
            }
        }
    }
    return out.str();
}

std::string metrics_csv(const RunReport& report) {
    std::ostringstream out;
    out << "method,query_row,k_effective,proximity_cont,proximity_cat,sparsity,"
           "diversity,diversity_norm,coverage,skipped_pairs\n";
    auto emit = [&](const std::string& method, const std::string& row,
                    const MetricsReport& r) {
        out << method << "," << row << "," << r.k_effective << ","
            << fmt_opt(r.proximity_cont) << "," << fmt_opt(r.proximity_cat) << ","
            << fmt_opt(r.sparsity) << "," << fmt_opt(r.diversity) << ","
            << fmt_opt(r.diversity_norm) << "," << fmt_double(r.coverage) << ","
            << r.skipped_pairs << "\n";
    };
    for (const auto& m : report.methods) {
        for (const auto& run : m.runs)
            emit(m.method, std::to_string(run.set.query_row), run.metrics);
        emit(m.method, "all", m.aggregate);
    }
    return out.str();
}

std::string comparison_csv(const std::vector<RunReport>& reports,
                           const Dataset& data, double sparsity_tol) {
    // Group runs by (dataset, method) and recompute aggregates, so reports
    // from several generate invocations can be combined.
    std::map<std::pair<std::string, std::string>,
             std::pair<std::vector<CounterfactualSet>, std::size_t>>
        groups;
    for (const auto& rep : reports) {
        for (const auto& m : rep.methods) {
            auto& g = groups[{rep.dataset, m.method}];
            for (const auto& run : m.runs) g.first.push_back(run.set);
            g.second = rep.requested_k;
        }
    }

    std::ostringstream out;
    out << "dataset,method,proximity,sparsity,diversity,norm_div,coverage\n";
    for (const auto& [key, g] : groups) {
        const MetricsReport agg = aggregate_metrics(g.first, data.schema, data.stats,
                                                    sparsity_tol, g.second);
        const std::optional<double> proximity =
            data.schema.n_continuous() > 0 ? agg.proximity_cont : agg.proximity_cat;
        out << key.first << "," << key.second << "," << fmt_opt(proximity) << ","
            << fmt_opt(agg.sparsity) << "," << fmt_opt(agg.diversity) << ","
            << fmt_opt(agg.diversity_norm) << "," << fmt_double(agg.coverage) << "\n";
    }
    return out.str();
}

std::string trace_csv(const QueryRun& run) {
    std::ostringstream out;
    out << "iteration,gbest_total\n";
    for (std::size_t t = 0; t < run.trace.size(); ++t)
        out << t << "," << fmt_double(run.trace[t]) << "\n";
    return out.str();
}

} // namespace cfswarm
