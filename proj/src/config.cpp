#include "cfswarm/config.hpp"

#include <fstream>

#include "cfswarm/errors.hpp"

namespace cfswarm {

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["method"] = method;
    j["data"] = {{"artifact", data.artifact},
                 {"iv_bins", data.iv_bins},
                 {"iv_variant", data.iv_variant}};
    j["model"] = {{"file", model.file},     {"kind", model.kind},
                  {"n_trees", model.n_trees}, {"max_depth", model.max_depth},
                  {"lr", model.lr},         {"epochs", model.epochs}};
    j["swarm"] = {{"particles", swarm.particles},
                  {"iterations", swarm.iterations},
                  {"c0", swarm.c0},
                  {"c1", swarm.c1},
                  {"c2", swarm.c2},
                  {"c3", swarm.c3},
                  {"r_mode", swarm.r_mode},
                  {"epsilon", swarm.epsilon},
                  {"zero_band", swarm.zero_band},
                  {"h", swarm.h},
                  {"sparsity_tol", swarm.sparsity_tol}};
    j["selection"] = {{"k", selection.k},
                      {"strategy", selection.strategy},
                      {"sample", selection.sample},
                      {"queries", selection.queries},
                      {"correct_only", selection.correct_only},
                      {"sample_class", selection.sample_class}};
    j["gs"] = {{"step", gs.step},
               {"samples", gs.samples},
               {"max_radius", gs.max_radius},
               {"mode", gs.mode}};
    j["metrics"] = nlohmann::json::object();
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    try {
        c.seed = j.value("seed", c.seed);
        c.method = j.value("method", c.method);
        if (j.contains("data")) {
            const auto& d = j["data"];
            c.data.artifact = d.value("artifact", c.data.artifact);
            c.data.iv_bins = d.value("iv_bins", c.data.iv_bins);
            c.data.iv_variant = d.value("iv_variant", c.data.iv_variant);
        }
        if (j.contains("model")) {
            const auto& m = j["model"];
            c.model.file = m.value("file", c.model.file);
            c.model.kind = m.value("kind", c.model.kind);
            c.model.n_trees = m.value("n_trees", c.model.n_trees);
            c.model.max_depth = m.value("max_depth", c.model.max_depth);
            c.model.lr = m.value("lr", c.model.lr);
            c.model.epochs = m.value("epochs", c.model.epochs);
        }
        if (j.contains("swarm")) {
            const auto& s = j["swarm"];
            c.swarm.particles = s.value("particles", c.swarm.particles);
            c.swarm.iterations = s.value("iterations", c.swarm.iterations);
            c.swarm.c0 = s.value("c0", c.swarm.c0);
            c.swarm.c1 = s.value("c1", c.swarm.c1);
            c.swarm.c2 = s.value("c2", c.swarm.c2);
            c.swarm.c3 = s.value("c3", c.swarm.c3);
            c.swarm.r_mode = s.value("r_mode", c.swarm.r_mode);
            c.swarm.epsilon = s.value("epsilon", c.swarm.epsilon);
            c.swarm.zero_band = s.value("zero_band", c.swarm.zero_band);
            c.swarm.h = s.value("h", c.swarm.h);
            c.swarm.sparsity_tol = s.value("sparsity_tol", c.swarm.sparsity_tol);
        }
        if (j.contains("selection")) {
            const auto& s = j["selection"];
            c.selection.k = s.value("k", c.selection.k);
            c.selection.strategy = s.value("strategy", c.selection.strategy);
            c.selection.sample = s.value("sample", c.selection.sample);
            c.selection.queries =
                s.value("queries", std::vector<std::size_t>{});
            c.selection.correct_only = s.value("correct_only", c.selection.correct_only);
            c.selection.sample_class = s.value("sample_class", c.selection.sample_class);
        }
        if (j.contains("gs")) {
            const auto& g = j["gs"];
            c.gs.step = g.value("step", c.gs.step);
            c.gs.samples = g.value("samples", c.gs.samples);
            c.gs.max_radius = g.value("max_radius", c.gs.max_radius);
            c.gs.mode = g.value("mode", c.gs.mode);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    // Validate enum-like fields eagerly.
    c.r_mode();
    c.strategy();
    c.iv_variant();
    gs_mode_from_string(c.gs.mode);
    if (c.method != "mdpso" && c.method != "gs")
        throw ConfigError("unknown method '" + c.method + "'");
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    return from_json(j);
}

void RunConfig::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write config file: " + path);
    out << to_json().dump(1) << "\n";
}

SwarmConfig RunConfig::swarm_config(std::size_t threads) const {
    SwarmConfig s;
    s.n_particles = swarm.particles;
    s.n_iterations = swarm.iterations;
    s.c0 = swarm.c0;
    s.c1 = swarm.c1;
    s.c2 = swarm.c2;
    s.c3 = swarm.c3;
    s.r_mode = r_mode();
    s.epsilon = swarm.epsilon;
    s.zero_band = swarm.zero_band;
    s.sparsity_tol = swarm.sparsity_tol;
    s.seed = seed;
    s.threads = threads;
    return s;
}

GSConfig RunConfig::gs_config() const {
    GSConfig g;
    g.step = gs.step;
    g.n_samples = gs.samples;
    g.max_radius = gs.max_radius;
    g.mode = gs_mode_from_string(gs.mode);
    g.epsilon = swarm.epsilon;
    g.zero_band = swarm.zero_band;
    g.sparsity_tol = swarm.sparsity_tol;
    return g;
}

IVVariant RunConfig::iv_variant() const {
    if (data.iv_variant == "paper") return IVVariant::Paper;
    if (data.iv_variant == "log") return IVVariant::Log;
    throw ConfigError("unknown iv_variant '" + data.iv_variant + "'");
}

RMode RunConfig::r_mode() const {
    if (swarm.r_mode == "paper") return RMode::Paper;
    if (swarm.r_mode == "standard") return RMode::Standard;
    throw ConfigError("unknown r_mode '" + swarm.r_mode + "'");
}

SelectionStrategy RunConfig::strategy() const {
    return selection_strategy_from_string(selection.strategy);
}

} // namespace cfswarm
