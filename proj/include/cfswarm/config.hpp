#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfswarm/active_set.hpp"
#include "cfswarm/growing_spheres.hpp"
#include "cfswarm/mdpso.hpp"
#include "cfswarm/select.hpp"

namespace cfswarm {

/// One structured config for a whole run. CLI flags override file values;
/// the effective merged config is dumped next to every run's outputs and
/// reproduces the identical run when fed back via --config.
/// Execution details that do not affect results (thread count, output
/// directory) deliberately live outside the config.
struct RunConfig {
    std::uint64_t seed = 42;
    std::string method = "mdpso"; // mdpso | gs

    struct Data {
        std::string artifact;
        std::size_t iv_bins = 10;
        std::string iv_variant = "paper"; // paper | log
    } data;

    struct Model {
        std::string file;
        std::string kind = "forest"; // forest | logistic
        std::size_t n_trees = 100;
        std::size_t max_depth = 8;
        double lr = 0.5;
        std::size_t epochs = 500;
    } model;

    struct Swarm {
        std::size_t particles = 50;
        std::size_t iterations = 100;
        double c0 = 0.7, c1 = 1.5, c2 = 1.5, c3 = 0.5;
        std::string r_mode = "paper"; // paper | standard
        double epsilon = 0.5;
        double zero_band = 0.05;
        std::size_t h = 0; // 0 = all mutable features
        double sparsity_tol = 1e-6;
    } swarm;

    struct Selection {
        std::size_t k = 5;
        std::string strategy = "cluster"; // cluster | topk | pbest
        std::size_t sample = 5;
        std::vector<std::size_t> queries; // explicit rows; overrides sampling
        bool correct_only = true;
        int sample_class = -1; // restrict query predicted class; -1 = any
    } selection;

    struct Gs {
        double step = 0.02;
        std::size_t samples = 100;
        double max_radius = 0.0; // 0 = auto
        std::string mode = "paper"; // paper | constrained
    } gs;

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig load(const std::string& path);
    void save(const std::string& path) const;

    SwarmConfig swarm_config(std::size_t threads = 1) const;
    GSConfig gs_config() const;
    IVVariant iv_variant() const;
    RMode r_mode() const;
    SelectionStrategy strategy() const;

    /// Active-set cardinality for a dataset with n_mutable mutable features.
    std::size_t effective_h(std::size_t n_mutable) const {
        return swarm.h == 0 ? n_mutable : std::min(swarm.h, n_mutable);
    }
};

} // namespace cfswarm
