#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cfswarm/active_set.hpp"
#include "cfswarm/select.hpp"

namespace cfswarm {

/// Paper mode searches every mutable feature without box constraints;
/// constrained mode honors the same active set and epsilon boxes as MD-PSO.
enum class GSMode { Paper, Constrained };

struct GSConfig {
    double step = 0.02;          // shell growth per step
    std::size_t n_samples = 100; // candidates per shell
    double max_radius = 0.0;     // 0 = auto: sqrt(searched continuous dims)
    GSMode mode = GSMode::Paper;
    double epsilon = 0.5;        // constrained mode only
    double zero_band = 0.05;     // constrained mode only
    double sparsity_tol = 1e-6;
};

GSMode gs_mode_from_string(const std::string& s);

/// Growing Spheres baseline: sample candidates uniformly in expanding
/// hyperspherical shells around the query over the searched continuous
/// coordinates; categorical features are resampled uniformly over levels
/// with probability proportional to the shell radius. Returns the first
/// valid candidate per restart (lowest shell, then lowest sample index);
/// k counterfactuals come from k seeded restarts.
/// `radii_out`, when given, receives the terminating shell's outer radius
/// per emitted CF.
CounterfactualSet growing_spheres(const DecisionFunction& f, const QueryPoint& query,
                                  std::size_t query_row, const FeatureSchema& schema,
                                  const ActiveSet& active, std::size_t k,
                                  std::uint64_t seed, const GSConfig& cfg,
                                  std::vector<double>* radii_out = nullptr);

} // namespace cfswarm
