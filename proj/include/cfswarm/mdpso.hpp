#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cfswarm/active_set.hpp"
#include "cfswarm/dataset.hpp"
#include "cfswarm/model.hpp"
#include "cfswarm/objective.hpp"
#include "cfswarm/rng.hpp"

namespace cfswarm {

/// Random coefficient ranges for the velocity update. Paper mode draws
/// r1 in [0, c1], r2 in [0, c2], r3 in [c1, c2] as printed; standard mode
/// draws all three from [0, 1].
enum class RMode { Paper, Standard };

struct SwarmConfig {
    std::size_t n_particles = 50;
    std::size_t n_iterations = 100;
    double c0 = 0.7; // inertia
    double c1 = 1.5; // exploitation (personal best)
    double c2 = 1.5; // exploration (global best)
    double c3 = 0.5; // diversity preservation
    RMode r_mode = RMode::Paper;
    double epsilon = 0.5;      // box half-width fraction
    double zero_band = 0.05;   // widens boxes of near-zero features; 0 disables
    double sparsity_tol = 1e-6;
    std::uint64_t seed = 0;
    std::size_t threads = 1;   // fitness/update workers; never affects results
};

/// Per-coordinate box in scaled space. Inactive coordinates carry the
/// degenerate bound [z, z]; active categorical coordinates span [0, 1].
struct BoxBounds {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<char> active;

    double width(std::size_t c) const { return hi[c] - lo[c]; }
};

BoxBounds box_bounds(std::span<const double> x0, const ActiveSet& active,
                     const FeatureSchema& schema, double epsilon,
                     double zero_band);

/// Swarm particle. The position stores free real values for categorical
/// blocks (confined to the hypercube); snapping happens at fitness
/// evaluation and emission, never on the stored state.
struct Particle {
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> pbest;
    ObjectiveBreakdown pbest_eval;
    ObjectiveBreakdown last_eval;
};

/// New velocity per the MD-PSO update:
///   v' = c0*v + c1*r1*(pbest - x) + c2*r2*(gbest - x) + c3*r3*(x - swarm_mean)
/// Only active coordinates draw random numbers and move; the divergence term
/// draws r3 only when c3 is nonzero. Each component is clamped to the box
/// width of its coordinate.
template <typename Rng>
std::vector<double> velocity_update(const Particle& p, std::span<const double> gbest,
                                    std::span<const double> swarm_mean,
                                    const BoxBounds& bounds, const SwarmConfig& cfg,
                                    Rng& rng) {
    const std::size_t width = p.x.size();
    if (gbest.size() != width || swarm_mean.size() != width ||
        bounds.lo.size() != width)
        throw InternalError("velocity_update: dimension mismatch");
    std::vector<double> v(width, 0.0);
    for (std::size_t c = 0; c < width; ++c) {
        if (!bounds.active[c]) continue;
        double r1, r2;
        if (cfg.r_mode == RMode::Paper) {
            r1 = rng.uniform(0.0, cfg.c1);
            r2 = rng.uniform(0.0, cfg.c2);
        } else {
            r1 = rng.uniform(0.0, 1.0);
            r2 = rng.uniform(0.0, 1.0);
        }
        double nv = cfg.c0 * p.v[c] + cfg.c1 * r1 * (p.pbest[c] - p.x[c]) +
                    cfg.c2 * r2 * (gbest[c] - p.x[c]);
        if (cfg.c3 != 0.0) {
            const double r3 = cfg.r_mode == RMode::Paper
                                  ? rng.uniform(std::min(cfg.c1, cfg.c2),
                                                std::max(cfg.c1, cfg.c2))
                                  : rng.uniform(0.0, 1.0);
            nv += cfg.c3 * r3 * (p.x[c] - swarm_mean[c]);
        }
        const double vmax = bounds.width(c);
        if (nv > vmax) nv = vmax;
        if (nv < -vmax) nv = -vmax;
        v[c] = nv;
    }
    return v;
}

/// x' = x + v', clamped into the box. Categorical coordinates stay free
/// inside [0, 1]; snapping is applied downstream at fitness evaluation.
void position_update(Particle& p, const std::vector<double>& new_velocity,
                     const BoxBounds& bounds);

struct SwarmResult {
    std::vector<Particle> particles;
    std::vector<double> gbest; // raw position (categorical blocks unsnapped)
    ObjectiveBreakdown gbest_eval;
    std::vector<double> trace; // global-best objective; entry 0 is post-init
};

/// Run MD-PSO: particles start uniformly inside their boxes with zero
/// velocity; each iteration evaluates the snapped positions against the
/// objective and performs a synchronized best update. Deterministic for a
/// given seed regardless of cfg.threads.
SwarmResult optimize(const DecisionFunction& f, const QueryPoint& query,
                     const ActiveSet& active, const FeatureSchema& schema,
                     const SwarmConfig& cfg);

} // namespace cfswarm
