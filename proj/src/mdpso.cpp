#include "cfswarm/mdpso.hpp"

#include <algorithm>
#include <cmath>

#include "cfswarm/errors.hpp"
#include "cfswarm/parallel.hpp"

namespace cfswarm {

BoxBounds box_bounds(std::span<const double> x0, const ActiveSet& active,
                     const FeatureSchema& schema, double epsilon,
                     double zero_band) {
    if (x0.size() != schema.encoded_width())
        throw InternalError("box_bounds: encoded width mismatch");
    if (epsilon < 0.0) throw UsageError("box_bounds: epsilon must be >= 0");

    BoxBounds b;
    const std::size_t width = schema.encoded_width();
    b.lo.assign(x0.begin(), x0.end());
    b.hi.assign(x0.begin(), x0.end());
    b.active.assign(width, 0);

    for (std::size_t j : active.feature_indices) {
        const std::size_t off = schema.block_offset(j);
        if (schema.feature(j).kind == FeatureKind::Continuous) {
            const double z = x0[off];
            if (z < zero_band) {
                // The printed multiplicative bound freezes z = 0; widen it.
                b.lo[off] = 0.0;
                b.hi[off] = std::min(1.0, std::max(z * (1.0 + epsilon), zero_band));
            } else {
                b.lo[off] = std::max(0.0, z * (1.0 - epsilon));
                b.hi[off] = std::min(1.0, z * (1.0 + epsilon));
            }
            b.active[off] = 1;
        } else {
            for (std::size_t c = 0; c < schema.block_width(j); ++c) {
                b.lo[off + c] = 0.0;
                b.hi[off + c] = 1.0;
                b.active[off + c] = 1;
            }
        }
    }
    return b;
}

void position_update(Particle& p, const std::vector<double>& new_velocity,
                     const BoxBounds& bounds) {
    if (new_velocity.size() != p.x.size())
        throw InternalError("position_update: dimension mismatch");
    p.v = new_velocity;
    for (std::size_t c = 0; c < p.x.size(); ++c) {
        if (!bounds.active[c]) continue;
        p.x[c] = std::clamp(p.x[c] + p.v[c], bounds.lo[c], bounds.hi[c]);
    }
}

SwarmResult optimize(const DecisionFunction& f, const QueryPoint& query,
                     const ActiveSet& active, const FeatureSchema& schema,
                     const SwarmConfig& cfg) {
    if (cfg.n_particles < 2) throw UsageError("optimize: need at least 2 particles");
    const std::size_t width = schema.encoded_width();
    const BoxBounds bounds =
        box_bounds(query.x, active, schema, cfg.epsilon, cfg.zero_band);

    SwarmResult result;
    result.particles.resize(cfg.n_particles);

    auto evaluate = [&](const std::vector<double>& x) {
        const std::vector<double> snapped = snap_categoricals(x, schema);
        return evaluate_objective(f, query.x, snapped, query.desired_class, schema,
                                  cfg.sparsity_tol);
    };

    parallel_for(cfg.n_particles, cfg.threads, [&](std::size_t i) {
        RngStream rng = RngStream::derive(cfg.seed, {stream_id::kSwarmInit, i});
        Particle& p = result.particles[i];
        p.x.resize(width);
        for (std::size_t c = 0; c < width; ++c) {
            p.x[c] = bounds.active[c] ? rng.uniform(bounds.lo[c], bounds.hi[c])
                                      : query.x[c];
        }
        p.v.assign(width, 0.0);
        p.last_eval = evaluate(p.x);
        p.pbest = p.x;
        p.pbest_eval = p.last_eval;
    });

    std::size_t gbest_i = 0;
    for (std::size_t i = 1; i < cfg.n_particles; ++i) {
        if (result.particles[i].pbest_eval.total <
            result.particles[gbest_i].pbest_eval.total)
            gbest_i = i;
    }
    std::vector<double> gbest = result.particles[gbest_i].pbest;
    ObjectiveBreakdown gbest_eval = result.particles[gbest_i].pbest_eval;
    result.trace.reserve(cfg.n_iterations + 1);
    result.trace.push_back(gbest_eval.total);

    std::vector<double> swarm_mean(width);
    for (std::size_t t = 1; t <= cfg.n_iterations; ++t) {
        std::fill(swarm_mean.begin(), swarm_mean.end(), 0.0);
        for (const auto& p : result.particles)
            for (std::size_t c = 0; c < width; ++c) swarm_mean[c] += p.x[c];
        for (std::size_t c = 0; c < width; ++c)
            swarm_mean[c] /= static_cast<double>(cfg.n_particles);

        parallel_for(cfg.n_particles, cfg.threads, [&](std::size_t i) {
            RngStream rng = RngStream::derive(cfg.seed, {stream_id::kSwarmUpdate, t, i});
            Particle& p = result.particles[i];
            const std::vector<double> v =
                velocity_update(p, gbest, swarm_mean, bounds, cfg, rng);
            position_update(p, v, bounds);
            p.last_eval = evaluate(p.x);
            if (p.last_eval.total < p.pbest_eval.total) {
                p.pbest = p.x;
                p.pbest_eval = p.last_eval;
            }
        });

        for (const auto& p : result.particles) {
            if (p.pbest_eval.total < gbest_eval.total) {
                gbest = p.pbest;
                gbest_eval = p.pbest_eval;
            }
        }
        result.trace.push_back(gbest_eval.total);
    }

    result.gbest = std::move(gbest);
    result.gbest_eval = gbest_eval;
    return result;
}

} // namespace cfswarm
