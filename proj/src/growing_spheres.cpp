#include "cfswarm/growing_spheres.hpp"

#include <algorithm>
#include <cmath>

#include "cfswarm/errors.hpp"
#include "cfswarm/mdpso.hpp"

namespace cfswarm {

GSMode gs_mode_from_string(const std::string& s) {
    if (s == "paper") return GSMode::Paper;
    if (s == "constrained") return GSMode::Constrained;
    throw ConfigError("unknown growing-spheres mode '" + s + "'");
}

namespace {

struct SearchSpace {
    std::vector<std::size_t> cont_coords; // encoded columns sampled on the sphere
    std::vector<std::size_t> cat_features;
    BoxBounds bounds; // clamping bounds (constrained mode), else [0,1]
};

SearchSpace make_space(const QueryPoint& query, const FeatureSchema& schema,
                       const ActiveSet& active, const GSConfig& cfg) {
    SearchSpace sp;
    std::vector<std::size_t> searched;
    if (cfg.mode == GSMode::Constrained) {
        searched = active.feature_indices;
        sp.bounds = box_bounds(query.x, active, schema, cfg.epsilon, cfg.zero_band);
    } else {
        for (std::size_t j = 0; j < schema.n_features(); ++j)
            if (schema.feature(j).is_mutable) searched.push_back(j);
        sp.bounds.lo.assign(schema.encoded_width(), 0.0);
        sp.bounds.hi.assign(schema.encoded_width(), 1.0);
        sp.bounds.active.assign(schema.encoded_width(), 1);
    }
    for (std::size_t j : searched) {
        if (schema.feature(j).kind == FeatureKind::Continuous) {
            sp.cont_coords.push_back(schema.block_offset(j));
        } else {
            sp.cat_features.push_back(j);
        }
    }
    return sp;
}

struct ShellHit {
    std::vector<double> x;
    double outer_radius = 0.0;
};

std::optional<ShellHit> one_restart(const DecisionFunction& f, const QueryPoint& query,
                                    const FeatureSchema& schema, const SearchSpace& sp,
                                    const GSConfig& cfg, RngStream& rng) {
    const std::size_t d = sp.cont_coords.size();
    const double max_radius =
        cfg.max_radius > 0.0
            ? cfg.max_radius
            : std::max(1.0, std::sqrt(static_cast<double>(std::max<std::size_t>(d, 1))));

    std::vector<double> dir(d);
    for (double r0 = 0.0; r0 < max_radius; r0 += cfg.step) {
        const double r1 = std::min(r0 + cfg.step, max_radius);
        for (std::size_t s = 0; s < cfg.n_samples; ++s) {
            std::vector<double> cand(query.x);
            if (d > 0) {
                double norm = 0.0;
                do {
                    norm = 0.0;
                    for (std::size_t i = 0; i < d; ++i) {
                        dir[i] = rng.normal();
                        norm += dir[i] * dir[i];
                    }
                } while (norm == 0.0);
                norm = std::sqrt(norm);
                // Radius with density r^(d-1) so the shell is uniform in volume.
                const double dd = static_cast<double>(d);
                const double u = rng.uniform();
                const double radius = std::pow(
                    std::pow(r0, dd) + u * (std::pow(r1, dd) - std::pow(r0, dd)),
                    1.0 / dd);
                for (std::size_t i = 0; i < d; ++i) {
                    const std::size_t c = sp.cont_coords[i];
                    cand[c] = std::clamp(query.x[c] + radius * dir[i] / norm,
                                         sp.bounds.lo[c], sp.bounds.hi[c]);
                }
            }
            const double resample_p = std::min(1.0, r1);
            for (std::size_t j : sp.cat_features) {
                if (rng.uniform() >= resample_p) continue;
                const std::size_t off = schema.block_offset(j);
                const std::size_t w = schema.block_width(j);
                const std::size_t level = rng.uniform_index(w);
                for (std::size_t c = 0; c < w; ++c)
                    cand[off + c] = c == level ? 1.0 : 0.0;
            }
            if (f.predict_class(cand) == query.desired_class)
                return ShellHit{std::move(cand), r1};
        }
    }
    return std::nullopt;
}

} // namespace

CounterfactualSet growing_spheres(const DecisionFunction& f, const QueryPoint& query,
                                  std::size_t query_row, const FeatureSchema& schema,
                                  const ActiveSet& active, std::size_t k,
                                  std::uint64_t seed, const GSConfig& cfg,
                                  std::vector<double>* radii_out) {
    if (cfg.step <= 0.0) throw UsageError("growing_spheres: step must be > 0");
    if (k == 0) throw UsageError("growing_spheres: k must be >= 1");
    if (radii_out) radii_out->clear();

    const SearchSpace sp = make_space(query, schema, active, cfg);

    CounterfactualSet out;
    out.query = query;
    out.query_row = query_row;
    out.requested_k = k;
    out.method = "gs";

    for (std::size_t restart = 0; restart < k; ++restart) {
        RngStream rng = RngStream::derive(seed, {stream_id::kGrowingSpheres, restart});
        auto hit = one_restart(f, query, schema, sp, cfg, rng);
        if (!hit) continue;
        ++out.swarm_valid_count;

        bool dup = false;
        for (const auto& cf : out.cfs) {
            if (l3_sparsity(cf.x, hit->x, schema, cfg.sparsity_tol) == 0) {
                dup = true;
                break;
            }
        }
        if (dup) {
            out.collapsed = true;
            continue;
        }
        CounterfactualRecord rec;
        rec.x = std::move(hit->x);
        rec.valid = f.predict_class(rec.x) == query.desired_class;
        rec.breakdown = evaluate_objective(f, query.x, rec.x, query.desired_class,
                                           schema, cfg.sparsity_tol);
        out.cfs.push_back(std::move(rec));
        if (radii_out) radii_out->push_back(hit->outer_radius);
    }
    return out;
}

} // namespace cfswarm
