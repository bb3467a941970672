#include "cfswarm/objective.hpp"

#include <cmath>

#include "cfswarm/dataset.hpp"
#include "cfswarm/errors.hpp"

namespace cfswarm {

double l1_validity(const DecisionFunction& f, std::span<const double> x_cf,
                   int desired_class) {
    const double p = f.predict_proba(x_cf);
    const int predicted = p >= 0.5 ? 1 : 0;
    if (predicted == desired_class) return 0.0;
    return std::abs(p - 0.5);
}

double l2_gower(std::span<const double> x0, std::span<const double> x_cf,
                const FeatureSchema& schema) {
    if (x0.size() != schema.encoded_width() || x_cf.size() != schema.encoded_width())
        throw InternalError("l2_gower: encoded width mismatch");
    double sum = 0.0;
    for (std::size_t j = 0; j < schema.n_features(); ++j) {
        const std::size_t off = schema.block_offset(j);
        if (schema.feature(j).kind == FeatureKind::Continuous) {
            sum += std::abs(x0[off] - x_cf[off]);
        } else {
            sum += level_of(x0, schema, j) != level_of(x_cf, schema, j) ? 1.0 : 0.0;
        }
    }
    return sum / static_cast<double>(schema.n_features());
}

int l3_sparsity(std::span<const double> x0, std::span<const double> x_cf,
                const FeatureSchema& schema, double tol) {
    if (x0.size() != schema.encoded_width() || x_cf.size() != schema.encoded_width())
        throw InternalError("l3_sparsity: encoded width mismatch");
    int changed = 0;
    for (std::size_t j = 0; j < schema.n_features(); ++j) {
        const std::size_t off = schema.block_offset(j);
        if (schema.feature(j).kind == FeatureKind::Continuous) {
            if (std::abs(x0[off] - x_cf[off]) > tol) ++changed;
        } else {
            if (level_of(x0, schema, j) != level_of(x_cf, schema, j)) ++changed;
        }
    }
    return changed;
}

ObjectiveBreakdown evaluate_objective(const DecisionFunction& f,
                                      std::span<const double> x0,
                                      std::span<const double> x_cf,
                                      int desired_class,
                                      const FeatureSchema& schema, double tol) {
    ObjectiveBreakdown b;
    b.l1 = l1_validity(f, x_cf, desired_class);
    b.l2 = l2_gower(x0, x_cf, schema);
    b.l3 = l3_sparsity(x0, x_cf, schema, tol);
    b.total = b.l1 + b.l2 + b.l3;
    return b;
}

std::vector<double> snap_categoricals(std::span<const double> x,
                                      const FeatureSchema& schema) {
    std::vector<double> out(x.begin(), x.end());
    for (std::size_t j = 0; j < schema.n_features(); ++j) {
        if (schema.feature(j).kind != FeatureKind::Categorical) continue;
        const std::size_t off = schema.block_offset(j);
        const std::size_t w = schema.block_width(j);
        std::size_t best = 0;
        for (std::size_t c = 1; c < w; ++c)
            if (out[off + c] > out[off + best]) best = c;
        for (std::size_t c = 0; c < w; ++c) out[off + c] = c == best ? 1.0 : 0.0;
    }
    return out;
}

} // namespace cfswarm
