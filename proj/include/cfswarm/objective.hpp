#pragma once

#include <span>
#include <vector>

#include "cfswarm/model.hpp"
#include "cfswarm/schema.hpp"

namespace cfswarm {

/// The three objective terms minimized during counterfactual search.
/// total is exactly l1 + l2 + l3.
struct ObjectiveBreakdown {
    double l1 = 0.0; // validity gap
    double l2 = 0.0; // mean Gower distance, in [0, 1]
    double l3 = 0.0; // changed-feature count, integer-valued
    double total = 0.0;
};

/// Validity gap: 0 when the predicted class equals the desired one,
/// otherwise the distance from the probability to the desired-class
/// interval, which is |p - 0.5|. Probability exactly 0.5 is class 1.
double l1_validity(const DecisionFunction& f, std::span<const double> x_cf,
                   int desired_class);

/// Mean Gower distance over original features: |delta| per continuous
/// feature (the scaled-range normalizer R_j is 1 by construction) and a
/// mismatch indicator per categorical feature.
double l2_gower(std::span<const double> x0, std::span<const double> x_cf,
                const FeatureSchema& schema);

/// Number of original features changed: continuous beyond tol, categorical
/// by level.
int l3_sparsity(std::span<const double> x0, std::span<const double> x_cf,
                const FeatureSchema& schema, double tol);

ObjectiveBreakdown evaluate_objective(const DecisionFunction& f,
                                      std::span<const double> x0,
                                      std::span<const double> x_cf,
                                      int desired_class,
                                      const FeatureSchema& schema, double tol);

/// Map each categorical block to the nearest hypercube corner (argmax,
/// ties to the lowest index); continuous coordinates pass through.
std::vector<double> snap_categoricals(std::span<const double> x,
                                      const FeatureSchema& schema);

} // namespace cfswarm
