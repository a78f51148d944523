#pragma once

#include <span>
#include <utility>

#include "curveclass/registration.hpp"

namespace curveclass {

struct SimilarityScore {
    double zeta_s = 0.0;   // curvature-space similarity
    double theta_m = 0.0;  // length-normalized Euclidean fit error
    double xi = 0.0;       // overall measure
    double rho = 1.0;      // mixing constant used
};

// zeta_min / |eps1|
double curvature_similarity(double zeta_min, double eps1);

// euclid_min / sqrt(len1 * len2)
double euclidean_similarity(double euclid_min, double len1, double len2);

SimilarityScore overall_similarity(double zeta_s, double theta_m, double rho);

// rho = median(zeta_s) / median(theta_m) over the batch, clamped to
// [1e-3, 1e3]; needs >= 10 pairs and nonzero medians.
double calibrate_rho(std::span<const std::pair<double, double>> sample);

SimilarityScore score_outcome(const MatchOutcome& outcome, double rho);

}  // namespace curveclass
