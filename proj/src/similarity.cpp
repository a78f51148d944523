#include "curveclass/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "curveclass/errors.hpp"

namespace curveclass {

double curvature_similarity(double zeta_min, double eps1) {
    if (std::fabs(eps1) < 1e-6) throw DegenerateReference("curvature_similarity: eps1 too small");
    return zeta_min / std::fabs(eps1);
}

double euclidean_similarity(double euclid_min, double len1, double len2) {
    if (len1 <= 0.0 || len2 <= 0.0) throw DegenerateLength("euclidean_similarity: non-positive length");
    return euclid_min / std::sqrt(len1 * len2);
}

SimilarityScore overall_similarity(double zeta_s, double theta_m, double rho) {
    if (rho <= 0.0) throw BadRho("overall_similarity: rho must be > 0");
    return {zeta_s, theta_m, zeta_s + rho * theta_m, rho};
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

double calibrate_rho(std::span<const std::pair<double, double>> sample) {
    if (sample.size() < 10) throw InsufficientSample("calibrate_rho: need >= 10 pairs");
    std::vector<double> zs, ts;
    zs.reserve(sample.size());
    ts.reserve(sample.size());
    for (const auto& [z, t] : sample) {
        zs.push_back(z);
        ts.push_back(t);
    }
    const double mz = median(std::move(zs));
    const double mt = median(std::move(ts));
    if (mz <= 0.0 || mt <= 0.0) throw InsufficientSample("calibrate_rho: zero median");
    return std::clamp(mz / mt, 1e-3, 1e3);
}

SimilarityScore score_outcome(const MatchOutcome& outcome, double rho) {
    const double zs = curvature_similarity(outcome.zeta_min, outcome.eps1);
    const double tm = euclidean_similarity(outcome.euclid_min, outcome.len1, outcome.len2);
    return overall_similarity(zs, tm, rho);
}

}  // namespace curveclass
