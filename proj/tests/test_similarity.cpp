#include <doctest.h>

#include <vector>

#include "curveclass/errors.hpp"
#include "curveclass/similarity.hpp"
#include "curveclass/synth.hpp"

using namespace curveclass;

TEST_CASE("curvature_similarity") {
    CHECK(curvature_similarity(3.0, 6.0) == doctest::Approx(0.5));
    CHECK(curvature_similarity(0.0, 2.0) == doctest::Approx(0.0));
    CHECK(curvature_similarity(M_PI, 2.0 * M_PI) == doctest::Approx(0.5));
    CHECK_THROWS_AS(curvature_similarity(1.0, 1e-9), DegenerateReference);
}

TEST_CASE("euclidean_similarity") {
    CHECK(euclidean_similarity(10.0, 4.0, 9.0) == doctest::Approx(10.0 / 6.0));
    CHECK(euclidean_similarity(0.0, 4.0, 9.0) == doctest::Approx(0.0));
    CHECK(euclidean_similarity(10.0, 9.0, 4.0) == doctest::Approx(euclidean_similarity(10.0, 4.0, 9.0)));
    CHECK_THROWS_AS(euclidean_similarity(1.0, 0.0, 1.0), DegenerateLength);
}

TEST_CASE("overall_similarity") {
    const SimilarityScore s = overall_similarity(1.0, 2.0, 0.5);
    CHECK(s.xi == doctest::Approx(2.0));
    CHECK(s.xi == doctest::Approx(s.zeta_s + s.rho * s.theta_m).epsilon(1e-12));
    CHECK(overall_similarity(0.0, 0.0, 7.0).xi == doctest::Approx(0.0));
    CHECK(overall_similarity(1.5, 0.0, 2.0).xi == doctest::Approx(overall_similarity(1.5, 0.0, 4.0).xi));
    CHECK_THROWS_AS(overall_similarity(1.0, 1.0, 0.0), BadRho);
}

TEST_CASE("calibrate_rho") {
    SUBCASE("constant pairs") {
        std::vector<std::pair<double, double>> sample(12, {2.0, 4.0});
        CHECK(calibrate_rho(sample) == doctest::Approx(0.5));
    }
    SUBCASE("zero theta median") {
        std::vector<std::pair<double, double>> sample(12, {2.0, 0.0});
        CHECK_THROWS_AS(calibrate_rho(sample), InsufficientSample);
    }
    SUBCASE("too few") {
        std::vector<std::pair<double, double>> sample(5, {1.0, 1.0});
        CHECK_THROWS_AS(calibrate_rho(sample), InsufficientSample);
    }
    SUBCASE("random pairs balance the two terms at the median") {
        Rng rng(23);
        std::vector<std::pair<double, double>> sample;
        for (int i = 0; i < 101; i++)
            sample.emplace_back(rng.uniform(0.1, 3.0), rng.uniform(0.5, 9.0));
        const double rho = calibrate_rho(sample);
        std::vector<double> zs, scaled;
        for (const auto& [z, t] : sample) {
            zs.push_back(z);
            scaled.push_back(rho * t);
        }
        std::sort(zs.begin(), zs.end());
        std::sort(scaled.begin(), scaled.end());
        const double ratio = zs[zs.size() / 2] / scaled[scaled.size() / 2];
        CHECK(ratio >= 0.5);
        CHECK(ratio <= 2.0);
    }
}
