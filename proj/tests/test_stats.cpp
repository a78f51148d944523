#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <functional>
#include <vector>

#include "curveclass/errors.hpp"
#include "curveclass/stats.hpp"
#include "curveclass/synth.hpp"

using namespace curveclass;

namespace {

// adaptive Simpson quadrature of the Student density, the independent
// reference for the tail and pdf integrals
double student_density(double t, double nu) {
    return std::exp(std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2) - 0.5 * std::log(nu * M_PI) -
                    (nu + 1) / 2 * std::log1p(t * t / nu));
}

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = (a + b) / 2.0;
    const double lm = (a + m) / 2.0, rm = (m + b) / 2.0;
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
    const double m = (a + b) / 2.0;
    const double fa = f(a), fm = f(m), fb = f(b);
    return adaptive_simpson(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 60);
}

// quadrature oracle for the two-tailed probability
double tail_oracle(double t, int dof) {
    const double nu = dof;
    const double at = std::fabs(t);
    auto f = [&](double x) { return student_density(x, nu); };
    // central mass on [-|t|, |t|]; the complement is the two-tailed area
    return 1.0 - integrate(f, -at, at);
}

// normal CDF two-tail
double normal_two_tail(double t) { return std::erfc(std::fabs(t) / std::sqrt(2.0)); }

// exact rational evaluation of the Welch-Satterthwaite expression; doubles
// are exact binary rationals, so the whole computation is exact
int welch_dof_exact(double s1, int n1, double s2, int n2) {
    using rational = boost::multiprecision::cpp_rational;
    const rational v1 = rational(s1) * rational(s1) / n1;
    const rational v2 = rational(s2) * rational(s2) / n2;
    const rational expr = (v1 + v2) * (v1 + v2) / (v1 * v1 / (n1 - 1) + v2 * v2 / (n2 - 1));
    const boost::multiprecision::cpp_int fl =
        boost::multiprecision::numerator(expr) / boost::multiprecision::denominator(expr);
    const int f = fl.convert_to<int>();
    return std::max(1, f);
}

}  // namespace

TEST_CASE("summarize") {
    const std::vector<double> v{1.0, 2.0, 3.0};
    const SampleSummary s = summarize(v);
    CHECK(s.mean == doctest::Approx(2.0));
    CHECK(s.sd == doctest::Approx(1.0));
    CHECK(s.n == 3);
}

TEST_CASE("welch_t: worked cases") {
    const SampleSummary a{2.0, 1.0, 100};
    const SampleSummary b{3.0, 1.0, 100};
    CHECK(welch_t(a, b) == doctest::Approx(-7.0711).epsilon(1e-4));
    CHECK(welch_t(b, a) == doctest::Approx(7.0711).epsilon(1e-4));
    CHECK(welch_t(a, a) == doctest::Approx(0.0));
    CHECK_THROWS_AS(welch_t({1.0, 0.0, 5}, {1.0, 0.0, 5}), ZeroVariance);
}

TEST_CASE("welch_dof: worked cases and exact-arithmetic oracle") {
    CHECK(welch_dof({0.0, 1.0, 100}, {0.0, 1.0, 100}) == 198);
    CHECK(welch_dof({0.0, 0.7, 2}, {1.0, 0.7, 2}) == 2);

    Rng rng(5);
    for (int i = 0; i < 200; i++) {
        SampleSummary s1{0.0, rng.uniform(0.1, 4.0), rng.uniform_int(2, 500)};
        SampleSummary s2{0.0, rng.uniform(0.1, 4.0), rng.uniform_int(2, 500)};
        const int exact = welch_dof_exact(s1.sd, s1.n, s2.sd, s2.n);
        CHECK(welch_dof(s1, s2) == exact);
    }
}

TEST_CASE("equal-variance equal-n pooling gives dof = 2(n-1)") {
    for (int n : {5, 20, 77}) {
        const SampleSummary s{1.0, 2.5, n};
        CHECK(welch_t(s, s) == doctest::Approx(0.0));
        CHECK(welch_dof(s, s) == 2 * (n - 1));
    }
}

TEST_CASE("student_tail: anchors and quadrature oracle") {
    CHECK(student_tail(0.0, 7) == doctest::Approx(1.0));
    CHECK(student_tail(2.228, 10) == doctest::Approx(0.0500).epsilon(0.01));
    CHECK(std::fabs(student_tail(2.228, 10) - 0.05) < 5e-4);
    CHECK(std::fabs(student_tail(-1.96, 1000000) - normal_two_tail(1.96)) < 1e-5);
    CHECK(std::fabs(student_tail(-1.96, 1000000) - 0.05) < 1e-3);
    CHECK_THROWS_AS(student_tail(1.0, 0), BadDof);

    Rng rng(17);
    double max_err = 0.0;
    for (int i = 0; i < 100; i++) {
        const double t = rng.uniform(-6.0, 6.0);
        const int dof = rng.uniform_int(1, 300);
        max_err = std::max(max_err, std::fabs(student_tail(t, dof) - tail_oracle(t, dof)));
    }
    CHECK(max_err <= 1e-8);
}

TEST_CASE("student_tail: monotone in |t| and toward the normal limit") {
    for (int dof : {1, 3, 10, 50}) {
        double prev = 1.1;
        for (double t = 0.0; t <= 5.0; t += 0.25) {
            const double p = student_tail(t, dof);
            CHECK(p <= prev + 1e-15);
            prev = p;
        }
    }
    // heavier tails for smaller dof at fixed t
    CHECK(student_tail(2.0, 2) > student_tail(2.0, 20));
    CHECK(student_tail(2.0, 20) > normal_two_tail(2.0));
}

TEST_CASE("student_pdf: anchors, symmetry, normalization") {
    CHECK(student_pdf(0.0, 1) == doctest::Approx(1.0 / M_PI).epsilon(1e-10));
    for (double t : {0.3, 1.7, 4.2})
        CHECK(student_pdf(t, 5) == doctest::Approx(student_pdf(-t, 5)).epsilon(1e-15));
    for (int dof : {1, 2, 5, 30, 200}) {
        const double mass = integrate([&](double x) { return student_pdf(x, dof); }, -50.0, 50.0);
        const double analytic_tail = student_tail(50.0, dof);
        CHECK(std::fabs(mass + analytic_tail - 1.0) < 1e-8);
    }
    CHECK_THROWS_AS(student_pdf(0.0, -1), BadDof);
}

TEST_CASE("ks_normality: gaussian passes, uniform fails") {
    int pass_normal = 0, fail_uniform = 0;
    for (int seed = 1; seed <= 100; seed++) {
        Rng rng(seed);
        std::vector<double> normal, uniform;
        for (int i = 0; i < 100; i++) {
            // Box-Muller from deterministic uniforms
            const double u1 = rng.uniform(1e-12, 1.0), u2 = rng.uniform(0.0, 1.0);
            normal.push_back(std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2));
            normal.push_back(std::sqrt(-2.0 * std::log(u1)) * std::sin(2.0 * M_PI * u2));
        }
        for (int i = 0; i < 500; i++) uniform.push_back(rng.uniform(0.0, 1.0));
        pass_normal += ks_normality(normal).second;
        fail_uniform += !ks_normality(uniform).second;
    }
    CHECK(pass_normal >= 95);
    CHECK(fail_uniform >= 95);

    const std::vector<double> constant(20, 3.0);
    CHECK_THROWS_AS(ks_normality(constant), ZeroVariance);
    const std::vector<double> few{1.0, 2.0};
    CHECK_THROWS_AS(ks_normality(few), TooFewValues);
}

TEST_CASE("bonferroni_threshold") {
    CHECK(bonferroni_threshold(1) == doctest::Approx(1e-4));
    CHECK(bonferroni_threshold(10) == doctest::Approx(1e-5));
    CHECK(bonferroni_threshold(25) == doctest::Approx(4e-6));
    CHECK_THROWS_AS(bonferroni_threshold(0), BadN);
}
