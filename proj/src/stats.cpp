#include "curveclass/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "curveclass/errors.hpp"

namespace curveclass {

SampleSummary summarize(std::span<const double> values) {
    SampleSummary s;
    s.n = static_cast<int>(values.size());
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / s.n;
    if (s.n >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / (s.n - 1));
    }
    return s;
}

std::pair<double, bool> ks_normality(std::span<const double> values) {
    if (values.size() < 8) throw TooFewValues("ks_normality: need >= 8 values");
    const SampleSummary s = summarize(values);
    if (s.sd <= 0.0) throw ZeroVariance("ks_normality: zero variance");

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    double d = 0.0;
    for (size_t i = 0; i < sorted.size(); i++) {
        const double z = (sorted[i] - s.mean) / s.sd;
        const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
        d = std::max(d, std::fabs(cdf - (i + 1) / n));
        d = std::max(d, std::fabs(cdf - i / n));
    }
    const double critical = 1.628 / std::sqrt(n);
    return {d, d < critical};
}

double welch_t(const SampleSummary& s1, const SampleSummary& s2) {
    if (s1.n < 2 || s2.n < 2) throw TooFewValues("welch_t: need n >= 2 on both sides");
    const double se2 = s1.sd * s1.sd / s1.n + s2.sd * s2.sd / s2.n;
    if (se2 <= 0.0) throw ZeroVariance("welch_t: both samples have zero variance");
    return (s1.mean - s2.mean) / std::sqrt(se2);
}

int welch_dof(const SampleSummary& s1, const SampleSummary& s2) {
    if (s1.n < 2 || s2.n < 2) throw TooFewValues("welch_dof: need n >= 2 on both sides");
    const double v1 = s1.sd * s1.sd / s1.n;
    const double v2 = s2.sd * s2.sd / s2.n;
    if (v1 + v2 <= 0.0) throw ZeroVariance("welch_dof: both samples have zero variance");
    const double num = (v1 + v2) * (v1 + v2);
    const double den = v1 * v1 / (s1.n - 1) + v2 * v2 / (s2.n - 1);
    const double d = num / den;
    return std::max(1, static_cast<int>(std::floor(d)));
}

namespace {

// continued fraction for the incomplete beta (Lentz's method)
double beta_cf(double a, double b, double x) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-16;
    constexpr int kMaxIter = 500;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; m++) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double student_tail(double t, int dof) {
    if (dof < 1) throw BadDof("student_tail: dof must be >= 1");
    if (t == 0.0) return 1.0;
    const double nu = static_cast<double>(dof);
    return regularized_incomplete_beta(nu / 2.0, 0.5, nu / (nu + t * t));
}

double student_pdf(double t, int dof) {
    if (dof < 1) throw BadDof("student_pdf: dof must be >= 1");
    const double nu = static_cast<double>(dof);
    const double ln = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                      0.5 * std::log(nu * 3.14159265358979323846) -
                      (nu + 1.0) / 2.0 * std::log1p(t * t / nu);
    return std::exp(ln);
}

double bonferroni_threshold(int n_tests) {
    if (n_tests < 1) throw BadN("bonferroni_threshold: n_tests must be >= 1");
    return 1e-4 / n_tests;
}

}  // namespace curveclass
