#pragma once

#include <span>
#include <utility>

namespace curveclass {

struct SampleSummary {
    double mean = 0.0;
    double sd = 0.0;
    int n = 0;
};

struct PairTest {
    double t = 0.0;
    int dof = 1;
    double p_two_tail = 1.0;
};

SampleSummary summarize(std::span<const double> values);

// One-sample Kolmogorov-Smirnov statistic against a normal with the sample's
// own mean/sd; pass iff statistic < 1.628/sqrt(n) (asymptotic critical value
// at alpha = 0.01; no Lilliefors correction applied).
std::pair<double, bool> ks_normality(std::span<const double> values);

// (mean1 - mean2) / sqrt(sd1^2/n1 + sd2^2/n2)
double welch_t(const SampleSummary& s1, const SampleSummary& s2);

// Integral part of the Welch-Satterthwaite degrees of freedom, at least 1.
int welch_dof(const SampleSummary& s1, const SampleSummary& s2);

// Two-tailed Student probability P(|X| >= |t|) via the regularized
// incomplete beta function.
double student_tail(double t, int dof);

double student_pdf(double t, int dof);

// 1e-4 / n_tests
double bonferroni_threshold(int n_tests);

// exposed for reuse and testing
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace curveclass
