#pragma once

#include <span>

namespace psybench {

// Regularized incomplete beta function I_x(a, b), continued-fraction
// (modified Lentz) evaluation, 1e-12 convergence, <= 300 iterations.
double reg_inc_beta(double a, double b, double x);

// Two-sided tail probability of Student's t distribution:
// P(|T_df| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

double mean(std::span<const double> xs);

// Sample variance (ddof = 1).
double sample_variance(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
    double mean_a = 0.0;
    double mean_b = 0.0;
};

// Welch's unequal-variance two-sample t-test with Welch-Satterthwaite
// degrees of freedom. Requires both samples of size >= 2 and at least one
// sample with nonzero variance.
TTestResult welch_ttest(std::span<const double> a, std::span<const double> b);

}  // namespace psybench
