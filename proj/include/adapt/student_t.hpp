#pragma once

namespace adapt::stats {

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// Standard Student-t CDF with nu > 0 degrees of freedom.
double student_t_cdf(double t, double nu);

double student_t_pdf(double t, double nu);

/// Inverse of student_t_cdf for p in (0, 1), solved by safeguarded Newton
/// iteration on a bisection bracket.
double student_t_quantile(double p, double nu);

}  // namespace adapt::stats
