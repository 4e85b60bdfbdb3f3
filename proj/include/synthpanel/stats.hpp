#pragma once

#include <cstddef>
#include <vector>

namespace synthpanel {
namespace stats {

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x);  // sample variance (n-1)
double stdev(const std::vector<double>& x);

// Median (average of the middle two for even n).
double median(std::vector<double> x);

// Quantile by inclusive order statistics with linear interpolation:
// h = (n-1)p, q = x_(floor h) + (h - floor h) * (x_(floor h + 1) - x_(floor h)).
double quantile(std::vector<double> x, double p);

struct Correlation {
  double r = 0.0;        // correlation coefficient
  double p_value = 1.0;  // two-sided, t approximation
  std::size_t n = 0;
};

Correlation pearson(const std::vector<double>& a, const std::vector<double>& b);
Correlation spearman(const std::vector<double>& a, const std::vector<double>& b);

// Distribution tails/quantiles (thin wrappers over boost::math).
double student_t_quantile(double p, double dof);
double student_t_two_sided_p(double t, double dof);
double normal_quantile(double p);
double normal_two_sided_p(double z);
double chi_squared_upper_p(double x, double dof);

}  // namespace stats
}  // namespace synthpanel
