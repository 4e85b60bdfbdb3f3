#include "synthpanel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "synthpanel/errors.hpp"

namespace synthpanel {
namespace stats {

double mean(const std::vector<double>& x) {
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(const std::vector<double>& x) {
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double stdev(const std::vector<double>& x) { return std::sqrt(variance(x)); }

double median(std::vector<double> x) {
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  if (n % 2 == 1) return x[n / 2];
  return 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

double quantile(std::vector<double> x, double p) {
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (p <= 0.0) return *std::min_element(x.begin(), x.end());
  if (p >= 1.0) return *std::max_element(x.begin(), x.end());
  std::sort(x.begin(), x.end());
  const double h = static_cast<double>(x.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= x.size()) return x.back();
  return x[lo] + frac * (x[lo + 1] - x[lo]);
}

namespace {

Correlation correlation_from_r(double r, std::size_t n) {
  Correlation c;
  c.r = r;
  c.n = n;
  if (n < 3 || !std::isfinite(r)) {
    c.p_value = std::numeric_limits<double>::quiet_NaN();
    return c;
  }
  const double denom = 1.0 - r * r;
  if (denom <= 0.0) {
    c.p_value = 0.0;  // |r| = 1
    return c;
  }
  const double t = r * std::sqrt(static_cast<double>(n - 2) / denom);
  c.p_value = student_t_two_sided_p(t, static_cast<double>(n - 2));
  return c;
}

std::vector<double> ranks(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // average rank for ties
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

Correlation pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw runtime_error("LengthMismatch", "correlation inputs differ in length");
  const std::size_t n = a.size();
  if (n < 3) throw validation_error("TooFewPairs", "need at least 3 paired values");
  const double ma = mean(a), mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0)
    return correlation_from_r(std::numeric_limits<double>::quiet_NaN(), n);
  return correlation_from_r(sab / std::sqrt(saa * sbb), n);
}

Correlation spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw runtime_error("LengthMismatch", "correlation inputs differ in length");
  if (a.size() < 3) throw validation_error("TooFewPairs", "need at least 3 paired values");
  return pearson(ranks(a), ranks(b));
}

double student_t_quantile(double p, double dof) {
  boost::math::students_t dist(dof);
  return boost::math::quantile(dist, p);
}

double student_t_two_sided_p(double t, double dof) {
  boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

double normal_quantile(double p) {
  boost::math::normal dist(0.0, 1.0);
  return boost::math::quantile(dist, p);
}

double normal_two_sided_p(double z) {
  boost::math::normal dist(0.0, 1.0);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(z)));
}

double chi_squared_upper_p(double x, double dof) {
  boost::math::chi_squared dist(dof);
  if (x <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(dist, x));
}

}  // namespace stats
}  // namespace synthpanel
