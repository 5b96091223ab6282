#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace vey {

struct LineFit {
  double slope = 0, intercept = 0;
  double slope_stderr = 0;
  double ci_low = 0, ci_high = 0;  // 95% interval for the slope
  double r2 = 0;
  int n = 0;
};

/// Ordinary least squares y = a x + b.
inline LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = int(x.size());
  if (n < 3 || y.size() != x.size()) throw std::invalid_argument("linear_fit: need at least three paired samples");
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += x[std::size_t(i)];
    my += y[std::size_t(i)];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const double dx = x[std::size_t(i)] - mx, dy = y[std::size_t(i)] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0) throw std::invalid_argument("linear_fit: abscissae are all equal");
  LineFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (int i = 0; i < n; ++i) ssr += std::pow(y[std::size_t(i)] - f.slope * x[std::size_t(i)] - f.intercept, 2);
  f.r2 = syy > 0 ? 1 - ssr / syy : 1;
  f.slope_stderr = std::sqrt(ssr / (n - 2) / sxx);
  const boost::math::students_t dist(n - 2);
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  f.ci_low = f.slope - t * f.slope_stderr;
  f.ci_high = f.slope + t * f.slope_stderr;
  return f;
}

// Fit of log y against log x; entries must be positive.
inline LineFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw std::domain_error("loglog_fit: nonpositive sample");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return linear_fit(lx, ly);
}

struct ProportionalFit {
  double C = 0;
  double r2 = 0;
};

/// y = C x with unit slope in log space: log C is the mean of log(y / x), and
/// r2 compares the residual to the spread of log y.
inline ProportionalFit proportional_log_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("proportional_log_fit: need paired samples");
  double lc = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw std::domain_error("proportional_log_fit: nonpositive sample");
    lc += std::log(y[i] / x[i]);
    my += std::log(y[i]);
  }
  lc /= double(n);
  my /= double(n);
  double ssr = 0, sst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ssr += std::pow(std::log(y[i]) - lc - std::log(x[i]), 2);
    sst += std::pow(std::log(y[i]) - my, 2);
  }
  return {std::exp(lc), sst > 0 ? 1 - ssr / sst : 1};
}

}  // namespace vey
