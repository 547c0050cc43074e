#pragma once

#include <vector>

namespace she::stats {

struct Aggregate {
  double mean = 0.0;
  double std_err = 0.0;
  double ci_lo = 0.0;  // mean +- 1.96 standard errors
  double ci_hi = 0.0;
  int n = 0;
};

// mean and standard error in one fixed-order pass; n = 1 reports std_err 0
Aggregate mc_aggregate(const std::vector<double>& xs);

struct RateFit {
  double alpha = 0.0;      // slope of log gap against log level
  double intercept = 0.0;  // log-scale intercept
  double r2 = 1.0;
  bool floored = false;  // some gaps were clamped at the floor before the log
};

// least squares on (log level, log gap); gaps below machine epsilon are floored
RateFit rate_fit(const std::vector<double>& levels, const std::vector<double>& gaps);

double median(std::vector<double> xs);

}  // namespace she::stats
