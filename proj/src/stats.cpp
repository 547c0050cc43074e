#include "she/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "she/common.hpp"

namespace she::stats {

Aggregate mc_aggregate(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("aggregate of nothing");
  Aggregate a;
  a.n = int(xs.size());
  a.mean = pairwise_sum(xs) / double(xs.size());
  if (xs.size() > 1) {
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double d = xs[i] - a.mean;
      sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / double(xs.size() - 1);
    a.std_err = std::sqrt(var / double(xs.size()));
  }
  a.ci_lo = a.mean - 1.96 * a.std_err;
  a.ci_hi = a.mean + 1.96 * a.std_err;
  return a;
}

RateFit rate_fit(const std::vector<double>& levels, const std::vector<double>& gaps) {
  if (levels.size() != gaps.size() || levels.size() < 2)
    throw std::invalid_argument("rate fit needs matching levels and gaps, at least 2");
  RateFit fit;
  const std::size_t n = levels.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(levels[i] > 0.0)) throw std::invalid_argument("levels must be > 0");
    double g = std::abs(gaps[i]);
    if (g < std::numeric_limits<double>::epsilon()) {
      g = std::numeric_limits<double>::epsilon();
      fit.floored = true;
    }
    lx[i] = std::log(levels[i]);
    ly[i] = std::log(g);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("levels are all equal");
  fit.alpha = sxy / sxx;
  fit.intercept = my - fit.alpha * mx;
  if (syy == 0.0) {
    fit.r2 = 1.0;  // constant gaps are fit exactly by a flat line
  } else {
    const double ss_res = syy - sxy * sxy / sxx;
    fit.r2 = 1.0 - ss_res / syy;
  }
  return fit;
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of nothing");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace she::stats
