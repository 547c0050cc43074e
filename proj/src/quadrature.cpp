#include "she/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "she/common.hpp"

namespace she {

namespace {

// Kronrod-15 abscissae on [0,1] and weights; wg are the embedded Gauss-7 weights.
constexpr double xgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double wgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Piece {
  double a, b, value, error;
};

struct WorstFirst {
  bool operator()(const Piece& p, const Piece& q) const { return p.error < q.error; }
};

Piece gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv1[7], fv2[7];
  const double fc = f(c);
  double resg = wg[3] * fc;
  double resk = wgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    fv1[j] = f(c - dx);
    fv2[j] = f(c + dx);
    resk += wgk[j] * (fv1[j] + fv2[j]);
    if (j % 2 == 1) resg += wg[j / 2] * (fv1[j] + fv2[j]);
  }
  const double reskh = resk * 0.5;
  double resasc = wgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += wgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  resasc *= std::abs(h);
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return {a, b, resk * h, err};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureConfig& cfg) {
  QuadResult out;
  if (a == b) return out;
  std::priority_queue<Piece, std::vector<Piece>, WorstFirst> heap;
  Piece first = gk15(f, a, b);
  double total = first.value;
  double toterr = first.error;
  heap.push(first);
  int splits = 0;
  while (toterr > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)) &&
         splits < cfg.max_subdivisions) {
    Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);  // interval at floating point resolution; cannot split
      break;
    }
    Piece left = gk15(f, worst.a, mid);
    Piece right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    toterr += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  out.value = total;
  out.error = toterr;
  out.subdivisions = splits;
  out.converged = toterr <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
  return out;
}

double integrate_checked(const std::function<double(double)>& f, double a, double b,
                         const QuadratureConfig& cfg) {
  QuadResult r = integrate(f, a, b, cfg);
  if (!r.converged)
    throw NumericalError("quadrature tolerance not met", r.value, r.error);
  return r.value;
}

}  // namespace she
