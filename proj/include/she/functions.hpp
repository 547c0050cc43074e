#pragma once

#include <functional>
#include <string>

namespace she::fns {

// Scalar test function with optional calculus companions. `beta` declares the
// growth envelope |f(z)| <= C exp(beta z^2); bounded and polynomial entries
// declare 0.
struct TestFunction {
  std::string id;
  std::function<double(double)> eval;
  std::function<double(double)> deriv;      // empty when not smooth
  std::function<double(double)> antideriv;  // empty when not registered
  double beta = 0.0;

  bool has_deriv() const { return bool(deriv); }
  bool has_antideriv() const { return bool(antideriv); }
};

TestFunction constant(double c);
TestFunction identity();
TestFunction square();
TestFunction cube();
TestFunction sine();
TestFunction indicator(double a, double b);     // 1_(a, b]
TestFunction indicator_above(double a);         // 1_(a, inf)
TestFunction indicator_upto(double a);          // 1_(-inf, a]
TestFunction relu(double a);                    // (y - a)^+
TestFunction negpart(double a);                 // (y - a)^-
TestFunction sign_shift(double a);              // sign(y - a), antiderivative |y - a|
TestFunction gauss_growth(double beta);         // exp(beta y^2)

// by string id with parameters, e.g. "indicator:-0.3:0.3"; throws ConfigError
TestFunction by_id(const std::string& id);

}  // namespace she::fns
