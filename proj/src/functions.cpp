#include "she/functions.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "she/common.hpp"

namespace she::fns {

TestFunction constant(double c) {
  TestFunction f;
  f.id = "constant:" + std::to_string(c);
  f.eval = [c](double) { return c; };
  f.deriv = [](double) { return 0.0; };
  f.antideriv = [c](double y) { return c * y; };
  return f;
}

TestFunction identity() {
  TestFunction f;
  f.id = "identity";
  f.eval = [](double y) { return y; };
  f.deriv = [](double) { return 1.0; };
  f.antideriv = [](double y) { return 0.5 * y * y; };
  return f;
}

TestFunction square() {
  TestFunction f;
  f.id = "square";
  f.eval = [](double y) { return y * y; };
  f.deriv = [](double y) { return 2.0 * y; };
  f.antideriv = [](double y) { return y * y * y / 3.0; };
  return f;
}

TestFunction cube() {
  TestFunction f;
  f.id = "cube";
  f.eval = [](double y) { return y * y * y; };
  f.deriv = [](double y) { return 3.0 * y * y; };
  f.antideriv = [](double y) { return 0.25 * y * y * y * y; };
  return f;
}

TestFunction sine() {
  TestFunction f;
  f.id = "sine";
  f.eval = [](double y) { return std::sin(y); };
  f.deriv = [](double y) { return std::cos(y); };
  f.antideriv = [](double y) { return -std::cos(y); };
  return f;
}

TestFunction indicator(double a, double b) {
  if (!(a < b)) throw ConfigError("indicator needs a < b");
  TestFunction f;
  f.id = "indicator:" + std::to_string(a) + ":" + std::to_string(b);
  f.eval = [a, b](double y) { return y > a && y <= b ? 1.0 : 0.0; };
  f.antideriv = [a, b](double y) { return std::min(std::max(y, a), b) - a; };
  return f;
}

TestFunction indicator_above(double a) {
  TestFunction f;
  f.id = "indicator_above:" + std::to_string(a);
  f.eval = [a](double y) { return y > a ? 1.0 : 0.0; };
  f.antideriv = [a](double y) { return std::max(y - a, 0.0); };
  return f;
}

TestFunction indicator_upto(double a) {
  TestFunction f;
  f.id = "indicator_upto:" + std::to_string(a);
  f.eval = [a](double y) { return y <= a ? 1.0 : 0.0; };
  f.antideriv = [a](double y) { return y - std::max(y - a, 0.0); };
  return f;
}

TestFunction relu(double a) {
  TestFunction f;
  f.id = "relu:" + std::to_string(a);
  f.eval = [a](double y) { return std::max(y - a, 0.0); };
  f.antideriv = [a](double y) {
    const double p = std::max(y - a, 0.0);
    return 0.5 * p * p;
  };
  return f;
}

TestFunction negpart(double a) {
  TestFunction f;
  f.id = "negpart:" + std::to_string(a);
  f.eval = [a](double y) { return std::max(a - y, 0.0); };
  f.antideriv = [a](double y) {
    const double p = std::max(a - y, 0.0);
    return -0.5 * p * p;
  };
  return f;
}

TestFunction sign_shift(double a) {
  TestFunction f;
  f.id = "sign_shift:" + std::to_string(a);
  f.eval = [a](double y) { return y > a ? 1.0 : (y < a ? -1.0 : 0.0); };
  f.antideriv = [a](double y) { return std::abs(y - a); };
  return f;
}

TestFunction gauss_growth(double beta) {
  if (!(beta >= 0.0)) throw ConfigError("gauss_growth needs beta >= 0");
  TestFunction f;
  f.id = "gauss_growth:" + std::to_string(beta);
  f.eval = [beta](double y) { return std::exp(beta * y * y); };
  f.deriv = [beta](double y) { return 2.0 * beta * y * std::exp(beta * y * y); };
  f.beta = beta;
  return f;
}

TestFunction by_id(const std::string& id) {
  std::vector<std::string> part;
  std::stringstream ss(id);
  std::string tok;
  while (std::getline(ss, tok, ':')) part.push_back(tok);
  if (part.empty()) throw ConfigError("empty function id");
  auto num = [&](std::size_t i) {
    if (i >= part.size()) throw ConfigError("function id " + id + " is missing a parameter");
    try {
      return std::stod(part[i]);
    } catch (const std::exception&) {
      throw ConfigError("bad numeric parameter in function id " + id);
    }
  };
  const std::string& name = part[0];
  if (name == "constant") return constant(num(1));
  if (name == "identity") return identity();
  if (name == "square") return square();
  if (name == "cube") return cube();
  if (name == "sine") return sine();
  if (name == "indicator") return indicator(num(1), num(2));
  if (name == "indicator_above") return indicator_above(num(1));
  if (name == "indicator_upto") return indicator_upto(num(1));
  if (name == "relu") return relu(num(1));
  if (name == "negpart") return negpart(num(1));
  if (name == "sign_shift") return sign_shift(num(1));
  if (name == "gauss_growth") return gauss_growth(num(1));
  throw ConfigError("unknown function id " + id);
}

}  // namespace she::fns
