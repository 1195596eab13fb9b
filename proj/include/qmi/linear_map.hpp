#pragma once

#include "qmi/rational.hpp"

#include <compare>
#include <stdexcept>
#include <string>

namespace qmi {

/// A substitution x -> alpha*x + beta with alpha != 0, the group of affine
/// maps fixing the point at infinity.
struct LinearMap {
  Rational alpha;
  Rational beta;

  LinearMap(Rational a, Rational b) : alpha(std::move(a)), beta(std::move(b)) {
    if (alpha == 0) throw std::invalid_argument("LinearMap: alpha must be nonzero");
  }
  LinearMap() : alpha(1), beta(0) {}

  static LinearMap identity() { return LinearMap(1, 0); }
  bool is_identity() const { return alpha == 1 && beta == 0; }

  Rational operator()(const Rational& x) const { return alpha * x + beta; }

  friend bool operator==(const LinearMap& g, const LinearMap& h) {
    return g.alpha == h.alpha && g.beta == h.beta;
  }
  friend bool operator<(const LinearMap& g, const LinearMap& h) {
    if (g.alpha != h.alpha) return g.alpha < h.alpha;
    return g.beta < h.beta;
  }

  std::string str() const;
};

/// g o h, the map x -> g(h(x)).
inline LinearMap compose(const LinearMap& g, const LinearMap& h) {
  return LinearMap(g.alpha * h.alpha, g.alpha * h.beta + g.beta);
}

inline LinearMap invert(const LinearMap& g) {
  Rational ai = Rational(1) / g.alpha;
  return LinearMap(ai, -ai * g.beta);
}

/// The slope homomorphism g -> alpha.
inline Rational phi(const LinearMap& g) { return g.alpha; }

inline std::string LinearMap::str() const {
  std::string s;
  if (alpha != 1) s += alpha.str() + "*";
  s += "x";
  if (beta != 0) s += (beta > 0 ? "+" : "") + beta.str();
  return s;
}

}  // namespace qmi
