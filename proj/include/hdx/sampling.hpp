#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>

#include "hdx/cochain.hpp"
#include "hdx/complex.hpp"
#include "hdx/level.hpp"

namespace hdx {

using Rng = std::mt19937_64;

/// Independent standard normal entries.
inline Cochain random_cochain(const PureComplex& X, int k, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::VectorXd v(detail::idx(X.count(k)));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = n01(rng);
  return Cochain(X, k, std::move(v));
}

namespace detail {

inline Cochain normalized(const PureComplex& X, Cochain f) {
  double n = std::sqrt(norm_sq(X, f));
  if (n > 1e-300) f.values() /= n;
  return f;
}

}  // namespace detail

/// Unit-norm cochain orthogonal to the constants (zero when that space is trivial).
inline Cochain random_orthogonal_to_constants(const PureComplex& X, int k, Rng& rng) {
  Cochain f = random_cochain(X, k, rng);
  f.values().array() -= mean(X, f);
  return detail::normalized(X, std::move(f));
}

/// Unit-norm random element of span(B).
inline Cochain random_in(const PureComplex& X, const LevelBasis& B, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::VectorXd z(B.basis.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = n01(rng);
  return detail::normalized(X, Cochain(X, B.k, B.basis * z));
}

}  // namespace hdx
