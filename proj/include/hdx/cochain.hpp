#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <utility>

#include "hdx/complex.hpp"
#include "hdx/error.hpp"
#include "hdx/face.hpp"

namespace hdx {

/// A real function on X(k), stored in the canonical face order of X.
class Cochain {
 public:
  Cochain(PureComplex X, int k) : X_(std::move(X)), k_(k), v_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(X_.count(k)))) {}

  Cochain(PureComplex X, int k, Eigen::VectorXd values) : X_(std::move(X)), k_(k), v_(std::move(values)) {
    if (static_cast<std::size_t>(v_.size()) != X_.count(k))
      throw InvalidArgument("cochain of dimension " + std::to_string(k) + " needs " +
                            std::to_string(X_.count(k)) + " values, got " + std::to_string(v_.size()));
  }

  static Cochain constant(PureComplex X, int k, double c = 1.0) {
    Cochain f(std::move(X), k);
    f.v_.setConstant(c);
    return f;
  }

  static Cochain indicator(PureComplex X, const Face& f) {
    Cochain g(X, f.dim());
    g.v_(static_cast<Eigen::Index>(X.index(f))) = 1.0;
    return g;
  }

  const PureComplex& complex() const noexcept { return X_; }
  int dim() const noexcept { return k_; }
  const Eigen::VectorXd& values() const noexcept { return v_; }
  Eigen::VectorXd& values() noexcept { return v_; }

  double operator()(const Face& f) const { return v_(static_cast<Eigen::Index>(X_.index(f))); }
  double& operator()(const Face& f) { return v_(static_cast<Eigen::Index>(X_.index(f))); }

 private:
  PureComplex X_;
  int k_;
  Eigen::VectorXd v_;
};

/// Dense operator C^source(X) -> C^target(X); rows follow X(target), columns X(source).
struct LinOp {
  int source_dim = 0;
  int target_dim = 0;
  Eigen::MatrixXd matrix;

  Cochain apply(const Cochain& f) const {
    if (f.dim() != source_dim)
      throw InvalidArgument("operator expects a " + std::to_string(source_dim) +
                            "-cochain, got dimension " + std::to_string(f.dim()));
    return Cochain(f.complex(), target_dim, matrix * f.values());
  }

  Cochain operator()(const Cochain& f) const { return apply(f); }

  /// Composition (*this) o rhs.
  LinOp operator*(const LinOp& rhs) const {
    if (rhs.target_dim != source_dim)
      throw InvalidArgument("cannot compose operators: dimension " + std::to_string(rhs.target_dim) +
                            " does not feed " + std::to_string(source_dim));
    return {rhs.source_dim, target_dim, matrix * rhs.matrix};
  }

  static LinOp identity(const PureComplex& X, int k) {
    auto n = static_cast<Eigen::Index>(X.count(k));
    return {k, k, Eigen::MatrixXd::Identity(n, n)};
  }
};

namespace detail {

inline void require_same_complex(const PureComplex& X, const Cochain& f) {
  if (!X.same_as(f.complex())) throw InvalidArgument("cochain lives on a different complex");
}

inline void require_range(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

inline Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace detail

/// <f,g> = sum_{sigma in X(k)} w(sigma) f(sigma) g(sigma).
inline double inner_product(const PureComplex& X, const Cochain& f, const Cochain& g) {
  detail::require_same_complex(X, f);
  detail::require_same_complex(X, g);
  if (f.dim() != g.dim())
    throw InvalidArgument("inner product of cochains of dimensions " + std::to_string(f.dim()) +
                          " and " + std::to_string(g.dim()));
  return (X.weights(f.dim()).array() * f.values().array() * g.values().array()).sum();
}

inline double norm_sq(const PureComplex& X, const Cochain& f) { return inner_product(X, f, f); }

/// Weighted mean <f, 1>.
inline double mean(const PureComplex& X, const Cochain& f) {
  detail::require_same_complex(X, f);
  return X.weights(f.dim()).dot(f.values());
}

/**
 * Localization f_sigma(tau) = f(sigma u tau), a cochain of dimension
 * k - i - 1 on the link of sigma. `link` must be link_of(X, sigma).
 */
inline Cochain localize(const PureComplex& X, const Cochain& f, const Face& sigma, const PureComplex& link) {
  detail::require_same_complex(X, f);
  if (!X.contains(sigma)) throw InvalidArgument("face " + sigma.str() + " is not in the complex");
  const int k = f.dim(), i = sigma.dim();
  if (i >= k)
    throw InvalidArgument("cannot localize a " + std::to_string(k) + "-cochain to a face of dimension " +
                          std::to_string(i));
  if (sigma.empty()) return Cochain(link, k, f.values());
  const int j = k - i - 1;
  const auto& lf = link.faces(j);
  Eigen::VectorXd v(detail::idx(lf.size()));
  for (std::size_t t = 0; t < lf.size(); ++t) v(detail::idx(t)) = f(lf[t] | sigma);
  return Cochain(link, j, std::move(v));
}

inline Cochain localize(const PureComplex& X, const Cochain& f, const Face& sigma) {
  if (!X.contains(sigma)) throw InvalidArgument("face " + sigma.str() + " is not in the complex");
  if (sigma.dim() >= X.top_dim()) throw InvalidArgument("cannot localize to a top-dimensional face");
  return localize(X, f, sigma, link_of(X, sigma));
}

/// Signless differential d_k: (d f)(sigma) = (1/(k+2)) sum_{tau in C(sigma,k+1)} f(tau).
inline LinOp diff(const PureComplex& X, int k) {
  const int d = X.top_dim();
  detail::require_range(k >= -1 && k <= d - 1, "d_k needs -1 <= k <= d-1, got k=" + std::to_string(k));
  const auto& up = X.faces(k + 1);
  LinOp op{k, k + 1, Eigen::MatrixXd::Zero(detail::idx(up.size()), detail::idx(X.count(k)))};
  const double c = 1.0 / (k + 2);
  for (std::size_t s = 0; s < up.size(); ++s)
    for (std::size_t b = 0; b < up[s].size(); ++b)
      op.matrix(detail::idx(s), detail::idx(X.index(up[s].without_index(b)))) += c;
  return op;
}

/// Adjoint d*_k: (d* f)(tau) = sum_{v in X_tau(0)} w_tau(v) f(tau u v).
inline LinOp adjoint_diff(const PureComplex& X, int k) {
  const int d = X.top_dim();
  detail::require_range(k >= -1 && k <= d - 1, "d*_k needs -1 <= k <= d-1, got k=" + std::to_string(k));
  const auto& up = X.faces(k + 1);
  const auto& wu = X.weights(k + 1);
  const auto& wl = X.weights(k);
  LinOp op{k + 1, k, Eigen::MatrixXd::Zero(detail::idx(X.count(k)), detail::idx(up.size()))};
  for (std::size_t s = 0; s < up.size(); ++s)
    for (std::size_t b = 0; b < up[s].size(); ++b) {
      std::size_t t = X.index(up[s].without_index(b));
      // w_tau(v) = w(tau u v) / ((k+2) w(tau))
      op.matrix(detail::idx(t), detail::idx(s)) = wu(detail::idx(s)) / ((k + 2) * wl(detail::idx(t)));
    }
  return op;
}

/// d_{k+i-1} ... d_k : C^k -> C^{k+i} (identity for i = 0).
inline LinOp multi_up(const PureComplex& X, int k, int i) {
  detail::require_range(i >= 0 && k >= -1 && k + i <= X.top_dim(),
                        "multi_up(k=" + std::to_string(k) + ", i=" + std::to_string(i) + ") leaves -1..d");
  LinOp op = LinOp::identity(X, k);
  for (int j = k; j < k + i; ++j) op = diff(X, j) * op;
  return op;
}

/// d*_k ... d*_{k+i-1} : C^{k+i} -> C^k (identity for i = 0).
inline LinOp multi_down(const PureComplex& X, int k, int i) {
  detail::require_range(i >= 0 && k >= -1 && k + i <= X.top_dim(),
                        "multi_down(k=" + std::to_string(k) + ", i=" + std::to_string(i) + ") leaves -1..d");
  LinOp op = LinOp::identity(X, k + i);
  for (int j = k + i - 1; j >= k; --j) op = adjoint_diff(X, j) * op;
  return op;
}

/// Closed form of multi_up: average of f over the k-subfaces of sigma.
inline LinOp multi_up_closed_form(const PureComplex& X, int k, int i) {
  detail::require_range(i >= 0 && k >= -1 && k + i <= X.top_dim(), "multi_up_closed_form: range");
  const auto& hi = X.faces(k + i);
  const auto& lo = X.faces(k);
  LinOp op{k, k + i, Eigen::MatrixXd::Zero(detail::idx(hi.size()), detail::idx(lo.size()))};
  const double c = 1.0 / binom(k + i + 1, k + 1);
  for (std::size_t s = 0; s < hi.size(); ++s)
    for (std::size_t t = 0; t < lo.size(); ++t)
      if (hi[s].contains(lo[t])) op.matrix(detail::idx(s), detail::idx(t)) = c;
  return op;
}

/// Closed form of multi_down: E_{tau in X_sigma(i-1)} f(sigma u tau) under the link weights.
inline LinOp multi_down_closed_form(const PureComplex& X, int k, int i) {
  detail::require_range(i >= 0 && k >= -1 && k + i <= X.top_dim(), "multi_down_closed_form: range");
  const auto& hi = X.faces(k + i);
  const auto& lo = X.faces(k);
  LinOp op{k + i, k, Eigen::MatrixXd::Zero(detail::idx(lo.size()), detail::idx(hi.size()))};
  for (std::size_t t = 0; t < lo.size(); ++t)
    for (std::size_t s = 0; s < hi.size(); ++s)
      if (hi[s].contains(lo[t])) op.matrix(detail::idx(t), detail::idx(s)) = link_weight(X, lo[t], hi[s] - lo[t]);
  return op;
}

/// The k-dimensional i-up-down operator d*_k..d*_{k+i-1} d_{k+i-1}..d_k.
inline LinOp up_down(const PureComplex& X, int k, int i) {
  detail::require_range(i >= 0 && k >= -1 && k + i <= X.top_dim(),
                        "up_down(k=" + std::to_string(k) + ", i=" + std::to_string(i) + ") needs k+i <= d");
  return multi_down(X, k, i) * multi_up(X, k, i);
}

/**
 * The k-dimensional i-down-up operator d_{k-1}..d_{k-i-1} d*_{k-i-1}..d*_{k-1}.
 * It descends i+1 levels, so down_up(X,k,0) = d_{k-1} d*_{k-1} is the one-step
 * walk D_k and down_up(X,r,r) is the projection onto constants.
 */
inline LinOp down_up(const PureComplex& X, int k, int i) {
  detail::require_range(i >= 0 && k - i - 1 >= -1 && k <= X.top_dim(),
                        "down_up(k=" + std::to_string(k) + ", i=" + std::to_string(i) + ") needs k-i-1 >= -1");
  return multi_up(X, k - i - 1, i + 1) * multi_down(X, k - i - 1, i + 1);
}

/// Explicit entry table of the one-step up-down walk U_k.
inline LinOp up_down_explicit(const PureComplex& X, int k) {
  detail::require_range(k >= -1 && k <= X.top_dim() - 1, "up_down_explicit needs -1 <= k <= d-1");
  const auto& fs = X.faces(k);
  const auto n = detail::idx(fs.size());
  LinOp op{k, k, Eigen::MatrixXd::Zero(n, n)};
  for (std::size_t a = 0; a < fs.size(); ++a)
    for (std::size_t b = 0; b < fs.size(); ++b) {
      if (a == b) {
        op.matrix(detail::idx(a), detail::idx(b)) = 1.0 / (k + 2);
        continue;
      }
      Face u = fs[a] | fs[b];
      if (u.dim() == k + 1 && X.contains(u))
        op.matrix(detail::idx(a), detail::idx(b)) = link_weight(X, fs[a], fs[b] - fs[a]) / (k + 2);
    }
  return op;
}

/// Explicit entry table of the one-step down-up walk D_k.
inline LinOp down_up_explicit(const PureComplex& X, int k) {
  detail::require_range(k >= 0 && k <= X.top_dim(), "down_up_explicit needs 0 <= k <= d");
  const auto& fs = X.faces(k);
  const auto n = detail::idx(fs.size());
  LinOp op{k, k, Eigen::MatrixXd::Zero(n, n)};
  for (std::size_t a = 0; a < fs.size(); ++a)
    for (std::size_t b = 0; b < fs.size(); ++b) {
      double v = 0.0;
      if (a == b) {
        for (std::size_t r = 0; r < fs[a].size(); ++r) {
          Face t = fs[a].without_index(r);
          v += link_weight(X, t, fs[a] - t);
        }
      } else {
        Face c = fs[a] & fs[b];
        if (c.dim() == k - 1) v = link_weight(X, c, fs[b] - fs[a]);
      }
      op.matrix(detail::idx(a), detail::idx(b)) = v / (k + 1);
    }
  return op;
}

/// Non-lazy k-dimensional walk: w_sigma(tau \ sigma)/(k+1) when sigma u tau in X(k+1).
inline LinOp nonlazy(const PureComplex& X, int k) {
  detail::require_range(k >= 0 && k <= X.top_dim() - 1,
                        "non-lazy walk needs 0 <= k <= d-1, got k=" + std::to_string(k));
  const auto& fs = X.faces(k);
  const auto& up = X.faces(k + 1);
  const auto n = detail::idx(fs.size());
  LinOp op{k, k, Eigen::MatrixXd::Zero(n, n)};
  // Each (k+1)-face links every pair of its k-faces.
  for (const Face& u : up) {
    const double wu = X.weight(u);
    for (std::size_t p = 0; p < u.size(); ++p) {
      Face s = u.without_index(p);
      std::size_t a = X.index(s);
      const double ws = X.weights(k)(detail::idx(a));
      for (std::size_t q = 0; q < u.size(); ++q) {
        if (q == p) continue;
        std::size_t b = X.index(u.without_index(q));
        op.matrix(detail::idx(a), detail::idx(b)) = wu / ((k + 2) * ws) / (k + 1);
      }
    }
  }
  return op;
}

/// ((i+1)/i) U_0^i - (1/i) I, which equals the vertex non-lazy walk.
inline LinOp nonlazy_from_iup(const PureComplex& X, int i) {
  detail::require_range(i >= 1 && i <= X.top_dim(), "nonlazy_from_iup needs 1 <= i <= d");
  LinOp u = up_down(X, 0, i);
  const auto n = u.matrix.rows();
  u.matrix = ((i + 1.0) / i) * u.matrix - (1.0 / i) * Eigen::MatrixXd::Identity(n, n);
  return u;
}

}  // namespace hdx
