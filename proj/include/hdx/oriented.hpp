#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hdx/cochain.hpp"
#include "hdx/complex.hpp"
#include "hdx/error.hpp"
#include "hdx/level.hpp"

// Oriented cochains store one value per face, read in ascending vertex order.
// Reading along another ordering multiplies by the sign of the permutation.

namespace hdx {

/// Sign of the permutation sorting `tuple` (0 if it repeats a vertex).
inline int permutation_sign(const std::vector<Vertex>& tuple) {
  int s = 1;
  for (std::size_t a = 0; a < tuple.size(); ++a)
    for (std::size_t b = a + 1; b < tuple.size(); ++b) {
      if (tuple[a] == tuple[b]) return 0;
      if (tuple[a] > tuple[b]) s = -s;
    }
  return s;
}

/// f evaluated on an ordered tuple of vertices.
inline double evaluate_oriented(const Cochain& f, const std::vector<Vertex>& tuple) {
  int s = permutation_sign(tuple);
  if (s == 0) throw InvalidArgument("ordered face repeats a vertex");
  return s * f(Face(tuple));
}

/// delta_i f(s_0..s_{i+1}) = sum_j (-1)^j f(s without s_j); delta_{-1} lifts a scalar to constants.
inline LinOp coboundary(const PureComplex& X, int i) {
  detail::require_range(i >= -1 && i <= X.top_dim() - 1, "coboundary needs -1 <= i <= d-1, got i=" + std::to_string(i));
  const auto& up = X.faces(i + 1);
  LinOp op{i, i + 1, Eigen::MatrixXd::Zero(detail::idx(up.size()), detail::idx(X.count(i)))};
  for (std::size_t s = 0; s < up.size(); ++s)
    for (std::size_t j = 0; j < up[s].size(); ++j)
      op.matrix(detail::idx(s), detail::idx(X.index(up[s].without_index(j)))) = (j % 2 == 0) ? 1.0 : -1.0;
  return op;
}

/// Projection of f onto the weighted orthogonal complement of im(delta_{k-1}).
inline Cochain minimal_representative(const PureComplex& X, const Cochain& f) {
  detail::require_same_complex(X, f);
  const int k = f.dim();
  if (k < 0) throw InvalidArgument("minimal representative needs k >= 0");
  const auto& w = X.weights(k);
  Eigen::MatrixXd B = detail::weighted_orthonormal(coboundary(X, k - 1).matrix, w, 1e-10);
  return Cochain(X, k, f.values() - detail::projector(B, w) * f.values());
}

namespace detail {

// f(sigma_0..sigma_{k-1}, v) relative to the stored value at sorted sigma u v.
inline double appended_sign(const Face& sigma, Vertex v) {
  std::size_t greater = 0;
  for (Vertex x : sigma)
    if (x > v) ++greater;
  return (greater % 2) ? -1.0 : 1.0;
}

}  // namespace detail

/// |E_{v in X_sigma(0)} f(sigma, v)| for every sigma in X(k-1), computed from the global weights.
inline std::map<Face, double> local_minimality_residuals(const PureComplex& X, const Cochain& f) {
  detail::require_same_complex(X, f);
  const int k = f.dim();
  if (k < 1) throw InvalidArgument("local minimality needs k >= 1");
  std::map<Face, double> acc;
  for (const Face& s : X.faces(k - 1)) acc[s] = 0.0;
  const auto& fs = X.faces(k);
  for (std::size_t t = 0; t < fs.size(); ++t)
    for (std::size_t j = 0; j < fs[t].size(); ++j) {
      Face sigma = fs[t].without_index(j);
      Vertex v = fs[t][j];
      acc[sigma] += link_weight(X, sigma, Face{v}) * detail::appended_sign(sigma, v) * f.values()(detail::idx(t));
    }
  for (auto& [s, r] : acc) r = std::abs(r);
  return acc;
}

inline double max_local_minimality_residual(const PureComplex& X, const Cochain& f) {
  double m = 0.0;
  for (const auto& [s, r] : local_minimality_residuals(X, f)) m = std::max(m, r);
  return m;
}

/// max over sigma in X(k-1) of |<f_sigma, 1>| in the link, with oriented values.
inline double k_level_check(const PureComplex& X, const Cochain& f) {
  detail::require_same_complex(X, f);
  const int k = f.dim();
  if (k < 1) throw InvalidArgument("k-level check needs k >= 1");
  double m = 0.0;
  for (const Face& sigma : X.faces(k - 1)) {
    PureComplex L = link_of(X, sigma);
    Cochain loc = localize(X, f, sigma, L);
    const auto& verts = L.faces(0);
    for (std::size_t t = 0; t < verts.size(); ++t) {
      std::vector<Vertex> tuple(sigma.begin(), sigma.end());
      tuple.push_back(verts[t][0]);
      loc.values()(detail::idx(t)) = evaluate_oriented(f, tuple);
    }
    m = std::max(m, std::abs(mean(L, loc)));
  }
  return m;
}

struct BalanceReport {
  double defect = 0.0;
  double mass = 0.0;               ///< sum_{tau in S} w(tau)
  double centered_mean_residual = 0.0;  ///< max_{sigma in X(i)} |<(1_S - mass)_sigma, 1>|
  double level_residual = 0.0;     ///< distance of 1_S - mass from the (i+1)-level space
  double zero_level_residual = 0.0;  ///< distance of 1_S - mass from the 0-level space

  bool balanced() const { return defect <= 1e-12; }
};

/// How far S is from looking equally dense from every link of an i-face.
inline BalanceReport balanced_check(const PureComplex& X, const std::vector<Face>& S, int i) {
  if (S.empty()) throw InvalidArgument("face set is empty");
  const int k = S.front().dim();
  for (const Face& t : S) {
    if (t.dim() != k) throw InvalidArgument("faces of S have different dimensions");
    if (!X.contains(t)) throw InvalidArgument("face " + t.str() + " is not in the complex");
  }
  if (!(i >= -1 && i < k)) throw InvalidArgument("balance needs -1 <= i < k");
  std::set<Face> set(S.begin(), S.end());
  BalanceReport r;
  for (const Face& t : set) r.mass += X.weight(t);
  for (const Face& sigma : X.faces(i)) {
    double local = 0.0;
    for (const Face& t : set)
      if (t.contains(sigma)) local += link_weight(X, sigma, t - sigma);
    r.defect = std::max(r.defect, std::abs(r.mass - local));
  }
  Cochain h = Cochain::constant(X, k, -r.mass);
  for (const Face& t : set) h(t) += 1.0;
  r.centered_mean_residual = level_constraint_residual(X, h, i + 1);
  r.level_residual = membership_residual(X, level_space(X, k, i + 1), h);
  r.zero_level_residual = membership_residual(X, level_space(X, k, 0), h);
  return r;
}

}  // namespace hdx
