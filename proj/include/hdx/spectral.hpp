#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hdx/cochain.hpp"
#include "hdx/complex.hpp"
#include "hdx/error.hpp"

namespace hdx {

struct Spectrum {
  int dim = 0;
  std::vector<double> eigenvalues;  // descending
};

namespace detail {

inline void require_square_op(const PureComplex& X, const LinOp& op) {
  if (op.source_dim != op.target_dim)
    throw InvalidArgument("operator maps dimension " + std::to_string(op.source_dim) + " to " +
                          std::to_string(op.target_dim) + ", expected an endomorphism");
  const auto n = static_cast<Eigen::Index>(X.count(op.source_dim));
  if (op.matrix.rows() != n || op.matrix.cols() != n)
    throw InvalidArgument("operator shape does not match the complex");
}

// W^{1/2} A W^{-1/2}, after checking w_s A_st = w_t A_ts.
inline Eigen::MatrixXd symmetrize(const PureComplex& X, const LinOp& op, double tol = 1e-10) {
  require_square_op(X, op);
  const Eigen::VectorXd& w = X.weights(op.source_dim);
  Eigen::MatrixXd wa = w.asDiagonal() * op.matrix;
  double asym = (wa - wa.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol)
    throw InvalidArgument("operator is not self-adjoint under the weighted inner product (max asymmetry " +
                          std::to_string(asym) + ")");
  Eigen::VectorXd r = w.cwiseSqrt();
  Eigen::MatrixXd s = r.asDiagonal() * op.matrix * r.cwiseInverse().asDiagonal();
  return 0.5 * (s + s.transpose());
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace detail

inline Spectrum selfadjoint_spectrum(const PureComplex& X, const LinOp& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::symmetrize(X, op), Eigen::EigenvaluesOnly);
  Spectrum s{op.source_dim, {}};
  const auto& ev = es.eigenvalues();
  s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<>());
  return s;
}

/// True iff the 1-skeleton of X is connected.
inline bool is_connected(const PureComplex& X) {
  const auto& vs = X.faces(0);
  if (vs.size() <= 1) return true;
  if (X.top_dim() < 1) return false;
  detail::UnionFind uf(vs.size());
  std::size_t parts = vs.size();
  for (const Face& e : X.faces(1))
    if (uf.unite(X.index(Face{e[0]}), X.index(Face{e[1]}))) --parts;
  return parts == 1;
}

/// Second largest eigenvalue of the weighted non-lazy vertex walk.
inline double lambda2_skeleton(const PureComplex& X) {
  if (X.top_dim() < 1) throw InvalidArgument("lambda2 needs a complex of dimension >= 1");
  if (!is_connected(X)) throw HypothesisError("1-skeleton is disconnected");
  return selfadjoint_spectrum(X, nonlazy(X, 0)).eigenvalues.at(1);
}

/// gamma[j+1] = max over sigma in X(j) of lambda2 of the link, for j = -1..d-2.
struct GammaProfile {
  std::vector<double> gamma;

  double at(int j) const {
    if (j < -1 || j + 1 >= static_cast<int>(gamma.size()))
      throw InvalidArgument("gamma_" + std::to_string(j) + " is not part of the profile");
    return gamma[static_cast<std::size_t>(j + 1)];
  }
  int max_dim() const { return static_cast<int>(gamma.size()) - 2; }
};

namespace detail {

// Worst link lambda2 per dimension; errors name the offending face.
struct LinkScan {
  std::vector<double> worst;
  std::vector<Face> worst_face;
};

inline LinkScan scan_links(const PureComplex& X) {
  const int d = X.top_dim();
  LinkScan s;
  for (int j = -1; j <= d - 2; ++j) {
    double best = -INFINITY;
    Face arg;
    for (const Face& sigma : X.faces(j)) {
      double l;
      try {
        l = lambda2_skeleton(link_of(X, sigma));
      } catch (const HypothesisError&) {
        throw HypothesisError("link of " + sigma.str() + " has a disconnected 1-skeleton");
      }
      if (l > best) {
        best = l;
        arg = sigma;
      }
    }
    s.worst.push_back(best);
    s.worst_face.push_back(arg);
  }
  return s;
}

}  // namespace detail

inline GammaProfile gamma_profile(const PureComplex& X) { return {detail::scan_links(X).worst}; }

struct ExpanderReport {
  bool pass = true;
  Face worst_face;
  double worst_value = -INFINITY;
};

/// Every link of a face of dimension <= d-2 (the complex itself included) has lambda2 <= lambda.
inline ExpanderReport is_local_spectral_expander(const PureComplex& X, double lambda) {
  auto s = detail::scan_links(X);
  ExpanderReport r;
  for (std::size_t j = 0; j < s.worst.size(); ++j)
    if (s.worst[j] > r.worst_value) {
      r.worst_value = s.worst[j];
      r.worst_face = s.worst_face[j];
    }
  r.pass = r.worst_value <= lambda + 1e-9;
  return r;
}

/// Square root of a positive semidefinite self-adjoint operator, sharing its eigenvectors.
inline LinOp psd_sqrt(const PureComplex& X, const LinOp& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::symmetrize(X, op));
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -1e-6)
      throw InvalidArgument("operator has a negative eigenvalue " + std::to_string(ev(i)));
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  const Eigen::MatrixXd& q = es.eigenvectors();
  Eigen::VectorXd r = X.weights(op.source_dim).cwiseSqrt();
  Eigen::MatrixXd s = q * ev.asDiagonal() * q.transpose();
  return {op.source_dim, op.target_dim, r.cwiseInverse().asDiagonal() * s * r.asDiagonal()};
}

}  // namespace hdx
