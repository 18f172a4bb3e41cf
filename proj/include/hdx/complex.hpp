#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hdx/error.hpp"
#include "hdx/face.hpp"

namespace hdx {

/**
 * A pure weighted simplicial complex of top dimension d.
 *
 * Faces of every dimension -1..d are materialized in lexicographic order
 * together with their weights; the empty face is always present with weight 1.
 * Instances are immutable and cheap to copy (the face tables are shared), so a
 * copy refers to the same complex for the purpose of `same_as`.
 */
class PureComplex {
 public:
  int top_dim() const noexcept { return data_->top_dim; }

  /// Faces of dimension k in canonical order.
  const std::vector<Face>& faces(int k) const {
    check_dim(k);
    return data_->faces[k + 1];
  }

  std::size_t count(int k) const { return faces(k).size(); }

  /// Face weights of dimension k, aligned with faces(k).
  const Eigen::VectorXd& weights(int k) const {
    check_dim(k);
    return data_->weights[k + 1];
  }

  bool contains(const Face& f) const {
    int k = f.dim();
    if (k < -1 || k > top_dim()) return false;
    return data_->index[k + 1].count(f) > 0;
  }

  std::optional<std::size_t> find(const Face& f) const {
    int k = f.dim();
    if (k < -1 || k > top_dim()) return std::nullopt;
    const auto& idx = data_->index[k + 1];
    auto it = idx.find(f);
    if (it == idx.end()) return std::nullopt;
    return it->second;
  }

  /// Position of f within faces(dim f); throws if f is not a face.
  std::size_t index(const Face& f) const {
    auto i = find(f);
    if (!i) throw InvalidArgument("face " + f.str() + " is not in the complex");
    return *i;
  }

  double weight(const Face& f) const { return weights(f.dim())(static_cast<Eigen::Index>(index(f))); }

  /// Same underlying complex object (identity, not structural equality).
  bool same_as(const PureComplex& other) const noexcept { return data_ == other.data_; }

  friend PureComplex build_complex(const std::vector<Face>&, const std::vector<double>&);
  friend PureComplex link_of(const PureComplex&, const Face&);
  friend PureComplex skeleton_of(const PureComplex&, int);

 private:
  struct Data {
    int top_dim = 0;
    std::vector<std::vector<Face>> faces;
    std::vector<Eigen::VectorXd> weights;
    std::vector<std::map<Face, std::size_t>> index;
  };

  explicit PureComplex(std::shared_ptr<const Data> d) : data_(std::move(d)) {}

  // Takes faces per dimension (any order) and a weight lookup; sorts and indexes.
  static PureComplex assemble(int top_dim, std::vector<std::map<Face, double>> by_dim) {
    auto d = std::make_shared<Data>();
    d->top_dim = top_dim;
    d->faces.resize(top_dim + 2);
    d->weights.resize(top_dim + 2);
    d->index.resize(top_dim + 2);
    for (int k = -1; k <= top_dim; ++k) {
      const auto& m = by_dim[k + 1];
      auto& fs = d->faces[k + 1];
      auto& ws = d->weights[k + 1];
      fs.reserve(m.size());
      ws.resize(static_cast<Eigen::Index>(m.size()));
      std::size_t i = 0;
      for (const auto& [face, w] : m) {  // std::map iterates in lexicographic order
        fs.push_back(face);
        ws(static_cast<Eigen::Index>(i)) = w;
        d->index[k + 1].emplace(face, i);
        ++i;
      }
    }
    return PureComplex(std::move(d));
  }

  void check_dim(int k) const {
    if (k < -1 || k > data_->top_dim)
      throw InvalidArgument("dimension " + std::to_string(k) + " outside -1.." +
                            std::to_string(data_->top_dim));
  }

  std::shared_ptr<const Data> data_;
};

/**
 * Builds the downward closure of `facets` and assigns weights.
 *
 * Facet weights are normalized to sum to 1 (uniform when `facet_weights` is
 * empty); a face of dimension i < d gets (1/C(d+1,i+1)) times the total
 * weight of the facets containing it.
 */
inline PureComplex build_complex(const std::vector<Face>& facets,
                                 const std::vector<double>& facet_weights = {}) {
  if (facets.empty()) throw InvalidArgument("facet list is empty");
  const int d = facets.front().dim();
  if (d < 0) throw InvalidArgument("facets must be non-empty faces");
  if (!facet_weights.empty() && facet_weights.size() != facets.size())
    throw InvalidArgument("got " + std::to_string(facet_weights.size()) + " weights for " +
                          std::to_string(facets.size()) + " facets");

  std::map<Face, double> top;
  double total = 0.0;
  for (std::size_t i = 0; i < facets.size(); ++i) {
    const Face& f = facets[i];
    if (f.dim() != d)
      throw InvalidArgument("facet " + f.str() + " has dimension " + std::to_string(f.dim()) +
                            ", expected " + std::to_string(d));
    double w = facet_weights.empty() ? 1.0 : facet_weights[i];
    if (!(w > 0.0) || !std::isfinite(w))
      throw InvalidArgument("facet " + f.str() + " has non-positive weight");
    if (!top.emplace(f, w).second) throw InvalidArgument("duplicate facet " + f.str());
    total += w;
  }
  // Already-normalized weights are kept bit-for-bit so that files round-trip.
  const bool normalize = facet_weights.empty() || std::abs(total - 1.0) > 1e-14;
  if (normalize)
    for (auto& [f, w] : top) w /= total;

  std::vector<std::map<Face, double>> acc(d + 2);
  const std::size_t n = static_cast<std::size_t>(d) + 1;
  std::vector<Vertex> buf;
  for (const auto& [f, w] : top) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      buf.clear();
      for (std::size_t b = 0; b < n; ++b)
        if (mask & (std::size_t{1} << b)) buf.push_back(f[b]);
      acc[buf.size()][Face(buf)] += w;
    }
  }
  for (int k = -1; k < d; ++k)
    for (auto& [f, w] : acc[k + 1]) w /= binom(d + 1, k + 1);
  // the accumulated sum is 1 only up to rounding
  acc[0].begin()->second = 1.0;
  acc[d + 1] = std::move(top);
  return PureComplex::assemble(d, std::move(acc));
}

/// Weight of tau in the link of sigma, from the weights of the ambient complex:
/// w(sigma u tau) / (C(i+j+2, i+1) w(sigma)).
inline double link_weight(const PureComplex& X, const Face& sigma, const Face& tau) {
  const int i = sigma.dim(), j = tau.dim();
  return X.weight(sigma | tau) / (binom(i + j + 2, i + 1) * X.weight(sigma));
}

/**
 * The link X_sigma = { tau \ sigma : sigma <= tau in X } with induced weights.
 * The link of the empty face is X itself.
 */
inline PureComplex link_of(const PureComplex& X, const Face& sigma) {
  if (!X.contains(sigma)) throw InvalidArgument("face " + sigma.str() + " is not in the complex");
  if (sigma.empty()) return X;
  const int i = sigma.dim(), d = X.top_dim();
  if (i >= d) throw InvalidArgument("link of top-dimensional face " + sigma.str() + " is empty");
  const int dl = d - i - 1;
  const double ws = X.weight(sigma);
  std::vector<std::map<Face, double>> by_dim(dl + 2);
  for (int j = -1; j <= dl; ++j) {
    const auto& fs = X.faces(i + j + 1);
    const auto& ww = X.weights(i + j + 1);
    const double c = binom(i + j + 2, i + 1) * ws;
    for (std::size_t t = 0; t < fs.size(); ++t)
      if (fs[t].contains(sigma)) by_dim[j + 1].emplace(fs[t] - sigma, ww(static_cast<Eigen::Index>(t)) / c);
  }
  return PureComplex::assemble(dl, std::move(by_dim));
}

/// Faces of dimension <= i, keeping the original weights.
inline PureComplex skeleton_of(const PureComplex& X, int i) {
  if (i < 0 || i > X.top_dim())
    throw InvalidArgument("skeleton dimension " + std::to_string(i) + " outside 0.." +
                          std::to_string(X.top_dim()));
  if (i == X.top_dim()) return X;
  std::vector<std::map<Face, double>> by_dim(i + 2);
  for (int k = -1; k <= i; ++k) {
    const auto& fs = X.faces(k);
    for (std::size_t t = 0; t < fs.size(); ++t)
      by_dim[k + 1].emplace(fs[t], X.weights(k)(static_cast<Eigen::Index>(t)));
  }
  return PureComplex::assemble(i, std::move(by_dim));
}

inline const std::vector<Face>& faces(const PureComplex& X, int k) { return X.faces(k); }

/// Facets of X as a list (canonical order).
inline const std::vector<Face>& facets(const PureComplex& X) { return X.faces(X.top_dim()); }

/// Residuals of the structural invariants of a weighted pure complex.
struct ComplexReport {
  bool closed = true;             ///< every subset of a face is a face
  bool pure = true;               ///< every face lies in a top face
  double weight_sum_error = 0.0;  ///< max_i |sum_{X(i)} w - 1|
  double recursive_error = 0.0;   ///< max |w(tau) - C(d+1,i+1)^-1 sum_{top >= tau} w|
  double empty_weight_error = 0.0;
};

inline ComplexReport check_invariants(const PureComplex& X) {
  ComplexReport r;
  const int d = X.top_dim();
  for (int k = -1; k <= d; ++k) r.weight_sum_error = std::max(r.weight_sum_error, std::abs(X.weights(k).sum() - 1.0));
  r.empty_weight_error = std::abs(X.weight(Face{}) - 1.0);
  for (int k = 0; k <= d; ++k)
    for (const Face& f : X.faces(k))
      for (std::size_t b = 0; b < f.size(); ++b)
        if (!X.contains(f.without_index(b))) r.closed = false;
  std::vector<double> up_sum;
  for (int k = -1; k < d; ++k) {
    const auto& fs = X.faces(k);
    up_sum.assign(fs.size(), 0.0);
    const auto& top = X.faces(d);
    const auto& tw = X.weights(d);
    for (std::size_t t = 0; t < top.size(); ++t)
      for (std::size_t s = 0; s < fs.size(); ++s)
        if (top[t].contains(fs[s])) up_sum[s] += tw(static_cast<Eigen::Index>(t));
    for (std::size_t s = 0; s < fs.size(); ++s) {
      if (up_sum[s] == 0.0) r.pure = false;
      double expect = up_sum[s] / binom(d + 1, k + 1);
      r.recursive_error = std::max(r.recursive_error, std::abs(X.weights(k)(static_cast<Eigen::Index>(s)) - expect));
    }
  }
  return r;
}

/// Structural equality: same faces in every dimension and weights within tol.
inline double weight_distance(const PureComplex& A, const PureComplex& B) {
  if (A.top_dim() != B.top_dim()) return INFINITY;
  double m = 0.0;
  for (int k = -1; k <= A.top_dim(); ++k) {
    if (A.faces(k) != B.faces(k)) return INFINITY;
    if (A.count(k)) m = std::max(m, (A.weights(k) - B.weights(k)).cwiseAbs().maxCoeff());
  }
  return m;
}

}  // namespace hdx
