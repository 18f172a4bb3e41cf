#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "hdx/cochain.hpp"
#include "hdx/complex.hpp"
#include "hdx/error.hpp"
#include "hdx/spectral.hpp"

namespace hdx {

enum class ViewerKind { restriction, localization };

/// Dimension drop of a viewer at a vertex.
inline int dim_diff(ViewerKind v) { return v == ViewerKind::restriction ? 0 : 1; }

inline const char* to_string(ViewerKind v) { return v == ViewerKind::restriction ? "restriction" : "localization"; }

/// Whether V_sigma f is defined for a k-cochain and a face of dimension i.
inline bool viewable(ViewerKind v, const PureComplex& X, int k, int i) {
  if (i < -1 || i >= X.top_dim()) return false;
  if (v == ViewerKind::localization) return i < k;
  return k + i + 1 <= X.top_dim();
}

/// View of f in the link of sigma; `link` must be link_of(X, sigma).
inline Cochain view(ViewerKind v, const PureComplex& X, const Cochain& f, const Face& sigma, const PureComplex& link) {
  detail::require_same_complex(X, f);
  const int k = f.dim();
  if (!viewable(v, X, k, sigma.dim()))
    throw InvalidArgument(std::string(to_string(v)) + " viewer cannot see a " + std::to_string(k) +
                          "-cochain from a face of dimension " + std::to_string(sigma.dim()));
  if (v == ViewerKind::localization) return localize(X, f, sigma, link);
  if (sigma.empty()) return Cochain(link, k, f.values());
  const auto& lf = link.faces(k);
  Eigen::VectorXd out(detail::idx(lf.size()));
  for (std::size_t t = 0; t < lf.size(); ++t) out(detail::idx(t)) = f(lf[t]);
  return Cochain(link, k, std::move(out));
}

inline Cochain view(ViewerKind v, const PureComplex& X, const Cochain& f, const Face& sigma) {
  if (!X.contains(sigma)) throw InvalidArgument("face " + sigma.str() + " is not in the complex");
  if (!viewable(v, X, f.dim(), sigma.dim()))
    throw InvalidArgument(std::string(to_string(v)) + " viewer cannot see a " + std::to_string(f.dim()) +
                          "-cochain from a face of dimension " + std::to_string(sigma.dim()));
  return view(v, X, f, sigma, link_of(X, sigma));
}

/// Worst-case residual of each viewer axiom over every admissible face.
struct ViewerAxioms {
  double linearity = 0.0;
  double unit = 0.0;
  double dim_shift = 0.0;  ///< 0 when dim f - dim V_sigma f depends only on dim sigma
  double composition = 0.0;
  double expectation = 0.0;

  double worst() const { return std::max({linearity, unit, dim_shift, composition, expectation}); }
};

inline ViewerAxioms viewer_axiom_residuals(ViewerKind v, const PureComplex& X, const Cochain& f, const Cochain& g,
                                           double c = 0.6180339887) {
  detail::require_same_complex(X, f);
  detail::require_same_complex(X, g);
  if (f.dim() != g.dim()) throw InvalidArgument("axiom check needs cochains of equal dimension");
  const int k = f.dim(), d = X.top_dim();
  ViewerAxioms r;
  std::map<Face, PureComplex> links;
  auto link = [&](const Face& s) -> const PureComplex& {
    auto it = links.find(s);
    if (it == links.end()) it = links.emplace(s, link_of(X, s)).first;
    return it->second;
  };
  Cochain fc(X, k, f.values() + c * g.values());
  Cochain one = Cochain::constant(X, k);
  for (int i = -1; i < d; ++i) {
    if (!viewable(v, X, k, i)) continue;
    double expect = 0.0;
    int shift = -2;
    const auto& ws = X.weights(i);
    for (std::size_t s = 0; s < X.count(i); ++s) {
      const Face& sigma = X.faces(i)[s];
      const PureComplex& L = link(sigma);
      Cochain vf = view(v, X, f, sigma, L), vg = view(v, X, g, sigma, L);
      Cochain vfc = view(v, X, fc, sigma, L);
      r.linearity = std::max(r.linearity, (vfc.values() - vf.values() - c * vg.values()).cwiseAbs().maxCoeff());
      Cochain v1 = view(v, X, one, sigma, L);
      if (v1.values().size()) r.unit = std::max(r.unit, (v1.values().array() - 1.0).abs().maxCoeff());
      int sh = k - vf.dim();
      if (shift == -2) shift = sh;
      if (sh != shift) r.dim_shift = 1.0;
      expect += ws(detail::idx(s)) * inner_product(L, vf, vg);

      // V_sigma = V_{sigma \ tau} V_tau over every proper subface tau.
      const std::size_t n = sigma.size();
      for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << n); ++mask) {
        std::vector<Vertex> tv;
        for (std::size_t b = 0; b < n; ++b)
          if (mask & (std::size_t{1} << b)) tv.push_back(sigma[b]);
        Face tau(tv);
        const PureComplex& Lt = link(tau);
        Cochain inner = view(v, X, f, tau, Lt);
        Cochain outer = view(v, Lt, inner, sigma - tau);
        if (outer.complex().faces(outer.dim()) != L.faces(vf.dim()) || outer.dim() != vf.dim()) {
          r.composition = INFINITY;
          continue;
        }
        r.composition = std::max(r.composition, (outer.values() - vf.values()).cwiseAbs().maxCoeff());
      }
    }
    r.expectation = std::max(r.expectation, std::abs(expect - inner_product(X, f, g)));
  }
  return r;
}

/// |<M_k f, f> - E_v <M_{k-D} V_v f, V_v f>|.
inline double respects_walk_residual(ViewerKind v, const PureComplex& X, const Cochain& f) {
  detail::require_same_complex(X, f);
  const int k = f.dim(), d = X.top_dim();
  const bool ok = v == ViewerKind::localization ? (k >= 1 && k <= d - 1) : (k >= 0 && k <= d - 2);
  if (!ok)
    throw InvalidArgument(std::string(to_string(v)) + " walk identity is not defined for k=" + std::to_string(k) +
                          " in dimension " + std::to_string(d));
  const double lhs = inner_product(X, nonlazy(X, k).apply(f), f);
  double rhs = 0.0;
  const auto& ws = X.weights(0);
  for (std::size_t s = 0; s < X.count(0); ++s) {
    const Face& vtx = X.faces(0)[s];
    PureComplex L = link_of(X, vtx);
    Cochain vf = view(v, X, f, vtx, L);
    rhs += ws(detail::idx(s)) * inner_product(L, nonlazy(L, vf.dim()).apply(vf), vf);
  }
  return std::abs(lhs - rhs);
}

/// Columns of `basis` are W-orthonormal cochains spanning a subspace of C^k.
struct LevelBasis {
  int k = 0;
  int i = 0;
  Eigen::MatrixXd basis;

  std::size_t size() const { return static_cast<std::size_t>(basis.cols()); }

  Cochain vector(const PureComplex& X, std::size_t j) const {
    return Cochain(X, k, basis.col(static_cast<Eigen::Index>(j)));
  }
};

namespace detail {

constexpr double kKernelTol = 1e-10;

// W-orthonormal basis of ker(A) for A acting on C^k.
inline Eigen::MatrixXd weighted_kernel(const Eigen::MatrixXd& A, const Eigen::VectorXd& w) {
  const Eigen::Index n = w.size();
  Eigen::VectorXd rinv = w.cwiseSqrt().cwiseInverse();
  if (A.rows() == 0) return Eigen::MatrixXd(rinv.asDiagonal());
  Eigen::MatrixXd B = A * rinv.asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index j = 0; j < sv.size(); ++j)
    if (sv(j) > kKernelTol) ++rank;
  return rinv.asDiagonal() * svd.matrixV().rightCols(n - rank);
}

// W-orthonormal basis of the column span of R.
inline Eigen::MatrixXd weighted_orthonormal(const Eigen::MatrixXd& R, const Eigen::VectorXd& w, double tol = 1e-8) {
  if (R.cols() == 0) return Eigen::MatrixXd(R.rows(), 0);
  Eigen::VectorXd r = w.cwiseSqrt();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(r.asDiagonal() * R, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index j = 0; j < sv.size(); ++j)
    if (sv(j) > tol) ++rank;
  return r.cwiseInverse().asDiagonal() * svd.matrixU().leftCols(rank);
}

// Projector onto span(B) for W-orthonormal B.
inline Eigen::MatrixXd projector(const Eigen::MatrixXd& B, const Eigen::VectorXd& w) {
  return B * B.transpose() * w.asDiagonal();
}

}  // namespace detail

/**
 * Basis of the i-level k-cochains under the localization viewer, i.e.
 * ker(d*_{i-1} ... d*_{k-1}). Level 0 is the orthogonal complement of the
 * constants. Under the restriction viewer only k = 0 is supported.
 */
inline LevelBasis level_space(const PureComplex& X, int k, int i, ViewerKind v = ViewerKind::localization) {
  const auto& w = X.weights(k);
  if (v == ViewerKind::localization) {
    if (!(0 <= i && i <= k && k <= X.top_dim()))
      throw InvalidArgument("level space needs 0 <= i <= k <= d, got i=" + std::to_string(i) + " k=" + std::to_string(k));
    return {k, i, detail::weighted_kernel(multi_down(X, i - 1, k - i + 1).matrix, w)};
  }
  if (k != 0) throw InvalidArgument("restriction level spaces are implemented for vertex cochains only");
  if (i < 0 || !viewable(v, X, 0, i - 1))
    throw InvalidArgument("restriction level " + std::to_string(i) + " is undefined here");
  // <V_sigma f, 1> over sigma in X(i-1): sum_u w_sigma(u) f(u).
  const auto& sig = X.faces(i - 1);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(detail::idx(sig.size()), detail::idx(X.count(0)));
  for (std::size_t s = 0; s < sig.size(); ++s)
    for (std::size_t u = 0; u < X.count(0); ++u) {
      const Face& fu = X.faces(0)[u];
      if (sig[s].contains(fu[0])) continue;
      Face un = sig[s] | fu;
      if (X.contains(un)) A(detail::idx(s), detail::idx(u)) = link_weight(X, sig[s], fu);
    }
  return {0, i, detail::weighted_kernel(A, w)};
}

/// max over sigma in X(i-1) of |<f_sigma, 1>|, evaluated face by face through links.
inline double level_constraint_residual(const PureComplex& X, const Cochain& f, int i) {
  detail::require_same_complex(X, f);
  const int k = f.dim();
  if (!(0 <= i && i <= k)) throw InvalidArgument("level constraint needs 0 <= i <= k");
  double r = 0.0;
  for (const Face& sigma : X.faces(i - 1)) {
    PureComplex L = link_of(X, sigma);
    Cochain fs = localize(X, f, sigma, L);
    r = std::max(r, std::abs(mean(L, fs)));
  }
  return r;
}

/// W-norm of f minus its projection onto span(B).
inline double membership_residual(const PureComplex& X, const LevelBasis& B, const Cochain& f) {
  detail::require_same_complex(X, f);
  const auto& w = X.weights(f.dim());
  Eigen::VectorXd r = f.values() - detail::projector(B.basis, w) * f.values();
  return std::sqrt(std::max(0.0, r.dot(w.asDiagonal() * r)));
}

/// Proper level bases for levels -1..k (index i+1); level -1 is the constants.
inline std::vector<LevelBasis> proper_bases(const PureComplex& X, int k) {
  if (k < 0 || k > X.top_dim()) throw InvalidArgument("proper levels need 0 <= k <= d");
  const auto& w = X.weights(k);
  const auto n = detail::idx(X.count(k));
  std::vector<LevelBasis> out(static_cast<std::size_t>(k + 2));
  out[0] = {k, -1, Eigen::MatrixXd::Ones(n, 1)};
  Eigen::MatrixXd acc(n, 0);
  for (int i = k; i >= 0; --i) {
    Eigen::MatrixXd B = level_space(X, k, i).basis;
    // Gram-Schmidt against the higher levels, then re-orthonormalize what is left.
    Eigen::MatrixXd R = B - detail::projector(acc, w) * B;
    R -= detail::projector(acc, w) * R;
    Eigen::MatrixXd P = detail::weighted_orthonormal(R, w);
    out[static_cast<std::size_t>(i + 1)] = {k, i, P};
    Eigen::MatrixXd next(n, acc.cols() + P.cols());
    next << acc, P;
    acc = std::move(next);
  }
  return out;
}

inline LevelBasis proper_basis(const PureComplex& X, int k, int i) {
  if (i < -1 || i > k) throw InvalidArgument("proper level " + std::to_string(i) + " outside -1..k");
  return proper_bases(X, k)[static_cast<std::size_t>(i + 1)];
}

/// Orthogonal projectors onto the proper levels -1..k.
inline std::vector<LinOp> proper_projectors(const PureComplex& X, int k) {
  std::vector<LinOp> out;
  for (const auto& b : proper_bases(X, k)) out.push_back({k, k, detail::projector(b.basis, X.weights(k))});
  return out;
}

struct LevelDecomposition {
  int k = 0;
  std::vector<Cochain> components;  // level i at index i+1
  std::vector<double> norms_sq;

  const Cochain& component(int i) const { return components.at(static_cast<std::size_t>(i + 1)); }
  double norm_sq(int i) const { return norms_sq.at(static_cast<std::size_t>(i + 1)); }
  int levels() const { return static_cast<int>(components.size()) - 1; }
};

inline LevelDecomposition proper_decompose(const PureComplex& X, const Cochain& f, const std::vector<LevelBasis>& bases) {
  detail::require_same_complex(X, f);
  const auto& w = X.weights(f.dim());
  LevelDecomposition out{f.dim(), {}, {}};
  for (const auto& b : bases) {
    if (b.k != f.dim()) throw InvalidArgument("level basis dimension does not match the cochain");
    Cochain c(X, f.dim(), b.basis * (b.basis.transpose() * (w.asDiagonal() * f.values())));
    out.norms_sq.push_back(norm_sq(X, c));
    out.components.push_back(std::move(c));
  }
  return out;
}

inline LevelDecomposition proper_decompose(const PureComplex& X, const Cochain& f) {
  return proper_decompose(X, f, proper_bases(X, f.dim()));
}

struct ZeroLift {
  Cochain g;
  Cochain f_eq0;
  double fit_residual = 0.0;
};

/**
 * For a proper 0-level k-cochain f0 = d_{k-1}..d_0 g, returns g and the vertex
 * cochain sqrt(U_0^k) g, which has the norm of f0, mean zero and
 * ||d_{k-1}..d_0 f_eq0|| = ||d*_0..d*_{k-1} f0||.
 */
inline ZeroLift lift_to_zero(const PureComplex& X, const Cochain& f0) {
  detail::require_same_complex(X, f0);
  const int k = f0.dim();
  if (k < 0 || k > X.top_dim()) throw InvalidArgument("lift needs 0 <= k <= d");
  const auto& wk = X.weights(k);
  const double scale = std::max(1.0, std::sqrt(norm_sq(X, f0)));
  if (std::abs(mean(X, f0)) > 1e-9 * scale) throw InvalidArgument("cochain is not orthogonal to the constants");
  const LinOp up = multi_up(X, 0, k);
  Eigen::VectorXd r = wk.cwiseSqrt();
  Eigen::MatrixXd A = r.asDiagonal() * up.matrix;
  Eigen::VectorXd g = A.completeOrthogonalDecomposition().solve(r.cwiseProduct(f0.values()));
  Eigen::VectorXd res = up.matrix * g - f0.values();
  const double fit = std::sqrt(res.dot(wk.asDiagonal() * res));
  if (fit > 1e-6 * scale) throw InvalidArgument("cochain is not in the image of the vertex lift (residual " + std::to_string(fit) + ")");
  Cochain gc(X, 0, g);
  LinOp s = psd_sqrt(X, up_down(X, 0, k));
  Cochain feq = s.apply(gc);
  return {std::move(gc), std::move(feq), fit};
}

}  // namespace hdx
