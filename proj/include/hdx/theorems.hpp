#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hdx/cochain.hpp"
#include "hdx/complex.hpp"
#include "hdx/error.hpp"
#include "hdx/level.hpp"
#include "hdx/sampling.hpp"
#include "hdx/spectral.hpp"

namespace hdx {

constexpr double kSlackTol = 1e-9;

struct LevelTerm {
  double coefficient = 0.0;
  double norm_sq = 0.0;
};

struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  std::map<int, LevelTerm> per_level;

  bool holds() const { return slack >= -kSlackTol; }
};

/**
 * Contraction coefficients lambda(i, k) = 1 - (1/(k-i+1)) prod_{j=i-1}^{k-1} (1 - gamma_j)
 * for i-level k-cochains, from a gamma profile.
 */
class LambdaTable {
 public:
  LambdaTable() = default;
  explicit LambdaTable(GammaProfile g) : g_(std::move(g)) {}

  const GammaProfile& profile() const noexcept { return g_; }

  /// Largest k for which every lambda(i, k) is defined.
  int max_k() const { return g_.max_dim() + 1; }

  double at(int i, int k) const {
    check(i, k);
    double p = 1.0;
    for (int j = i - 1; j <= k - 1; ++j) p *= 1.0 - g_.at(j);
    return 1.0 - p / (k - i + 1);
  }

  /// Same values via the recursion lambda(i,k) = lambda'(i-1,k-1) on the shifted profile and
  /// lambda(0,k) = a lambda(1,k) + 1 - a with a = (k/(k+1))(1 - gamma_{-1}).
  double recursive(int i, int k) const {
    check(i, k);
    return recurse(g_.gamma, i, k);
  }

 private:
  void check(int i, int k) const {
    if (!(0 <= i && i <= k && k <= max_k()))
      throw InvalidArgument("lambda(" + std::to_string(i) + "," + std::to_string(k) + ") needs 0 <= i <= k <= " +
                            std::to_string(max_k()));
  }

  static double recurse(const std::vector<double>& g, int i, int k) {
    if (i > 0) return recurse(std::vector<double>(g.begin() + 1, g.end()), i - 1, k - 1);
    if (k == 0) return g.front();
    const double a = (k / (k + 1.0)) * (1.0 - g.front());
    return a * recurse(g, 1, k) + 1.0 - a;
  }

  GammaProfile g_;
};

namespace detail {

inline double scale_of(const PureComplex& X, const Cochain& f) { return std::max(1.0, std::sqrt(norm_sq(X, f))); }

inline void require_orthogonal_to_constants(const PureComplex& X, const Cochain& f) {
  double m = mean(X, f);
  if (std::abs(m) > kSlackTol * scale_of(X, f))
    throw InvalidArgument("cochain has a constant component " + std::to_string(m));
}

inline BoundReport finish(double lhs, double rhs, std::map<int, LevelTerm> terms = {}) {
  return {lhs, rhs, rhs - lhs, std::move(terms)};
}

}  // namespace detail

/// ||d*_0 .. d*_{k-1} f||^2 <= (1 - (k/(k+1))(1 - gamma)) ||f||^2 for 0-level f.
inline BoundReport advantage_check(const PureComplex& X, int k, const Cochain& f, double gamma) {
  detail::require_same_complex(X, f);
  if (f.dim() != k) throw InvalidArgument("cochain dimension does not match k");
  if (k < 0 || k > X.top_dim()) throw InvalidArgument("advantage needs 0 <= k <= d");
  detail::require_orthogonal_to_constants(X, f);
  const Cochain down = multi_down(X, 0, k).apply(f);
  const double lhs = norm_sq(X, down);
  const double c = 1.0 - (k / (k + 1.0)) * (1.0 - gamma);
  const double n = norm_sq(X, f);
  return detail::finish(lhs, c * n, {{0, {c, n}}});
}

inline BoundReport advantage_check(const PureComplex& X, int k, const Cochain& f) {
  return advantage_check(X, k, f, lambda2_skeleton(X));
}

/// Everything the walk bounds need for one (X, k), computed once.
struct WalkContext {
  PureComplex X;
  int k = 0;
  LambdaTable table;
  std::vector<LevelBasis> bases;
  LinOp M;
  LinOp U;

  static WalkContext make(const PureComplex& X, int k) {
    if (k < 0 || k > X.top_dim() - 1) throw InvalidArgument("walk bounds need 0 <= k <= d-1, got k=" + std::to_string(k));
    return {X, k, LambdaTable(gamma_profile(X)), proper_bases(X, k), nonlazy(X, k), up_down(X, k, 1)};
  }

  double coefficient(int i) const { return table.at(i, k); }
};

namespace detail {

inline std::map<int, LevelTerm> level_terms(const WalkContext& c, const Cochain& f) {
  require_same_complex(c.X, f);
  if (f.dim() != c.k) throw InvalidArgument("cochain dimension does not match the walk");
  require_orthogonal_to_constants(c.X, f);
  LevelDecomposition dec = proper_decompose(c.X, f, c.bases);
  std::map<int, LevelTerm> t;
  for (int i = 0; i <= c.k; ++i) t[i] = {c.coefficient(i), dec.norm_sq(i)};
  return t;
}

}  // namespace detail

/// <M_k f, f> <= sum_i lambda(i,k) ||f_i||^2 over the proper level decomposition.
inline BoundReport fine_grained_check(const WalkContext& c, const Cochain& f) {
  auto t = detail::level_terms(c, f);
  double rhs = 0.0;
  for (const auto& [i, term] : t) rhs += term.coefficient * term.norm_sq;
  return detail::finish(inner_product(c.X, c.M.apply(f), f), rhs, std::move(t));
}

inline BoundReport fine_grained_check(const PureComplex& X, int k, const Cochain& f) {
  return fine_grained_check(WalkContext::make(X, k), f);
}

struct AlevLauReport : BoundReport {
  double fine_rhs = 0.0;
  double improvement = 0.0;  ///< Alev-Lau rhs minus fine-grained rhs
};

/// <M_k f, f> <= lambda(0,k) ||f||^2.
inline AlevLauReport alev_lau_check(const WalkContext& c, const Cochain& f) {
  BoundReport fine = fine_grained_check(c, f);
  const double coef = c.coefficient(0);
  const double n = norm_sq(c.X, f);
  AlevLauReport r;
  static_cast<BoundReport&>(r) = detail::finish(fine.lhs, coef * n, {{0, {coef, n}}});
  r.fine_rhs = fine.rhs;
  r.improvement = r.rhs - fine.rhs;
  return r;
}

inline AlevLauReport alev_lau_check(const PureComplex& X, int k, const Cochain& f) {
  return alev_lau_check(WalkContext::make(X, k), f);
}

/// <U_k f, f> <= sum_i (((k+1)/(k+2)) lambda(i,k) + 1/(k+2)) ||f_i||^2.
inline BoundReport updown_corollary_check(const WalkContext& c, const Cochain& f) {
  auto t = detail::level_terms(c, f);
  const double a = (c.k + 1.0) / (c.k + 2.0), b = 1.0 / (c.k + 2.0);
  double rhs = 0.0;
  for (auto& [i, term] : t) {
    term.coefficient = a * term.coefficient + b;
    rhs += term.coefficient * term.norm_sq;
  }
  return detail::finish(inner_product(c.X, c.U.apply(f), f), rhs, std::move(t));
}

inline BoundReport updown_corollary_check(const PureComplex& X, int k, const Cochain& f) {
  return updown_corollary_check(WalkContext::make(X, k), f);
}

struct BootstrapCertificate {
  LambdaTable table;
  double worst_slack_first = INFINITY;
  double worst_slack_second = INFINITY;
  Face worst_face_first;
  Face worst_face_second;
  std::size_t faces_checked = 0;

  bool holds() const { return worst_slack_first >= -kSlackTol && worst_slack_second >= -kSlackTol; }
};

namespace detail {

// Rows: faces of the link of v of dimension k-1; columns: k-faces of X. Reads f(tau u v).
inline Eigen::MatrixXd localization_matrix(const PureComplex& X, const PureComplex& Lv, const Face& v, int k) {
  const auto& lf = Lv.faces(k - 1);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(idx(lf.size()), idx(X.count(k)));
  for (std::size_t t = 0; t < lf.size(); ++t) T(idx(t), idx(X.index(lf[t] | v))) = 1.0;
  return T;
}

// Both recursion conditions inside one link L (L = X for the empty face) at dimension k >= 1.
inline void bootstrap_in_link(const PureComplex& L, int k, const Face& sigma, BootstrapCertificate& out) {
  const LambdaTable here(gamma_profile(L));
  const double l0 = here.at(0, k), l1 = here.at(1, k);
  const int r = k - 1;
  const auto& w = L.weights(k);

  Eigen::MatrixXd Q = (l1 - l0) * Eigen::MatrixXd(w.asDiagonal());
  std::vector<double> worst_child(static_cast<std::size_t>(k + 1), -INFINITY);
  for (std::size_t s = 0; s < L.count(0); ++s) {
    const Face& v = L.faces(0)[s];
    const PureComplex Lv = link_of(L, v);
    // ||D_r^r V_v g||^2 is a quadratic form in g.
    Eigen::MatrixXd T = down_up(Lv, r, r).matrix * localization_matrix(L, Lv, v, k);
    Q += (1.0 - l1) * L.weights(0)(idx(s)) * T.transpose() * Lv.weights(r).asDiagonal() * T;
    const LambdaTable child(gamma_profile(Lv));
    for (int i = 1; i <= k; ++i) worst_child[static_cast<std::size_t>(i)] = std::max(worst_child[static_cast<std::size_t>(i)], child.at(i - 1, r));
  }
  for (int i = 1; i <= k; ++i) {
    double slack = here.at(i, k) - worst_child[static_cast<std::size_t>(i)];
    if (slack < out.worst_slack_second) {
      out.worst_slack_second = slack;
      out.worst_face_second = sigma;
    }
  }
  const Eigen::MatrixXd B = level_space(L, k, 0).basis;
  if (B.cols() > 0) {
    Eigen::MatrixXd R = B.transpose() * Q * B;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (R + R.transpose()), Eigen::EigenvaluesOnly);
    double slack = -es.eigenvalues().maxCoeff();
    if (slack < out.worst_slack_first) {
      out.worst_slack_first = slack;
      out.worst_face_first = sigma;
    }
  }
  ++out.faces_checked;
}

}  // namespace detail

/**
 * Checks both recursive conditions of the bootstrapping argument with the
 * closed-form coefficients, at every face sigma whose link still carries
 * cochains of dimension k - |sigma| >= 1. Condition one is maximized exactly
 * over the 0-level cochains of each link.
 */
inline BootstrapCertificate bootstrap_certificate(const PureComplex& X, int k) {
  if (k < 1 || k > X.top_dim() - 1) throw InvalidArgument("bootstrap certificate needs 1 <= k <= d-1");
  BootstrapCertificate out;
  out.table = LambdaTable(gamma_profile(X));
  for (int j = -1; j <= k - 2; ++j)
    for (const Face& sigma : X.faces(j)) {
      const int ks = k - static_cast<int>(sigma.size());
      detail::bootstrap_in_link(link_of(X, sigma), ks, sigma, out);
    }
  return out;
}

struct TricklingReport {
  double lambda_local = 0.0;
  double bound = 0.0;
  double actual = 0.0;
  double advantage_residual = 0.0;
  bool pass = false;
};

/// max_v |E_{u in X_v(0)} f(u) - (M_0 f)(v)| through the restriction viewer.
inline double advantage_identity_residual(const PureComplex& X, const Cochain& f) {
  detail::require_same_complex(X, f);
  if (f.dim() != 0) throw InvalidArgument("advantage identity is about vertex cochains");
  const Cochain mf = nonlazy(X, 0).apply(f);
  double r = 0.0;
  for (const Face& v : X.faces(0)) {
    PureComplex L = link_of(X, v);
    r = std::max(r, std::abs(mean(L, view(ViewerKind::restriction, X, f, v, L)) - mf(v)));
  }
  return r;
}

/// lambda2(X) <= lambda/(1-lambda) where lambda is the worst vertex-link lambda2.
inline TricklingReport trickling_down_check(const PureComplex& X, std::uint64_t seed = 0, int probes = 8) {
  if (X.top_dim() < 2) throw InvalidArgument("trickling down needs dimension >= 2");
  if (!is_connected(X)) throw HypothesisError("complex is disconnected");
  TricklingReport r;
  r.lambda_local = -INFINITY;
  for (const Face& v : X.faces(0)) {
    try {
      r.lambda_local = std::max(r.lambda_local, lambda2_skeleton(link_of(X, v)));
    } catch (const HypothesisError&) {
      throw HypothesisError("link of " + v.str() + " has a disconnected 1-skeleton");
    }
  }
  if (r.lambda_local >= 1.0) throw HypothesisError("vertex links have lambda2 >= 1");
  r.bound = r.lambda_local / (1.0 - r.lambda_local);
  r.actual = lambda2_skeleton(X);
  Rng rng(seed);
  for (int p = 0; p < probes; ++p)
    r.advantage_residual = std::max(r.advantage_residual, advantage_identity_residual(X, random_cochain(X, 0, rng)));
  r.pass = r.actual <= r.bound + kSlackTol;
  return r;
}

}  // namespace hdx
