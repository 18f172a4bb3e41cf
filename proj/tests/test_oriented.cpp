#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fixtures.hpp"

using namespace hdx;

namespace {

Cochain vec(const PureComplex& X, int k, std::vector<double> v) {
  return Cochain(X, k, Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// f(01) = 1, f(12) = 1, f(02) = -1 in face order 01 02 12.
Cochain cyclic_flow(const PureComplex& T) { return vec(T, 1, {1, -1, 1}); }

}  // namespace

TEST_CASE("permutation signs", "[oriented]") {
  CHECK(permutation_sign({0, 1, 2}) == 1);
  CHECK(permutation_sign({1, 0, 2}) == -1);
  CHECK(permutation_sign({2, 0, 1}) == 1);
  CHECK(permutation_sign({1, 1}) == 0);
  auto T = fixtures::t3();
  auto f = cyclic_flow(T);
  CHECK(evaluate_oriented(f, {1, 0}) == -1.0);
  CHECK(evaluate_oriented(f, {2, 0}) == 1.0);
}

TEST_CASE("coboundary", "[oriented]") {
  auto T = fixtures::t3();
  auto d0 = coboundary(T, 0);
  auto g = d0.apply(Cochain::indicator(T, Face{0}));
  CHECK(max_abs(g.values() - vec(T, 1, {-1, -1, 0}).values()) == 0.0);
  CHECK(max_abs(d0.apply(Cochain::constant(T, 0)).values()) == 0.0);
  auto lift = coboundary(T, -1).apply(Cochain::constant(T, -1, 3.0));
  CHECK(max_abs(lift.values().array() - 3.0) == 0.0);
  for (const auto& [name, X] : fixtures::core())
    for (int i = -1; i + 1 < X.top_dim(); ++i) {
      INFO(name << " i=" << i);
      CHECK(max_abs((coboundary(X, i + 1) * coboundary(X, i)).matrix) <= 1e-12);
    }
  CHECK_THROWS_AS(coboundary(T, 2), InvalidArgument);
}

TEST_CASE("minimal representatives", "[oriented]") {
  auto T = fixtures::t3();
  auto m = minimal_representative(T, vec(T, 0, {1, 0, 0}));
  CHECK(max_abs(m.values() - vec(T, 0, {2.0 / 3, -1.0 / 3, -1.0 / 3}).values()) <= 1e-12);
  auto flow = cyclic_flow(T);
  CHECK(max_abs(minimal_representative(T, flow).values() - flow.values()) <= 1e-12);
  for (const Face& v : T.faces(0)) {
    auto dg = coboundary(T, 0).apply(Cochain::indicator(T, v));
    CHECK(std::abs(inner_product(T, flow, dg)) <= 1e-12);
  }
  auto C = fixtures::c42();
  auto exact = coboundary(C, 0).apply(vec(C, 0, {0.3, -1.0, 2.0, 0.5}));
  CHECK(max_abs(minimal_representative(C, exact).values()) <= 1e-10);
}

TEST_CASE("minimal representative is an orthogonal projection", "[oriented]") {
  Rng rng(41);
  for (const auto& [name, X] : fixtures::core())
    for (int k = 0; k <= X.top_dim(); ++k) {
      INFO(name << " k=" << k);
      auto f = random_cochain(X, k, rng);
      auto m = minimal_representative(X, f);
      Cochain diffc(X, k, f.values() - m.values());
      CHECK(std::abs(inner_product(X, diffc, m)) <= 1e-10);
      CHECK(max_abs(minimal_representative(X, m).values() - m.values()) <= 1e-10);
      // orthogonal to every coboundary
      for (const Face& s : X.faces(k - 1))
        CHECK(std::abs(inner_product(X, m, coboundary(X, k - 1).apply(Cochain::indicator(X, s)))) <= 1e-10);
      // any other representative is at least as long
      auto other = Cochain(X, k, m.values() + coboundary(X, k - 1).apply(random_cochain(X, k - 1, rng)).values());
      CHECK(norm_sq(X, m) <= norm_sq(X, other) + 1e-12);
    }
}

TEST_CASE("subtracting part of the mean shortens a cochain", "[oriented]") {
  Rng rng(42);
  auto C = fixtures::c42();
  for (int t = 0; t < 10; ++t) {
    auto f = random_cochain(C, 0, rng);
    double m = mean(C, f);
    REQUIRE(m != 0.0);
    for (double a : {m, 1.5 * m}) {
      Cochain g(C, 0, f.values().array() - a);
      CHECK(norm_sq(C, g) < norm_sq(C, f));
    }
  }
}

TEST_CASE("local minimality residuals", "[oriented]") {
  auto T = fixtures::t3();
  auto flow = cyclic_flow(T);
  for (const auto& [s, r] : local_minimality_residuals(T, flow)) CHECK(r <= 1e-12);
  CHECK(k_level_check(T, flow) <= 1e-12);
  auto C = fixtures::c42();
  auto dg = coboundary(C, 0).apply(Cochain::indicator(C, Face{0}));
  auto res = local_minimality_residuals(C, dg);
  CHECK(std::abs(res.at(Face{0}) - 1.0) <= 1e-12);
  for (Vertex v : {1, 2, 3}) CHECK(std::abs(res.at(Face{v}) - 1.0 / 3) <= 1e-12);
  CHECK(std::abs(k_level_check(C, dg) - 1.0) <= 1e-12);
  CHECK(std::abs(k_level_check(T, Cochain::constant(T, 1)) - 1.0) <= 1e-12);
  CHECK_THROWS_AS(local_minimality_residuals(T, Cochain(T, 0)), InvalidArgument);
  CHECK_THROWS_AS(k_level_check(T, Cochain(T, 0)), InvalidArgument);
}

TEST_CASE("minimal implies locally minimal implies top level", "[oriented]") {
  Rng rng(43);
  for (const auto& [name, X] : fixtures::core())
    for (int k = 1; k <= X.top_dim(); ++k) {
      INFO(name << " k=" << k);
      for (int t = 0; t < 5; ++t) {
        auto m = minimal_representative(X, random_cochain(X, k, rng));
        CHECK(max_local_minimality_residual(X, m) <= 1e-10);
        CHECK(k_level_check(X, m) <= 1e-10);
      }
    }
}

TEST_CASE("perfectly balanced sets", "[oriented]") {
  auto C = fixtures::c42();
  auto r = balanced_check(C, {Face{0, 1}, Face{2, 3}}, 0);
  CHECK(r.defect <= 1e-12);
  CHECK(std::abs(r.mass - 1.0 / 3) <= 1e-12);
  CHECK(r.balanced());
  CHECK(r.centered_mean_residual <= 1e-12);
  CHECK(r.level_residual <= 1e-10);
  CHECK(r.zero_level_residual <= 1e-10);
  auto one = balanced_check(C, {Face{0, 1}}, 0);
  CHECK(std::abs(one.defect - 1.0 / 6) <= 1e-12);
  CHECK_FALSE(one.balanced());
  CHECK(one.level_residual > 1e-3);
  auto full = balanced_check(C, C.faces(1), 0);
  CHECK(full.defect <= 1e-12);
  auto K = fixtures::k53();
  CHECK(balanced_check(K, K.faces(2), 1).defect <= 1e-12);
  CHECK_THROWS_AS(balanced_check(C, {Face{0, 5}}, 0), InvalidArgument);
  CHECK_THROWS_AS(balanced_check(C, {Face{0, 1}}, 1), InvalidArgument);
}
