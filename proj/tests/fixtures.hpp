#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hdx/hdx.hpp"

namespace fixtures {

using hdx::Face;
using hdx::PureComplex;

inline PureComplex t3() { return hdx::build_complex({Face{0, 1, 2}}); }
inline PureComplex c42() { return hdx::complete_complex(4, 2); }
inline PureComplex k53() { return hdx::complete_complex(5, 3); }
inline PureComplex random72(unsigned seed) { return hdx::random_pure_complex(7, 2, 12, seed); }

struct Named {
  std::string name;
  PureComplex X;
};

/// The operator-identity fixtures.
inline std::vector<Named> core() {
  return {{"T3", t3()},
          {"C42", c42()},
          {"K5^3", k53()},
          {"random(7,2,12,1)", random72(1)},
          {"random(7,2,12,2)", random72(2)},
          {"random(7,2,12,3)", random72(3)}};
}

/// Core fixtures plus the two-triangle complex and complete 2-complexes on 4..8 vertices.
inline std::vector<Named> all() {
  auto v = core();
  v.push_back({"two-triangles", hdx::two_triangles()});
  for (int n = 5; n <= 8; ++n) v.push_back({"K" + std::to_string(n) + "^2", hdx::complete_complex(n, 2)});
  return v;
}

}  // namespace fixtures
