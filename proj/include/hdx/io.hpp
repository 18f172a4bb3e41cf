#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hdx/cochain.hpp"
#include "hdx/complex.hpp"
#include "hdx/error.hpp"
#include "hdx/oriented.hpp"
#include "hdx/spectral.hpp"

namespace hdx {

namespace detail {

inline std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line.substr(0, line.find('#')));
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

inline int parse_int(const std::string& s, std::size_t line) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw ParseError(line, "expected an integer, got '" + s + "'");
  return v;
}

inline double parse_real(const std::string& s, std::size_t line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v))
    throw ParseError(line, "expected a real number, got '" + s + "'");
  return v;
}

inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Lines {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line number, tokens)
};

// Non-empty, comment-stripped lines; the first must read "dim <n>".
inline int read_header(std::string_view text, Lines& out) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t no = 0;
  int dim = 0;
  bool have_dim = false;
  while (std::getline(is, line)) {
    ++no;
    auto t = tokens(line);
    if (t.empty()) continue;
    if (!have_dim) {
      if (t.size() != 2 || t[0] != "dim") throw ParseError(no, "expected 'dim <n>'");
      dim = parse_int(t[1], no);
      have_dim = true;
      continue;
    }
    out.rows.emplace_back(no, std::move(t));
  }
  if (!have_dim) throw ParseError(no == 0 ? 1 : no, "missing 'dim <n>' header");
  return dim;
}

}  // namespace detail

inline PureComplex parse_complex(std::string_view text) {
  detail::Lines lines;
  const int d = detail::read_header(text, lines);
  if (d < 0) throw ParseError(1, "dimension must be non-negative");
  if (lines.rows.empty()) throw ParseError(1, "no facets");
  std::vector<Face> facets;
  std::vector<double> weights;
  std::map<Face, std::size_t> seen;
  int weighted = -1;
  for (const auto& [no, t] : lines.rows) {
    const std::size_t n = static_cast<std::size_t>(d) + 1;
    if (t.size() != n && t.size() != n + 1)
      throw ParseError(no, "expected " + std::to_string(n) + " vertices and an optional weight");
    const int has_w = t.size() == n + 1;
    if (weighted == -1) weighted = has_w;
    if (weighted != has_w) throw ParseError(no, "weights must be given for all facets or none");
    std::vector<Vertex> vs;
    for (std::size_t j = 0; j < n; ++j) vs.push_back(detail::parse_int(t[j], no));
    Face f;
    try {
      f = Face(vs);
    } catch (const InvalidArgument& e) {
      throw ParseError(no, e.what());
    }
    if (auto [it, fresh] = seen.emplace(f, no); !fresh)
      throw ParseError(no, "duplicate facet " + f.str() + " (first on line " + std::to_string(it->second) + ")");
    if (has_w) {
      double w = detail::parse_real(t[n], no);
      if (!(w > 0.0)) throw ParseError(no, "facet weight must be positive");
      weights.push_back(w);
    }
    facets.push_back(std::move(f));
  }
  return build_complex(facets, weights);
}

inline std::string write_complex(const PureComplex& X) {
  const auto& fs = X.faces(X.top_dim());
  const auto& w = X.weights(X.top_dim());
  const bool uniform = (w.array() == w(0)).all();
  std::string out = "dim " + std::to_string(X.top_dim()) + "\n";
  for (std::size_t t = 0; t < fs.size(); ++t) {
    for (std::size_t j = 0; j < fs[t].size(); ++j) out += (j ? " " : "") + std::to_string(fs[t][j]);
    if (!uniform) out += " " + detail::format_real(w(detail::idx(t)));
    out += "\n";
  }
  return out;
}

/// Faces may be listed in any vertex order; with `oriented` the value is multiplied
/// by the sign of the sorting permutation. Unlisted faces are 0.
inline Cochain parse_cochain(std::string_view text, const PureComplex& X, bool oriented = false) {
  detail::Lines lines;
  const int k = detail::read_header(text, lines);
  if (k < -1 || k > X.top_dim())
    throw ParseError(1, "cochain dimension " + std::to_string(k) + " outside -1.." + std::to_string(X.top_dim()));
  Cochain f(X, k);
  std::map<Face, std::size_t> seen;
  for (const auto& [no, t] : lines.rows) {
    const std::size_t n = static_cast<std::size_t>(k + 1);
    if (t.size() != n + 1) throw ParseError(no, "expected " + std::to_string(n) + " vertices and a value");
    std::vector<Vertex> vs;
    for (std::size_t j = 0; j < n; ++j) vs.push_back(detail::parse_int(t[j], no));
    const int sign = oriented ? permutation_sign(vs) : 1;
    if (sign == 0) throw ParseError(no, "repeated vertex");
    Face face;
    try {
      face = Face(vs);
    } catch (const InvalidArgument& e) {
      throw ParseError(no, e.what());
    }
    if (!X.contains(face)) throw ParseError(no, "face " + face.str() + " is not in the complex");
    if (auto [it, fresh] = seen.emplace(face, no); !fresh) throw ParseError(no, "face " + face.str() + " listed twice");
    f(face) = sign * detail::parse_real(t[n], no);
  }
  return f;
}

inline std::string write_cochain(const Cochain& f) {
  std::string out = "dim " + std::to_string(f.dim()) + "\n";
  const auto& fs = f.complex().faces(f.dim());
  for (std::size_t t = 0; t < fs.size(); ++t) {
    for (Vertex v : fs[t]) out += std::to_string(v) + " ";
    out += detail::format_real(f.values()(detail::idx(t))) + "\n";
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
}

namespace detail {

inline void combinations(int n, int r, std::vector<Vertex>& cur, int start, std::vector<Face>& out) {
  if (static_cast<int>(cur.size()) == r) {
    out.emplace_back(cur);
    return;
  }
  for (int v = start; v <= n - (r - static_cast<int>(cur.size())); ++v) {
    cur.push_back(v);
    combinations(n, r, cur, v + 1, out);
    cur.pop_back();
  }
}

inline std::vector<Face> all_subsets(int n, int r) {
  std::vector<Face> out;
  std::vector<Vertex> cur;
  combinations(n, r, cur, 0, out);
  return out;
}

}  // namespace detail

/// All (d+1)-subsets of {0..n-1}, uniform weights.
inline PureComplex complete_complex(int n, int d) {
  if (d < 0 || n < d + 1) throw InvalidArgument("complete complex needs n >= d+1 >= 1");
  return build_complex(detail::all_subsets(n, d + 1));
}

/// Vertices are numbered group by group; facets pick one vertex from each of d+1 distinct groups.
inline PureComplex partite_complex(const std::vector<int>& parts, int d) {
  if (d < 0 || static_cast<int>(parts.size()) < d + 1) throw InvalidArgument("partite complex needs at least d+1 groups");
  std::vector<int> first;
  int next = 0;
  for (int p : parts) {
    if (p < 1) throw InvalidArgument("every group needs at least one vertex");
    first.push_back(next);
    next += p;
  }
  std::vector<Face> facets;
  for (const Face& groups : detail::all_subsets(static_cast<int>(parts.size()), d + 1)) {
    std::vector<std::size_t> pick(groups.size(), 0);
    while (true) {
      std::vector<Vertex> vs;
      for (std::size_t g = 0; g < groups.size(); ++g) vs.push_back(first[static_cast<std::size_t>(groups[g])] + static_cast<int>(pick[g]));
      facets.emplace_back(vs);
      std::size_t g = 0;
      while (g < groups.size() && ++pick[g] == static_cast<std::size_t>(parts[static_cast<std::size_t>(groups[g])])) pick[g++] = 0;
      if (g == groups.size()) break;
    }
  }
  return build_complex(facets);
}

/// The complex and every link of a face of dimension <= d-2 have connected 1-skeletons.
inline bool links_connected(const PureComplex& X) {
  if (X.top_dim() < 1) return true;
  for (int j = -1; j <= X.top_dim() - 2; ++j)
    for (const Face& s : X.faces(j))
      if (!is_connected(link_of(X, s))) return false;
  return true;
}

/// m distinct uniformly random (d+1)-subsets of {0..n-1}, resampled until links_connected.
inline PureComplex random_pure_complex(int n, int d, int m, std::uint64_t seed, int max_tries = 10000) {
  if (d < 0 || n < d + 1) throw InvalidArgument("random complex needs n >= d+1");
  std::vector<Face> pool = detail::all_subsets(n, d + 1);
  if (m < 1 || static_cast<std::size_t>(m) > pool.size())
    throw InvalidArgument("cannot choose " + std::to_string(m) + " facets out of " + std::to_string(pool.size()));
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    // Partial Fisher-Yates with an explicit modulo draw keeps the stream portable.
    for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    PureComplex X = build_complex(std::vector<Face>(pool.begin(), pool.begin() + m));
    if (links_connected(X)) return X;
  }
  throw HypothesisError("no random complex with connected links after " + std::to_string(max_tries) + " tries");
}

inline PureComplex two_triangles() { return build_complex({Face{0, 1, 2}, Face{1, 2, 3}}); }

}  // namespace hdx
