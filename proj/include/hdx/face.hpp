#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hdx/error.hpp"

namespace hdx {

using Vertex = int;

/**
 * A face of a simplicial complex: a set of distinct non-negative vertex ids,
 * stored as a strictly ascending list. The empty face has dimension -1.
 *
 * Ordering is lexicographic on the vertex lists, which is the canonical
 * order used for every cochain vector and operator matrix.
 */
class Face {
 public:
  Face() = default;

  Face(std::initializer_list<Vertex> vs) : Face(std::vector<Vertex>(vs)) {}

  explicit Face(std::vector<Vertex> vs) : v_(std::move(vs)) {
    std::sort(v_.begin(), v_.end());
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (v_[i] < 0) throw InvalidArgument("negative vertex id " + std::to_string(v_[i]));
      if (i > 0 && v_[i] == v_[i - 1])
        throw InvalidArgument("repeated vertex " + std::to_string(v_[i]) + " in face");
    }
  }

  int dim() const noexcept { return static_cast<int>(v_.size()) - 1; }
  std::size_t size() const noexcept { return v_.size(); }
  bool empty() const noexcept { return v_.empty(); }
  std::span<const Vertex> vertices() const noexcept { return v_; }
  Vertex operator[](std::size_t i) const { return v_[i]; }
  auto begin() const noexcept { return v_.begin(); }
  auto end() const noexcept { return v_.end(); }

  bool contains(Vertex x) const { return std::binary_search(v_.begin(), v_.end(), x); }

  /// True iff every vertex of `other` is in this face.
  bool contains(const Face& other) const {
    return std::includes(v_.begin(), v_.end(), other.v_.begin(), other.v_.end());
  }

  /// Position of `x` in the sorted vertex list, or -1.
  int position(Vertex x) const {
    auto it = std::lower_bound(v_.begin(), v_.end(), x);
    return (it != v_.end() && *it == x) ? static_cast<int>(it - v_.begin()) : -1;
  }

  /// The face with its i-th vertex removed.
  Face without_index(std::size_t i) const {
    Face r;
    r.v_.reserve(v_.size() - 1);
    for (std::size_t j = 0; j < v_.size(); ++j)
      if (j != i) r.v_.push_back(v_[j]);
    return r;
  }

  friend Face operator|(const Face& a, const Face& b) {
    Face r;
    std::set_union(a.v_.begin(), a.v_.end(), b.v_.begin(), b.v_.end(), std::back_inserter(r.v_));
    return r;
  }

  friend Face operator-(const Face& a, const Face& b) {
    Face r;
    std::set_difference(a.v_.begin(), a.v_.end(), b.v_.begin(), b.v_.end(),
                        std::back_inserter(r.v_));
    return r;
  }

  friend Face operator&(const Face& a, const Face& b) {
    Face r;
    std::set_intersection(a.v_.begin(), a.v_.end(), b.v_.begin(), b.v_.end(),
                          std::back_inserter(r.v_));
    return r;
  }

  friend bool operator==(const Face&, const Face&) = default;
  friend auto operator<=>(const Face& a, const Face& b) { return a.v_ <=> b.v_; }

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(v_[i]);
    }
    return s + "}";
  }

  friend std::ostream& operator<<(std::ostream& os, const Face& f) { return os << f.str(); }

 private:
  std::vector<Vertex> v_;
};

/// Binomial coefficient as a double; exact for the small arguments used here.
inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace hdx
