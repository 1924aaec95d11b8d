#pragma once

// Vietoris–Rips filtration up to dimension 2.
//
// A simplex enters at the largest pairwise dissimilarity among its vertices.
// Simplices are totally ordered by (value, dimension, vertices).

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "rholes/dissim.hpp"

namespace rholes {

using Vertex = std::uint32_t;

class Simplex {
 public:
  Simplex() = default;
  explicit Simplex(Vertex a) : v_{a, 0, 0}, size_(1) {}
  Simplex(Vertex a, Vertex b);
  Simplex(Vertex a, Vertex b, Vertex c);
  // Sorts and validates; 1 to 3 distinct vertices.
  static Simplex from(std::span<const Vertex> vertices);

  int dim() const noexcept { return static_cast<int>(size_) - 1; }
  std::size_t size() const noexcept { return size_; }
  Vertex operator[](std::size_t k) const { return v_[k]; }
  std::span<const Vertex> vertices() const { return {v_.data(), size_}; }

  // Codimension-one faces, empty for a vertex.
  std::vector<Simplex> faces() const;

  // Orders by dimension first, then vertices lexicographically.
  friend auto operator<=>(const Simplex& a, const Simplex& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    return a.v_ <=> b.v_;
  }
  friend bool operator==(const Simplex&, const Simplex&) = default;

 private:
  std::array<Vertex, 3> v_{0, 0, 0};
  std::uint8_t size_ = 0;
};

struct FiltrationEntry {
  Simplex simplex;
  double value = 0.0;
};

// Strict total order used for reduction.
bool filtration_less(const FiltrationEntry& a, const FiltrationEntry& b);

class Filtration {
 public:
  Filtration() = default;
  Filtration(std::size_t n_vertices, double t_max, std::vector<FiltrationEntry> entries);

  std::size_t n_vertices() const noexcept { return n_vertices_; }
  double t_max() const noexcept { return t_max_; }
  const std::vector<FiltrationEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const FiltrationEntry& operator[](std::size_t k) const { return entries_[k]; }
  std::size_t count(int dim) const;

  friend bool operator==(const Filtration& a, const Filtration& b);

 private:
  std::size_t n_vertices_ = 0;
  double t_max_ = 0.0;
  std::vector<FiltrationEntry> entries_;
};

inline constexpr std::size_t kDefaultMaxSimplices = 60'000'000;

// Vertices at 0, edges with d <= t_max, and triangles whose three edges are
// all present. Triangles are enumerated in parallel per lowest vertex and the
// final sort fixes the order. Throws std::length_error past `max_simplices`.
Filtration vr_filtration(const DissimMatrix& m, double t_max,
                         std::size_t max_simplices = kDefaultMaxSimplices);

// Reference construction: plain triple loop over all vertex triples.
Filtration vr_filtration_serial(const DissimMatrix& m, double t_max);

// Simplices with value <= t, in filtration order. Throws if t > t_max.
std::vector<Simplex> complex_at(const Filtration& f, double t);

// One line per simplex, "value dim v0 v1 [v2]", in filtration order.
void write_filtration(std::ostream& os, const Filtration& f);

}  // namespace rholes
