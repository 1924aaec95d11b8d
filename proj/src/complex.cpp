#include "rholes/complex.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rholes {

Simplex::Simplex(Vertex a, Vertex b) : v_{std::min(a, b), std::max(a, b), 0}, size_(2) {
  if (a == b) throw std::invalid_argument("Simplex: repeated vertex");
}

Simplex::Simplex(Vertex a, Vertex b, Vertex c) : v_{a, b, c}, size_(3) {
  std::sort(v_.begin(), v_.end());
  if (v_[0] == v_[1] || v_[1] == v_[2]) throw std::invalid_argument("Simplex: repeated vertex");
}

Simplex Simplex::from(std::span<const Vertex> vertices) {
  switch (vertices.size()) {
    case 1: return Simplex(vertices[0]);
    case 2: return Simplex(vertices[0], vertices[1]);
    case 3: return Simplex(vertices[0], vertices[1], vertices[2]);
    default: throw std::invalid_argument("Simplex: dimension must be 0, 1 or 2");
  }
}

std::vector<Simplex> Simplex::faces() const {
  switch (size_) {
    case 2: return {Simplex(v_[0]), Simplex(v_[1])};
    case 3: return {Simplex(v_[0], v_[1]), Simplex(v_[0], v_[2]), Simplex(v_[1], v_[2])};
    default: return {};
  }
}

bool filtration_less(const FiltrationEntry& a, const FiltrationEntry& b) {
  if (a.value != b.value) return a.value < b.value;
  return a.simplex < b.simplex;
}

Filtration::Filtration(std::size_t n_vertices, double t_max, std::vector<FiltrationEntry> entries)
    : n_vertices_(n_vertices), t_max_(t_max), entries_(std::move(entries)) {}

std::size_t Filtration::count(int dim) const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(),
                                                [dim](const auto& e) { return e.simplex.dim() == dim; }));
}

bool operator==(const Filtration& a, const Filtration& b) {
  if (a.n_vertices_ != b.n_vertices_ || a.t_max_ != b.t_max_ || a.entries_.size() != b.entries_.size())
    return false;
  for (std::size_t k = 0; k < a.entries_.size(); ++k)
    if (a.entries_[k].simplex != b.entries_[k].simplex || a.entries_[k].value != b.entries_[k].value)
      return false;
  return true;
}

Filtration vr_filtration(const DissimMatrix& m, double t_max, std::size_t max_simplices) {
  if (!(t_max >= 0.0)) throw std::invalid_argument("vr_filtration: t_max must be nonnegative");
  const std::size_t n = m.size();
  const auto sn = static_cast<std::ptrdiff_t>(n);

  // Upper neighbourhoods: j > i with d(i, j) <= t_max.
  std::vector<std::vector<Vertex>> upper(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < sn; ++i)
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j)
      if (m(static_cast<std::size_t>(i), j) <= t_max) upper[static_cast<std::size_t>(i)].push_back(static_cast<Vertex>(j));

  std::vector<std::size_t> tri_count(n, 0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    const auto& nb = upper[static_cast<std::size_t>(i)];
    std::size_t c = 0;
    for (std::size_t a = 0; a < nb.size(); ++a)
      for (std::size_t b = a + 1; b < nb.size(); ++b)
        if (m(nb[a], nb[b]) <= t_max) ++c;
    tri_count[static_cast<std::size_t>(i)] = c;
  }
  std::size_t total = n;
  for (std::size_t i = 0; i < n; ++i) total += upper[i].size() + tri_count[i];
  if (total > max_simplices)
    throw std::length_error("vr_filtration: " + std::to_string(total) + " simplices exceed the limit of " +
                            std::to_string(max_simplices) + "; lower t_max or subsample");

  // Per-vertex offsets so every thread writes a disjoint slice.
  std::vector<std::size_t> offset(n + 1, n);
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + upper[i].size() + tri_count[i];
  std::vector<FiltrationEntry> entries(total);
  for (std::size_t i = 0; i < n; ++i) entries[i] = {Simplex(static_cast<Vertex>(i)), 0.0};

#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t si = 0; si < sn; ++si) {
    const auto i = static_cast<std::size_t>(si);
    const auto& nb = upper[i];
    std::size_t out = offset[i];
    for (std::size_t a = 0; a < nb.size(); ++a) {
      const double dij = m(i, nb[a]);
      entries[out++] = {Simplex(static_cast<Vertex>(i), nb[a]), dij};
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        const double djk = m(nb[a], nb[b]);
        if (djk > t_max) continue;
        const double value = std::max({dij, m(i, nb[b]), djk});
        entries[out++] = {Simplex(static_cast<Vertex>(i), nb[a], nb[b]), value};
      }
    }
  }
  std::sort(entries.begin(), entries.end(), filtration_less);
  return Filtration(n, t_max, std::move(entries));
}

Filtration vr_filtration_serial(const DissimMatrix& m, double t_max) {
  if (!(t_max >= 0.0)) throw std::invalid_argument("vr_filtration: t_max must be nonnegative");
  const std::size_t n = m.size();
  std::vector<FiltrationEntry> entries;
  for (std::size_t i = 0; i < n; ++i) entries.push_back({Simplex(static_cast<Vertex>(i)), 0.0});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (m(i, j) <= t_max) entries.push_back({Simplex(static_cast<Vertex>(i), static_cast<Vertex>(j)), m(i, j)});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const double value = std::max({m(i, j), m(i, k), m(j, k)});
        if (value <= t_max)
          entries.push_back({Simplex(static_cast<Vertex>(i), static_cast<Vertex>(j), static_cast<Vertex>(k)), value});
      }
  std::sort(entries.begin(), entries.end(), filtration_less);
  return Filtration(n, t_max, std::move(entries));
}

std::vector<Simplex> complex_at(const Filtration& f, double t) {
  if (t > f.t_max()) throw std::out_of_range("complex_at: threshold beyond the filtration's t_max");
  std::vector<Simplex> out;
  for (const auto& e : f.entries()) {
    if (e.value > t) break;
    out.push_back(e.simplex);
  }
  return out;
}

void write_filtration(std::ostream& os, const Filtration& f) {
  const auto old = os.precision(17);
  for (const auto& e : f.entries()) {
    os << e.value << ' ' << e.simplex.dim();
    for (auto v : e.simplex.vertices()) os << ' ' << v;
    os << '\n';
  }
  os.precision(old);
}

}  // namespace rholes
