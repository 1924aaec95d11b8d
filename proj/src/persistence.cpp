#include "rholes/persistence.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "rholes/gf2.hpp"

namespace rholes {

Chain::Chain(std::vector<Simplex> simplices) {
  std::sort(simplices.begin(), simplices.end());
  for (std::size_t k = 0; k < simplices.size();) {
    std::size_t run = k;
    while (run < simplices.size() && simplices[run] == simplices[k]) ++run;
    if ((run - k) % 2 == 1) simplices_.push_back(simplices[k]);
    k = run;
  }
  if (!simplices_.empty() && simplices_.front().dim() != simplices_.back().dim())
    throw std::invalid_argument("Chain: simplices of mixed dimension");
}

Chain Chain::boundary() const {
  std::vector<Simplex> faces;
  for (const auto& s : simplices_)
    for (auto& f : s.faces()) faces.push_back(f);
  return Chain(std::move(faces));
}

Chain operator+(const Chain& a, const Chain& b) {
  std::vector<Simplex> all(a.simplices_);
  all.insert(all.end(), b.simplices_.begin(), b.simplices_.end());
  return Chain(std::move(all));
}

std::vector<std::size_t> Diagram::reported() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (!pairs[k].essential() && pairs[k].lifespan() > 0.0) out.push_back(k);
  return out;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  // Keeps the smaller root so every component is named by its least vertex.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

using Column = std::vector<std::uint32_t>;  // edge ranks, ascending

void add_into(Column& col, const Column& other, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(), std::back_inserter(scratch));
  col.swap(scratch);
}

// Path between u and v in a forest given as adjacency lists, as edges.
std::vector<Simplex> forest_path(const std::vector<std::vector<Vertex>>& adj, Vertex u, Vertex v) {
  std::unordered_map<Vertex, Vertex> prev;
  std::queue<Vertex> frontier;
  prev.emplace(u, u);
  frontier.push(u);
  while (!frontier.empty() && !prev.count(v)) {
    Vertex x = frontier.front();
    frontier.pop();
    for (Vertex y : adj[x])
      if (prev.emplace(y, x).second) frontier.push(y);
  }
  std::vector<Simplex> path;
  if (!prev.count(v)) return path;
  for (Vertex x = v; x != u; x = prev[x]) path.emplace_back(x, prev[x]);
  return path;
}

}  // namespace

PersistenceResult compute_persistence(const Filtration& f) {
  const std::size_t n = f.n_vertices();
  PersistenceResult out;
  out.h0.q = 0;
  out.h1.q = 1;
  out.h0.death_cap = out.h1.death_cap = f.t_max();

  // Edge ranks in filtration order.
  std::vector<std::size_t> edge_pos;
  std::unordered_map<std::uint64_t, std::uint32_t> edge_rank;
  auto key = [n](Vertex a, Vertex b) { return static_cast<std::uint64_t>(a) * n + b; };
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto& s = f[k].simplex;
    if (s.dim() != 1) continue;
    edge_rank.emplace(key(s[0], s[1]), static_cast<std::uint32_t>(edge_pos.size()));
    edge_pos.push_back(k);
  }
  const std::size_t n_edges = edge_pos.size();

  // Degree 0.
  std::vector<bool> kills_component(n_edges, false);
  {
    UnionFind uf(n);
    for (std::size_t e = 0; e < n_edges; ++e) {
      const auto& s = f[edge_pos[e]].simplex;
      if (uf.unite(s[0], s[1])) {
        kills_component[e] = true;
        PersistencePair p;
        p.q = 0;
        p.birth = 0.0;
        p.death = f[edge_pos[e]].value;
        p.death_index = edge_pos[e];
        out.h0.pairs.push_back(std::move(p));
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (uf.find(v) != v) continue;
      PersistencePair p;
      p.q = 0;
      p.birth_index = v;  // vertices lead the filtration in index order
      p.representative = Chain({Simplex(static_cast<Vertex>(v))});
      out.h0.pairs.push_back(std::move(p));
    }
  }

  // Degree 1.
  constexpr std::uint32_t kNoPivot = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> pivot_of(n_edges, kNoPivot);
  std::vector<Column> reduced;
  Column col, scratch;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto& s = f[k].simplex;
    if (s.dim() != 2) continue;
    col = {edge_rank.at(key(s[0], s[1])), edge_rank.at(key(s[0], s[2])), edge_rank.at(key(s[1], s[2]))};
    std::sort(col.begin(), col.end());
    while (!col.empty() && pivot_of[col.back()] != kNoPivot) add_into(col, reduced[pivot_of[col.back()]], scratch);
    if (col.empty()) continue;

    const std::uint32_t low = col.back();
    pivot_of[low] = static_cast<std::uint32_t>(reduced.size());
    PersistencePair p;
    p.q = 1;
    p.birth = f[edge_pos[low]].value;
    p.death = f[k].value;
    p.birth_index = edge_pos[low];
    p.death_index = k;
    std::vector<Simplex> edges;
    edges.reserve(col.size());
    for (auto e : col) edges.push_back(f[edge_pos[e]].simplex);
    p.representative = Chain(std::move(edges));
    out.h1.pairs.push_back(std::move(p));
    reduced.push_back(col);
  }

  // Essential degree-1 classes: edges that neither merge components nor get
  // paired with a triangle.
  std::vector<std::vector<Vertex>> forest(n);
  for (std::size_t e = 0; e < n_edges; ++e) {
    const auto& s = f[edge_pos[e]].simplex;
    if (kills_component[e]) {
      forest[s[0]].push_back(s[1]);
      forest[s[1]].push_back(s[0]);
      continue;
    }
    if (pivot_of[e] != kNoPivot) continue;
    PersistencePair p;
    p.q = 1;
    p.birth = f[edge_pos[e]].value;
    p.birth_index = edge_pos[e];
    auto path = forest_path(forest, s[0], s[1]);
    path.push_back(s);
    p.representative = Chain(std::move(path));
    out.h1.pairs.push_back(std::move(p));
  }
  return out;
}

std::size_t homology_rank(std::span<const Simplex> complex, int q) {
  if (q != 0 && q != 1) throw std::invalid_argument("homology_rank: degree must be 0 or 1");
  std::map<Simplex, std::size_t> index[3];
  for (const auto& s : complex) index[s.dim()].try_emplace(s, index[s.dim()].size());
  // Renumber in sorted order so row indices are stable.
  for (auto& level : index) {
    std::size_t k = 0;
    for (auto& [s, i] : level) i = k++;
  }
  for (int d = 1; d <= 2; ++d)
    for (const auto& [s, i] : index[d])
      for (const auto& face : s.faces())
        if (!index[d - 1].count(face)) throw std::invalid_argument("homology_rank: complex is not closed under faces");

  auto boundary_rank = [&](int d) -> std::size_t {
    if (d < 1 || d > 2) return 0;
    Gf2Basis basis(index[d - 1].size());
    for (const auto& [s, i] : index[d]) {
      Gf2Vector v(index[d - 1].size());
      for (const auto& face : s.faces()) v.flip(index[d - 1].at(face));
      basis.insert(std::move(v));
    }
    return basis.rank();
  };
  return index[q].size() - boundary_rank(q) - boundary_rank(q + 1);
}

bool verify_representative(const Filtration& f, const PersistencePair& pair, const Chain& c, bool all_thresholds) {
  if (c.empty()) return false;
  if (c.dim() != pair.q) throw std::invalid_argument("verify_representative: chain dimension differs from pair degree");
  const int q = pair.q;
  if (q != 0 && q != 1) throw std::invalid_argument("verify_representative: degree must be 0 or 1");

  std::map<Simplex, double> value;
  std::map<Simplex, std::size_t> row;  // q-simplices, numbered in filtration order
  for (const auto& e : f.entries()) {
    if (e.simplex.dim() == q) row.emplace(e.simplex, row.size());
    if (e.simplex.dim() == q || e.simplex.dim() == q + 1) value.emplace(e.simplex, e.value);
  }

  // (i) created exactly at birth.
  double newest = -kInfinity;
  for (const auto& s : c.simplices()) {
    auto it = value.find(s);
    if (it == value.end()) return false;
    newest = std::max(newest, it->second);
  }
  if (newest != pair.birth) return false;
  // (ii) a cycle.
  if (!c.boundary().empty()) return false;

  Gf2Vector target(row.size());
  for (const auto& s : c.simplices()) target.flip(row.at(s));

  std::vector<double> alive_at;
  const double end = pair.essential() ? f.t_max() : pair.death;
  if (all_thresholds) {
    for (const auto& e : f.entries())
      if (e.value >= pair.birth && (e.value < end || (pair.essential() && e.value <= end))) alive_at.push_back(e.value);
    alive_at.push_back(pair.birth);
  } else {
    alive_at = {pair.birth, pair.birth + (end - pair.birth) / 2};
  }
  std::sort(alive_at.begin(), alive_at.end());
  alive_at.erase(std::unique(alive_at.begin(), alive_at.end()), alive_at.end());

  // Sweep the (q+1)-simplices in filtration order, growing the boundary space.
  Gf2Basis boundaries(row.size());
  std::size_t next = 0;
  const auto& entries = f.entries();
  auto advance_to = [&](double t) {
    for (; next < entries.size() && entries[next].value <= t; ++next) {
      if (entries[next].simplex.dim() != q + 1) continue;
      Gf2Vector v(row.size());
      for (const auto& face : entries[next].simplex.faces()) v.flip(row.at(face));
      boundaries.insert(std::move(v));
    }
  };
  // (iii) nonzero class while alive.
  for (double t : alive_at) {
    if (t > f.t_max()) break;
    advance_to(t);
    if (boundaries.contains(target)) return false;
  }
  // (iv) zero class from death on.
  if (!pair.essential()) {
    advance_to(pair.death);
    if (!boundaries.contains(target)) return false;
  }
  return true;
}

}  // namespace rholes
