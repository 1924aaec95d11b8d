#include "rholes/cycleops.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace rholes {

namespace {

VertexCycle normalized(VertexCycle cyc) {
  auto least = std::min_element(cyc.begin(), cyc.end());
  std::rotate(cyc.begin(), least, cyc.end());
  if (cyc.size() > 2 && cyc.back() < cyc[1]) std::reverse(cyc.begin() + 1, cyc.end());
  return cyc;
}

std::size_t symmetric_difference_size(const IngredientSet& a, const IngredientSet& b) {
  return a.size() + b.size() - 2 * shared_count(a, b);
}

}  // namespace

std::vector<VertexCycle> decompose_simple(const Chain& c) {
  if (c.dim() > 1 || c.dim() == 0) throw std::invalid_argument("decompose_simple: expected a chain of edges");
  std::map<Vertex, std::set<Vertex>> adj;
  for (const auto& e : c.simplices()) {
    adj[e[0]].insert(e[1]);
    adj[e[1]].insert(e[0]);
  }
  for (const auto& [v, nb] : adj)
    if (nb.size() % 2 != 0)
      throw std::invalid_argument("decompose_simple: vertex " + std::to_string(v) + " has odd degree");

  std::vector<VertexCycle> out;
  for (;;) {
    auto start = std::find_if(adj.begin(), adj.end(), [](const auto& kv) { return !kv.second.empty(); });
    if (start == adj.end()) break;
    VertexCycle path{start->first};
    std::map<Vertex, std::size_t> position{{start->first, 0}};
    Vertex cur = start->first;
    while (!adj[cur].empty()) {
      const Vertex next = *adj[cur].begin();
      adj[cur].erase(next);
      adj[next].erase(cur);
      auto hit = position.find(next);
      if (hit == position.end()) {
        position.emplace(next, path.size());
        path.push_back(next);
      } else {
        const std::size_t p = hit->second;
        out.push_back(normalized(VertexCycle(path.begin() + static_cast<std::ptrdiff_t>(p), path.end())));
        for (std::size_t k = p + 1; k < path.size(); ++k) position.erase(path[k]);
        path.resize(p + 1);
      }
      cur = next;
    }
  }
  return out;
}

IngredientSet candidate_set(const Corpus& corpus, std::span<const std::size_t> recipes) {
  IngredientSet s;
  for (auto r : recipes) s.insert(s.end(), corpus.set(r).begin(), corpus.set(r).end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

std::vector<double> centroid(const Corpus& corpus, std::span<const std::size_t> recipes) {
  const auto support = candidate_set(corpus, recipes);
  std::vector<double> c(support.size(), 0.0);
  for (auto r : recipes)
    for (auto id : corpus.set(r))
      c[static_cast<std::size_t>(std::lower_bound(support.begin(), support.end(), id) - support.begin())] += 1.0;
  for (auto& x : c) x /= static_cast<double>(recipes.size());
  return c;
}

CycleReport cycle_report(const Chain& c, const PersistencePair& pair, const Corpus& corpus,
                         std::span<const std::size_t> vertex_to_recipe) {
  auto to_recipe = [&](Vertex v) -> std::size_t {
    const std::size_t r = vertex_to_recipe.empty() ? v : vertex_to_recipe[v];
    if (r >= corpus.n_recipes()) throw std::out_of_range("cycle_report: vertex outside the corpus");
    return r;
  };
  CycleReport rep;
  rep.pair = pair;
  for (const auto& cyc : decompose_simple(c)) {
    CycleComponent comp;
    for (Vertex v : cyc) comp.recipes.push_back(static_cast<Vertex>(to_recipe(v)));
    std::vector<std::size_t> members(comp.recipes.begin(), comp.recipes.end());
    comp.candidates = candidate_set(corpus, members);
    for (auto r : members)
      if (std::find(rep.recipe_indices.begin(), rep.recipe_indices.end(), r) == rep.recipe_indices.end())
        rep.recipe_indices.push_back(r);
    rep.components.push_back(std::move(comp));
  }
  if (rep.components.empty()) throw std::invalid_argument("cycle_report: empty cycle");

  rep.candidates = candidate_set(corpus, rep.recipe_indices);
  rep.centroid = centroid(corpus, rep.recipe_indices);
  for (auto r : rep.recipe_indices)
    for (const auto& region : corpus.recipes[r].regions) ++rep.region_profile[region];
  const auto& first = rep.components.front().recipes;
  for (std::size_t k = 0; k < first.size(); ++k)
    rep.edit_profile.push_back(
        symmetric_difference_size(corpus.set(first[k]), corpus.set(first[(k + 1) % first.size()])));
  return rep;
}

std::vector<std::size_t> select_top_cycles(const Diagram& diagram, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("select_top_cycles: fraction must lie in (0, 1]");
  auto idx = diagram.reported();
  const auto want = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(idx.size()) - 1e-9));
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = diagram.pairs[a];
    const auto& pb = diagram.pairs[b];
    if (pa.lifespan() != pb.lifespan()) return pa.lifespan() > pb.lifespan();
    if (pa.birth != pb.birth) return pa.birth < pb.birth;
    return a < b;
  });
  idx.resize(std::min(want, idx.size()));
  return idx;
}

}  // namespace rholes
