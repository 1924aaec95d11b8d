#pragma once

// From degree-1 representative cycles to recipe-level analysis objects.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rholes/corpus.hpp"
#include "rholes/dissim.hpp"
#include "rholes/persistence.hpp"

namespace rholes {

// Vertices around a simple cycle, starting at its least vertex and heading
// to the smaller of that vertex's two neighbours.
using VertexCycle = std::vector<Vertex>;

// Splits a 1-cycle into edge-disjoint simple cycles whose sum is the input.
// Deterministic: walks start at the least vertex with unused edges and always
// take the least unused neighbour. Throws std::invalid_argument when a vertex
// has odd degree.
std::vector<VertexCycle> decompose_simple(const Chain& c);

struct CycleComponent {
  VertexCycle recipes;  // corpus indices, cyclic order
  IngredientSet candidates;
};

struct CycleReport {
  PersistencePair pair;
  std::vector<std::size_t> recipe_indices;  // corpus indices, distinct
  IngredientSet candidates;                 // S: union of the recipes' ingredients
  std::vector<double> centroid;             // aligned with `candidates`
  std::map<std::string, std::size_t> region_profile;
  std::vector<std::size_t> edit_profile;  // |r_i Δ r_i+1| around the first simple component
  std::vector<CycleComponent> components;
};

// `vertex_to_recipe` maps filtration vertices to corpus indices; identity
// when empty.
CycleReport cycle_report(const Chain& c, const PersistencePair& pair, const Corpus& corpus,
                         std::span<const std::size_t> vertex_to_recipe = {});

// Union of the ingredient sets of `recipes`.
IngredientSet candidate_set(const Corpus& corpus, std::span<const std::size_t> recipes);

// Mean of the recipes' one-hot vectors, restricted to candidate_set's support.
std::vector<double> centroid(const Corpus& corpus, std::span<const std::size_t> recipes);

// Indices into diagram.pairs of the ceil(fraction * count) longest-lived
// finite pairs with positive lifespan. Order: lifespan descending, then birth
// ascending, then index.
std::vector<std::size_t> select_top_cycles(const Diagram& diagram, double fraction);

}  // namespace rholes
