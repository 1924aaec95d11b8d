#pragma once

// Most-novel ingredient combinations over a candidate set.
//
// For a candidate set S and size nu, find y ⊆ S with |y| = nu minimizing
//   lambda(y) = max_x  (y · x) / (|y| |x|)
// over corpus recipes x, i.e. maximizing d(y, X) = 1 - lambda(y). Restricting
// x to S and folding the norms in gives constraint vectors
//   v_x = pi_S(x) / (sqrt(nu) |x|),  lambda(y) = max_x v_x · y.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <span>
#include <vector>

#include "rholes/corpus.hpp"
#include "rholes/persistence.hpp"

namespace rholes {

// Objective values closer than this are ties.
inline constexpr double kTieTolerance = 1e-9;

struct ReducedInstance {
  IngredientSet candidates;  // S; column k is ingredient candidates[k]
  std::size_t nu = 0;
  std::vector<std::vector<double>> vectors;  // one per distinct constraint, length |S|
  std::vector<std::vector<std::size_t>> origins;  // corpus recipes behind each vector

  std::size_t s() const noexcept { return candidates.size(); }
};

class InsufficientCandidates : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Recipes disjoint from S are dropped; recipes giving identical reduced
// vectors share one entry. Throws InsufficientCandidates when |S| < nu.
ReducedInstance build_instance(const IngredientSet& candidates, std::size_t nu, const Corpus& corpus);

// d(y, X) from the raw corpus: 1 - max_x |y ∩ x| / sqrt(|y| |x|).
double objective(const IngredientSet& y, const Corpus& corpus);

struct Solution {
  IngredientSet ingredients;  // corpus ingredient ids, sorted
  double objective = 0.0;     // 1 - lambda

  friend bool operator==(const Solution&, const Solution&) = default;
};

inline constexpr std::size_t kDefaultBruteForceCap = 5'000'000;

// Every size-nu subset; returns all subsets tied at the optimum in
// lexicographic order. Throws std::length_error when C(s, nu) > cap.
std::vector<Solution> solve_bruteforce(const ReducedInstance& inst, std::size_t cap = kDefaultBruteForceCap);

// One exact solve by implicit enumeration subject to exclusion cuts
// z · y <= nu - 1. Returns the lexicographically first optimal subset, or
// nullopt when the cuts exclude every subset.
std::optional<Solution> solve_with_cuts(const ReducedInstance& inst, std::span<const IngredientSet> cuts);

struct ExactResult {
  std::vector<Solution> solutions;  // all at the optimal objective, lexicographic
  bool more_ties = false;           // stopped at the limit with ties left
};

// Solves, then re-solves with an exclusion cut per solution found until
// `limit` solutions are collected or the optimum gets strictly worse.
ExactResult solve_exact(const ReducedInstance& inst, std::size_t limit);

struct SuggestOptions {
  double top_fraction = 0.05;
  std::size_t nu = 5;
  std::size_t max_per_cycle = 20;
};

struct Suggestion {
  Solution solution;
  std::vector<std::size_t> source_pairs;  // indices into the diagram's pairs
};

// Runs solve_exact on every simple component of every selected pair's
// representative and pools the distinct solutions in cycle order. Components
// with fewer than nu candidates contribute nothing. Objectives are
// recomputed from overlap counts and agree exactly with objective().
std::vector<Suggestion> suggest(const Corpus& corpus, const Diagram& diagram, const SuggestOptions& options,
                                std::span<const std::size_t> vertex_to_recipe = {});

}  // namespace rholes
