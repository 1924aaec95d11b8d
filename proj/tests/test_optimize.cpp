#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "rholes/optimize.hpp"
#include "rholes/complex.hpp"
#include "rholes/random.hpp"

using namespace rholes;

namespace {

// Recipes {a,b} and {c}; d is known but used by no recipe.
Corpus desk_corpus() {
  Corpus c = build_corpus(parse_dataset("X,a,b\nX,c"));
  c.vocab.intern("d");
  return c;
}

IngredientSet named(const Corpus& c, std::vector<std::string> names) { return c.ids(names); }

struct RandomCase {
  Corpus corpus;
  IngredientSet candidates;
  std::size_t nu;
};

RandomCase random_case(Rng& rng) {
  const std::size_t vocab = 8 + rng.below(13);
  const std::size_t s = 2 + rng.below(std::min<std::size_t>(14, vocab - 1));
  const std::size_t nu = 2 + rng.below(std::min<std::size_t>(3, s - 1));
  const std::size_t recipes = 1 + rng.below(40);
  std::vector<RawRecipe> raw;
  for (std::size_t r = 0; r < recipes; ++r) {
    RawRecipe x{"R", {}};
    const std::size_t size = 1 + rng.below(6);
    for (std::size_t k = 0; k < size; ++k) {
      auto name = "i" + std::to_string(rng.below(vocab));
      if (std::find(x.ingredients.begin(), x.ingredients.end(), name) == x.ingredients.end())
        x.ingredients.push_back(name);
    }
    raw.push_back(std::move(x));
  }
  RandomCase rc{build_corpus(raw), {}, nu};
  for (std::size_t k = 0; k < vocab; ++k) rc.corpus.vocab.intern("i" + std::to_string(k));
  std::vector<IngredientId> all(rc.corpus.n_ingredients());
  for (IngredientId k = 0; k < all.size(); ++k) all[k] = k;
  rng.shuffle(std::span<IngredientId>(all));
  rc.candidates.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(s));
  std::sort(rc.candidates.begin(), rc.candidates.end());
  return rc;
}

}  // namespace

TEST_SUITE_BEGIN("optimize");

TEST_CASE("build_instance") {
  Corpus c = build_corpus(parse_dataset("R,a,c,d\nR,e\nR,a,e,f\nR,a,b"));
  c.vocab.intern("b");
  const auto S = named(c, {"a", "b"});
  const auto inst = build_instance(S, 2, c);
  CHECK(inst.s() == 2);
  REQUIRE(inst.vectors.size() == 2);
  // {a,c,d} and {a,e,f} reduce to the same constraint; {e} is dropped.
  CHECK(std::abs(inst.vectors[0][0] - 1.0 / (std::sqrt(2.0) * std::sqrt(3.0))) < 1e-15);
  CHECK(inst.vectors[0][1] == 0.0);
  CHECK(inst.origins[0] == std::vector<std::size_t>{0, 2});
  CHECK(inst.vectors[1][0] == inst.vectors[1][1]);
  CHECK(inst.origins[1] == std::vector<std::size_t>{3});
  for (const auto& v : inst.vectors) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    CHECK(norm <= 1.0 / 2 + 1e-15);
  }

  Corpus four = build_corpus(parse_dataset("R,a,b,c,d"));
  CHECK_THROWS_AS(build_instance(named(four, {"a", "b", "c", "d"}), 5, four), InsufficientCandidates);
  CHECK_THROWS_AS(build_instance(named(four, {"a", "b", "c", "d"}), 1, four), std::invalid_argument);
  CHECK_THROWS_AS(build_instance(IngredientSet{2, 1}, 2, four), std::invalid_argument);
  CHECK_THROWS_AS(build_instance(IngredientSet{1, 1, 2}, 2, four), std::invalid_argument);
}

TEST_CASE("objective") {
  const Corpus c = desk_corpus();
  CHECK(objective(named(c, {"a", "b"}), c) == 0.0);
  CHECK(objective(named(c, {"d"}), c) == 1.0);
  CHECK(objective(named(c, {"a", "d"}), c) == 0.5);
  CHECK_THROWS_AS(objective({}, c), std::invalid_argument);
}

TEST_CASE("desk instance") {
  const Corpus c = desk_corpus();
  const auto inst = build_instance(named(c, {"a", "b", "c", "d"}), 2, c);
  const std::vector<Solution> expect{{named(c, {"a", "d"}), 0.5}, {named(c, {"b", "d"}), 0.5}};

  const auto brute = solve_bruteforce(inst);
  REQUIRE(brute.size() == 2);
  CHECK(brute[0].ingredients == expect[0].ingredients);
  CHECK(brute[1].ingredients == expect[1].ingredients);
  CHECK(std::abs(brute[0].objective - 0.5) < 1e-12);

  const auto exact = solve_exact(inst, 20);
  CHECK(exact.solutions == brute);
  CHECK_FALSE(exact.more_ties);

  const auto one = solve_exact(inst, 1);
  REQUIRE(one.solutions.size() == 1);
  CHECK(one.more_ties);
  CHECK(one.solutions[0] == brute[0]);

  // Cut trace: each cut exposes the next optimum; the third falls to 1 - 1/sqrt2.
  std::vector<IngredientSet> cuts;
  auto first = solve_with_cuts(inst, cuts);
  REQUIRE(first);
  CHECK(first->ingredients == expect[0].ingredients);
  cuts.push_back(first->ingredients);
  auto second = solve_with_cuts(inst, cuts);
  REQUIRE(second);
  CHECK(second->ingredients == expect[1].ingredients);
  cuts.push_back(second->ingredients);
  auto third = solve_with_cuts(inst, cuts);
  REQUIRE(third);
  CHECK(std::abs(third->objective - fixtures::kRootHalf) < 1e-12);
  CHECK(third->objective < 0.5);

  CHECK(solve_exact(inst, 0).solutions.empty());
}

TEST_CASE("degenerate instances") {
  Corpus c = build_corpus(parse_dataset("R,z"));
  for (auto n : {"a", "b", "c", "d"}) c.vocab.intern(n);
  const auto S = named(c, {"a", "b", "c", "d"});
  const auto inst = build_instance(S, 2, c);
  CHECK(inst.vectors.empty());
  const auto all = solve_bruteforce(inst);
  CHECK(all.size() == 6);
  for (const auto& s : all) CHECK(s.objective == 1.0);
  CHECK(solve_exact(inst, 100).solutions == all);

  const auto whole = build_instance(S, 4, c);
  const auto only = solve_exact(whole, 5);
  REQUIRE(only.solutions.size() == 1);
  CHECK(only.solutions[0].ingredients == S);

  std::vector<IngredientSet> cut_all{S};
  CHECK_FALSE(solve_with_cuts(whole, cut_all));
  CHECK_THROWS_AS(solve_bruteforce(inst, 5), std::length_error);
}

TEST_CASE("random instances: implicit enumeration matches brute force") {
  Rng rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rc = random_case(rng);
    const auto inst = build_instance(rc.candidates, rc.nu, rc.corpus);
    const auto brute = solve_bruteforce(inst);
    const auto exact = solve_exact(inst, std::numeric_limits<std::size_t>::max());
    REQUIRE(!brute.empty());
    CHECK(exact.solutions.front().objective == brute.front().objective);
    CHECK(exact.solutions == brute);
    CHECK_FALSE(exact.more_ties);
    for (const auto& sol : exact.solutions) {
      CHECK(sol.ingredients.size() == rc.nu);
      CHECK(std::includes(rc.candidates.begin(), rc.candidates.end(), sol.ingredients.begin(), sol.ingredients.end()));
      CHECK(std::abs(objective(sol.ingredients, rc.corpus) - sol.objective) < 1e-9);
      CHECK(sol.objective >= 0.0);
      CHECK(sol.objective <= 1.0);
    }
    const auto capped = solve_exact(inst, 1);
    CHECK(capped.solutions.front() == brute.front());
    CHECK(capped.more_ties == (brute.size() > 1));
  }
}

TEST_CASE("an exclusion cut removes exactly its subset") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rc = random_case(rng);
    const auto inst = build_instance(rc.candidates, rc.nu, rc.corpus);
    const auto brute = solve_bruteforce(inst);
    // Cutting the first optimum leaves the rest of the tie set reachable.
    std::vector<IngredientSet> cuts{brute.front().ingredients};
    const auto next = solve_with_cuts(inst, cuts);
    if (brute.size() > 1) {
      REQUIRE(next);
      CHECK(next->ingredients == brute[1].ingredients);
    } else if (next) {
      CHECK(next->objective < brute.front().objective);
    }
  }
}

TEST_CASE("suggest caps and skips small cycles") {
  const Corpus c = fixtures::example21();
  const auto r = compute_persistence(vr_filtration(dissimilarity_matrix(c), 1.0));
  SuggestOptions opt;
  opt.top_fraction = 1.0;
  opt.nu = 2;
  opt.max_per_cycle = 2;
  const auto s = suggest(c, r.h1, opt);
  CHECK(!s.empty());
  CHECK(s.size() <= 2);
  for (const auto& x : s) {
    CHECK(x.solution.ingredients.size() == 2);
    CHECK(x.source_pairs == std::vector<std::size_t>{r.h1.reported().front()});
    CHECK(x.solution.objective == objective(x.solution.ingredients, c));
  }
  opt.nu = 5;
  CHECK(suggest(c, r.h1, opt).empty());
}

TEST_CASE("suggested objectives are exact") {
  const Corpus c = build_corpus(parse_dataset(fixtures::data_text("ring_recipes.csv")));
  const auto m = dissimilarity_matrix(c);
  const auto r = compute_persistence(vr_filtration(m, 1.0));
  SuggestOptions opt;
  opt.top_fraction = 1.0;
  opt.nu = 3;
  opt.max_per_cycle = 5;
  const auto s = suggest(c, r.h1, opt);
  CHECK(s.size() > 10);
  for (const auto& x : s) CHECK(x.solution.objective == objective(x.solution.ingredients, c));
}

TEST_SUITE_END();
