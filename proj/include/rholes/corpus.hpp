#pragma once

// Recipe corpus: parsing, deduplication, vocabulary and summary statistics.
//
// A recipe is a set of ingredient names tagged with a region label. Recipes
// with identical ingredient sets are merged into one corpus entry whose
// regions form a multiset, so region totals can exceed the recipe count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rholes {

using IngredientId = std::uint32_t;

// Sorted, duplicate-free ingredient indices. Doubles as the sparse form of a
// recipe's one-hot vector.
using IngredientSet = std::vector<IngredientId>;

struct RawRecipe {
  std::string region;
  std::vector<std::string> ingredients;  // unique, in file order
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Lines are `region<delim>ingredient<delim>...`. Lines starting with '#' and
// blank lines are skipped; repeated names within a line collapse.
std::vector<RawRecipe> parse_dataset(std::string_view text, char delimiter = ',');

class Vocabulary {
 public:
  IngredientId intern(const std::string& name);
  std::optional<IngredientId> find(std::string_view name) const;
  const std::string& name(IngredientId id) const { return names_.at(id); }
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, IngredientId> index_;
};

struct Recipe {
  IngredientSet ingredients;
  std::vector<std::string> regions;  // multiset, one entry per merged raw recipe
};

struct Corpus {
  Vocabulary vocab;
  std::vector<Recipe> recipes;

  std::size_t n_recipes() const noexcept { return recipes.size(); }
  std::size_t n_ingredients() const noexcept { return vocab.size(); }
  const IngredientSet& set(std::size_t i) const { return recipes[i].ingredients; }

  // Ingredient ids for names; throws std::out_of_range on unknown names.
  IngredientSet ids(std::span<const std::string> names) const;
  std::vector<std::string> names(const IngredientSet& set) const;
};

// Vocabulary indices follow first appearance; recipes keep the order in which
// their ingredient set first appears.
Corpus build_corpus(std::span<const RawRecipe> raw);

// Recipes at `indices` (in that order) over the same vocabulary. The result
// may contain vocabulary entries no selected recipe uses.
Corpus extract(const Corpus& corpus, std::span<const std::size_t> indices);

struct CorpusStats {
  std::size_t n_recipes = 0;
  std::size_t n_ingredients = 0;
  double mean_ingredients = 0.0;
  double stddev_ingredients = 0.0;  // population
};

CorpusStats corpus_stats(const Corpus& corpus);

// n Bernoulli(p) bitstreams of length m (all-zero draws redrawn), named
// "b<k>" for coordinate k, region "synthetic", deduplicated like build_corpus.
Corpus synthetic_corpus(std::uint64_t seed, std::size_t n, std::size_t m, double p);

// Serialize back to the dataset format, one line per region entry.
std::string to_dataset_text(const Corpus& corpus, char delimiter = ',');

}  // namespace rholes
