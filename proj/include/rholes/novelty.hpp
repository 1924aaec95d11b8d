#pragma once

// Novelty of suggested combinations against the corpus, ingredient frequency
// tables, and a discrete power-law fit for frequency distributions.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rholes/corpus.hpp"

namespace rholes {

// The two flags are not exclusive across the corpus: a set can equal one
// recipe and be a proper subset of another.
struct NoveltyLabel {
  bool is_existing = false;
  bool is_strict_sub = false;

  friend bool operator==(const NoveltyLabel&, const NoveltyLabel&) = default;
};

// Inverted ingredient → recipe index. Only recipes containing the query's
// rarest ingredient are scanned.
class NoveltyIndex {
 public:
  explicit NoveltyIndex(const Corpus& corpus);
  NoveltyLabel classify(const IngredientSet& y) const;
  std::vector<NoveltyLabel> classify_all(std::span<const IngredientSet> ys) const;

 private:
  const Corpus* corpus_;
  std::vector<std::vector<std::uint32_t>> postings_;
};

NoveltyLabel classify(const IngredientSet& y, const Corpus& corpus);
// Reference: scans every recipe.
NoveltyLabel classify_naive(const IngredientSet& y, const Corpus& corpus);

struct FreqTable {
  std::vector<std::uint64_t> counts;  // per ingredient id
  std::uint64_t total = 0;
  std::vector<double> relative() const;
};

struct FrequencyTables {
  FreqTable corpus;
  FreqTable suggestions;
  // Ingredient ids by corpus count descending, ties by id.
  std::vector<IngredientId> order;
  bool suggestions_empty = true;
};

FrequencyTables frequency_tables(const Corpus& corpus, std::span<const IngredientSet> solutions);

struct PowerLawFit {
  double alpha = 0.0;
  std::uint64_t x_min = 0;
  std::size_t n_tail = 0;
  double ks = 0.0;
};

inline constexpr std::size_t kMinTail = 10;

// Discrete power law p(x) ~ x^-alpha for x >= x_min. For every observed value
// as x_min, alpha is the approximate discrete maximum-likelihood estimate
//   alpha = 1 + n / sum ln(x_i / (x_min - 1/2)),
// and the x_min whose fitted tail is closest to the data in
// Kolmogorov–Smirnov distance wins. A candidate tail needs at least kMinTail
// points and two distinct values; throws std::invalid_argument when none does.
PowerLawFit fit_power_law(std::span<const std::uint64_t> observations);

// Complementary CDF P(X >= x) of the discrete power law, x >= x_min.
double power_law_ccdf(double alpha, std::uint64_t x_min, std::uint64_t x);

}  // namespace rholes
