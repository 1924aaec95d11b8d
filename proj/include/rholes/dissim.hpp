#pragma once

// Cosine dissimilarity between recipes and pair statistics over a corpus.
//
// For one-hot recipe vectors the dot product is the number of shared
// ingredients, so d(x, y) = 1 - |x ∩ y| / sqrt(|x| |y|), which lies in [0, 1]
// and equals 1 exactly when the recipes share nothing.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rholes/corpus.hpp"

namespace rholes {

// Dense form, for arbitrary nonzero real vectors. Throws on a zero vector.
double cosine_dissimilarity(std::span<const double> x, std::span<const double> y);

// Sparse 0-1 form over sorted ingredient sets. Throws on an empty set.
double cosine_dissimilarity(const IngredientSet& x, const IngredientSet& y);

std::size_t shared_count(const IngredientSet& x, const IngredientSet& y);

// Pair kernel over a corpus: recipes packed as bit rows so that a pair costs
// a handful of popcounts.
class DissimKernel {
 public:
  explicit DissimKernel(const Corpus& corpus);

  std::size_t size() const noexcept { return sizes_.size(); }
  std::size_t shared(std::size_t i, std::size_t j) const;
  double operator()(std::size_t i, std::size_t j) const;

 private:
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> sizes_;
};

// Symmetric matrix with zero diagonal, stored densely.
class DissimMatrix {
 public:
  DissimMatrix() = default;
  explicit DissimMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  // Row-major n*n values; throws unless symmetric with zero diagonal.
  static DissimMatrix from_values(std::size_t n, std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * n_ + j] = v;
    values_[j * n_ + i] = v;
  }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * n_, n_}; }
  const std::vector<double>& values() const noexcept { return values_; }

  friend bool operator==(const DissimMatrix&, const DissimMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

inline constexpr std::size_t kDefaultMatrixCap = 5000;

// Matrix over the recipes in `subset` (all recipes when absent). Refuses to
// materialize more than `cap` points; use the streaming statistics instead.
DissimMatrix dissimilarity_matrix(const Corpus& corpus,
                                  std::optional<std::span<const std::size_t>> subset = std::nullopt,
                                  std::size_t cap = kDefaultMatrixCap);
DissimMatrix dissimilarity_matrix_serial(const Corpus& corpus,
                                         std::optional<std::span<const std::size_t>> subset = std::nullopt,
                                         std::size_t cap = kDefaultMatrixCap);

// Values within this distance of 1 count as "no shared ingredient".
inline constexpr double kAtOneTolerance = 1e-12;

struct PairStats {
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::uint64_t count_at_one = 0;
  std::uint64_t total_pairs = 0;
};

// Bins of width 0.01 over [0, 1); pairs at 1 are counted separately.
struct DissimHistogram {
  static constexpr double kBinWidth = 0.01;
  static constexpr std::size_t kBins = 100;
  std::vector<std::uint64_t> counts = std::vector<std::uint64_t>(kBins, 0);
  std::uint64_t at_one = 0;

  void add(double d);
  void merge(const DissimHistogram& other);
};

struct PairSummary {
  PairStats stats;
  DissimHistogram histogram;
};

PairStats pairwise_stats(const DissimMatrix& m);

// All n(n-1)/2 unordered pairs of the corpus without materializing a matrix.
// Rows are reduced independently and merged in row order, so the result does
// not depend on the thread count.
PairSummary pairwise_summary(const Corpus& corpus);
PairSummary pairwise_summary_serial(const Corpus& corpus);

// floor(N/2) disjoint pairs from a seeded shuffle, paired consecutively.
PairStats random_pairing_stats(const Corpus& corpus, std::uint64_t seed);

struct BitstreamMoments {
  double expected = 0.0;
  double variance = 0.0;
  double stddev() const;
};

// Approximate mean and variance of d between independent Bernoulli(p) and
// Bernoulli(q) bitstreams of length m.
BitstreamMoments bitstream_moments(double p, double q, std::size_t m);

}  // namespace rholes
