#include "rholes/dissim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rholes/random.hpp"

namespace rholes {

namespace {

double from_counts(std::size_t shared, std::size_t a, std::size_t b) {
  return 1.0 - static_cast<double>(shared) /
                   std::sqrt(static_cast<double>(a) * static_cast<double>(b));
}

std::vector<std::size_t> resolve_subset(const Corpus& corpus,
                                        std::optional<std::span<const std::size_t>> subset,
                                        std::size_t cap) {
  std::vector<std::size_t> idx;
  if (subset) {
    idx.assign(subset->begin(), subset->end());
    for (auto i : idx)
      if (i >= corpus.n_recipes()) throw std::out_of_range("dissimilarity_matrix: recipe index out of range");
  } else {
    idx.resize(corpus.n_recipes());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
  }
  if (idx.size() > cap)
    throw std::length_error("dissimilarity_matrix: " + std::to_string(idx.size()) +
                            " points exceed the materialization cap of " + std::to_string(cap));
  return idx;
}

struct Moments {
  double sum = 0.0;
  double sumsq = 0.0;
  std::uint64_t count = 0;
  std::uint64_t at_one = 0;

  void add(double d) {
    sum += d;
    sumsq += d * d;
    ++count;
    if (d >= 1.0 - kAtOneTolerance) ++at_one;
  }
  PairStats finish() const {
    PairStats st;
    st.total_pairs = count;
    st.count_at_one = at_one;
    if (count == 0) return st;
    const double n = static_cast<double>(count);
    st.mean = sum / n;
    st.stddev = std::sqrt(std::max(0.0, sumsq / n - st.mean * st.mean));
    return st;
  }
};

}  // namespace

double cosine_dissimilarity(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("cosine_dissimilarity: length mismatch");
  double xy = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    xy += x[k] * y[k];
    xx += x[k] * x[k];
    yy += y[k] * y[k];
  }
  if (xx == 0.0 || yy == 0.0) throw std::invalid_argument("cosine_dissimilarity: zero vector");
  return 1.0 - xy / std::sqrt(xx * yy);
}

std::size_t shared_count(const IngredientSet& x, const IngredientSet& y) {
  std::size_t k = 0;
  auto a = x.begin(), b = y.begin();
  while (a != x.end() && b != y.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++k, ++a, ++b;
    }
  }
  return k;
}

double cosine_dissimilarity(const IngredientSet& x, const IngredientSet& y) {
  if (x.empty() || y.empty()) throw std::invalid_argument("cosine_dissimilarity: zero vector");
  return from_counts(shared_count(x, y), x.size(), y.size());
}

DissimKernel::DissimKernel(const Corpus& corpus) {
  words_ = (corpus.n_ingredients() + 63) / 64;
  bits_.assign(words_ * corpus.n_recipes(), 0);
  sizes_.resize(corpus.n_recipes());
  for (std::size_t i = 0; i < corpus.n_recipes(); ++i) {
    const auto& s = corpus.set(i);
    if (s.empty()) throw std::invalid_argument("DissimKernel: empty recipe");
    sizes_[i] = static_cast<std::uint32_t>(s.size());
    for (auto id : s) bits_[i * words_ + id / 64] |= std::uint64_t{1} << (id % 64);
  }
}

std::size_t DissimKernel::shared(std::size_t i, std::size_t j) const {
  const std::uint64_t* a = bits_.data() + i * words_;
  const std::uint64_t* b = bits_.data() + j * words_;
  std::size_t k = 0;
  for (std::size_t w = 0; w < words_; ++w) k += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
  return k;
}

double DissimKernel::operator()(std::size_t i, std::size_t j) const {
  return from_counts(shared(i, j), sizes_[i], sizes_[j]);
}

DissimMatrix DissimMatrix::from_values(std::size_t n, std::vector<double> values) {
  if (values.size() != n * n) throw std::invalid_argument("DissimMatrix: expected n*n values");
  DissimMatrix m;
  m.n_ = n;
  m.values_ = std::move(values);
  for (std::size_t i = 0; i < n; ++i) {
    if (m(i, i) != 0.0) throw std::invalid_argument("DissimMatrix: nonzero diagonal");
    for (std::size_t j = i + 1; j < n; ++j)
      if (m(i, j) != m(j, i)) throw std::invalid_argument("DissimMatrix: not symmetric");
  }
  return m;
}

DissimMatrix dissimilarity_matrix(const Corpus& corpus,
                                  std::optional<std::span<const std::size_t>> subset,
                                  std::size_t cap) {
  const auto idx = resolve_subset(corpus, subset, cap);
  const DissimKernel kernel(corpus);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(idx.size());
  DissimMatrix m(idx.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    for (std::ptrdiff_t j = i + 1; j < n; ++j)
      m.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), kernel(idx[i], idx[j]));
  return m;
}

DissimMatrix dissimilarity_matrix_serial(const Corpus& corpus,
                                         std::optional<std::span<const std::size_t>> subset,
                                         std::size_t cap) {
  const auto idx = resolve_subset(corpus, subset, cap);
  DissimMatrix m(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      m.set(i, j, cosine_dissimilarity(corpus.set(idx[i]), corpus.set(idx[j])));
  return m;
}

void DissimHistogram::add(double d) {
  if (d >= 1.0 - kAtOneTolerance) {
    ++at_one;
    return;
  }
  auto bin = static_cast<std::size_t>(std::max(0.0, d) / kBinWidth);
  counts[std::min(bin, kBins - 1)] += 1;
}

void DissimHistogram::merge(const DissimHistogram& other) {
  for (std::size_t b = 0; b < kBins; ++b) counts[b] += other.counts[b];
  at_one += other.at_one;
}

PairStats pairwise_stats(const DissimMatrix& m) {
  if (m.size() < 2) throw std::invalid_argument("pairwise_stats: need at least two points");
  Moments acc;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) acc.add(m(i, j));
  return acc.finish();
}

PairSummary pairwise_summary(const Corpus& corpus) {
  const std::size_t n = corpus.n_recipes();
  if (n < 2) throw std::invalid_argument("pairwise_summary: need at least two recipes");
  const DissimKernel kernel(corpus);
  std::vector<Moments> rows(n);
  std::vector<DissimHistogram> hists;
#pragma omp parallel
  {
    DissimHistogram local;
#pragma omp for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      Moments acc;
      for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) {
        const double d = kernel(static_cast<std::size_t>(i), j);
        acc.add(d);
        local.add(d);
      }
      rows[static_cast<std::size_t>(i)] = acc;
    }
#pragma omp critical
    hists.push_back(std::move(local));
  }
  // Integer histogram counts are order-independent; the floating sums are
  // merged in row order.
  Moments total;
  for (const auto& r : rows) {
    total.sum += r.sum;
    total.sumsq += r.sumsq;
    total.count += r.count;
    total.at_one += r.at_one;
  }
  PairSummary out;
  out.stats = total.finish();
  for (const auto& h : hists) out.histogram.merge(h);
  return out;
}

PairSummary pairwise_summary_serial(const Corpus& corpus) {
  const std::size_t n = corpus.n_recipes();
  if (n < 2) throw std::invalid_argument("pairwise_summary: need at least two recipes");
  Moments acc;
  PairSummary out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = cosine_dissimilarity(corpus.set(i), corpus.set(j));
      acc.add(d);
      out.histogram.add(d);
    }
  out.stats = acc.finish();
  return out;
}

PairStats random_pairing_stats(const Corpus& corpus, std::uint64_t seed) {
  const std::size_t n = corpus.n_recipes();
  if (n < 2) throw std::invalid_argument("random_pairing_stats: need at least two recipes");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  Moments acc;
  for (std::size_t k = 0; k + 1 < n; k += 2)
    acc.add(cosine_dissimilarity(corpus.set(order[k]), corpus.set(order[k + 1])));
  return acc.finish();
}

double BitstreamMoments::stddev() const { return std::sqrt(variance); }

BitstreamMoments bitstream_moments(double p, double q, std::size_t m) {
  if (!(p > 0.0 && p < 1.0) || !(q > 0.0 && q < 1.0))
    throw std::invalid_argument("bitstream_moments: p and q must lie in (0, 1)");
  if (m == 0) throw std::invalid_argument("bitstream_moments: m must be positive");
  BitstreamMoments out;
  out.expected = 1.0 - std::sqrt(p * q);
  out.variance = (4.0 - 3.0 * p - 3.0 * q + 2.0 * p * q) / (4.0 * static_cast<double>(m));
  return out;
}

}  // namespace rholes
