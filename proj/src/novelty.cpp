#include "rholes/novelty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

namespace rholes {

namespace {

NoveltyLabel compare(const IngredientSet& y, const IngredientSet& x, NoveltyLabel acc) {
  if (x.size() < y.size() || !std::includes(x.begin(), x.end(), y.begin(), y.end())) return acc;
  if (x.size() == y.size())
    acc.is_existing = true;
  else
    acc.is_strict_sub = true;
  return acc;
}

double hurwitz_zeta(double s, double q) {
  gsl_sf_result r;
  if (gsl_sf_hzeta_e(s, q, &r) != GSL_SUCCESS) throw std::domain_error("hurwitz_zeta: evaluation failed");
  return r.val;
}

struct GslQuiet {
  GslQuiet() : old(gsl_set_error_handler_off()) {}
  ~GslQuiet() { gsl_set_error_handler(old); }
  gsl_error_handler_t* old;
};

}  // namespace

NoveltyIndex::NoveltyIndex(const Corpus& corpus) : corpus_(&corpus), postings_(corpus.n_ingredients()) {
  for (std::size_t r = 0; r < corpus.n_recipes(); ++r)
    for (auto id : corpus.set(r)) postings_[id].push_back(static_cast<std::uint32_t>(r));
}

NoveltyLabel NoveltyIndex::classify(const IngredientSet& y) const {
  NoveltyLabel label;
  if (y.empty()) return label;
  IngredientId rarest = y.front();
  for (auto id : y) {
    if (id >= postings_.size()) return label;
    if (postings_[id].size() < postings_[rarest].size()) rarest = id;
  }
  for (auto r : postings_[rarest]) label = compare(y, corpus_->set(r), label);
  return label;
}

std::vector<NoveltyLabel> NoveltyIndex::classify_all(std::span<const IngredientSet> ys) const {
  std::vector<NoveltyLabel> out(ys.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(ys.size()); ++k)
    out[static_cast<std::size_t>(k)] = classify(ys[static_cast<std::size_t>(k)]);
  return out;
}

NoveltyLabel classify(const IngredientSet& y, const Corpus& corpus) { return NoveltyIndex(corpus).classify(y); }

NoveltyLabel classify_naive(const IngredientSet& y, const Corpus& corpus) {
  NoveltyLabel label;
  if (y.empty()) return label;
  for (const auto& r : corpus.recipes) label = compare(y, r.ingredients, label);
  return label;
}

std::vector<double> FreqTable::relative() const {
  std::vector<double> out(counts.size(), 0.0);
  if (total == 0) return out;
  for (std::size_t k = 0; k < counts.size(); ++k) out[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  return out;
}

FrequencyTables frequency_tables(const Corpus& corpus, std::span<const IngredientSet> solutions) {
  FrequencyTables t;
  const std::size_t m = corpus.n_ingredients();
  t.corpus.counts.assign(m, 0);
  t.suggestions.counts.assign(m, 0);
  for (const auto& r : corpus.recipes)
    for (auto id : r.ingredients) ++t.corpus.counts[id], ++t.corpus.total;
  for (const auto& y : solutions)
    for (auto id : y) ++t.suggestions.counts.at(id), ++t.suggestions.total;
  t.suggestions_empty = solutions.empty();
  t.order.resize(m);
  std::iota(t.order.begin(), t.order.end(), IngredientId{0});
  std::stable_sort(t.order.begin(), t.order.end(),
                   [&](IngredientId a, IngredientId b) { return t.corpus.counts[a] > t.corpus.counts[b]; });
  return t;
}

double power_law_ccdf(double alpha, std::uint64_t x_min, std::uint64_t x) {
  GslQuiet quiet;
  return hurwitz_zeta(alpha, static_cast<double>(x)) / hurwitz_zeta(alpha, static_cast<double>(x_min));
}

PowerLawFit fit_power_law(std::span<const std::uint64_t> observations) {
  std::vector<std::uint64_t> data;
  for (auto x : observations)
    if (x > 0) data.push_back(x);
  if (data.size() < kMinTail) throw std::invalid_argument("fit_power_law: insufficient tail");
  std::sort(data.begin(), data.end());

  std::vector<std::uint64_t> values = data;
  values.erase(std::unique(values.begin(), values.end()), values.end());

  GslQuiet quiet;
  PowerLawFit best;
  best.ks = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c + 1 < values.size(); ++c) {
    const std::uint64_t x_min = values[c];
    const auto first = static_cast<std::size_t>(std::lower_bound(data.begin(), data.end(), x_min) - data.begin());
    const std::size_t n = data.size() - first;
    if (n < kMinTail) break;

    double log_sum = 0.0;
    const double shifted = static_cast<double>(x_min) - 0.5;
    for (std::size_t i = first; i < data.size(); ++i) log_sum += std::log(static_cast<double>(data[i]) / shifted);
    const double alpha = 1.0 + static_cast<double>(n) / log_sum;

    const double norm = hurwitz_zeta(alpha, static_cast<double>(x_min));
    double ks = 0.0;
    std::size_t i = first;
    for (std::size_t u = c; u < values.size(); ++u) {
      while (i < data.size() && data[i] <= values[u]) ++i;
      const double empirical = static_cast<double>(i - first) / static_cast<double>(n);
      const double fitted = 1.0 - hurwitz_zeta(alpha, static_cast<double>(values[u] + 1)) / norm;
      ks = std::max(ks, std::abs(empirical - fitted));
    }
    if (ks < best.ks) best = {alpha, x_min, n, ks};
  }
  if (best.n_tail == 0) throw std::invalid_argument("fit_power_law: insufficient tail");
  return best;
}

}  // namespace rholes
