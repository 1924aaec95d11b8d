#include "rholes/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "rholes/random.hpp"

namespace rholes {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<RawRecipe> parse_dataset(std::string_view text, char delimiter) {
  std::vector<RawRecipe> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    RawRecipe recipe;
    std::size_t field = 0;
    std::size_t start = 0;
    while (start <= line.size()) {
      auto end = line.find(delimiter, start);
      if (end == std::string_view::npos) end = line.size();
      std::string token(trim(line.substr(start, end - start)));
      if (field == 0) {
        recipe.region = std::move(token);
      } else if (!token.empty() &&
                 std::find(recipe.ingredients.begin(), recipe.ingredients.end(), token) ==
                     recipe.ingredients.end()) {
        recipe.ingredients.push_back(std::move(token));
      }
      ++field;
      start = end + 1;
    }
    if (recipe.ingredients.empty()) throw ParseError(line_no, "recipe has no ingredients");
    out.push_back(std::move(recipe));
  }
  return out;
}

IngredientId Vocabulary::intern(const std::string& name) {
  auto [it, inserted] = index_.try_emplace(name, static_cast<IngredientId>(names_.size()));
  if (inserted) names_.push_back(name);
  return it->second;
}

std::optional<IngredientId> Vocabulary::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

IngredientSet Corpus::ids(std::span<const std::string> names) const {
  IngredientSet out;
  for (const auto& n : names) {
    auto id = vocab.find(n);
    if (!id) throw std::out_of_range("unknown ingredient: " + n);
    out.push_back(*id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> Corpus::names(const IngredientSet& set) const {
  std::vector<std::string> out;
  out.reserve(set.size());
  for (auto id : set) out.push_back(vocab.name(id));
  return out;
}

Corpus build_corpus(std::span<const RawRecipe> raw) {
  if (raw.empty()) throw std::invalid_argument("build_corpus: no recipes");
  Corpus c;
  std::map<IngredientSet, std::size_t> seen;
  for (const auto& r : raw) {
    if (r.ingredients.empty()) throw std::invalid_argument("build_corpus: recipe without ingredients");
    IngredientSet s;
    s.reserve(r.ingredients.size());
    for (const auto& name : r.ingredients) s.push_back(c.vocab.intern(name));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    auto [it, inserted] = seen.try_emplace(s, c.recipes.size());
    if (inserted) c.recipes.push_back(Recipe{std::move(s), {}});
    c.recipes[it->second].regions.push_back(r.region);
  }
  return c;
}

Corpus extract(const Corpus& corpus, std::span<const std::size_t> indices) {
  Corpus out;
  out.vocab = corpus.vocab;
  out.recipes.reserve(indices.size());
  for (auto i : indices) out.recipes.push_back(corpus.recipes.at(i));
  return out;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats st;
  st.n_recipes = corpus.n_recipes();
  st.n_ingredients = corpus.n_ingredients();
  if (st.n_recipes == 0) return st;
  double sum = 0.0;
  for (const auto& r : corpus.recipes) sum += static_cast<double>(r.ingredients.size());
  st.mean_ingredients = sum / static_cast<double>(st.n_recipes);
  double sq = 0.0;
  for (const auto& r : corpus.recipes) {
    const double d = static_cast<double>(r.ingredients.size()) - st.mean_ingredients;
    sq += d * d;
  }
  st.stddev_ingredients = std::sqrt(sq / static_cast<double>(st.n_recipes));
  return st;
}

Corpus synthetic_corpus(std::uint64_t seed, std::size_t n, std::size_t m, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("synthetic_corpus: p must lie in (0, 1)");
  if (n == 0 || m == 0) throw std::invalid_argument("synthetic_corpus: n and m must be positive");
  std::vector<std::string> names(m);
  for (std::size_t k = 0; k < m; ++k) names[k] = "b" + std::to_string(k);
  Rng rng(seed);
  std::vector<RawRecipe> raw(n);
  for (auto& r : raw) {
    r.region = "synthetic";
    for (auto k : draw_bitstream(rng, m, p)) r.ingredients.push_back(names[k]);
  }
  return build_corpus(raw);
}

std::string to_dataset_text(const Corpus& corpus, char delimiter) {
  std::ostringstream os;
  for (const auto& r : corpus.recipes) {
    for (const auto& region : r.regions) {
      os << region;
      for (auto id : r.ingredients) os << delimiter << corpus.vocab.name(id);
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace rholes
