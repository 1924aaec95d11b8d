#include "rholes/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "rholes/cycleops.hpp"
#include "rholes/dissim.hpp"

namespace rholes {

namespace {

using Positions = std::vector<std::uint32_t>;  // ascending columns of S

// C(n, k), saturating at `limit + 1`.
std::size_t choose_capped(std::size_t n, std::size_t k, std::size_t limit) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (c > static_cast<long double>(limit)) return limit + 1;
  }
  return static_cast<std::size_t>(std::llround(static_cast<double>(c)));
}

Solution to_solution(const ReducedInstance& inst, const Positions& pos, double lambda) {
  Solution sol;
  for (auto p : pos) sol.ingredients.push_back(inst.candidates[p]);
  sol.objective = 1.0 - lambda;
  return sol;
}

// Depth-first implicit enumeration over subsets in lexicographic order of
// columns. Partial dot products are kept per depth so that every leaf value
// is the same left-to-right sum the brute-force solver computes.
class Search {
 public:
  Search(const ReducedInstance& inst, std::span<const IngredientSet> cuts)
      : inst_(inst), s_(inst.s()), nu_(inst.nu), nv_(inst.vectors.size()) {
    values_.resize(nv_ * s_);
    suffix_min_.assign(nv_ * (s_ + 1), std::numeric_limits<double>::infinity());
    for (std::size_t v = 0; v < nv_; ++v) {
      for (std::size_t j = 0; j < s_; ++j) values_[v * s_ + j] = inst.vectors[v][j];
      for (std::size_t j = s_; j-- > 0;)
        suffix_min_[v * (s_ + 1) + j] = std::min(suffix_min_[v * (s_ + 1) + j + 1], values_[v * s_ + j]);
    }
    for (const auto& cut : cuts) {
      Positions p;
      for (auto id : cut) {
        auto it = std::lower_bound(inst.candidates.begin(), inst.candidates.end(), id);
        if (it == inst.candidates.end() || *it != id) {
          p.clear();
          break;
        }
        p.push_back(static_cast<std::uint32_t>(it - inst.candidates.begin()));
      }
      if (p.size() == nu_) cuts_.insert(std::move(p));
    }
    dots_.assign((nu_ + 1) * nv_, 0.0);
  }

  // Lexicographically first subset attaining the optimum.
  std::optional<Solution> best() {
    mode_ = Mode::kOptimize;
    cutoff_ = std::numeric_limits<double>::infinity();
    run();
    if (!found_) return std::nullopt;
    return to_solution(inst_, incumbent_, incumbent_lambda_);
  }

  // Lexicographically first subset with lambda <= threshold.
  std::optional<Solution> first_within(double threshold) {
    mode_ = Mode::kThreshold;
    cutoff_ = threshold;
    run();
    if (!found_) return std::nullopt;
    return to_solution(inst_, incumbent_, incumbent_lambda_);
  }

 private:
  enum class Mode { kOptimize, kThreshold };

  void run() {
    found_ = false;
    stop_ = false;
    chosen_.clear();
    if (nu_ == 0 || nu_ > s_) return;
    dfs(0, 0);
  }

  // True when the subtree below the current partial subset (depth k, next
  // column `pos`, r columns still to pick) cannot produce an acceptable leaf.
  bool prune(std::size_t k, std::size_t pos, std::size_t r) const {
    const double* dots = dots_.data() + k * nv_;
    const auto rr = static_cast<double>(r);
    for (std::size_t v = 0; v < nv_; ++v) {
      const double bound = dots[v] + (r ? rr * suffix_min_[v * (s_ + 1) + pos] : 0.0);
      if (rejects(bound)) return true;
    }
    return false;
  }

  bool rejects(double lambda) const {
    return mode_ == Mode::kOptimize ? lambda >= cutoff_ - kTieTolerance : lambda > cutoff_;
  }

  void leaf(std::size_t k) {
    if (cuts_.count(chosen_)) return;
    const double* dots = dots_.data() + k * nv_;
    double lambda = 0.0;
    for (std::size_t v = 0; v < nv_; ++v) lambda = std::max(lambda, dots[v]);
    if (rejects(lambda)) return;
    found_ = true;
    incumbent_ = chosen_;
    incumbent_lambda_ = lambda;
    if (mode_ == Mode::kOptimize)
      cutoff_ = lambda;
    else
      stop_ = true;
  }

  void dfs(std::size_t pos, std::size_t k) {
    const std::size_t r = nu_ - k;
    for (std::size_t j = pos; j + r <= s_ && !stop_; ++j) {
      const double* src = dots_.data() + k * nv_;
      double* dst = dots_.data() + (k + 1) * nv_;
      for (std::size_t v = 0; v < nv_; ++v) dst[v] = src[v] + values_[v * s_ + j];
      chosen_.push_back(static_cast<std::uint32_t>(j));
      if (r == 1)
        leaf(k + 1);
      else if (!prune(k + 1, j + 1, r - 1))
        dfs(j + 1, k + 1);
      chosen_.pop_back();
    }
  }

  const ReducedInstance& inst_;
  std::size_t s_, nu_, nv_;
  std::vector<double> values_;
  std::vector<double> suffix_min_;
  std::set<Positions> cuts_;
  std::vector<double> dots_;
  Positions chosen_;
  Positions incumbent_;
  double incumbent_lambda_ = 0.0;
  double cutoff_ = 0.0;
  Mode mode_ = Mode::kOptimize;
  bool found_ = false;
  bool stop_ = false;
};

}  // namespace

ReducedInstance build_instance(const IngredientSet& candidates, std::size_t nu, const Corpus& corpus) {
  if (nu < 2) throw std::invalid_argument("build_instance: nu must be at least 2");
  if (candidates.size() < nu)
    throw InsufficientCandidates("build_instance: insufficient candidates (" + std::to_string(candidates.size()) +
                                 " < " + std::to_string(nu) + ")");
  if (std::adjacent_find(candidates.begin(), candidates.end(), std::greater_equal<>()) != candidates.end())
    throw std::invalid_argument("build_instance: candidates must be sorted and distinct");
  ReducedInstance inst;
  inst.candidates = candidates;
  inst.nu = nu;
  const double root_nu = std::sqrt(static_cast<double>(nu));
  std::map<std::pair<Positions, std::size_t>, std::size_t> seen;
  for (std::size_t r = 0; r < corpus.n_recipes(); ++r) {
    const auto& x = corpus.set(r);
    Positions pos;
    auto a = x.begin();
    for (std::size_t j = 0; j < candidates.size() && a != x.end(); ++j) {
      a = std::lower_bound(a, x.end(), candidates[j]);
      if (a != x.end() && *a == candidates[j]) pos.push_back(static_cast<std::uint32_t>(j));
    }
    if (pos.empty()) continue;
    auto [it, inserted] = seen.try_emplace({pos, x.size()}, inst.vectors.size());
    if (inserted) {
      const double w = 1.0 / (root_nu * std::sqrt(static_cast<double>(x.size())));
      std::vector<double> v(candidates.size(), 0.0);
      for (auto p : pos) v[p] = w;
      inst.vectors.push_back(std::move(v));
      inst.origins.emplace_back();
    }
    inst.origins[it->second].push_back(r);
  }
  return inst;
}

double objective(const IngredientSet& y, const Corpus& corpus) {
  if (y.empty()) throw std::invalid_argument("objective: empty combination");
  double best = 0.0;
  for (const auto& r : corpus.recipes) {
    const auto k = shared_count(y, r.ingredients);
    if (k == 0) continue;
    best = std::max(best, static_cast<double>(k) /
                              std::sqrt(static_cast<double>(y.size()) * static_cast<double>(r.ingredients.size())));
  }
  return 1.0 - best;
}

std::vector<Solution> solve_bruteforce(const ReducedInstance& inst, std::size_t cap) {
  const std::size_t s = inst.s(), nu = inst.nu;
  if (nu > s) throw InsufficientCandidates("solve_bruteforce: nu exceeds |S|");
  if (choose_capped(s, nu, cap) > cap)
    throw std::length_error("solve_bruteforce: too many subsets; use solve_exact");

  std::vector<std::pair<Positions, double>> scored;
  Positions comb(nu);
  for (std::size_t k = 0; k < nu; ++k) comb[k] = static_cast<std::uint32_t>(k);
  for (;;) {
    double lambda = 0.0;
    for (const auto& v : inst.vectors) {
      double dot = 0.0;
      for (auto j : comb) dot += v[j];
      lambda = std::max(lambda, dot);
    }
    scored.emplace_back(comb, lambda);
    std::size_t k = nu;
    while (k > 0 && comb[k - 1] == s - nu + k - 1) --k;
    if (k == 0) break;
    ++comb[k - 1];
    for (std::size_t t = k; t < nu; ++t) comb[t] = comb[t - 1] + 1;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [c, l] : scored) best = std::min(best, l);
  std::vector<Solution> out;
  for (const auto& [c, l] : scored)
    if (l <= best + kTieTolerance) out.push_back(to_solution(inst, c, l));
  return out;
}

std::optional<Solution> solve_with_cuts(const ReducedInstance& inst, std::span<const IngredientSet> cuts) {
  if (inst.nu > inst.s()) throw InsufficientCandidates("solve_with_cuts: nu exceeds |S|");
  return Search(inst, cuts).best();
}

ExactResult solve_exact(const ReducedInstance& inst, std::size_t limit) {
  if (inst.nu > inst.s()) throw InsufficientCandidates("solve_exact: nu exceeds |S|");
  ExactResult out;
  if (limit == 0) return out;
  auto first = solve_with_cuts(inst, {});
  if (!first) return out;
  const double lambda_opt = 1.0 - first->objective;
  std::vector<IngredientSet> cuts{first->ingredients};
  out.solutions.push_back(std::move(*first));
  // Re-solve with the accumulated cuts; a re-solve finding nothing within
  // tolerance of the optimum means the optimum got strictly worse.
  for (;;) {
    auto next = Search(inst, cuts).first_within(lambda_opt + kTieTolerance);
    if (!next) break;
    if (out.solutions.size() == limit) {
      out.more_ties = true;
      break;
    }
    cuts.push_back(next->ingredients);
    out.solutions.push_back(std::move(*next));
  }
  return out;
}

std::vector<Suggestion> suggest(const Corpus& corpus, const Diagram& diagram, const SuggestOptions& options,
                                std::span<const std::size_t> vertex_to_recipe) {
  struct Task {
    std::size_t pair;
    IngredientSet candidates;
  };
  std::vector<Task> tasks;
  for (auto pid : select_top_cycles(diagram, options.top_fraction)) {
    const auto& pair = diagram.pairs[pid];
    const auto report = cycle_report(pair.representative, pair, corpus, vertex_to_recipe);
    for (const auto& comp : report.components)
      if (comp.candidates.size() >= options.nu) tasks.push_back({pid, comp.candidates});
  }

  std::vector<std::vector<Solution>> found(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(tasks.size()); ++t) {
    const auto& task = tasks[static_cast<std::size_t>(t)];
    const auto inst = build_instance(task.candidates, options.nu, corpus);
    auto sols = solve_exact(inst, options.max_per_cycle).solutions;
    // Report d(y, X) from integer overlaps, as objective() computes it, so an
    // existing recipe scores exactly zero.
    for (auto& sol : sols) {
      double best = 0.0;
      for (std::size_t k = 0; k < inst.vectors.size(); ++k) {
        std::size_t shared = 0;
        for (std::size_t j = 0; j < inst.s(); ++j)
          if (inst.vectors[k][j] != 0.0 && std::binary_search(sol.ingredients.begin(), sol.ingredients.end(),
                                                              inst.candidates[j]))
            ++shared;
        if (shared == 0) continue;
        const double size = static_cast<double>(corpus.set(inst.origins[k].front()).size());
        best = std::max(best, static_cast<double>(shared) / std::sqrt(static_cast<double>(sol.ingredients.size()) * size));
      }
      sol.objective = 1.0 - best;
    }
    found[static_cast<std::size_t>(t)] = std::move(sols);
  }

  std::vector<Suggestion> out;
  std::map<IngredientSet, std::size_t> index;
  for (std::size_t t = 0; t < tasks.size(); ++t)
    for (auto& sol : found[t]) {
      auto [it, inserted] = index.try_emplace(sol.ingredients, out.size());
      if (inserted) out.push_back({std::move(sol), {}});
      auto& sources = out[it->second].source_pairs;
      if (std::find(sources.begin(), sources.end(), tasks[t].pair) == sources.end())
        sources.push_back(tasks[t].pair);
    }
  return out;
}

}  // namespace rholes
