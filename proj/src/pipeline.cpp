#include "rholes/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include <openssl/evp.h>
#include <omp.h>

#include "json.hpp"
#include "rholes/complex.hpp"
#include "rholes/cycleops.hpp"
#include "rholes/dissim.hpp"
#include "rholes/novelty.hpp"
#include "rholes/optimize.hpp"
#include "rholes/persistence.hpp"
#include "rholes/random.hpp"

namespace rholes {

using json = nlohmann::ordered_json;

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json pair_stats_json(const PairStats& s) {
  return {{"mean", s.mean}, {"stddev", s.stddev}, {"count_at_one", s.count_at_one}, {"total_pairs", s.total_pairs}};
}

// Average ranks (1-based) with ties sharing the mean rank.
std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && x[idx[j]] == x[idx[i]]) ++j;
    const double mean_rank = (static_cast<double>(i + j - 1) / 2.0) + 1.0;
    for (std::size_t k = i; k < j; ++k) r[idx[k]] = mean_rank;
    i = j;
  }
  return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  if (a.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0 || sbb == 0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

json fit_json(std::span<const std::uint64_t> counts) {
  try {
    const auto fit = fit_power_law(counts);
    return {{"alpha", fit.alpha}, {"x_min", fit.x_min}, {"n_tail", fit.n_tail}, {"ks", fit.ks}};
  } catch (const std::invalid_argument& e) {
    return {{"error", e.what()}};
  }
}

class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir_);
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    written_.push_back(name);
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path.string());
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void remove_all() noexcept {
    std::error_code ec;
    for (const auto& name : written_) std::filesystem::remove(dir_ / name, ec);
    written_.clear();
  }
  const std::vector<std::string>& written() const noexcept { return written_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> written_;
};

json config_json(const RunConfig& cfg) {
  return {{"data", cfg.data.string()},
          {"delimiter", std::string(1, cfg.delimiter)},
          {"subsample", {{"mode", to_string(cfg.subsample.mode)}, {"size", cfg.subsample.size}}},
          {"seed", cfg.seed},
          {"t_max", cfg.t_max},
          {"top_fraction", cfg.top_fraction},
          {"nu", cfg.nu},
          {"max_per_cycle", cfg.max_per_cycle},
          {"matrix_cap", cfg.matrix_cap},
          {"max_simplices", cfg.max_simplices}};
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

std::vector<std::size_t> maxmin_sample(const Corpus& corpus, std::size_t size, std::size_t start) {
  const std::size_t n = corpus.n_recipes();
  if (size > n) throw std::invalid_argument("maxmin_sample: size exceeds the corpus");
  if (start >= n) throw std::out_of_range("maxmin_sample: start outside the corpus");
  if (size == 0) return {};
  const DissimKernel kernel(corpus);
  std::vector<double> gap(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> chosen{start};
  std::size_t last = start;
  while (chosen.size() < size) {
    std::size_t best = n;
    double best_gap = -1.0;
#pragma omp parallel
    {
      std::size_t local = n;
      double local_gap = -1.0;
#pragma omp for schedule(static)
      for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
        const auto i = static_cast<std::size_t>(si);
        gap[i] = std::min(gap[i], kernel(i, last));
        if (gap[i] > local_gap) local_gap = gap[i], local = i;
      }
#pragma omp critical
      if (local_gap > best_gap || (local_gap == best_gap && local < best)) best_gap = local_gap, best = local;
    }
    chosen.push_back(best);
    last = best;
  }
  return chosen;
}

std::vector<std::size_t> maxmin_sample_serial(const Corpus& corpus, std::size_t size, std::size_t start) {
  const std::size_t n = corpus.n_recipes();
  if (size > n) throw std::invalid_argument("maxmin_sample: size exceeds the corpus");
  if (start >= n) throw std::out_of_range("maxmin_sample: start outside the corpus");
  if (size == 0) return {};
  std::vector<std::size_t> chosen{start};
  while (chosen.size() < size) {
    std::size_t best = n;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double g = std::numeric_limits<double>::infinity();
      for (auto c : chosen) g = std::min(g, cosine_dissimilarity(corpus.set(i), corpus.set(c)));
      if (g > best_gap) best_gap = g, best = i;
    }
    chosen.push_back(best);
  }
  return chosen;
}

std::vector<std::size_t> subsample_indices(const Corpus& corpus, const SubsampleConfig& cfg, std::uint64_t seed) {
  const std::size_t n = corpus.n_recipes();
  if (cfg.mode == SubsampleMode::kNone) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  if (cfg.size > n)
    throw std::invalid_argument("subsample: size " + std::to_string(cfg.size) + " exceeds " + std::to_string(n) + " recipes");
  Rng rng(seed);
  if (cfg.mode == SubsampleMode::kMaxmin) return maxmin_sample(corpus, cfg.size, static_cast<std::size_t>(rng.below(n)));
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(all));
  all.resize(cfg.size);
  std::sort(all.begin(), all.end());
  return all;
}

Corpus subsample(const Corpus& corpus, const SubsampleConfig& cfg, std::uint64_t seed) {
  const auto idx = subsample_indices(corpus, cfg, seed);
  return extract(corpus, idx);
}

RunManifest run_pipeline(const RunConfig& cfg, Stage until) {
  cfg.validate();
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

  RunManifest manifest;
  manifest.config = cfg;

  std::string bytes;
  {
    std::ifstream in(cfg.data, std::ios::binary);
    if (!in) throw InputError("cannot read data file '" + cfg.data.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    bytes = buf.str();
  }
  manifest.input_sha256 = sha256_hex(bytes);

  OutputSet out(cfg.out_dir);
  auto stage = [&](const std::string& name, const std::function<void()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const std::exception& e) {
      out.remove_all();
      throw StageError(name, e.what());
    }
    manifest.timings.emplace_back(name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  };
  const bool all = until == Stage::kAll;
  auto reaches = [&](Stage s) { return all || static_cast<int>(until) >= static_cast<int>(s); };

  Corpus corpus;
  stage("corpus", [&] { corpus = build_corpus(parse_dataset(bytes, cfg.delimiter)); });

  if (all || until == Stage::kStats) {
    stage("stats", [&] {
      const auto cs = corpus_stats(corpus);
      json j;
      j["table1"] = {{"n_recipes", cs.n_recipes},
                     {"n_ingredients", cs.n_ingredients},
                     {"mean_ingredients", cs.mean_ingredients},
                     {"stddev_ingredients", cs.stddev_ingredients}};
      json dcos;
      std::string hist_csv = "bin_left,bin_right,count\n";
      if (corpus.n_recipes() >= 2) {
        const auto summary = pairwise_summary(corpus);
        dcos["all_pairs"] = pair_stats_json(summary.stats);
        dcos["random_pairs"] = pair_stats_json(random_pairing_stats(corpus, cfg.seed));
        const auto& h = summary.histogram;
        std::ostringstream os;
        os << std::fixed << std::setprecision(2);
        for (std::size_t b = 0; b < DissimHistogram::kBins; ++b)
          os << static_cast<double>(b) * DissimHistogram::kBinWidth << ','
             << static_cast<double>(b + 1) * DissimHistogram::kBinWidth << ',' << h.counts[b] << '\n';
        os << "1.00,1.00," << h.at_one << '\n';
        hist_csv += os.str();
      } else {
        dcos["all_pairs"] = nullptr;
        dcos["random_pairs"] = nullptr;
      }
      const double p = cs.mean_ingredients / static_cast<double>(cs.n_ingredients);
      if (p > 0.0 && p < 1.0) {
        const auto bm = bitstream_moments(p, p, cs.n_ingredients);
        dcos["bitstream_model"] = {{"p", p}, {"mean", bm.expected}, {"stddev", bm.stddev()}};
      } else {
        dcos["bitstream_model"] = nullptr;
      }
      j["dcos"] = dcos;
      j["histogram"] = "dcos_histogram.csv";
      out.write_json("stats.json", j);
      out.write("dcos_histogram.csv", hist_csv);
    });
  }

  if (reaches(Stage::kPersistence)) {
    std::vector<std::size_t> points;
    PersistenceResult ph;
    stage("subsample", [&] { points = subsample_indices(corpus, cfg.subsample, cfg.seed); });
    stage("persistence", [&] {
      const auto m = dissimilarity_matrix(corpus, std::span<const std::size_t>(points), cfg.matrix_cap);
      const auto f = vr_filtration(m, cfg.t_max, cfg.max_simplices);
      ph = compute_persistence(f);

      auto edges_json = [&](const Chain& c) {
        json edges = json::array();
        for (const auto& s : c.simplices()) {
          if (s.dim() == 1)
            edges.push_back({points[s[0]], points[s[1]]});
          else
            edges.push_back({points[s[0]]});
        }
        return edges;
      };
      auto diagram_json = [&](const Diagram& d) {
        std::vector<std::size_t> idx;
        std::size_t essential = 0;
        for (std::size_t k = 0; k < d.pairs.size(); ++k) {
          if (d.pairs[k].essential())
            ++essential, idx.push_back(k);
          else if (d.pairs[k].lifespan() > 0.0)
            idx.push_back(k);
        }
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) {
          const double la = d.pairs[a].lifespan(), lb = d.pairs[b].lifespan();
          if (la != lb) return la > lb;
          return d.pairs[a].birth < d.pairs[b].birth;
        });
        json pairs = json::array();
        for (auto k : idx) {
          const auto& p = d.pairs[k];
          pairs.push_back({{"id", k},
                           {"birth", p.birth},
                           {"death", finite_or_null(p.death)},
                           {"lifespan", finite_or_null(p.lifespan())},
                           {"representative", edges_json(p.representative)}});
        }
        return json{{"q", d.q}, {"n_pairs", d.pairs.size()}, {"n_reported", idx.size() - essential},
                    {"n_essential", essential}, {"pairs", pairs}};
      };
      json j;
      j["n_points"] = points.size();
      j["t_max"] = cfg.t_max;
      j["n_simplices"] = {{"vertices", f.count(0)}, {"edges", f.count(1)}, {"triangles", f.count(2)}};
      j["diagrams"] = json::array({diagram_json(ph.h0), diagram_json(ph.h1)});
      out.write_json("persistence.json", j);

      std::vector<std::uint64_t> bins;
      for (auto k : ph.h1.reported()) {
        const auto b = static_cast<std::size_t>(ph.h1.pairs[k].lifespan() / 0.01);
        if (bins.size() <= b) bins.resize(b + 1, 0);
        ++bins[b];
      }
      std::ostringstream os;
      os << "bin_left,bin_right,count\n" << std::fixed << std::setprecision(2);
      for (std::size_t b = 0; b < bins.size(); ++b)
        os << static_cast<double>(b) * 0.01 << ',' << static_cast<double>(b + 1) * 0.01 << ',' << bins[b] << '\n';
      out.write("lifespans.csv", os.str());
    });

    if (reaches(Stage::kCycles)) {
      stage("cycles", [&] {
        json cycles = json::array();
        for (auto pid : select_top_cycles(ph.h1, cfg.top_fraction)) {
          const auto& pair = ph.h1.pairs[pid];
          const auto rep = cycle_report(pair.representative, pair, corpus, points);
          json recipes = json::array();
          for (auto r : rep.recipe_indices) recipes.push_back(corpus.names(corpus.set(r)));
          json comps = json::array();
          for (const auto& c : rep.components)
            comps.push_back({{"n_recipes", c.recipes.size()}, {"n_ingredients", c.candidates.size()}, {"recipe_ids", c.recipes}});
          json regions = json::object();
          for (const auto& [name, count] : rep.region_profile) regions[name] = count;
          cycles.push_back({{"id", pid},
                            {"birth", pair.birth},
                            {"death", pair.death},
                            {"lifespan", pair.lifespan()},
                            {"n_recipes", rep.recipe_indices.size()},
                            {"n_ingredients", rep.candidates.size()},
                            {"simple", rep.components.size() == 1},
                            {"recipe_ids", rep.recipe_indices},
                            {"recipes", recipes},
                            {"candidates", corpus.names(rep.candidates)},
                            {"centroid", rep.centroid},
                            {"regions", regions},
                            {"edit_profile", rep.edit_profile},
                            {"components", comps}});
        }
        out.write_json("cycles.json", json{{"top_fraction", cfg.top_fraction}, {"cycles", cycles}});
      });
    }

    if (reaches(Stage::kSuggest)) {
      std::vector<Suggestion> suggestions;
      std::vector<NoveltyLabel> labels;
      stage("suggest", [&] {
        suggestions = suggest(corpus, ph.h1, {cfg.top_fraction, cfg.nu, cfg.max_per_cycle}, points);
        std::vector<IngredientSet> sets;
        for (const auto& s : suggestions) sets.push_back(s.solution.ingredients);
        labels = NoveltyIndex(corpus).classify_all(sets);
        json sols = json::array();
        for (std::size_t k = 0; k < suggestions.size(); ++k) {
          const auto& s = suggestions[k];
          sols.push_back({{"ingredients", corpus.names(s.solution.ingredients)},
                          {"objective", s.solution.objective},
                          {"source_cycles", s.source_pairs},
                          {"novelty", {{"is_existing", labels[k].is_existing}, {"is_strict_sub", labels[k].is_strict_sub}}}});
        }
        out.write_json("solutions.json", json{{"nu", cfg.nu}, {"max_per_cycle", cfg.max_per_cycle}, {"solutions", sols}});
      });

      if (reaches(Stage::kNovelty)) {
        stage("novelty", [&] {
          std::size_t n_existing = 0, n_sub = 0, violations = 0;
          double max_life_existing = -1.0, max_life_sub = -1.0;
          std::vector<IngredientSet> sets;
          for (std::size_t k = 0; k < suggestions.size(); ++k) {
            const auto& s = suggestions[k];
            sets.push_back(s.solution.ingredients);
            double life = 0.0;
            for (auto pid : s.source_pairs) life = std::max(life, ph.h1.pairs[pid].lifespan());
            if (labels[k].is_existing) {
              ++n_existing;
              max_life_existing = std::max(max_life_existing, life);
              if (s.solution.objective != 0.0) ++violations;
            }
            if (labels[k].is_strict_sub) {
              ++n_sub;
              max_life_sub = std::max(max_life_sub, life);
            }
          }
          const auto tables = frequency_tables(corpus, sets);
          std::vector<double> corpus_counts, suggestion_counts;
          for (std::size_t id = 0; id < corpus.n_ingredients(); ++id) {
            corpus_counts.push_back(static_cast<double>(tables.corpus.counts[id]));
            suggestion_counts.push_back(static_cast<double>(tables.suggestions.counts[id]));
          }
          json j{{"n_solutions", suggestions.size()},
                 {"n_existing", n_existing},
                 {"n_strict_sub", n_sub},
                 {"max_lifespan_existing", max_life_existing < 0 ? json(nullptr) : json(max_life_existing)},
                 {"max_lifespan_strict_sub", max_life_sub < 0 ? json(nullptr) : json(max_life_sub)},
                 {"existing_with_positive_objective", violations},
                 {"frequency_rank_correlation", finite_or_null(spearman(corpus_counts, suggestion_counts))},
                 {"suggestions_empty", tables.suggestions_empty},
                 {"power_law", {{"corpus", fit_json(tables.corpus.counts)}, {"suggestions", fit_json(tables.suggestions.counts)}}},
                 {"frequencies", "freq.csv"}};
          out.write_json("novelty.json", j);

          const auto rc = tables.corpus.relative(), rs = tables.suggestions.relative();
          std::ostringstream os;
          os << "rank,ingredient,corpus_count,corpus_relative,suggestion_count,suggestion_relative\n";
          for (std::size_t r = 0; r < tables.order.size(); ++r) {
            const auto id = tables.order[r];
            os << r + 1 << ',' << corpus.vocab.name(id) << ',' << tables.corpus.counts[id] << ',' << num(rc[id]) << ','
               << tables.suggestions.counts[id] << ',' << num(rs[id]) << '\n';
          }
          out.write("freq.csv", os.str());
        });
      }
    }
  }

  manifest.outputs = out.written();
  manifest.outputs.push_back("manifest.json");
  json timings = json::object();
  for (const auto& [name, secs] : manifest.timings) timings[name] = secs;
  json m{{"version", manifest.version},
         {"config", config_json(cfg)},
         {"input", {{"path", cfg.data.string()}, {"bytes", bytes.size()}, {"sha256", manifest.input_sha256}}},
         {"threads", omp_get_max_threads()},
         {"timings", timings},
         {"outputs", manifest.outputs}};
  try {
    out.write_json("manifest.json", m);
  } catch (const std::exception& e) {
    out.remove_all();
    throw StageError("manifest", e.what());
  }
  return manifest;
}

}  // namespace rholes
