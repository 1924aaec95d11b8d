// rholes: find holes in a recipe corpus and suggest novel ingredient
// combinations from them.
//
//   rholes run --data recipes.csv --out results/
//   rholes persistence --data recipes.csv --subsample maxmin --subsample-size 2000

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rholes/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> data;
  std::optional<std::string> delimiter;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> subsample;
  std::optional<std::size_t> subsample_size;
  std::optional<double> t_max;
  std::optional<double> top_fraction;
  std::optional<std::size_t> nu;
  std::optional<std::size_t> max_per_cycle;
  std::optional<std::size_t> max_simplices;
};

rholes::RunConfig resolve(const Flags& f) {
  rholes::RunConfig cfg = f.config ? rholes::load_config(*f.config) : rholes::RunConfig{};
  if (f.data) cfg.data = *f.data;
  if (f.delimiter) {
    if (f.delimiter->size() != 1) throw std::invalid_argument("--delimiter must be a single character");
    cfg.delimiter = f.delimiter->front();
  }
  if (f.out) cfg.out_dir = *f.out;
  if (f.seed) cfg.seed = *f.seed;
  if (f.threads) cfg.threads = *f.threads;
  if (f.subsample) cfg.subsample.mode = rholes::parse_subsample_mode(*f.subsample);
  if (f.subsample_size) cfg.subsample.size = *f.subsample_size;
  if (f.t_max) cfg.t_max = *f.t_max;
  if (f.top_fraction) cfg.top_fraction = *f.top_fraction;
  if (f.nu) cfg.nu = *f.nu;
  if (f.max_per_cycle) cfg.max_per_cycle = *f.max_per_cycle;
  if (f.max_simplices) cfg.max_simplices = *f.max_simplices;
  if (cfg.data.empty()) throw std::invalid_argument("no data file given (--data or data = ... in --config)");
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistent-homology holes in recipe corpora and novel ingredient combinations"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;

  app.add_option("--config", flags.config, "key = value configuration file");
  app.add_option("--data", flags.data, "Recipe dataset: region,ingredient,ingredient,...");
  app.add_option("--delimiter", flags.delimiter, "Field delimiter (default ',')");
  app.add_option("--out", flags.out, "Output directory (default 'out')");
  app.add_option("--seed", flags.seed, "Seed for random pairing and subsampling");
  app.add_option("--threads", flags.threads, "Worker threads (0: all available)");
  app.add_option("--subsample", flags.subsample, "none | random | maxmin");
  app.add_option("--subsample-size", flags.subsample_size, "Number of recipes kept by subsampling");
  app.add_option("--t-max", flags.t_max, "Largest filtration value (default 1.0)");
  app.add_option("--max-simplices", flags.max_simplices, "Refuse filtrations larger than this");
  app.add_option("--top-fraction", flags.top_fraction, "Fraction of longest-lived cycles used (default 0.05)");
  app.add_option("--nu", flags.nu, "Ingredients per suggestion (default 5)");
  app.add_option("--max-per-cycle", flags.max_per_cycle, "Suggestions kept per cycle (default 20)");

  struct Command {
    const char* name;
    const char* help;
    rholes::Stage stage;
  };
  const Command commands[] = {
      {"stats", "Corpus summary and dissimilarity statistics", rholes::Stage::kStats},
      {"persistence", "Persistence diagrams with representative cycles", rholes::Stage::kPersistence},
      {"cycles", "Recipe listings for the longest-lived cycles", rholes::Stage::kCycles},
      {"suggest", "Novel combinations from the longest-lived cycles", rholes::Stage::kSuggest},
      {"novelty", "Novelty and frequency statistics of the suggestions", rholes::Stage::kNovelty},
      {"run", "Full pipeline", rholes::Stage::kAll},
  };
  std::optional<rholes::Stage> chosen;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->callback([&chosen, stage = c.stage] { chosen = stage; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  rholes::RunConfig cfg;
  try {
    cfg = resolve(flags);
  } catch (const std::exception& e) {
    std::cerr << "rholes: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const auto manifest = rholes::run_pipeline(cfg, *chosen);
    for (const auto& [stage, secs] : manifest.timings) std::cerr << "  " << stage << ": " << secs << " s\n";
    for (const auto& f : manifest.outputs) std::cout << (cfg.out_dir / f).string() << '\n';
  } catch (const rholes::InputError& e) {
    std::cerr << "rholes: " << e.what() << '\n';
    return kExitUsage;
  } catch (const rholes::StageError& e) {
    std::cerr << "rholes: stage " << e.what() << '\n';
    return e.stage() == "corpus" ? kExitUsage : kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "rholes: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
