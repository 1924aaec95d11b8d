#pragma once

// End-to-end run: corpus → pair statistics → Rips filtration → persistence →
// cycle reports → suggestions → novelty, with JSON/CSV reports on disk.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rholes/config.hpp"
#include "rholes/corpus.hpp"

namespace rholes {

inline constexpr const char* kVersion = "0.1.0";

enum class Stage { kStats, kPersistence, kCycles, kSuggest, kNovelty, kAll };

// Failure inside a stage; partial outputs have been removed.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& cause)
      : std::runtime_error(stage + ": " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

// Input could not be read; nothing was written.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunManifest {
  RunConfig config;
  std::string input_sha256;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
  std::vector<std::string> outputs;                     // file names under out_dir
  std::string version = kVersion;
};

// Farthest-point sampling from `start` under cosine dissimilarity; ties go to
// the least index. Returns corpus indices in selection order.
std::vector<std::size_t> maxmin_sample(const Corpus& corpus, std::size_t size, std::size_t start);
std::vector<std::size_t> maxmin_sample_serial(const Corpus& corpus, std::size_t size, std::size_t start);

// Indices of the subsample (ascending for random mode, selection order for
// maxmin; the maxmin start is drawn from the seed). Identity for kNone.
std::vector<std::size_t> subsample_indices(const Corpus& corpus, const SubsampleConfig& cfg, std::uint64_t seed);
Corpus subsample(const Corpus& corpus, const SubsampleConfig& cfg, std::uint64_t seed);

std::string sha256_hex(std::string_view bytes);

// Runs every stage up to and including `until` and writes that stage's
// reports (all reports for kAll) plus manifest.json.
RunManifest run_pipeline(const RunConfig& cfg, Stage until = Stage::kAll);

}  // namespace rholes
