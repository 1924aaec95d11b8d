#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "rholes/complex.hpp"
#include "rholes/dissim.hpp"

namespace rholes {

enum class SubsampleMode { kNone, kRandom, kMaxmin };

SubsampleMode parse_subsample_mode(std::string_view s);
std::string to_string(SubsampleMode mode);

struct SubsampleConfig {
  SubsampleMode mode = SubsampleMode::kNone;
  std::size_t size = 0;
};

struct RunConfig {
  std::filesystem::path data;
  char delimiter = ',';
  SubsampleConfig subsample;
  std::uint64_t seed = 0;
  double t_max = 1.0;
  double top_fraction = 0.05;
  std::size_t nu = 5;
  std::size_t max_per_cycle = 20;
  std::filesystem::path out_dir = "out";
  int threads = 0;  // 0: OpenMP default
  std::size_t matrix_cap = kDefaultMatrixCap;
  std::size_t max_simplices = kDefaultMaxSimplices;

  // Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

// `key = value` lines; '#' starts a comment; values may be double-quoted.
std::map<std::string, std::string> parse_config_text(std::string_view text);

// Applies known keys onto cfg; unknown keys throw std::invalid_argument.
void apply_config(const std::map<std::string, std::string>& values, RunConfig& cfg);

RunConfig load_config(const std::filesystem::path& path);

}  // namespace rholes
