#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rholes/corpus.hpp"

namespace rholes::fixtures {

// Five recipes over coffee, cinnamon, sugar and milk. As a pentagon x1..x5:
// consecutive pairs share one ingredient, x5 is coffee alone.
inline constexpr const char* kExample21 =
    "Example,coffee,cinnamon\n"
    "Example,sugar,cinnamon\n"
    "Example,milk,sugar\n"
    "Example,coffee,milk\n"
    "Example,coffee\n";

inline Corpus example21() { return build_corpus(parse_dataset(kExample21)); }

inline const double kRootHalf = 1.0 - 1.0 / std::sqrt(2.0);

inline std::filesystem::path data_dir() { return RHOLES_TEST_DATA; }

inline std::string data_text(const std::string& name) {
  std::ifstream in(data_dir() / name, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace rholes::fixtures
