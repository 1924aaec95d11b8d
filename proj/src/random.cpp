#include "rholes/random.hpp"

#include <limits>
#include <stdexcept>

namespace rholes {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

std::vector<std::uint32_t> draw_bitstream(Rng& rng, std::size_t m, double p) {
  std::vector<std::uint32_t> bits;
  while (bits.empty()) {
    for (std::size_t k = 0; k < m; ++k)
      if (rng.bernoulli(p)) bits.push_back(static_cast<std::uint32_t>(k));
  }
  return bits;
}

}  // namespace rholes
