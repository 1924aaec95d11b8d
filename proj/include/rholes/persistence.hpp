#pragma once

// Persistent homology of a Rips filtration in degrees 0 and 1, with
// representative cycles, a dense homology oracle and the bottleneck distance.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "rholes/complex.hpp"

namespace rholes {

// A q-chain with coefficients in the two-element field: a set of q-simplices.
class Chain {
 public:
  Chain() = default;
  // Simplices occurring an even number of times cancel.
  explicit Chain(std::vector<Simplex> simplices);

  bool empty() const noexcept { return simplices_.empty(); }
  std::size_t size() const noexcept { return simplices_.size(); }
  // -1 for the empty chain.
  int dim() const noexcept { return simplices_.empty() ? -1 : simplices_.front().dim(); }
  const std::vector<Simplex>& simplices() const noexcept { return simplices_; }

  Chain boundary() const;
  friend Chain operator+(const Chain& a, const Chain& b);
  friend bool operator==(const Chain&, const Chain&) = default;

 private:
  std::vector<Simplex> simplices_;  // sorted, distinct, common dimension
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PersistencePair {
  int q = 0;
  double birth = 0.0;
  double death = kInfinity;
  Chain representative;
  // Filtration positions of the creating and (when finite) killing simplices.
  std::size_t birth_index = 0;
  std::size_t death_index = static_cast<std::size_t>(-1);

  bool essential() const noexcept { return death == kInfinity; }
  double lifespan() const noexcept { return death - birth; }
};

struct Diagram {
  int q = 0;
  // Essential deaths are read as this value when comparing diagrams.
  double death_cap = 0.0;
  std::vector<PersistencePair> pairs;

  // Finite pairs with positive lifespan, the ones reports show.
  std::vector<std::size_t> reported() const;
};

struct PersistenceResult {
  Diagram h0;
  Diagram h1;
};

// Degree 0 by union-find over the edges. Degree 1 by column reduction of the
// triangle boundaries in filtration order; the degree-0 pass already settles
// which edges kill components, so their columns are cleared. A finite degree-1
// pair carries the reduced column of its killing triangle, which is a cycle
// whose newest edge is the creating edge. Essential classes carry their edge
// closed up by a path through the spanning forest of older edges.
PersistenceResult compute_persistence(const Filtration& f);

// Betti number of a face-closed complex by dense elimination, q in {0, 1}.
// Meant as an oracle for small inputs.
std::size_t homology_rank(std::span<const Simplex> complex, int q);

// Checks a candidate representative c of a finite pair or essential class:
// newest simplex exactly at birth, zero boundary, nonzero class at birth and
// at the midpoint of [birth, death) (or of [birth, t_max] for essential
// classes), and zero class at death. With `all_thresholds`, condition three is
// checked at every filtration value in [birth, death).
bool verify_representative(const Filtration& f, const PersistencePair& pair, const Chain& c,
                           bool all_thresholds = false);

// Bottleneck distance under the sup norm, with unmatched points sent to the
// diagonal. Exact: binary search over candidate radii with a bipartite
// matching feasibility test.
double bottleneck_distance(const Diagram& a, const Diagram& b);

}  // namespace rholes
