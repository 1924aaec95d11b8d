#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rholes/persistence.hpp"

namespace rholes {

namespace {

struct Point {
  double birth;
  double death;
};

std::vector<Point> points_of(const Diagram& d) {
  std::vector<Point> out;
  out.reserve(d.pairs.size());
  for (const auto& p : d.pairs) out.push_back({p.birth, p.essential() ? d.death_cap : p.death});
  return out;
}

double sup_dist(const Point& a, const Point& b) {
  return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

double to_diagonal(const Point& a) { return (a.death - a.birth) / 2; }

// Hopcroft–Karp on a bipartite graph with equal sides.
class Matcher {
 public:
  explicit Matcher(std::size_t n) : n_(n), adj_(n) {}
  void add_edge(std::size_t l, std::size_t r) { adj_[l].push_back(r); }

  bool perfect() {
    match_l_.assign(n_, kFree);
    match_r_.assign(n_, kFree);
    std::size_t matched = 0;
    while (bfs())
      for (std::size_t l = 0; l < n_; ++l)
        if (match_l_[l] == kFree && dfs(l)) ++matched;
    return matched == n_;
  }

 private:
  static constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  static constexpr std::size_t kInf = static_cast<std::size_t>(-1);

  bool bfs() {
    dist_.assign(n_, kInf);
    std::queue<std::size_t> queue;
    for (std::size_t l = 0; l < n_; ++l)
      if (match_l_[l] == kFree) {
        dist_[l] = 0;
        queue.push(l);
      }
    bool reachable_free = false;
    while (!queue.empty()) {
      std::size_t l = queue.front();
      queue.pop();
      for (std::size_t r : adj_[l]) {
        std::size_t next = match_r_[r];
        if (next == kFree) {
          reachable_free = true;
        } else if (dist_[next] == kInf) {
          dist_[next] = dist_[l] + 1;
          queue.push(next);
        }
      }
    }
    return reachable_free;
  }

  bool dfs(std::size_t l) {
    for (std::size_t r : adj_[l]) {
      std::size_t next = match_r_[r];
      if (next == kFree || (dist_[next] == dist_[l] + 1 && dfs(next))) {
        match_l_[l] = r;
        match_r_[r] = l;
        return true;
      }
    }
    dist_[l] = kInf;
    return false;
  }

  std::size_t n_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_l_, match_r_, dist_;
};

// Left: points of a, then diagonal copies of b. Right: points of b, then
// diagonal copies of a.
bool feasible(const std::vector<Point>& a, const std::vector<Point>& b, double r) {
  const std::size_t na = a.size(), nb = b.size();
  Matcher m(na + nb);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j)
      if (sup_dist(a[i], b[j]) <= r) m.add_edge(i, j);
    if (to_diagonal(a[i]) <= r) m.add_edge(i, nb + i);
  }
  for (std::size_t j = 0; j < nb; ++j) {
    if (to_diagonal(b[j]) <= r) m.add_edge(na + j, j);
    for (std::size_t i = 0; i < na; ++i) m.add_edge(na + j, nb + i);
  }
  return m.perfect();
}

}  // namespace

double bottleneck_distance(const Diagram& a, const Diagram& b) {
  if (a.q != b.q) throw std::invalid_argument("bottleneck_distance: diagrams of different degree");
  const auto pa = points_of(a), pb = points_of(b);
  std::vector<double> radii{0.0};
  for (const auto& x : pa) {
    radii.push_back(to_diagonal(x));
    for (const auto& y : pb) radii.push_back(sup_dist(x, y));
  }
  for (const auto& y : pb) radii.push_back(to_diagonal(y));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  // The largest candidate is always feasible: everything can go to the diagonal.
  std::size_t lo = 0, hi = radii.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(pa, pb, radii[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return radii[lo];
}

}  // namespace rholes
