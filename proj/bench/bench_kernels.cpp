// Serial reference vs OpenMP kernels on a synthetic corpus.
//
//   rholes_bench [n_recipes] [n_ingredients] [p]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include <omp.h>

#include "rholes/complex.hpp"
#include "rholes/corpus.hpp"
#include "rholes/dissim.hpp"
#include "rholes/pipeline.hpp"

namespace {

double seconds(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-24s serial %9.4f s   omp %9.4f s   serial/omp %5.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::stoul(argv[1]) : 3000;
  const std::size_t m = argc > 2 ? std::stoul(argv[2]) : 381;
  const double p = argc > 3 ? std::stod(argv[3]) : 0.0223;
  std::printf("corpus: n=%zu m=%zu p=%g, threads=%d\n", n, m, p, omp_get_max_threads());
  const auto corpus = rholes::synthetic_corpus(7, n, m, p);

  volatile double sink = 0;
  row("pairwise_summary", seconds([&] { sink = rholes::pairwise_summary_serial(corpus).stats.mean; }),
      seconds([&] { sink = rholes::pairwise_summary(corpus).stats.mean; }));

  const std::size_t cap = std::min<std::size_t>(corpus.n_recipes(), 1500);
  std::vector<std::size_t> idx(cap);
  for (std::size_t i = 0; i < cap; ++i) idx[i] = i;
  rholes::DissimMatrix dm;
  row("dissimilarity_matrix",
      seconds([&] { dm = rholes::dissimilarity_matrix_serial(corpus, std::span<const std::size_t>(idx)); }),
      seconds([&] { dm = rholes::dissimilarity_matrix(corpus, std::span<const std::size_t>(idx)); }));

  const std::size_t small = std::min<std::size_t>(cap, 250);
  std::vector<std::size_t> sidx(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(small));
  const auto sm = rholes::dissimilarity_matrix(corpus, std::span<const std::size_t>(sidx));
  row("vr_filtration (t=0.9)", seconds([&] { sink = rholes::vr_filtration_serial(sm, 0.9).size(); }),
      seconds([&] { sink = rholes::vr_filtration(sm, 0.9).size(); }));

  row("maxmin_sample (100)", seconds([&] { sink = rholes::maxmin_sample_serial(corpus, 100, 0).size(); }),
      seconds([&] { sink = rholes::maxmin_sample(corpus, 100, 0).size(); }));
  (void)sink;
  return 0;
}
