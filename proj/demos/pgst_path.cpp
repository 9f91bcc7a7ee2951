// P_4 is K_2 with K_1 satellites. Its inner vertices have PGST but no PST;
// print witness times for shrinking eps.
#include <cstdio>

#include "qwalk/qwalk.hpp"

int main() {
  using namespace qwalk;
  const auto k2 = build_named_graph(GraphFamily::complete, {2});
  const auto data = base_data_from_spectrum(eigendecompose(k2.adjacency()), {{0, 1}});
  std::printf("%-8s %-8s %-14s %s\n", "eps", "l", "T", "fidelity");
  for (double eps : {0.1, 0.03, 0.01, 0.003}) {
    const auto w = pgst_witness_time(data, 0, 1, 2, eps);
    if (!w.found) {
      std::printf("%-8g not found (best %.6f)\n", eps, w.best_fidelity);
      continue;
    }
    std::printf("%-8g %-8lld %-14.4f %.8f\n", eps, static_cast<long long>(w.l), w.time,
                w.achieved_fidelity);
  }
}
