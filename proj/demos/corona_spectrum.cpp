// Closed-form spectrum of C_4 with K_2 satellites next to the numeric one.
#include <cstdio>

#include "qwalk/qwalk.hpp"

int main() {
  using namespace qwalk;
  const auto spec = uniform_corona(build_named_graph(GraphFamily::cycle, {4}),
                                   build_named_graph(GraphFamily::complete, {2}));
  const auto set = corona_eigenvalues(spec);
  const auto numeric = eigendecompose(build_corona(spec).graph.adjacency());

  std::printf("%-12s %-5s %-6s %s\n", "eigenvalue", "mult", "branch", "from");
  for (const auto& e : set.all()) {
    if (e.multiplicity == 0) continue;
    std::printf("%-12.6f %-5zu %-6s %.6f\n", e.value, e.multiplicity, branch_tag(e.branch), e.source);
  }
  std::printf("\nnumeric:\n");
  for (std::size_t j = 0; j < numeric.distinct(); ++j) {
    std::printf("%-12.6f %zu\n", numeric.eigenvalues[j], numeric.multiplicities[j]);
  }
}
