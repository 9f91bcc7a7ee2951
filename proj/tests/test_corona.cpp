#include <gtest/gtest.h>

#include "qwalk/corona.hpp"

using namespace qwalk;

namespace {
Graph named(GraphFamily f, std::vector<std::int64_t> p) { return build_named_graph(f, std::move(p)); }
}  // namespace

TEST(BuildCorona, FigureOneCounts) {
  const auto p2 = named(GraphFamily::path, {2});
  const auto p1 = named(GraphFamily::path, {1});
  const auto cg = build_corona({named(GraphFamily::path, {3}), {p2, p1, p2}});
  EXPECT_EQ(cg.graph.order(), 8u);
  EXPECT_EQ(cg.graph.size(), 14u);
}

TEST(BuildCorona, K2WithK1IsP4) {
  const auto k1 = named(GraphFamily::complete, {1});
  const auto cg = build_corona(uniform_corona(named(GraphFamily::complete, {2}), k1));
  // h_0 = 2 hangs off v_1, h_1 = 3 hangs off v_0: 2 - 1 - 0 - 3
  EXPECT_EQ(cg.graph, Graph(4, {{2, 1}, {1, 0}, {0, 3}}));
  EXPECT_EQ(to_string(cg.layout.label(2)), "v:0/w:1");
  EXPECT_EQ(cg.layout.flat_index(parse_corona_label("v:1/w:1")), 3u);
}

TEST(BuildCorona, SingleBaseVertex) {
  const auto k1 = named(GraphFamily::complete, {1});
  const auto cg = build_corona({k1, {k1}});
  EXPECT_EQ(cg.graph.order(), 2u);
  EXPECT_EQ(cg.graph.size(), 0u);
}

TEST(BuildCorona, SatelliteCountMismatch) {
  const auto k1 = named(GraphFamily::complete, {1});
  EXPECT_THROW(build_corona({named(GraphFamily::cycle, {3}), {k1, k1}}), SpecError);
}

TEST(BuildCorona, DegreeFormulas) {
  const auto base = named(GraphFamily::path, {4});
  const std::vector<Graph> sats = {named(GraphFamily::cycle, {3}), named(GraphFamily::path, {2}),
                                   named(GraphFamily::empty, {3}), named(GraphFamily::complete, {4})};
  const CoronaSpec spec{base, sats};
  const auto cg = build_corona(spec);
  const auto deg = cg.graph.degrees();
  const auto base_deg = base.degrees();
  for (std::size_t i = 0; i < base.order(); ++i) {
    std::size_t others = 0;
    for (std::size_t j = 0; j < base.order(); ++j)
      if (j != i) others += sats[j].order();
    EXPECT_EQ(deg[i], base_deg[i] + others);
    const auto hd = sats[i].degrees();
    for (std::size_t w = 0; w < sats[i].order(); ++w) {
      EXPECT_EQ(deg[cg.layout.flat_index({i, w + 1})], hd[w] + base.order() - 1);
    }
  }
}

TEST(Layout, LabelsAreBijective) {
  const CoronaSpec spec{named(GraphFamily::path, {3}),
                        {named(GraphFamily::path, {2}), named(GraphFamily::path, {1}),
                         named(GraphFamily::complete, {3})}};
  const CoronaLayout layout(spec);
  EXPECT_EQ(layout.order(), 9u);
  for (std::size_t i = 0; i < layout.order(); ++i) {
    const auto label = layout.label(i);
    EXPECT_EQ(layout.flat_index(label), i);
    EXPECT_EQ(parse_corona_label(to_string(label)), label);
  }
  EXPECT_EQ(layout.label(3), (CoronaLabel{0, 1}));
  EXPECT_EQ(layout.label(5), (CoronaLabel{1, 1}));
  EXPECT_EQ(layout.label(6), (CoronaLabel{2, 1}));
  EXPECT_THROW(layout.flat_index({1, 2}), ParameterError);
  EXPECT_THROW(layout.flat_index({3, 0}), ParameterError);
  EXPECT_THROW(layout.label(9), ParameterError);
}

TEST(Layout, LabelParsing) {
  EXPECT_EQ(parse_corona_label("v:3"), (CoronaLabel{3, 0}));
  EXPECT_EQ(parse_corona_label("v:3/w:0"), (CoronaLabel{3, 0}));
  EXPECT_EQ(parse_corona_label("v:3/w:2"), (CoronaLabel{3, 2}));
  for (const char* bad : {"", "v:", "x:1", "v:1/", "v:1/w:", "v:-1", "v:1/w:2x", "v:1w:2"}) {
    EXPECT_THROW(parse_corona_label(bad), ParseError) << bad;
  }
}

TEST(Blocks, K2WithK1) {
  const auto spec = uniform_corona(named(GraphFamily::complete, {2}), named(GraphFamily::complete, {1}));
  Eigen::MatrixXd p4(4, 4);
  p4 << 0, 1, 0, 1,
        1, 0, 1, 0,
        0, 1, 0, 0,
        1, 0, 0, 0;
  EXPECT_EQ(corona_adjacency_blocks(spec), p4);
}

TEST(Blocks, C4WithK2RowSums) {
  const auto spec = uniform_corona(named(GraphFamily::cycle, {4}), named(GraphFamily::complete, {2}));
  const auto a = corona_adjacency_blocks(spec);
  ASSERT_EQ(a.rows(), 12);
  EXPECT_EQ(a, a.transpose());
  for (Eigen::Index i = 0; i < 12; ++i) EXPECT_EQ(a.row(i).sum(), i < 4 ? 8.0 : 4.0);
}

TEST(Blocks, MatchBuildCorona) {
  const std::vector<Graph> bases = {named(GraphFamily::complete, {3}), named(GraphFamily::cycle, {5}),
                                    named(GraphFamily::hypercube, {3}), named(GraphFamily::petersen, {})};
  const std::vector<Graph> sats = {named(GraphFamily::cycle, {3}), named(GraphFamily::empty, {2}),
                                   named(GraphFamily::complete, {1}), named(GraphFamily::circulant, {6, 1, 3})};
  for (const auto& g : bases)
    for (const auto& h : sats) {
      const auto spec = uniform_corona(g, h);
      EXPECT_EQ(corona_adjacency_blocks(spec), build_corona(spec).graph.adjacency());
    }
}

TEST(Blocks, HeterogeneousRegularSatellites) {
  // Two different 2-regular graphs on 6 vertices.
  const auto c6 = named(GraphFamily::cycle, {6});
  const auto two_triangles = disjoint_union(named(GraphFamily::cycle, {3}), named(GraphFamily::cycle, {3}));
  const CoronaSpec spec{named(GraphFamily::complete, {2}), {c6, two_triangles}};
  EXPECT_EQ(corona_adjacency_blocks(spec), build_corona(spec).graph.adjacency());
}

TEST(Blocks, PreconditionsListOffenders) {
  const auto k1 = named(GraphFamily::complete, {1});
  const auto p3 = named(GraphFamily::path, {3});
  const auto c3 = named(GraphFamily::cycle, {3});
  EXPECT_THROW(corona_adjacency_blocks({named(GraphFamily::path, {3}), {k1, k1, k1}}), PreconditionError);
  EXPECT_THROW(corona_adjacency_blocks({parse_edge_list("0 1\n2 3"), {k1, k1, k1, k1}}),
               PreconditionError);
  try {
    corona_adjacency_blocks({named(GraphFamily::cycle, {3}), {c3, p3, k1}});
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("H_1"), std::string::npos);
    EXPECT_NE(what.find("H_2"), std::string::npos);
    EXPECT_EQ(what.find("H_0"), std::string::npos);
  }
}
