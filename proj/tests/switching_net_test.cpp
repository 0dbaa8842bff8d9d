#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "qdstcon/errors.hpp"
#include "qdstcon/switching_net.hpp"

using namespace qdstcon;

namespace {

std::vector<Digraph> all_digraphs(int n) {
  std::vector<Edge> slots;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) slots.emplace_back(a, b);
  std::vector<Digraph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < slots.size(); ++k)
      if (mask >> k & 1) edges.push_back(slots[k]);
    out.emplace_back(n, edges);
  }
  return out;
}

bool reference(const Digraph& g, int u, int v, int ell) {
  auto d = bfs_distance(g, u, v);
  return d && *d <= (1 << ell);
}

}  // namespace

TEST(Sigma, F1) {
  EXPECT_EQ(f1({{0, 0}, {1, 1}, {2, 0}}), 2);
  EXPECT_EQ(f1({{0, 0}, {0, 0}}), 0);
  EXPECT_EQ(f1({{1, 0}, {1, 1}}), 2);
  EXPECT_EQ(f1({}), 0);
}

TEST(Sigma, CodesRoundTrip) {
  for (int c = 0; c <= 8; ++c) EXPECT_EQ(symbol_code(symbol_from_code(c, 4), 4), c);
}

TEST(Build, BaseStar) {
  auto net = SwitchingNet::build(4, 0, 2);
  EXPECT_EQ(net.edge_count(), 4);
  EXPECT_EQ(net.vertex_count(), 5);
  for (int j = 0; j < 4; ++j) {
    EXPECT_EQ(net.endpoints(j), std::make_pair(net.source(), net.sink(j)));
    EXPECT_EQ(net.label(j), std::make_pair(2, j));
    EXPECT_EQ(net.assoc_set(net.sink(j)), (std::vector<int>{std::min(2, j), std::max(2, j)}));
  }
  EXPECT_EQ(net.assoc_set(net.source()), std::vector<int>{2});
}

TEST(Build, Counts) {
  for (int n : {2, 4, 8}) {
    for (int ell = 0; ell <= 3; ++ell) {
      if (n == 8 && ell == 3) continue;  // covered by the acceptance suite
      auto net = SwitchingNet::build(n, ell, 0);
      std::int64_t e = n;
      for (int k = 0; k < ell; ++k) e *= 2 * n + 1;
      EXPECT_EQ(net.edge_count(), e);
      EXPECT_EQ(net.vertex_count(), vertex_count_recurrence(n, ell)) << n << " " << ell;
    }
  }
  EXPECT_EQ(SwitchingNet::build(2, 1, 0).vertex_count(), 9);
  EXPECT_EQ(SwitchingNet::build(4, 2, 0).edge_count(), 324);
}

TEST(Build, RejectsBadParams) {
  EXPECT_THROW(SwitchingNet::build(3, 1, 0), InvalidParams);
  EXPECT_THROW(SwitchingNet::build(4, 1, 4), InvalidParams);
  EXPECT_THROW(SwitchingNet::build(4, -1, 0), InvalidParams);
}

TEST(Labels, MatchDefinition) {
  for (int n : {2, 4}) {
    for (int ell = 0; ell <= 2; ++ell) {
      auto net = SwitchingNet::build(n, ell, 1);
      for (std::int64_t e = 0; e < net.edge_count(); ++e) {
        EXPECT_EQ(net.index_of(net.edge(e)), e);
        EXPECT_EQ(net.label(e), query_label(net, net.edge(e)));
      }
    }
  }
  auto net = SwitchingNet::build(4, 2, 0);
  EXPECT_EQ(query_label(net, {{{1, 3}, {0, 0}}, 2}), std::make_pair(3, 2));
  auto net1 = SwitchingNet::build(4, 1, 0);
  EXPECT_EQ(query_label(net1, {{{2, 1}}, 3}), std::make_pair(0, 3));
}

TEST(Gluing, EndpointsDifferByLabelTarget) {
  for (int n : {2, 4}) {
    for (int ell = 0; ell <= 2; ++ell) {
      auto net = SwitchingNet::build(n, ell, 0);
      for (std::int64_t e = 0; e < net.edge_count(); ++e) {
        auto [a, b] = net.endpoints(e);
        auto [from, to] = net.label(e);
        auto small = net.assoc_set(net.reversed(e) ? b : a);
        auto big = net.assoc_set(net.reversed(e) ? a : b);
        ASSERT_EQ(big.size(), small.size() + 1);
        EXPECT_TRUE(std::binary_search(small.begin(), small.end(), from));
        small.push_back(to);
        std::sort(small.begin(), small.end());
        EXPECT_EQ(small, big);
      }
    }
  }
}

TEST(Gluing, SourceAndSinks) {
  auto net = SwitchingNet::build(4, 2, 3);
  EXPECT_EQ(net.assoc_set(net.source()), std::vector<int>{3});
  for (int j = 0; j < 4; ++j) {
    std::vector<int> want{3, j};
    std::sort(want.begin(), want.end());
    EXPECT_EQ(net.assoc_set(net.sink(j)), want);
  }
  std::set<int> ids{net.source()};
  for (int j = 0; j < 4; ++j) ids.insert(net.sink(j));
  EXPECT_EQ(ids.size(), 5u);
}

TEST(Accepts, Examples) {
  Digraph single(2, {{0, 1}});
  auto n0 = SwitchingNet::build(2, 0, 0);
  GraphOracle o(single);
  auto r = accepts(n0, o, 1);
  EXPECT_TRUE(r.accepted);
  EXPECT_EQ(r.witness_edges.size(), 1u);
  EXPECT_EQ(o.queries(), 2u);
  EXPECT_TRUE(accepts(n0, o, 0).accepted);  // distance 0

  Digraph path = layered_path(4);
  auto n1 = SwitchingNet::build(4, 1, 0);
  GraphOracle po(path);
  EXPECT_FALSE(accepts(n1, po, 3).accepted);
  EXPECT_TRUE(accepts(n1, po, 2).accepted);
}

TEST(Accepts, ExhaustiveTwoVertices) {
  for (const auto& g : all_digraphs(2))
    for (int ell = 0; ell <= 2; ++ell)
      for (int u = 0; u < 2; ++u) {
        auto net = SwitchingNet::build(2, ell, u);
        GraphOracle o(g);
        auto on = on_edges(net, o);
        for (int v = 0; v < 2; ++v)
          EXPECT_EQ(accepts(net, on, v).accepted, reference(g, u, v, ell));
      }
}

TEST(Accepts, SampledFourVertices) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Digraph g = random_digraph(4, 0.3, seed);
    for (int ell = 0; ell <= 2; ++ell)
      for (int u = 0; u < 4; ++u) {
        auto net = SwitchingNet::build(4, ell, u);
        GraphOracle o(g);
        auto on = on_edges(net, o);
        EXPECT_EQ(o.queries(), static_cast<std::uint64_t>(net.edge_count()));
        for (int v = 0; v < 4; ++v) {
          auto r = accepts(net, on, v);
          ASSERT_EQ(r.accepted, reference(g, u, v, ell)) << seed << " " << ell << " " << u << " " << v;
          if (!r.accepted) continue;
          double bound = std::pow(3.0, ell);
          EXPECT_LE(static_cast<double>(r.witness_edges.size()), bound);
          auto moves = path_to_moves(net, r.witness_vertices, r.witness_edges);
          EXPECT_NO_THROW(replay(g, u, moves));
        }
      }
  }
}

TEST(TopDown, MatchesBuild) {
  for (int n : {2, 4}) {
    for (int root : {0, n - 1}) {
      auto prev = SwitchingNet::build(n, 0, root);
      for (int ell = 1; ell <= 2; ++ell) {
        auto next = rebuild_top_down(prev);
        EXPECT_EQ(structural_difference(next, SwitchingNet::build(n, ell, root)), "")
            << n << " " << ell;
        prev = next;
      }
    }
  }
}

TEST(TopDown, DetectsDifference) {
  auto a = SwitchingNet::build(2, 1, 0);
  auto b = SwitchingNet::build(2, 1, 1);
  EXPECT_NE(structural_difference(a, b), "");
}

TEST(Dump, LineFormat) {
  auto net = SwitchingNet::build(2, 0, 0);
  EXPECT_EQ(format_edge_line(net, 0), "-;0;1;1");
  EXPECT_EQ(format_edge_line(net, 1), "-;1;1;2");
  auto net1 = SwitchingNet::build(4, 1, 0);
  EXPECT_EQ(format_edge_line(net1, 4 * 2 + 3), "1:01;11;2;4");
}
