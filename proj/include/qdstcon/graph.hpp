#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qdstcon {

using Edge = std::pair<int, int>;

// Dense directed graph on vertices 0..n-1. Files and the CLI use 1-based ids.
class Digraph {
 public:
  Digraph(int n, const std::vector<Edge>& edges);

  int size() const { return n_; }
  bool has_edge(int from, int to) const;
  int edge_count() const { return m_; }
  std::vector<Edge> edges() const;
  std::vector<int> out_neighbors(int v) const;
  std::vector<int> in_neighbors(int v) const;

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.n_ == b.n_ && a.adj_ == b.adj_;
  }

 private:
  int n_;
  int m_ = 0;
  std::vector<std::uint8_t> adj_;
};

// Answers edge queries and counts them.
class GraphOracle {
 public:
  explicit GraphOracle(const Digraph& g) : g_(&g) {}
  GraphOracle(const GraphOracle&) = delete;
  GraphOracle& operator=(const GraphOracle&) = delete;

  bool query(int from, int to);
  std::uint64_t queries() const { return count_.load(); }
  const Digraph& graph() const { return *g_; }

 private:
  const Digraph* g_;
  std::atomic<std::uint64_t> count_{0};
};

struct SourcePath {
  Digraph graph;
  int source;
};

int ceil_log2(std::uint64_t x);
bool is_power_of_two(std::uint64_t x);

// Adds isolated vertices until the vertex count is a power of two.
Digraph pad_to_power_of_two(const Digraph& g, int at_least = 0);

std::optional<int> bfs_distance(const Digraph& g, int u, int v);
std::vector<int> bfs_distances(const Digraph& g, int u);  // -1 when unreachable

// Prepends a directed path s_1 -> ... -> s_a -> u of fresh vertices.
SourcePath attach_source_path(const Digraph& g, int u, int a);

Digraph random_digraph(int n, double p, std::uint64_t seed);
Digraph layered_path(int n);
Digraph complete_digraph(int n);

// Text format: "n m" then m lines "i j", 1-based.
Digraph read_graph(std::istream& in);
Digraph load_graph(const std::string& path);
void write_graph(std::ostream& out, const Digraph& g);

}  // namespace qdstcon
