#include "qdstcon/graph.hpp"

#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "qdstcon/errors.hpp"

namespace qdstcon {

Digraph::Digraph(int n, const std::vector<Edge>& edges) : n_(n) {
  if (n < 2) throw InvalidParams("graph needs at least 2 vertices");
  adj_.assign(static_cast<std::size_t>(n) * n, 0);
  for (auto [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n) throw GraphFormatError("vertex id out of range");
    if (a == b) throw GraphFormatError("self-loop on vertex " + std::to_string(a + 1));
    auto& cell = adj_[static_cast<std::size_t>(a) * n + b];
    if (cell) {
      throw GraphFormatError("duplicate edge " + std::to_string(a + 1) + " " +
                             std::to_string(b + 1));
    }
    cell = 1;
    ++m_;
  }
}

bool Digraph::has_edge(int from, int to) const {
  if (from < 0 || from >= n_ || to < 0 || to >= n_) return false;
  return adj_[static_cast<std::size_t>(from) * n_ + to] != 0;
}

std::vector<Edge> Digraph::edges() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      if (has_edge(a, b)) out.emplace_back(a, b);
  return out;
}

std::vector<int> Digraph::out_neighbors(int v) const {
  std::vector<int> out;
  for (int b = 0; b < n_; ++b)
    if (has_edge(v, b)) out.push_back(b);
  return out;
}

std::vector<int> Digraph::in_neighbors(int v) const {
  std::vector<int> out;
  for (int a = 0; a < n_; ++a)
    if (has_edge(a, v)) out.push_back(a);
  return out;
}

bool GraphOracle::query(int from, int to) {
  count_.fetch_add(1, std::memory_order_relaxed);
  return g_->has_edge(from, to);
}

int ceil_log2(std::uint64_t x) {
  int k = 0;
  while ((std::uint64_t{1} << k) < x) ++k;
  return k;
}

bool is_power_of_two(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

Digraph pad_to_power_of_two(const Digraph& g, int at_least) {
  std::uint64_t target = std::uint64_t{1} << ceil_log2(g.size());
  while (target < static_cast<std::uint64_t>(at_least)) target <<= 1;
  if (target == static_cast<std::uint64_t>(g.size())) return g;
  return Digraph(static_cast<int>(target), g.edges());
}

std::vector<int> bfs_distances(const Digraph& g, int u) {
  std::vector<int> dist(g.size(), -1);
  std::deque<int> queue{u};
  dist[u] = 0;
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    for (int b = 0; b < g.size(); ++b) {
      if (dist[b] < 0 && g.has_edge(a, b)) {
        dist[b] = dist[a] + 1;
        queue.push_back(b);
      }
    }
  }
  return dist;
}

std::optional<int> bfs_distance(const Digraph& g, int u, int v) {
  int d = bfs_distances(g, u)[v];
  if (d < 0) return std::nullopt;
  return d;
}

SourcePath attach_source_path(const Digraph& g, int u, int a) {
  if (a < 0) throw InvalidParams("negative source path length");
  if (a == 0) return {g, u};
  auto edges = g.edges();
  int n = g.size();
  for (int k = 0; k + 1 < a; ++k) edges.emplace_back(n + k, n + k + 1);
  edges.emplace_back(n + a - 1, u);
  return {Digraph(n + a, edges), n};
}

Digraph random_digraph(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && coin(rng)) edges.emplace_back(a, b);
  return Digraph(n, edges);
}

Digraph layered_path(int n) {
  std::vector<Edge> edges;
  for (int a = 0; a + 1 < n; ++a) edges.emplace_back(a, a + 1);
  return Digraph(n, edges);
}

Digraph complete_digraph(int n) {
  std::vector<Edge> edges;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) edges.emplace_back(a, b);
  return Digraph(n, edges);
}

Digraph read_graph(std::istream& in) {
  long long n = 0, m = 0;
  if (!(in >> n >> m)) throw GraphFormatError("missing header line 'n m'");
  if (n < 2 || n > 1'000'000) throw GraphFormatError("vertex count out of range");
  if (m < 0 || m > n * (n - 1)) throw GraphFormatError("edge count out of range");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    long long a = 0, b = 0;
    if (!(in >> a >> b)) throw GraphFormatError("expected " + std::to_string(m) + " edges");
    if (a < 1 || a > n || b < 1 || b > n) throw GraphFormatError("vertex id out of range");
    edges.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
  }
  std::string rest;
  if (in >> rest) throw GraphFormatError("trailing data after edge list");
  return Digraph(static_cast<int>(n), edges);
}

Digraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphFormatError("cannot open " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const Digraph& g) {
  out << g.size() << ' ' << g.edge_count() << '\n';
  for (auto [a, b] : g.edges()) out << a + 1 << ' ' << b + 1 << '\n';
}

}  // namespace qdstcon
