#include "qdstcon/switching_net.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

#include "qdstcon/errors.hpp"

namespace qdstcon {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

std::vector<int> plus(std::vector<int> set, int v) {
  set.insert(std::upper_bound(set.begin(), set.end(), v), v);
  return set;
}

// Block addressing: a block at level d is named by its prefix P, a base-(2n+1)
// number over the first ell-d symbols. Its leaves are P*(2n+1)^d + [0, (2n+1)^d).
struct Layout {
  int n;
  std::int64_t radix;

  std::int64_t child(std::int64_t P, int code) const { return P * radix + code; }
  std::int64_t slot(std::int64_t leaf, int local) const { return leaf * (n + 1) + local; }

  std::int64_t source_slot(std::int64_t P, int d) const {
    for (; d > 0; --d) P = child(P, 0);
    return slot(P, 0);
  }
  std::int64_t sink_slot(std::int64_t P, int d, int j) const {
    if (d == 0) return slot(P, 1 + j);
    return source_slot(child(P, 1 + n + j), d - 1);
  }

  void glue(std::int64_t P, int d, UnionFind& uf) const {
    if (d == 0) return;
    for (int i = 0; i < n; ++i)
      uf.unite(sink_slot(child(P, 0), d - 1, i), source_slot(child(P, 1 + i), d - 1));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        uf.unite(sink_slot(child(P, 1 + i), d - 1, j), sink_slot(child(P, 1 + n + j), d - 1, i));
    for (int c = 0; c < radix; ++c) glue(child(P, c), d - 1, uf);
  }
};

struct LeafData {
  std::vector<int>& root;
  std::vector<std::uint8_t>& tag2;
  std::vector<std::vector<int>>& slot_assoc;
};

// Block with root r and extra multiset A has source A+[r] and sinks A+[r, j].
void assign_block(const Layout& lay, std::int64_t P, int d, int r, const std::vector<int>& A,
                  int parity, LeafData& out) {
  if (d == 0) {
    out.root[P] = r;
    out.tag2[P] = static_cast<std::uint8_t>(parity & 1);
    auto base = plus(A, r);
    out.slot_assoc[lay.slot(P, 0)] = base;
    for (int k = 0; k < lay.n; ++k) out.slot_assoc[lay.slot(P, 1 + k)] = plus(base, k);
    return;
  }
  assign_block(lay, lay.child(P, 0), d - 1, r, A, parity, out);
  auto with_r = plus(A, r);
  for (int i = 0; i < lay.n; ++i) assign_block(lay, lay.child(P, 1 + i), d - 1, i, with_r, parity, out);
  for (int j = 0; j < lay.n; ++j)
    assign_block(lay, lay.child(P, 1 + lay.n + j), d - 1, r, plus(A, j), parity + 1, out);
}

void check_size(int n, int ell) {
  if (n < 1 || !is_power_of_two(static_cast<std::uint64_t>(n)))
    throw InvalidParams("switching network needs n a power of two");
  if (ell < 0) throw InvalidParams("negative depth");
  double slots = static_cast<double>(n + 1);
  for (int k = 0; k < ell; ++k) slots *= 2.0 * n + 1;
  if (slots > 4e7) throw InvalidParams("switching network too large to build");
}

}  // namespace

int symbol_code(const SigmaSymbol& s, int n) {
  switch (s.tag) {
    case 0: return 0;
    case 1: return 1 + s.payload;
    default: return 1 + n + s.payload;
  }
}

SigmaSymbol symbol_from_code(int code, int n) {
  if (code == 0) return {0, 0};
  if (code <= n) return {1, code - 1};
  return {2, code - 1 - n};
}

int f1(const std::vector<SigmaSymbol>& sigma) {
  for (int k = static_cast<int>(sigma.size()); k >= 1; --k)
    if (sigma[k - 1].tag == 1) return k;
  return 0;
}

int count_tag2(const std::vector<SigmaSymbol>& sigma) {
  return static_cast<int>(std::count_if(sigma.begin(), sigma.end(),
                                        [](const SigmaSymbol& s) { return s.tag == 2; }));
}

std::int64_t vertex_count_recurrence(int n, int ell) {
  std::int64_t v = n + 1;
  for (int k = 0; k < ell; ++k) v = (2 * n + 1) * v - static_cast<std::int64_t>(n) * n - n;
  return v;
}

SwitchingNet SwitchingNet::build(int n, int ell, int root) {
  check_size(n, ell);
  if (root < 0 || root >= n) throw InvalidParams("root out of range");
  SwitchingNet net;
  net.n_ = n;
  net.ell_ = ell;
  net.root_ = root;
  net.leaves_ = ipow(2 * n + 1, ell);
  Layout lay{n, 2 * n + 1};
  std::size_t slots = static_cast<std::size_t>(net.leaves_) * (n + 1);

  net.leaf_root_.assign(net.leaves_, 0);
  net.leaf_tag2_.assign(net.leaves_, 0);
  std::vector<std::vector<int>> slot_assoc(slots);
  LeafData data{net.leaf_root_, net.leaf_tag2_, slot_assoc};
  assign_block(lay, 0, ell, root, {}, 0, data);

  UnionFind uf(slots);
  lay.glue(0, ell, uf);

  std::vector<int> dense(slots, -1);
  net.slot_vertex_.resize(slots);
  for (std::size_t s = 0; s < slots; ++s) {
    std::size_t r = uf.find(s);
    if (dense[r] < 0) {
      dense[r] = static_cast<int>(net.assoc_.size());
      net.assoc_.push_back(slot_assoc[s]);
    } else if (net.assoc_[dense[r]] != slot_assoc[s]) {
      throw InvariantViolation("glued slots disagree on associated set");
    }
    net.slot_vertex_[s] = dense[r];
  }
  net.source_ = net.slot_vertex_[lay.source_slot(0, ell)];
  for (int j = 0; j < n; ++j) net.sinks_.push_back(net.slot_vertex_[lay.sink_slot(0, ell, j)]);
  return net;
}

NetEdge SwitchingNet::edge(std::int64_t index) const {
  NetEdge e;
  e.i = static_cast<int>(index % n_);
  std::int64_t leaf = index / n_;
  e.sigma.resize(ell_);
  for (int k = ell_ - 1; k >= 0; --k) {
    e.sigma[k] = symbol_from_code(static_cast<int>(leaf % (2 * n_ + 1)), n_);
    leaf /= 2 * n_ + 1;
  }
  return e;
}

std::int64_t SwitchingNet::index_of(const NetEdge& e) const {
  std::int64_t leaf = 0;
  for (const auto& s : e.sigma) leaf = leaf * (2 * n_ + 1) + symbol_code(s, n_);
  return leaf * n_ + e.i;
}

std::pair<int, int> SwitchingNet::endpoints(std::int64_t e) const {
  std::int64_t leaf = e / n_;
  int i = static_cast<int>(e % n_);
  int a = slot_vertex_[leaf * (n_ + 1)];
  int b = slot_vertex_[leaf * (n_ + 1) + 1 + i];
  if (leaf_tag2_[leaf] & 1) return {b, a};
  return {a, b};
}

std::pair<int, int> query_label(const SwitchingNet& net, const NetEdge& e) {
  int k = f1(e.sigma);
  if (k == 0) return {net.root(), e.i};
  return {e.sigma[k - 1].payload, e.i};
}

bool edge_on(const SwitchingNet& net, std::int64_t e, GraphOracle& oracle) {
  auto [a, b] = net.label(e);
  // Diagonal labels stand for zero-length steps and are always on; they still
  // cost a query so the count stays one per edge.
  bool present = oracle.query(a, b);
  return present || a == b;
}

std::vector<std::uint8_t> on_edges(const SwitchingNet& net, GraphOracle& oracle) {
  std::vector<std::uint8_t> on(net.edge_count());
  for (std::int64_t e = 0; e < net.edge_count(); ++e) on[e] = edge_on(net, e, oracle) ? 1 : 0;
  return on;
}

AcceptResult accepts(const SwitchingNet& net, const std::vector<std::uint8_t>& on, int sink_index) {
  int V = net.vertex_count();
  std::vector<std::vector<std::pair<int, std::int64_t>>> adj(V);
  for (std::int64_t e = 0; e < net.edge_count(); ++e) {
    if (!on[e]) continue;
    auto [a, b] = net.endpoints(e);
    adj[a].emplace_back(b, e);
    adj[b].emplace_back(a, e);
  }
  int s = net.source(), t = net.sink(sink_index);
  std::vector<std::int64_t> via(V, -2);
  std::vector<int> prev(V, -1);
  std::deque<int> queue{s};
  via[s] = -1;
  while (!queue.empty() && via[t] == -2) {
    int a = queue.front();
    queue.pop_front();
    for (auto [b, e] : adj[a]) {
      if (via[b] != -2) continue;
      via[b] = e;
      prev[b] = a;
      queue.push_back(b);
    }
  }
  AcceptResult r;
  if (via[t] == -2) return r;
  r.accepted = true;
  for (int x = t; x != s; x = prev[x]) {
    r.witness_vertices.push_back(x);
    r.witness_edges.push_back(via[x]);
  }
  r.witness_vertices.push_back(s);
  std::reverse(r.witness_vertices.begin(), r.witness_vertices.end());
  std::reverse(r.witness_edges.begin(), r.witness_edges.end());
  return r;
}

AcceptResult accepts(const SwitchingNet& net, GraphOracle& oracle, int sink_index) {
  return accepts(net, on_edges(net, oracle), sink_index);
}

SwitchingNet rebuild_top_down(const SwitchingNet& prev) {
  int n = prev.n_;
  check_size(n, prev.ell_ + 1);
  SwitchingNet net;
  net.n_ = n;
  net.ell_ = prev.ell_ + 1;
  net.root_ = prev.root_;
  net.leaves_ = prev.leaves_ * (2 * n + 1);
  Layout lay{n, 2 * n + 1};
  std::size_t slots = static_cast<std::size_t>(net.leaves_) * (n + 1);
  std::size_t old_vertices = prev.assoc_.size();

  net.leaf_root_.assign(net.leaves_, 0);
  net.leaf_tag2_.assign(net.leaves_, 0);
  std::vector<std::vector<int>> slot_assoc(slots);
  LeafData data{net.leaf_root_, net.leaf_tag2_, slot_assoc};
  UnionFind uf(slots + old_vertices);

  for (std::int64_t leaf = 0; leaf < prev.leaves_; ++leaf) {
    int r = prev.leaf_root_[leaf];
    int old_source = prev.slot_vertex_[leaf * (n + 1)];
    std::vector<int> A = prev.assoc_[old_source];
    A.erase(std::find(A.begin(), A.end(), r));
    assign_block(lay, leaf, 1, r, A, prev.leaf_tag2_[leaf], data);
    lay.glue(leaf, 1, uf);
    uf.unite(lay.source_slot(leaf, 1), slots + old_source);
    for (int j = 0; j < n; ++j)
      uf.unite(lay.sink_slot(leaf, 1, j), slots + prev.slot_vertex_[leaf * (n + 1) + 1 + j]);
  }

  std::vector<int> dense(slots + old_vertices, -1);
  net.slot_vertex_.resize(slots);
  for (std::size_t s = 0; s < slots; ++s) {
    std::size_t r = uf.find(s);
    if (dense[r] < 0) {
      dense[r] = static_cast<int>(net.assoc_.size());
      net.assoc_.push_back(slot_assoc[s]);
    } else if (net.assoc_[dense[r]] != slot_assoc[s]) {
      throw InvariantViolation("rebuilt block disagrees with enclosing associated set");
    }
    net.slot_vertex_[s] = dense[r];
  }
  net.source_ = dense[uf.find(slots + prev.source_)];
  for (int j = 0; j < n; ++j) net.sinks_.push_back(dense[uf.find(slots + prev.sinks_[j])]);
  return net;
}

std::string structural_difference(const SwitchingNet& a, const SwitchingNet& b) {
  if (a.n() != b.n() || a.ell() != b.ell() || a.root() != b.root()) return "parameters differ";
  if (a.vertex_count() != b.vertex_count()) return "vertex counts differ";
  if (a.edge_count() != b.edge_count()) return "edge counts differ";
  std::vector<int> ca(a.vertex_count(), -1), cb(b.vertex_count(), -1);
  int next_a = 0, next_b = 0;
  auto canon = [](std::vector<int>& c, int& next, int v) {
    if (c[v] < 0) c[v] = next++;
    return c[v];
  };
  for (std::int64_t e = 0; e < a.edge_count(); ++e) {
    auto [ta, ha] = a.endpoints(e);
    auto [tb, hb] = b.endpoints(e);
    if (canon(ca, next_a, ta) != canon(cb, next_b, tb) ||
        canon(ca, next_a, ha) != canon(cb, next_b, hb))
      return "endpoints differ at edge " + std::to_string(e);
    if (a.label(e) != b.label(e)) return "labels differ at edge " + std::to_string(e);
    if (a.assoc_set(ta) != b.assoc_set(tb) || a.assoc_set(ha) != b.assoc_set(hb))
      return "associated sets differ at edge " + std::to_string(e);
  }
  if (ca[a.source()] != cb[b.source()]) return "sources differ";
  for (int j = 0; j < a.n(); ++j)
    if (ca[a.sink(j)] != cb[b.sink(j)]) return "sink " + std::to_string(j) + " differs";
  return {};
}

std::vector<PebbleMove> path_to_moves(const SwitchingNet& net, const std::vector<int>& vertices,
                                      const std::vector<std::int64_t>& edges) {
  if (vertices.size() != edges.size() + 1) throw InvalidParams("path shape mismatch");
  std::vector<PebbleMove> moves;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& from = net.assoc_set(vertices[k]);
    const auto& to = net.assoc_set(vertices[k + 1]);
    auto [v, w] = net.label(edges[k]);
    bool grow = to.size() == from.size() + 1;
    const auto& big = grow ? to : from;
    const auto& small = grow ? from : to;
    if (big.size() != small.size() + 1 || plus(small, w) != big)
      throw InvariantViolation("path step does not add or remove the labeled vertex");
    if (std::binary_search(small.begin(), small.end(), w)) continue;
    moves.push_back({grow ? MoveKind::Place : MoveKind::Remove, v, w});
  }
  return moves;
}

std::string format_edge_line(const SwitchingNet& net, std::int64_t e) {
  int width = std::max(1, ceil_log2(static_cast<std::uint64_t>(net.n())));
  auto bits = [width](int x) {
    std::string s(width, '0');
    for (int k = 0; k < width; ++k)
      if (x >> (width - 1 - k) & 1) s[k] = '1';
    return s;
  };
  NetEdge ne = net.edge(e);
  std::ostringstream out;
  if (ne.sigma.empty()) out << '-';
  for (std::size_t k = 0; k < ne.sigma.size(); ++k)
    out << (k ? "." : "") << ne.sigma[k].tag << ':' << bits(ne.sigma[k].payload);
  auto [a, b] = net.label(e);
  out << ';' << bits(ne.i) << ';' << a + 1 << ';' << b + 1;
  return out.str();
}

}  // namespace qdstcon
