#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qdstcon/graph.hpp"
#include "qdstcon/pebbling.hpp"

namespace qdstcon {

// One letter of the alphabet {(0,0)} u {(1,i)} u {(2,j)}; payload is a vertex index.
struct SigmaSymbol {
  int tag = 0;
  int payload = 0;
  bool operator==(const SigmaSymbol&) const = default;
};

// Symbol code in 0..2n: 0, 1+i for (1,i), 1+n+j for (2,j).
int symbol_code(const SigmaSymbol& s, int n);
SigmaSymbol symbol_from_code(int code, int n);

struct NetEdge {
  std::vector<SigmaSymbol> sigma;
  int i = 0;
  bool operator==(const NetEdge&) const = default;
};

// 1-based position of the last tag-1 symbol, 0 if there is none.
int f1(const std::vector<SigmaSymbol>& sigma);

// Number of tag-2 symbols.
int count_tag2(const std::vector<SigmaSymbol>& sigma);

// The network N_{2^ell}(root) for an n-vertex graph. Edge index = code(sigma) * n + i,
// reading sigma as a base-(2n+1) number with sigma_1 most significant.
class SwitchingNet {
 public:
  static SwitchingNet build(int n, int ell, int root);

  int n() const { return n_; }
  int ell() const { return ell_; }
  int root() const { return root_; }
  std::int64_t edge_count() const { return leaves_ * n_; }
  std::int64_t leaf_count() const { return leaves_; }
  int vertex_count() const { return static_cast<int>(assoc_.size()); }
  int source() const { return source_; }
  int sink(int j) const { return sinks_.at(j); }

  NetEdge edge(std::int64_t index) const;
  std::int64_t index_of(const NetEdge& e) const;

  // (tail, head) in the actual orientation; blocks under an odd number of
  // tag-2 symbols are reversed.
  std::pair<int, int> endpoints(std::int64_t e) const;
  bool reversed(std::int64_t e) const { return leaf_tag2_[e / n_] & 1; }

  // Label from the stored per-leaf root. Equals query_label(net, edge(e)).
  std::pair<int, int> label(std::int64_t e) const {
    return {leaf_root_[e / n_], static_cast<int>(e % n_)};
  }

  // Associated multiset of G-vertices, sorted.
  const std::vector<int>& assoc_set(int vertex) const { return assoc_[vertex]; }

  friend SwitchingNet rebuild_top_down(const SwitchingNet& prev);

 private:
  SwitchingNet() = default;

  int n_ = 0;
  int ell_ = 0;
  int root_ = 0;
  std::int64_t leaves_ = 0;
  std::vector<int> slot_vertex_;   // leaf * (n+1) + local slot -> vertex id
  std::vector<int> leaf_root_;     // label source for each leaf block
  std::vector<std::uint8_t> leaf_tag2_;
  std::vector<std::vector<int>> assoc_;
  int source_ = 0;
  std::vector<int> sinks_;
};

// Label computed from the definition via f1, independent of the stored table.
std::pair<int, int> query_label(const SwitchingNet& net, const NetEdge& e);

// On iff the label (a, b) is an edge of G or a == b.
bool edge_on(const SwitchingNet& net, std::int64_t e, GraphOracle& oracle);

// One oracle query per edge.
std::vector<std::uint8_t> on_edges(const SwitchingNet& net, GraphOracle& oracle);

struct AcceptResult {
  bool accepted = false;
  std::vector<std::int64_t> witness_edges;
  std::vector<int> witness_vertices;  // net vertices from source to sink
};

AcceptResult accepts(const SwitchingNet& net, const std::vector<std::uint8_t>& on, int sink_index);
AcceptResult accepts(const SwitchingNet& net, GraphOracle& oracle, int sink_index);

SwitchingNet rebuild_top_down(const SwitchingNet& prev);

// Compares two networks up to relabeling of vertices. Returns an empty string
// when they agree, else a description of the first difference.
std::string structural_difference(const SwitchingNet& a, const SwitchingNet& b);

// Converts a path of net vertices into pebbling moves on G. Steps that change
// only the multiplicity of an already pebbled vertex produce no move.
std::vector<PebbleMove> path_to_moves(const SwitchingNet& net, const std::vector<int>& vertices,
                                      const std::vector<std::int64_t>& edges);

std::string format_edge_line(const SwitchingNet& net, std::int64_t e);

// Closed-form vertex count from |V_0| = n+1, |V_l| = (2n+1)|V_{l-1}| - n^2 - n.
std::int64_t vertex_count_recurrence(int n, int ell);

}  // namespace qdstcon
