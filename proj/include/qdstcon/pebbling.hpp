#pragma once

#include <cstddef>
#include <iosfwd>
#include <set>
#include <vector>

#include "qdstcon/graph.hpp"

namespace qdstcon {

// Sorted set of pebbled vertices.
class PebbleConfig {
 public:
  PebbleConfig() = default;
  explicit PebbleConfig(std::vector<int> vertices);

  bool contains(int v) const;
  std::size_t size() const { return v_.size(); }
  const std::vector<int>& vertices() const { return v_; }
  PebbleConfig with(int v) const;
  PebbleConfig without(int v) const;

  auto operator<=>(const PebbleConfig&) const = default;

 private:
  std::vector<int> v_;
};

enum class MoveKind { Place, Remove };

struct PebbleMove {
  MoveKind kind;
  int from;  // supporting pebble
  int to;
  bool operator==(const PebbleMove&) const = default;
};

PebbleConfig apply_move(const PebbleConfig& config, const PebbleMove& move, const Digraph& g);

struct ReplayStats {
  PebbleConfig final_config;
  std::size_t max_pebbles = 0;
};

// Replays moves from {u}; throws IllegalMove on the first bad move.
ReplayStats replay(const Digraph& g, int u, const std::vector<PebbleMove>& moves);

std::vector<PebbleMove> strategy_moves(const Digraph& g, const std::vector<int>& path, int L);

std::set<PebbleConfig> reachable_configs(const Digraph& g, int u, int max_pebbles,
                                         std::size_t cap = 1'000'000);

void write_trace(std::ostream& out, int L, const std::vector<int>& path,
                 const std::vector<PebbleMove>& moves);

}  // namespace qdstcon
