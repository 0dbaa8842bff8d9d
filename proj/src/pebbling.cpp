#include "qdstcon/pebbling.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <string>

#include "qdstcon/errors.hpp"

namespace qdstcon {

PebbleConfig::PebbleConfig(std::vector<int> vertices) : v_(std::move(vertices)) {
  std::sort(v_.begin(), v_.end());
  v_.erase(std::unique(v_.begin(), v_.end()), v_.end());
}

bool PebbleConfig::contains(int v) const { return std::binary_search(v_.begin(), v_.end(), v); }

PebbleConfig PebbleConfig::with(int v) const {
  PebbleConfig out = *this;
  out.v_.insert(std::lower_bound(out.v_.begin(), out.v_.end(), v), v);
  return out;
}

PebbleConfig PebbleConfig::without(int v) const {
  PebbleConfig out = *this;
  out.v_.erase(std::lower_bound(out.v_.begin(), out.v_.end(), v));
  return out;
}

PebbleConfig apply_move(const PebbleConfig& config, const PebbleMove& move, const Digraph& g) {
  auto describe = [&] {
    return std::string(move.kind == MoveKind::Place ? "P " : "R ") + std::to_string(move.from + 1) +
           " " + std::to_string(move.to + 1);
  };
  if (!g.has_edge(move.from, move.to)) throw IllegalMove(describe() + ": no such edge");
  if (!config.contains(move.from)) throw IllegalMove(describe() + ": support not pebbled");
  if (move.kind == MoveKind::Place) {
    if (config.contains(move.to)) throw IllegalMove(describe() + ": target already pebbled");
    return config.with(move.to);
  }
  if (!config.contains(move.to)) throw IllegalMove(describe() + ": target not pebbled");
  return config.without(move.to);
}

ReplayStats replay(const Digraph& g, int u, const std::vector<PebbleMove>& moves) {
  ReplayStats stats{PebbleConfig({u}), 1};
  for (const auto& m : moves) {
    stats.final_config = apply_move(stats.final_config, m, g);
    stats.max_pebbles = std::max(stats.max_pebbles, stats.final_config.size());
  }
  return stats;
}

namespace {

void doubling(const std::vector<int>& path, int offset, int len, std::vector<PebbleMove>& out) {
  if (len == 1) {
    out.push_back({MoveKind::Place, path[offset], path[offset + 1]});
    return;
  }
  int half = len / 2;
  std::size_t start = out.size();
  doubling(path, offset, half, out);
  std::size_t end = out.size();
  doubling(path, offset + half, half, out);
  for (std::size_t k = end; k-- > start;) {
    PebbleMove m = out[k];
    m.kind = m.kind == MoveKind::Place ? MoveKind::Remove : MoveKind::Place;
    out.push_back(m);
  }
}

}  // namespace

std::vector<PebbleMove> strategy_moves(const Digraph& g, const std::vector<int>& path, int L) {
  if (L < 1 || !is_power_of_two(static_cast<std::uint64_t>(L)))
    throw BadPath("L must be a power of two");
  if (path.size() != static_cast<std::size_t>(L) + 1)
    throw BadPath("path must have L+1 vertices");
  for (int k = 0; k < L; ++k)
    if (!g.has_edge(path[k], path[k + 1])) throw BadPath("path step is not an edge of G");
  std::vector<PebbleMove> moves;
  doubling(path, 0, L, moves);
  return moves;
}

std::set<PebbleConfig> reachable_configs(const Digraph& g, int u, int max_pebbles,
                                         std::size_t cap) {
  std::set<PebbleConfig> seen{PebbleConfig({u})};
  std::deque<PebbleConfig> queue{PebbleConfig({u})};
  while (!queue.empty()) {
    PebbleConfig c = queue.front();
    queue.pop_front();
    for (int from : c.vertices()) {
      for (int to : g.out_neighbors(from)) {
        PebbleConfig next;
        if (c.contains(to)) {
          next = c.without(to);
        } else if (static_cast<int>(c.size()) < max_pebbles) {
          next = c.with(to);
        } else {
          continue;
        }
        if (seen.insert(next).second) {
          if (seen.size() > cap) throw CapExceeded("configuration cap exceeded");
          queue.push_back(std::move(next));
        }
      }
    }
  }
  return seen;
}

void write_trace(std::ostream& out, int L, const std::vector<int>& path,
                 const std::vector<PebbleMove>& moves) {
  out << "# L=" << L << " path=";
  for (std::size_t k = 0; k < path.size(); ++k) out << (k ? "," : "") << path[k] + 1;
  out << '\n';
  for (const auto& m : moves)
    out << (m.kind == MoveKind::Place ? 'P' : 'R') << ' ' << m.from + 1 << ' ' << m.to + 1 << '\n';
}

}  // namespace qdstcon
