#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "qdstcon/graph.hpp"
#include "qdstcon/ledger.hpp"
#include "qdstcon/span_eval.hpp"

namespace qdstcon {

// Decides "path of length <= L from u to v" for L >= 1 and charges its cost to the ledger.
class DistDecider {
 public:
  virtual ~DistDecider() = default;
  virtual bool decide(const Digraph& g, int u, int v, int L, ResourceLedger& ledger) = 0;
  virtual bool randomized() const { return false; }
  virtual std::string name() const = 0;
};

// BFS; costs n time steps per call.
class ExactBfsDecider : public DistDecider {
 public:
  bool decide(const Digraph& g, int u, int v, int L, ResourceLedger& ledger) override;
  std::string name() const override { return "exact"; }
};

// Dist_L through the switching network; costs ceil(T_formula(n, L)) per call.
class SwitchingNetDecider : public DistDecider {
 public:
  explicit SwitchingNetDecider(DecideMode mode) : mode_(mode) {}
  bool decide(const Digraph& g, int u, int v, int L, ResourceLedger& ledger) override;
  std::string name() const override { return mode_ == DecideMode::Exact ? "swnet" : "swnet-spectral"; }

 private:
  DecideMode mode_;
};

// Flips the inner answer with probability 1 - p.
class NoisyDecider : public DistDecider {
 public:
  NoisyDecider(double p, std::uint64_t seed, std::unique_ptr<DistDecider> inner);
  bool decide(const Digraph& g, int u, int v, int L, ResourceLedger& ledger) override;
  bool randomized() const override { return true; }
  std::string name() const override;

 private:
  double p_;
  std::mt19937_64 rng_;
  std::unique_ptr<DistDecider> inner_;
};

// Majority of reps calls to the inner decider.
class BoostedDecider : public DistDecider {
 public:
  BoostedDecider(DistDecider& inner, int reps);
  bool decide(const Digraph& g, int u, int v, int L, ResourceLedger& ledger) override;
  bool randomized() const override { return inner_->randomized(); }
  std::string name() const override;

 private:
  DistDecider* inner_;
  int reps_;
};

// "exact", "swnet", "swnet-spectral" or "noisy:P" (noise around exact BFS).
std::unique_ptr<DistDecider> make_decider(const std::string& spec, std::uint64_t seed);

enum class Connectivity { Connected, NotConnected };

struct Admission {
  int vertex;
  int j;
  int round;  // 0 for the seeding pass
};

struct DstconResult {
  Connectivity result = Connectivity::NotConnected;
  int j_used = -1;  // offset whose pass returned, -1 when every offset aborted
  ResourceLedger ledger;
  std::uint64_t peak_records = 0;  // largest |S| + |S'| held
  std::vector<Admission> admissions;
};

// Calls per offset j are at most 2n + 2 n floor(n/L)(floor(n/L) + 1) + floor(n/L) + 1,
// so a run makes at most kCallConstant * n^3 / L calls.
inline constexpr double kCallConstant = 8.0;

// Outer BFS over distance classes j mod L. Dist_0 is equality and costs nothing.
// Randomized deciders are wrapped in a majority of boost_reps calls.
DstconResult dstcon(const Digraph& g, int s, int t, int L, DistDecider& decider, int boost_reps = 1);

}  // namespace qdstcon
