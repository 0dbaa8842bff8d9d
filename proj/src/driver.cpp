#include "qdstcon/driver.hpp"

#include <algorithm>
#include <cmath>

#include "qdstcon/errors.hpp"

namespace qdstcon {

bool ExactBfsDecider::decide(const Digraph& g, int u, int v, int L, ResourceLedger& ledger) {
  ledger.time_steps += static_cast<std::uint64_t>(g.size());
  ++ledger.decider_calls;
  auto d = bfs_distance(g, u, v);
  return d && *d <= L;
}

bool SwitchingNetDecider::decide(const Digraph& g, int u, int v, int L, ResourceLedger& ledger) {
  DistResult r = Dist_L(g, u, v, L, mode_);
  ++ledger.decider_calls;
  ledger.time_steps += static_cast<std::uint64_t>(std::ceil(t_formula(g.size(), L)));
  ledger.absorb(r.report.ledger);
  return r.answer;
}

NoisyDecider::NoisyDecider(double p, std::uint64_t seed, std::unique_ptr<DistDecider> inner)
    : p_(p), rng_(seed), inner_(std::move(inner)) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParams("noise p must lie in [0, 1]");
  if (!inner_) throw InvalidParams("noisy decider needs an inner decider");
}

bool NoisyDecider::decide(const Digraph& g, int u, int v, int L, ResourceLedger& ledger) {
  bool answer = inner_->decide(g, u, v, L, ledger);
  std::bernoulli_distribution correct(p_);
  return correct(rng_) ? answer : !answer;
}

std::string NoisyDecider::name() const { return "noisy:" + std::to_string(p_); }

BoostedDecider::BoostedDecider(DistDecider& inner, int reps) : inner_(&inner), reps_(reps) {
  if (reps < 1 || reps % 2 == 0) throw InvalidParams("boost reps must be odd and >= 1");
}

bool BoostedDecider::decide(const Digraph& g, int u, int v, int L, ResourceLedger& ledger) {
  int yes = 0;
  for (int k = 0; k < reps_; ++k) yes += inner_->decide(g, u, v, L, ledger);
  return 2 * yes > reps_;
}

std::string BoostedDecider::name() const { return inner_->name() + "x" + std::to_string(reps_); }

std::unique_ptr<DistDecider> make_decider(const std::string& spec, std::uint64_t seed) {
  if (spec == "exact") return std::make_unique<ExactBfsDecider>();
  if (spec == "swnet") return std::make_unique<SwitchingNetDecider>(DecideMode::Exact);
  if (spec == "swnet-spectral") return std::make_unique<SwitchingNetDecider>(DecideMode::Spectral);
  if (spec.rfind("noisy:", 0) == 0) {
    double p = 0;
    try {
      std::size_t used = 0;
      p = std::stod(spec.substr(6), &used);
      if (used != spec.size() - 6) throw InvalidParams("");
    } catch (const std::exception&) {
      throw InvalidParams("bad noise level in '" + spec + "'");
    }
    return std::make_unique<NoisyDecider>(p, seed, std::make_unique<ExactBfsDecider>());
  }
  throw InvalidParams("unknown decider '" + spec + "'");
}

namespace {

// One pass of the outer loop for a fixed offset j.
class Pass {
 public:
  Pass(const Digraph& g, int L, DistDecider& dist, DstconResult& out)
      : g_(g), L_(L), dist_(dist), out_(out), limit_(static_cast<double>(g.size()) / L) {}

  bool within(int u, int v, int d) {
    if (d == 0) return u == v;
    return dist_.decide(g_, u, v, d, out_.ledger);
  }

  void hold(std::size_t records) {
    out_.peak_records = std::max<std::uint64_t>(out_.peak_records, records);
  }

  // Returns false when the size guard fires.
  bool run(int s, int j) {
    S_.assign(1, s);
    hold(1);
    if (j > 0) {
      for (int v = 0; v < g_.size(); ++v) {
        if (within(s, v, j) && !within(s, v, j - 1)) {
          if (S_.size() > limit_) return false;
          S_.push_back(v);
          hold(S_.size());
          out_.admissions.push_back({v, j, 0});
        }
      }
    }
    int rounds = g_.size() / L_;
    for (int i = 1; i <= rounds; ++i) {
      std::vector<int> next;
      for (int v = 0; v < g_.size(); ++v) {
        bool some = std::any_of(S_.begin(), S_.end(), [&](int u) { return within(u, v, L_); });
        if (!some) continue;
        bool none = std::none_of(S_.begin(), S_.end(), [&](int u) { return within(u, v, L_ - 1); });
        if (!none) continue;
        if (S_.size() + next.size() > limit_) return false;
        next.push_back(v);
        hold(S_.size() + next.size());
        out_.admissions.push_back({v, j, i});
      }
      S_.insert(S_.end(), next.begin(), next.end());
    }
    return true;
  }

  bool reaches(int t) {
    return std::any_of(S_.begin(), S_.end(), [&](int u) { return within(u, t, L_); });
  }

 private:
  const Digraph& g_;
  int L_;
  DistDecider& dist_;
  DstconResult& out_;
  double limit_;
  std::vector<int> S_;
};

}  // namespace

DstconResult dstcon(const Digraph& g, int s, int t, int L, DistDecider& decider, int boost_reps) {
  int n = g.size();
  if (L < 1 || L > n) throw InvalidParams("L must satisfy 1 <= L <= n");
  if (s < 0 || s >= n || t < 0 || t >= n) throw InvalidParams("vertex out of range");
  if (boost_reps < 1 || boost_reps % 2 == 0) throw InvalidParams("boost reps must be odd and >= 1");
  std::unique_ptr<BoostedDecider> boosted;
  DistDecider* dist = &decider;
  if (decider.randomized() && boost_reps > 1) {
    boosted = std::make_unique<BoostedDecider>(decider, boost_reps);
    dist = boosted.get();
  }

  DstconResult out;
  int record_bits = 1 + ceil_log2(static_cast<std::uint64_t>(L));
  for (int j = 0; j < L; ++j) {
    Pass pass(g, L, *dist, out);
    if (!pass.run(s, j)) continue;  // try next j
    out.j_used = j;
    out.result = pass.reaches(t) ? Connectivity::Connected : Connectivity::NotConnected;
    out.ledger.space_cells = out.peak_records * record_bits;
    return out;
  }
  out.ledger.guard_exhausted = true;
  out.ledger.space_cells = out.peak_records * record_bits;
  return out;
}

}  // namespace qdstcon
