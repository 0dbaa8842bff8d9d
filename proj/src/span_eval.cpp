#include "qdstcon/span_eval.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "qdstcon/errors.hpp"

namespace qdstcon {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Rows (a +- b)/sqrt2 of a column basis, as one matrix.
Eigen::RowVectorXd pair_row(const Eigen::MatrixXd& Y, std::int64_t a, std::int64_t b, double sign) {
  return (Y.row(a) + sign * Y.row(b)) * kInvSqrt2;
}

// Orthonormal kernel of N via the eigenvectors of N^T N below kKernelTol.
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& N) {
  Eigen::MatrixXd K = N.transpose() * N;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K);
  if (eig.info() != Eigen::Success) throw InvariantViolation("eigensolver failed");
  int count = 0;
  while (count < K.cols() && eig.eigenvalues()[count] < kKernelTol) ++count;
  return eig.eigenvectors().leftCols(count);
}

// Dense orthonormal basis of B: symmetric edge vectors, then the star basis.
Eigen::MatrixXd dense_b_basis(const StateIndex& ix, const BSpaces& sp) {
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(ix.dim(), ix.edges + sp.stars.cols());
  for (std::int64_t e = 0; e < ix.edges; ++e) {
    Q(ix.fwd(e), e) = kInvSqrt2;
    Q(ix.bwd(e), e) = kInvSqrt2;
  }
  Q.rightCols(sp.stars.cols()) = sp.stars;
  return Q;
}

struct CacheKey {
  int n, ell, root, sink;
  auto operator<=>(const CacheKey&) const = default;
};

std::mutex cache_mutex;
std::map<CacheKey, std::shared_ptr<const BSpaces>> cache;
std::size_t cache_bytes = 0;
const std::size_t kCacheBudget = std::size_t{768} << 20;

std::shared_ptr<const BSpaces> cached_b_spaces(const SwitchingNet& net, int sink) {
  CacheKey key{net.n(), net.ell(), net.root(), sink};
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto spaces = build_b_spaces(net, sink);
  std::size_t bytes = sizeof(double) * (spaces->bperp.size() + spaces->stars.size());
  std::lock_guard<std::mutex> lock(cache_mutex);
  if (cache_bytes + bytes > kCacheBudget) {
    cache.clear();
    cache_bytes = 0;
  }
  if (cache.emplace(key, spaces).second) cache_bytes += bytes;
  return spaces;
}

int witness_length(const SwitchingNet& net, const std::vector<std::uint8_t>& on, int sink) {
  AcceptResult r = accepts(net, on, sink);
  return r.accepted ? static_cast<int>(r.witness_edges.size()) : -1;
}

}  // namespace

std::shared_ptr<const BSpaces> build_b_spaces(const SwitchingNet& net, int sink) {
  StateIndex ix = state_index(net);
  auto out = std::make_shared<BSpaces>();
  out->bperp = build_Bperp_basis(net, sink).vectors;
  Eigen::MatrixXd gram = out->bperp.transpose() * out->bperp;
  double off = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).norm();
  if (off > kBasisTol) throw BasisMismatch("B-perp basis is not orthonormal: " + std::to_string(off));

  // The symmetric edge vectors are orthonormal and orthogonal to every star,
  // so Gram-Schmidt leaves them as they are; only the stars need orthonormalizing.
  Eigen::MatrixXd stars = build_B_minus_basis(net, sink).vectors;
  for (std::int64_t e = 0; e < ix.edges; ++e) {
    if ((stars.row(ix.fwd(e)) + stars.row(ix.bwd(e))).cwiseAbs().maxCoeff() != 0.0)
      throw BasisMismatch("star not orthogonal to a symmetric edge vector");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(stars);
  qr.setThreshold(1e-10);
  Eigen::Index rank = qr.rank();
  out->stars = qr.householderQ() * Eigen::MatrixXd::Identity(ix.dim(), rank);

  if (ix.edges + rank + out->bperp.cols() != ix.dim()) {
    throw BasisMismatch("dim B + dim B-perp = " + std::to_string(ix.edges + rank + out->bperp.cols()) +
                        " != " + std::to_string(ix.dim()));
  }
  // With complementary ranks, ||P_B + P_Bperp - I||_F^2 = 2 ||Q_B^T Q_Bperp||_F^2.
  double cross = (out->stars.transpose() * out->bperp).squaredNorm();
  for (std::int64_t e = 0; e < ix.edges; ++e)
    cross += pair_row(out->bperp, ix.fwd(e), ix.bwd(e), 1.0).squaredNorm();
  out->basis_gap = std::sqrt(2.0 * cross);
  if (out->basis_gap > kBasisTol)
    throw BasisMismatch("P_B disagrees with I - P_Bperp by " + std::to_string(out->basis_gap));
  return out;
}

Eigen::MatrixXd ReflectionPair::P_A() const {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(index.dim(), index.dim());
  for (std::int64_t e = 0; e < index.edges; ++e) {
    double sign = on[e] ? -0.5 : 0.5;
    P(index.fwd(e), index.fwd(e)) = 0.5;
    P(index.bwd(e), index.bwd(e)) = 0.5;
    P(index.fwd(e), index.bwd(e)) = sign;
    P(index.bwd(e), index.fwd(e)) = sign;
  }
  for (auto [a, b] : {std::pair{index.s(), index.back_s()}, std::pair{index.t(), index.fwd_t()}}) {
    P(a, a) = P(b, b) = P(a, b) = P(b, a) = 0.5;
  }
  return P;
}

Eigen::MatrixXd ReflectionPair::P_B() const {
  Eigen::MatrixXd Q = dense_b_basis(index, *spaces);
  return Q * Q.transpose();
}

Eigen::MatrixXd ReflectionPair::P_Bperp() const { return spaces->bperp * spaces->bperp.transpose(); }

Eigen::MatrixXd ReflectionPair::U() const {
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(index.dim(), index.dim());
  return (2 * P_A() - I) * (2 * P_B() - I);
}

ReflectionPair build_reflections(const SwitchingNet& net, const std::vector<std::uint8_t>& on, int sink) {
  if (static_cast<std::int64_t>(on.size()) != net.edge_count())
    throw InvalidParams("on mask has wrong length");
  ReflectionPair pair;
  pair.index = state_index(net);
  pair.sink = sink;
  pair.on = on;
  pair.spaces = cached_b_spaces(net, sink);
  return pair;
}

ReflectionPair build_reflections(const SwitchingNet& net, GraphOracle& oracle, int sink) {
  return build_reflections(net, on_edges(net, oracle), sink);
}

StateVec default_initial_state(const StateIndex& ix) {
  StateVec v = StateVec::Zero(ix.dim());
  v[ix.s()] = kInvSqrt2;
  v[ix.t()] = -kInvSqrt2;
  return v;
}

double phase0_overlap(const ReflectionPair& pair, const StateVec& psi0) {
  const StateIndex& ix = pair.index;
  const Eigen::MatrixXd& Y = pair.spaces->bperp;

  // A n Bperp: vectors Y c with no component along A-perp.
  Eigen::MatrixXd N(ix.edges + 2, Y.cols());
  for (std::int64_t e = 0; e < ix.edges; ++e)
    N.row(e) = pair_row(Y, ix.fwd(e), ix.bwd(e), pair.on[e] ? 1.0 : -1.0);
  N.row(ix.edges) = pair_row(Y, ix.s(), ix.back_s(), -1.0);
  N.row(ix.edges + 1) = pair_row(Y, ix.t(), ix.fwd_t(), -1.0);
  Eigen::VectorXd yc = Y.transpose() * psi0;
  double overlap = (kernel_basis(N).transpose() * yc).squaredNorm();

  // Aperp n B, only needed when psi0 leaves Bperp.
  StateVec rest = psi0 - Y * yc;
  if (rest.norm() > 1e-12) {
    Eigen::MatrixXd Q = dense_b_basis(ix, *pair.spaces);
    Eigen::MatrixXd M(ix.edges + 2, Q.cols());
    for (std::int64_t e = 0; e < ix.edges; ++e)
      M.row(e) = pair_row(Q, ix.fwd(e), ix.bwd(e), pair.on[e] ? -1.0 : 1.0);
    M.row(ix.edges) = pair_row(Q, ix.s(), ix.back_s(), 1.0);
    M.row(ix.edges + 1) = pair_row(Q, ix.t(), ix.fwd_t(), 1.0);
    overlap += (kernel_basis(M).transpose() * (Q.transpose() * psi0)).squaredNorm();
  }
  return overlap;
}

DecisionReport decide_phase_estimation(const ReflectionPair& pair, const StateVec& psi0, double threshold) {
  DecisionReport r;
  r.overlap0 = phase0_overlap(pair, psi0);
  r.accepted = r.overlap0 >= threshold;
  return r;
}

double witness_energy(const SwitchingNet& net, const std::vector<std::uint8_t>& on, int sink) {
  return flow_energy(optimal_flow_lsq(net, on, sink));
}

double witness_energy(const SwitchingNet& net, GraphOracle& oracle, int sink) {
  return witness_energy(net, on_edges(net, oracle), sink);
}

DecideMode parse_mode(const std::string& text) {
  if (text == "exact") return DecideMode::Exact;
  if (text == "spectral") return DecideMode::Spectral;
  throw InvalidParams("mode must be exact or spectral");
}

double t_formula(int n, int L) {
  double ell = std::log2(static_cast<double>(L));
  return std::sqrt(std::pow(L, std::log2(3.0)) * std::pow(2.0 * n + 1, ell) * n);
}

std::uint64_t quantum_space_cells(int n, int L) {
  double ell = std::log2(static_cast<double>(L));
  double dim_bits = std::log2(2.0 * n) + ell * std::log2(2.0 * n + 1);
  double dim = std::ceil(std::log2(std::exp2(dim_bits) + 4));
  double phase = std::ceil(std::log2(std::max(2.0, t_formula(n, L))));
  return static_cast<std::uint64_t>(dim + phase);
}

DistResult D_L(const Digraph& g, int u, int v, int L, DecideMode mode) {
  if (L < 1 || !is_power_of_two(static_cast<std::uint64_t>(L)))
    throw InvalidParams("D_L needs L a power of two");
  if (u < 0 || u >= g.size() || v < 0 || v >= g.size()) throw InvalidParams("vertex out of range");
  Digraph padded = pad_to_power_of_two(g, L);
  SwitchingNet net = SwitchingNet::build(padded.size(), ceil_log2(static_cast<std::uint64_t>(L)), u);
  GraphOracle oracle(padded);
  std::vector<std::uint8_t> on = on_edges(net, oracle);

  DistResult out;
  DecisionReport& r = out.report;
  StateIndex ix = state_index(net);
  if (mode == DecideMode::Spectral && ix.dim() <= kSpectralCap) {
    ReflectionPair pair = build_reflections(net, on, v);
    r = decide_phase_estimation(pair, default_initial_state(ix));
  } else {
    r.accepted = accepts(net, on, v).accepted;
    r.overlap0 = -1;
    r.spectral = false;
  }
  if (r.accepted) {
    r.path_len = witness_length(net, on, v);
    if (r.path_len >= 0) r.witness_energy = witness_energy(net, on, v);
  }
  r.ledger.oracle_queries = oracle.queries();
  r.ledger.t_formula = t_formula(padded.size(), L);
  r.ledger.quantum_space_cells = quantum_space_cells(padded.size(), L);
  r.ledger.decider_calls = 1;
  out.answer = r.accepted;
  return out;
}

DistResult Dist_L(const Digraph& g, int u, int v, int L, DecideMode mode) {
  if (L < 1) throw InvalidParams("Dist_L needs L >= 1");
  if (u < 0 || u >= g.size() || v < 0 || v >= g.size()) throw InvalidParams("vertex out of range");
  if (u == v) {
    DistResult out;
    out.answer = out.report.accepted = true;
    out.report.path_len = 0;
    out.report.witness_energy = 0;
    out.report.spectral = false;
    return out;
  }
  int ell = ceil_log2(static_cast<std::uint64_t>(L));
  int a = (1 << ell) - L;
  SourcePath sp = attach_source_path(g, u, a);
  return D_L(sp.graph, sp.source, v, 1 << ell, mode);
}

}  // namespace qdstcon
