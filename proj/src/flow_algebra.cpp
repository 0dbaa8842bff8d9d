#include "qdstcon/flow_algebra.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cmath>
#include <deque>

#include "qdstcon/errors.hpp"

namespace qdstcon {

namespace {

std::int64_t level_edges(int n, int ell) {
  std::int64_t e = n;
  for (int k = 0; k < ell; ++k) e *= 2 * n + 1;
  return e;
}

int parity(int a) { return __builtin_popcount(static_cast<unsigned>(a)) & 1; }

// All theta-bar_j at one level, built bottom up.
std::vector<FlowFn> theta_level(int n, int ell) {
  std::vector<FlowFn> T(n);
  for (int j = 0; j < n; ++j) T[j] = FlowFn::Unit(n, j);
  for (int lvl = 1; lvl <= ell; ++lvl) {
    std::int64_t B = level_edges(n, lvl - 1);
    FlowFn sum = FlowFn::Zero(B);
    for (const auto& t : T) sum += t;
    std::vector<FlowFn> next(n);
    for (int j = 0; j < n; ++j) {
      FlowFn v = FlowFn::Zero(B * (2 * n + 1));
      v.segment(0, B) = sum;
      for (int i = 0; i < n; ++i) v.segment((1 + i) * B, B) = T[j];
      v.segment((1 + n + j) * B, B) = sum;
      next[j] = v / n;
    }
    T = std::move(next);
  }
  return T;
}

void check_vertex(int n, int v, const char* what) {
  if (v < 0 || v >= n) throw InvalidParams(std::string(what) + " out of range");
}

}  // namespace

Eigen::VectorXd divergence(const SwitchingNet& net, const FlowFn& theta) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(net.vertex_count());
  for (std::int64_t e = 0; e < net.edge_count(); ++e) {
    auto [a, b] = net.endpoints(e);
    d[a] += theta[e];
    d[b] -= theta[e];
  }
  return d;
}

StateVec flow_state(const SwitchingNet& net, const FlowFn& theta, int sink, bool with_boundary) {
  StateIndex ix = state_index(net);
  StateVec v = StateVec::Zero(ix.dim());
  for (std::int64_t e = 0; e < ix.edges; ++e) {
    v[ix.fwd(e)] = theta[e];
    v[ix.bwd(e)] = -theta[e];
  }
  if (with_boundary) {
    Eigen::VectorXd d = divergence(net, theta);
    v[ix.back_s()] = -d[net.source()];
    v[ix.fwd_t()] = -d[net.sink(sink)];
  }
  return v;
}

StateVec star_state(const SwitchingNet& net, int vertex, int sink, bool signed_star) {
  StateIndex ix = state_index(net);
  StateVec v = StateVec::Zero(ix.dim());
  for (std::int64_t e = 0; e < ix.edges; ++e) {
    auto [a, b] = net.endpoints(e);
    if (a == vertex) {
      if (signed_star) {
        v[ix.fwd(e)] += 0.5;
        v[ix.bwd(e)] -= 0.5;
      } else {
        v[ix.fwd(e)] += 1.0;
      }
    }
    if (b == vertex) {
      if (signed_star) {
        v[ix.bwd(e)] += 0.5;
        v[ix.fwd(e)] -= 0.5;
      } else {
        v[ix.bwd(e)] += 1.0;
      }
    }
  }
  if (vertex == net.source()) v[ix.back_s()] += 1.0;
  if (vertex == net.sink(sink)) v[ix.fwd_t()] += 1.0;
  return v;
}

SpaceBasis build_A_basis(const SwitchingNet& net, const std::vector<std::uint8_t>& on, int sink) {
  (void)sink;
  StateIndex ix = state_index(net);
  SpaceBasis out;
  out.orthogonal = true;
  out.vectors = Eigen::MatrixXd::Zero(ix.dim(), ix.edges + 2);
  for (std::int64_t e = 0; e < ix.edges; ++e) {
    out.vectors(ix.fwd(e), e) = 1.0;
    out.vectors(ix.bwd(e), e) = on[e] ? -1.0 : 1.0;
  }
  out.vectors(ix.s(), ix.edges) = 1.0;
  out.vectors(ix.back_s(), ix.edges) = 1.0;
  out.vectors(ix.fwd_t(), ix.edges + 1) = 1.0;
  out.vectors(ix.t(), ix.edges + 1) = 1.0;
  return out;
}

SpaceBasis build_A_basis(const SwitchingNet& net, GraphOracle& oracle, int sink) {
  return build_A_basis(net, on_edges(net, oracle), sink);
}

SpaceBasis build_B_minus_basis(const SwitchingNet& net, int sink) {
  StateIndex ix = state_index(net);
  SpaceBasis out;
  out.vectors = Eigen::MatrixXd::Zero(ix.dim(), net.vertex_count());
  for (int v = 0; v < net.vertex_count(); ++v) out.vectors.col(v) = star_state(net, v, sink, true);
  return out;
}

SpaceBasis build_B_basis(const SwitchingNet& net, int sink) {
  StateIndex ix = state_index(net);
  SpaceBasis minus = build_B_minus_basis(net, sink);
  SpaceBasis out;
  out.vectors = Eigen::MatrixXd::Zero(ix.dim(), net.vertex_count() + ix.edges);
  out.vectors.leftCols(net.vertex_count()) = minus.vectors;
  for (std::int64_t e = 0; e < ix.edges; ++e) {
    out.vectors(ix.fwd(e), net.vertex_count() + e) = 1.0;
    out.vectors(ix.bwd(e), net.vertex_count() + e) = 1.0;
  }
  return out;
}

FlowFn theta_bar(int n, int ell, int j) {
  check_vertex(n, j, "sink index");
  return theta_level(n, ell)[j];
}

FlowFn p_state(int n, int ell, int i, int j) {
  if (ell < 1) throw InvalidParams("p_ij needs ell >= 1");
  check_vertex(n, i, "i");
  check_vertex(n, j, "j");
  auto T = theta_level(n, ell - 1);
  std::int64_t B = level_edges(n, ell - 1);
  FlowFn v = FlowFn::Zero(B * (2 * n + 1));
  v.segment(0, B) = T[i];
  v.segment((1 + i) * B, B) = T[j];
  v.segment((1 + n + j) * B, B) = T[i];
  return v;
}

FlowFn psi_state(int n, int ell, int z, int x) {
  if (z == 0) throw ZeroZ("psi_{z,x} needs z != 0");
  if (ell < 1) throw InvalidParams("psi_{z,x} needs ell >= 1");
  check_vertex(n, z, "z");
  check_vertex(n, x, "x");
  FlowFn v = FlowFn::Zero(level_edges(n, ell));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double sign = (parity(x & j) ^ parity(z & i)) ? -1.0 : 1.0;
      v += sign * p_state(n, ell, i, j);
    }
  return v;
}

FlowFn p_state(const SwitchingNet& net, int i, int j) { return p_state(net.n(), net.ell(), i, j); }
FlowFn psi_state(const SwitchingNet& net, int z, int x) {
  return psi_state(net.n(), net.ell(), z, x);
}

StateVec theta_state(const SwitchingNet& net, int j, bool with_boundary) {
  return flow_state(net, theta_bar(net.n(), net.ell(), j), j, with_boundary);
}

FlowFn embed_block(const SwitchingNet& net, std::int64_t prefix, int local_ell, const FlowFn& local) {
  std::int64_t size = level_edges(net.n(), local_ell);
  if (local.size() != size) throw InvalidParams("block vector has wrong size");
  FlowFn v = FlowFn::Zero(net.edge_count());
  v.segment(prefix * size, size) = local;
  return v;
}

SpaceBasis build_Bperp_basis(const SwitchingNet& net, int sink) {
  int n = net.n(), L = net.ell();
  std::vector<StateVec> cols;
  SpaceBasis out;
  out.orthogonal = true;
  for (int lvl = 1; lvl <= L; ++lvl) {
    std::int64_t prefixes = net.leaf_count() / (level_edges(n, lvl) / n);
    for (int z = 1; z < n; ++z)
      for (int x = 0; x < n; ++x) {
        FlowFn local = psi_state(n, lvl, z, x);
        for (std::int64_t p = 0; p < prefixes; ++p) {
          cols.push_back(flow_state(net, embed_block(net, p, lvl, local), sink, false));
          out.labels.push_back("psi l=" + std::to_string(lvl) + " block=" + std::to_string(p) +
                               " z=" + std::to_string(z) + " x=" + std::to_string(x));
        }
      }
  }
  cols.push_back(theta_state(net, sink, true));
  out.labels.push_back("theta j=" + std::to_string(sink));
  StateIndex ix = state_index(net);
  cols.push_back(StateVec::Unit(ix.dim(), ix.s()));
  out.labels.push_back("s");
  cols.push_back(StateVec::Unit(ix.dim(), ix.t()));
  out.labels.push_back("t");
  out.vectors.resize(ix.dim(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.vectors.col(k) = cols[k].normalized();
  return out;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& columns, bool require_full_rank, double tol) {
  Eigen::MatrixXd Q(columns.rows(), columns.cols());
  Eigen::Index rank = 0;
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    Eigen::VectorXd v = columns.col(c);
    double scale = std::max(1.0, v.norm());
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < rank; ++k) v -= Q.col(k).dot(v) * Q.col(k);
    }
    double norm = v.norm();
    if (norm <= tol * scale) {
      if (require_full_rank)
        throw RankDeficient("column " + std::to_string(c) + " is dependent on earlier columns");
      continue;
    }
    Q.col(rank++) = v / norm;
  }
  return Q.leftCols(rank);
}

Eigen::MatrixXd projector(const SpaceBasis& space) {
  Eigen::MatrixXd Q = orthonormalize(space.vectors, true);
  return Q * Q.transpose();
}

SpaceBasis complement_basis(const SpaceBasis& space) {
  Eigen::MatrixXd Q = orthonormalize(space.vectors, true);
  SpaceBasis out;
  out.orthogonal = true;
  Eigen::Index dim = space.vectors.rows();
  if (Q.cols() == dim) {
    out.vectors.resize(dim, 0);
    return out;
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Q);
  Eigen::MatrixXd full = qr.householderQ();
  out.vectors = full.rightCols(dim - Q.cols());
  return out;
}

FlowFn optimal_flow_lsq(const SwitchingNet& net, const std::vector<std::uint8_t>& on, int sink) {
  int V = net.vertex_count();
  int s = net.source(), t = net.sink(sink);
  std::vector<std::vector<int>> adj(V);
  for (std::int64_t e = 0; e < net.edge_count(); ++e) {
    if (!on[e]) continue;
    auto [a, b] = net.endpoints(e);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> comp(V, -1);
  std::deque<int> queue{s};
  int count = 0;
  comp[s] = count++;
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    for (int b : adj[a])
      if (comp[b] < 0) {
        comp[b] = count++;
        queue.push_back(b);
      }
  }
  if (comp[t] < 0) throw Disconnected("source and sink are not connected by on-edges");

  // Ground t; unknowns are the potentials of the other component vertices.
  auto unknown = [&](int v) {
    int c = comp[v];
    int ct = comp[t];
    return c < ct ? c : c - 1;
  };
  std::vector<Eigen::Triplet<double>> trips;
  for (std::int64_t e = 0; e < net.edge_count(); ++e) {
    if (!on[e]) continue;
    auto [a, b] = net.endpoints(e);
    if (comp[a] < 0) continue;
    bool ga = a != t, gb = b != t;
    if (ga) trips.emplace_back(unknown(a), unknown(a), 1.0);
    if (gb) trips.emplace_back(unknown(b), unknown(b), 1.0);
    if (ga && gb) {
      trips.emplace_back(unknown(a), unknown(b), -1.0);
      trips.emplace_back(unknown(b), unknown(a), -1.0);
    }
  }
  Eigen::SparseMatrix<double> Lap(count - 1, count - 1);
  Lap.setFromTriplets(trips.begin(), trips.end());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count - 1);
  rhs[unknown(s)] = 1.0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(Lap);
  if (solver.info() != Eigen::Success) throw InvariantViolation("Laplacian factorization failed");
  Eigen::VectorXd phi = solver.solve(rhs);

  auto potential = [&](int v) { return v == t ? 0.0 : phi[unknown(v)]; };
  FlowFn theta = FlowFn::Zero(net.edge_count());
  for (std::int64_t e = 0; e < net.edge_count(); ++e) {
    if (!on[e]) continue;
    auto [a, b] = net.endpoints(e);
    if (comp[a] < 0) continue;
    theta[e] = potential(a) - potential(b);
  }
  return theta;
}

double flow_energy(const FlowFn& theta) { return theta.squaredNorm(); }

}  // namespace qdstcon
