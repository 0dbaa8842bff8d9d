#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qdstcon/switching_net.hpp"

namespace qdstcon {

// Vectors in H_N: |->,e> at 2e, |<-,e> at 2e+1, then |s>, |t>, |<-,s>, |->,t>.
using StateVec = Eigen::VectorXd;
// Edge functions in the canonical |sigma,i> basis; entry e is the flow along e's
// actual orientation, so the same vector is also the coefficient list of |theta-bar>.
using FlowFn = Eigen::VectorXd;

struct StateIndex {
  std::int64_t edges;
  std::int64_t dim() const { return 2 * edges + 4; }
  std::int64_t fwd(std::int64_t e) const { return 2 * e; }
  std::int64_t bwd(std::int64_t e) const { return 2 * e + 1; }
  std::int64_t s() const { return 2 * edges; }
  std::int64_t t() const { return 2 * edges + 1; }
  std::int64_t back_s() const { return 2 * edges + 2; }
  std::int64_t fwd_t() const { return 2 * edges + 3; }
};

inline StateIndex state_index(const SwitchingNet& net) { return {net.edge_count()}; }

struct SpaceBasis {
  Eigen::MatrixXd vectors;  // one column per basis vector
  bool orthogonal = false;
  std::vector<std::string> labels;
  int size() const { return static_cast<int>(vectors.cols()); }
};

// Per-vertex divergence: outgoing flow minus incoming flow.
Eigen::VectorXd divergence(const SwitchingNet& net, const FlowFn& theta);

// theta-bar, optionally with the boundary terms -theta(s)|<-,s> - theta(t)|->,t>.
StateVec flow_state(const SwitchingNet& net, const FlowFn& theta, int sink, bool with_boundary);

StateVec star_state(const SwitchingNet& net, int vertex, int sink, bool signed_star);

SpaceBasis build_A_basis(const SwitchingNet& net, const std::vector<std::uint8_t>& on, int sink);
SpaceBasis build_A_basis(const SwitchingNet& net, GraphOracle& oracle, int sink);
SpaceBasis build_B_minus_basis(const SwitchingNet& net, int sink);
// Spanning set B-minus plus |->,e> + |<-,e> for every edge.
SpaceBasis build_B_basis(const SwitchingNet& net, int sink);

// Recursive flow vectors on N_{2^ell} over an n-vertex graph.
FlowFn theta_bar(int n, int ell, int j);
FlowFn p_state(int n, int ell, int i, int j);
FlowFn psi_state(int n, int ell, int z, int x);

FlowFn p_state(const SwitchingNet& net, int i, int j);
FlowFn psi_state(const SwitchingNet& net, int z, int x);
StateVec theta_state(const SwitchingNet& net, int j, bool with_boundary);

// Places a block-local edge vector at the block named by prefix (length
// net.ell() - local_ell), without sign change.
FlowFn embed_block(const SwitchingNet& net, std::int64_t prefix, int local_ell, const FlowFn& local);

// Every block-embedded psi_{z,x}, then theta_j(L), |s>, |t>; columns normalized.
SpaceBasis build_Bperp_basis(const SwitchingNet& net, int sink);

// Orthonormal basis of the column span; throws RankDeficient when a column
// falls inside the span of earlier ones and require_full_rank is set.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& columns, bool require_full_rank,
                               double tol = 1e-10);
Eigen::MatrixXd projector(const SpaceBasis& space);
SpaceBasis complement_basis(const SpaceBasis& space);

FlowFn optimal_flow_lsq(const SwitchingNet& net, const std::vector<std::uint8_t>& on, int sink);
double flow_energy(const FlowFn& theta);

}  // namespace qdstcon
