#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <map>
#include <random>

#include "qdstcon/closed_forms.hpp"
#include "qdstcon/errors.hpp"
#include "qdstcon/flow_algebra.hpp"

using namespace qdstcon;

namespace {

std::vector<std::uint8_t> all_on(const SwitchingNet& net) {
  return std::vector<std::uint8_t>(net.edge_count(), 1);
}

int rank_of(const Eigen::MatrixXd& m) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(1e-10);
  return static_cast<int>(qr.rank());
}

// Rows: divergence functional of each vertex (or only the non-boundary ones).
Eigen::MatrixXd incidence(const SwitchingNet& net, bool skip_boundary, int sink) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(net.vertex_count(), net.edge_count());
  for (std::int64_t e = 0; e < net.edge_count(); ++e) {
    auto [a, b] = net.endpoints(e);
    M(a, e) += 1;
    M(b, e) -= 1;
  }
  if (!skip_boundary) return M;
  Eigen::MatrixXd out(net.vertex_count() - 2, net.edge_count());
  int r = 0;
  for (int v = 0; v < net.vertex_count(); ++v)
    if (v != net.source() && v != net.sink(sink)) out.row(r++) = M.row(v);
  return out;
}

int parity(int a) { return __builtin_popcount(static_cast<unsigned>(a)) & 1; }

}  // namespace

TEST(Star, Examples) {
  auto net = SwitchingNet::build(2, 0, 0);
  StateIndex ix = state_index(net);
  StateVec sink_star = star_state(net, net.sink(1), 0, true);
  StateVec want = StateVec::Zero(ix.dim());
  want[ix.bwd(1)] = 0.5;
  want[ix.fwd(1)] = -0.5;
  EXPECT_LT((sink_star - want).norm(), 1e-15);
  StateVec src = star_state(net, net.source(), 0, false);
  EXPECT_EQ(src[ix.back_s()], 1.0);
  EXPECT_EQ(src[ix.fwd(0)] + src[ix.fwd(1)], 2.0);
  auto big = SwitchingNet::build(2, 1, 0);
  StateIndex bx = state_index(big);
  for (int v = 0; v < big.vertex_count(); ++v) {
    StateVec s = star_state(big, v, 1, true);
    for (std::int64_t e = 0; e < bx.edges; ++e) EXPECT_EQ(s[bx.fwd(e)] + s[bx.bwd(e)], 0.0);
  }
}

TEST(ABasis, SignsAndDimension) {
  auto net = SwitchingNet::build(2, 1, 0);
  Digraph g(2, {{0, 1}});
  GraphOracle o(g);
  auto A = build_A_basis(net, o, 1);
  EXPECT_EQ(o.queries(), static_cast<std::uint64_t>(net.edge_count()));
  EXPECT_EQ(A.size(), net.edge_count() + 2);
  Eigen::MatrixXd gram = A.vectors.transpose() * A.vectors;
  EXPECT_LT((gram - Eigen::MatrixXd(gram.diagonal().asDiagonal())).norm(), 1e-15);
  StateIndex ix = state_index(net);
  for (std::int64_t e = 0; e < ix.edges; ++e) {
    auto [a, b] = net.label(e);
    double sign = (g.has_edge(a, b) || a == b) ? -1.0 : 1.0;
    EXPECT_EQ(A.vectors(ix.bwd(e), e), sign);
  }
  Eigen::MatrixXd P = projector(A);
  EXPECT_LT((P * P - P).norm(), 1e-12);
  EXPECT_NEAR(P.trace(), ix.edges + 2, 1e-9);
}

TEST(OptimalFlow, BaseAndErrors) {
  auto net = SwitchingNet::build(4, 0, 0);
  FlowFn theta = optimal_flow_lsq(net, all_on(net), 2);
  EXPECT_LT((theta - FlowFn::Unit(4, 2)).norm(), 1e-12);
  std::vector<std::uint8_t> off(4, 0);
  EXPECT_THROW(optimal_flow_lsq(net, off, 1), Disconnected);
}

TEST(OptimalFlow, ParallelPathsSplitEvenly) {
  // In N_2 over n = 2 with sink 1, the two on-routes through blocks (1,1) and (2,*)
  // carry the flow; the optimal flow is the unique minimum-energy one.
  auto net = SwitchingNet::build(2, 1, 0);
  FlowFn theta = optimal_flow_lsq(net, all_on(net), 1);
  Eigen::VectorXd d = divergence(net, theta);
  for (int v = 0; v < net.vertex_count(); ++v) {
    double want = v == net.source() ? 1.0 : v == net.sink(1) ? -1.0 : 0.0;
    EXPECT_NEAR(d[v], want, 1e-12);
  }
  EXPECT_NEAR(flow_energy(theta), 3.0 / 2.0, 1e-12);
}

TEST(PState, BaseCaseAndDivergence) {
  for (int n : {2, 4}) {
    auto net = SwitchingNet::build(n, 1, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        FlowFn p = p_state(net, i, j);
        FlowFn want = FlowFn::Zero(net.edge_count());
        want[i] = 1;
        want[(1 + i) * n + j] = 1;
        want[(1 + n + j) * n + i] = 1;
        EXPECT_EQ(p, want);
        EXPECT_DOUBLE_EQ(p.squaredNorm(), 3.0);
      }
  }
  for (int n : {2, 4}) {
    auto net = SwitchingNet::build(n, 2, 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Eigen::VectorXd d = divergence(net, p_state(net, i, j));
        for (int v = 0; v < net.vertex_count(); ++v) {
          double want = v == net.source() ? 1.0 : v == net.sink(j) ? -1.0 : 0.0;
          EXPECT_NEAR(d[v], want, 1e-12);
        }
      }
  }
}

TEST(PsiState, CirculationsAndOrthogonality) {
  EXPECT_THROW(psi_state(2, 1, 0, 1), ZeroZ);
  for (int n : {2, 4}) {
    for (int ell : {1, 2}) {
      auto net = SwitchingNet::build(n, ell, 0);
      std::vector<FlowFn> psis;
      for (int z = 1; z < n; ++z)
        for (int x = 0; x < n; ++x) {
          psis.push_back(psi_state(net, z, x));
          EXPECT_LT(divergence(net, psis.back()).norm(), 1e-12);
        }
      for (std::size_t a = 0; a < psis.size(); ++a)
        for (std::size_t b = a + 1; b < psis.size(); ++b)
          EXPECT_LT(std::abs(psis[a].dot(psis[b])), 1e-9);
    }
  }
}

TEST(PsiState, InnerProductWithP) {
  // <p_ij|psi_{z,x}> = (-1)^{z.i} (2(c1 - c0)(-1)^{x.j} + n c1 [x = 0]), where c1 and
  // c0 are the diagonal and off-diagonal inner products of the previous level.
  for (int n : {2, 4}) {
    for (int ell : {1, 2}) {
      auto c = inner_constants(n, ell - 1);
      EXPECT_LT(c.spread, 1e-12);
      for (int z = 1; z < n; ++z)
        for (int x = 0; x < n; ++x) {
          FlowFn psi = psi_state(n, ell, z, x);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              double want = (parity(z & i) ? -1.0 : 1.0) *
                            (2 * (c.c1 - c.c0) * (parity(x & j) ? -1.0 : 1.0) + (x == 0 ? n * c.c1 : 0.0));
              EXPECT_NEAR(p_state(n, ell, i, j).dot(psi), want, 1e-9);
            }
        }
    }
  }
}

TEST(ThetaState, MatchesLeastSquares) {
  for (int n : {2, 4}) {
    for (int ell = 0; ell <= 2; ++ell) {
      auto net = SwitchingNet::build(n, ell, 0);
      for (int j = 0; j < n; ++j) {
        FlowFn lsq = optimal_flow_lsq(net, all_on(net), j);
        EXPECT_LT((theta_bar(n, ell, j) - lsq).norm(), 1e-9) << n << " " << ell << " " << j;
      }
      StateVec th = theta_state(net, 0, true);
      StateIndex ix = state_index(net);
      EXPECT_EQ(th[ix.back_s()], -1.0);
      EXPECT_EQ(th[ix.fwd_t()], 1.0);
    }
  }
  EXPECT_NEAR(theta_bar(4, 1, 2).squaredNorm(), 3.0 / 4.0, 1e-15);
}

TEST(ClosedForms, LayerSizesByEnumeration) {
  for (int n : {2, 4}) {
    for (int ell = 0; ell <= 3; ++ell) {
      auto net = SwitchingNet::build(n, ell, 0);
      std::map<std::vector<int>, std::int64_t> count;
      for (std::int64_t e = 0; e < net.edge_count(); ++e) {
        std::vector<int> tau;
        for (const auto& s : net.edge(e).sigma) tau.push_back(s.tag);
        ++count[tau];
      }
      Rational inv = 0;
      for (const auto& [tau, c] : count) {
        EXPECT_EQ(layer_size(n, tau), BigInt(c));
        inv += Rational(1, c);
      }
      EXPECT_EQ(inv, sum_inverse_layers(n, ell));
    }
  }
  EXPECT_EQ(layer_size(4, {0, 1, 2}), BigInt(64));
  EXPECT_EQ(sum_inverse_layers(2, 1), Rational(1));
}

TEST(ClosedForms, NormsMatchVectors) {
  for (int n : {2, 4, 8}) {
    for (int ell = 0; ell <= 3; ++ell) {
      if (n == 8 && ell == 3) continue;
      FlowFn sum = theta_bar(n, ell, 0);
      for (int j = 1; j < n; ++j) sum += theta_bar(n, ell, j);
      EXPECT_NEAR(sum.squaredNorm() / to_double(N_zero(n, ell)), 1.0, 1e-12);
      EXPECT_NEAR(theta_bar(n, ell, n - 1).squaredNorm() / to_double(F_j(n, ell)), 1.0, 1e-12);
      for (int x = 1; x < n; ++x) {
        FlowFn fx = FlowFn::Zero(sum.size());
        for (int j = 0; j < n; ++j) fx += (parity(x & j) ? -1.0 : 1.0) * theta_bar(n, ell, j);
        EXPECT_NEAR(fx.squaredNorm() / to_double(N_x(n, ell)), 1.0, 1e-12);
      }
      EXPECT_EQ(N_x(n, ell), N_x_recurrence(n, ell));
      EXPECT_EQ(F_j(n, ell), F_j_recurrence(n, ell));
    }
  }
  EXPECT_EQ(F_j(4, 1), Rational(3, 4));
  EXPECT_EQ(F_j(2, 2), Rational(11, 4));
}

TEST(ClosedForms, PublishedNxDiffersBeyondFirstLevel) {
  // The published expression equals n^2 times the norm at ell = 1 and then diverges.
  for (int n : {2, 4, 8}) {
    EXPECT_EQ(N_x_published(n, 1), Rational(2 * n * n));
    EXPECT_EQ(N_x_published(n, 1), n * n * N_x(n, 1));
    EXPECT_NE(N_x_published(n, 2), n * n * N_x(n, 2));
  }
  EXPECT_EQ(N_x_published(4, 2), Rational(152));
}

TEST(ClosedForms, PrefixSums) {
  for (int n : {2, 4}) {
    for (int ell = 1; ell <= 3; ++ell) {
      EXPECT_EQ(prefix_sum_S(n, ell, {}), sum_inverse_layers(n, ell));
      std::vector<int> p{2, 0};
      p.resize(std::min(ell, 2));
      Rational children = 0;
      if (static_cast<int>(p.size()) < ell)
        for (int t = 0; t < 3; ++t) {
          auto q = p;
          q.push_back(t);
          children += prefix_sum_S(n, ell, q);
        }
      if (static_cast<int>(p.size()) < ell) EXPECT_EQ(children, prefix_sum_S(n, ell, p));
    }
  }
}

TEST(Bperp, OrthogonalAndComplementary) {
  for (auto [n, ell] : {std::pair{2, 0}, {2, 1}, {2, 2}, {4, 1}}) {
    for (int sink : {0, n - 1}) {
      auto net = SwitchingNet::build(n, ell, 0);
      auto Bp = build_Bperp_basis(net, sink);
      EXPECT_EQ(Bp.size(), net.edge_count() + 4 - net.vertex_count());
      Eigen::MatrixXd gram = Bp.vectors.transpose() * Bp.vectors;
      EXPECT_LT((gram - Eigen::MatrixXd::Identity(Bp.size(), Bp.size())).cwiseAbs().maxCoeff(), 1e-9);
      auto B = build_B_basis(net, sink);
      EXPECT_LT((B.vectors.transpose() * Bp.vectors).cwiseAbs().maxCoeff(), 1e-9);
      Eigen::MatrixXd sum = projector(B) + projector(Bp);
      EXPECT_LT((sum - Eigen::MatrixXd::Identity(sum.rows(), sum.cols())).norm(), 1e-8);
    }
  }
}

TEST(Bperp, CountExample) {
  auto net = SwitchingNet::build(2, 1, 0);
  EXPECT_EQ(build_Bperp_basis(net, 1).size(), 5);
}

TEST(Spaces, Dimensions) {
  for (int ell : {1, 2}) {
    auto net = SwitchingNet::build(2, ell, 0);
    int E = static_cast<int>(net.edge_count()), V = net.vertex_count();
    int dimF = E - rank_of(incidence(net, true, 1));
    int dimC = E - rank_of(incidence(net, false, 1));
    EXPECT_EQ(dimF, E + 2 - V);
    EXPECT_EQ(dimC, E - V + 1);
    EXPECT_EQ(dimF - dimC, 1);
    EXPECT_EQ(rank_of(build_B_minus_basis(net, 1).vectors), V);
    EXPECT_EQ(rank_of(build_B_basis(net, 1).vectors), V + E);
  }
}

TEST(Spaces, BperpIsFlowsPlusBoundary) {
  auto net = SwitchingNet::build(2, 2, 0);
  int sink = 1;
  Eigen::MatrixXd kernel = incidence(net, true, sink).fullPivLu().kernel();
  StateIndex ix = state_index(net);
  SpaceBasis flows;
  flows.vectors.resize(ix.dim(), kernel.cols() + 2);
  for (Eigen::Index c = 0; c < kernel.cols(); ++c)
    flows.vectors.col(c) = flow_state(net, kernel.col(c), sink, true);
  flows.vectors.col(kernel.cols()) = StateVec::Unit(ix.dim(), ix.s());
  flows.vectors.col(kernel.cols() + 1) = StateVec::Unit(ix.dim(), ix.t());
  EXPECT_LT((projector(flows) - projector(build_Bperp_basis(net, sink))).norm(), 1e-8);
}

TEST(Spaces, FlowDecomposition) {
  auto net = SwitchingNet::build(2, 2, 1);
  int sink = 0;
  Eigen::MatrixXd kernel = incidence(net, true, sink).fullPivLu().kernel();
  FlowFn opt = theta_bar(2, 2, sink);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd coef(kernel.cols());
    for (auto& c : coef) c = gauss(rng);
    FlowFn theta = kernel * coef;
    double alpha = divergence(net, theta)[net.source()];
    FlowFn circ = theta - alpha * opt;
    EXPECT_LT(divergence(net, circ).norm(), 1e-9);
    EXPECT_LT(std::abs(circ.dot(opt)), 1e-9);
  }
}

TEST(Complement, Basics) {
  SpaceBasis full;
  full.vectors = Eigen::MatrixXd::Identity(4, 4);
  EXPECT_EQ(complement_basis(full).size(), 0);
  SpaceBasis line;
  line.vectors = Eigen::Vector3d(1, 1, 0);
  auto c = complement_basis(line);
  EXPECT_EQ(c.size(), 2);
  EXPECT_LT((c.vectors.transpose() * line.vectors).norm(), 1e-12);
  SpaceBasis dup;
  dup.vectors.resize(3, 2);
  dup.vectors << 1, 2, 0, 0, 0, 0;
  EXPECT_THROW(projector(dup), RankDeficient);
}
