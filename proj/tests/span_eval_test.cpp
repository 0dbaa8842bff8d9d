#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "qdstcon/errors.hpp"
#include "qdstcon/span_eval.hpp"

using namespace qdstcon;

namespace {

int rank_of(const Eigen::MatrixXd& m, double tol = 1e-8) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(tol);
  return static_cast<int>(qr.rank());
}

// Projector onto the eigenvalue-1 space of W by SVD of W - I.
Eigen::MatrixXd fixed_space_projector(const Eigen::MatrixXd& W) {
  Eigen::MatrixXd D = W - Eigen::MatrixXd::Identity(W.rows(), W.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int k = 0;
  while (k < s.size() && s[s.size() - 1 - k] < 1e-7) ++k;
  Eigen::MatrixXd V = svd.matrixV().rightCols(k);
  return V * V.transpose();
}

// dim(X n Y) from projectors.
int intersection_dim(const Eigen::MatrixXd& PX, const Eigen::MatrixXd& PY) {
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(PX.rows(), PX.cols());
  Eigen::MatrixXd stacked(2 * PX.rows(), PX.cols());
  stacked << I - PX, I - PY;
  return static_cast<int>(PX.cols()) - rank_of(stacked);
}

std::vector<Digraph> all_digraphs_n2() {
  std::vector<Digraph> out;
  for (int mask = 0; mask < 4; ++mask) {
    std::vector<Edge> e;
    if (mask & 1) e.emplace_back(0, 1);
    if (mask & 2) e.emplace_back(1, 0);
    out.emplace_back(2, e);
  }
  return out;
}

bool within(const Digraph& g, int u, int v, int L) {
  auto d = bfs_distance(g, u, v);
  return d && *d <= L;
}

}  // namespace

TEST(Reflections, ProjectorsAndRanks) {
  struct Case { int n, ell; };
  for (auto [n, ell] : {Case{2, 1}, Case{2, 2}, Case{4, 1}}) {
    Digraph g = random_digraph(n, 0.5, 11);
    auto net = SwitchingNet::build(n, ell, 0);
    GraphOracle o(g);
    ReflectionPair pair = build_reflections(net, o, n - 1);
    EXPECT_EQ(o.queries(), static_cast<std::uint64_t>(net.edge_count()));
    Eigen::MatrixXd PA = pair.P_A(), PB = pair.P_B(), PBp = pair.P_Bperp();
    EXPECT_LT((PA * PA - PA).norm(), 1e-10);
    EXPECT_LT((PB * PB - PB).norm(), 1e-10);
    EXPECT_LT((PA - PA.transpose()).norm(), 1e-10);
    EXPECT_LT((PB - PB.transpose()).norm(), 1e-10);
    EXPECT_NEAR(PA.trace(), net.edge_count() + 2, 1e-9);
    EXPECT_NEAR(PB.trace(), net.vertex_count() + net.edge_count(), 1e-9);
    Eigen::MatrixXd U = pair.U();
    EXPECT_LT((U.transpose() * U - Eigen::MatrixXd::Identity(U.rows(), U.cols())).norm(), 1e-9);

    // Independent: plain Gram-Schmidt on the full spanning set.
    Eigen::MatrixXd Q = orthonormalize(build_B_basis(net, n - 1).vectors, false);
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(PB.rows(), PB.cols());
    EXPECT_LT((Q * Q.transpose() - (I - PBp)).norm(), 1e-8);
    EXPECT_LT((PB - Q * Q.transpose()).norm(), 1e-8);
    EXPECT_LT(pair.spaces->basis_gap, kBasisTol);
    int lower = net.edge_count() + 2 + net.vertex_count() + net.edge_count() - pair.index.dim();
    EXPECT_GE(intersection_dim(PA, PB), lower);
  }
}

TEST(Reflections, SpectrumStructure) {
  for (int mask = 0; mask < 4; ++mask) {
    Digraph g = all_digraphs_n2()[mask];
    auto net = SwitchingNet::build(2, 1, 0);
    GraphOracle o(g);
    ReflectionPair pair = build_reflections(net, o, 1);
    Eigen::MatrixXd U = pair.U(), PA = pair.P_A(), PB = pair.P_B();
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(U.rows(), U.cols());
    Eigen::EigenSolver<Eigen::MatrixXd> es(U);
    auto lambda = es.eigenvalues();
    int ones = 0;
    for (int k = 0; k < lambda.size(); ++k) {
      EXPECT_NEAR(std::abs(lambda[k]), 1.0, 1e-9);
      if (std::abs(lambda[k] - 1.0) < 1e-7) ++ones;
      // Phases come in +- pairs: the conjugate is also an eigenvalue.
      double best = 1e9;
      for (int m = 0; m < lambda.size(); ++m) best = std::min(best, std::abs(lambda[m] - std::conj(lambda[k])));
      EXPECT_LT(best, 1e-7);
    }
    EXPECT_EQ(ones, intersection_dim(PA, PB) + intersection_dim(I - PA, I - PB));
  }
}

TEST(Decide, CompressedOverlapMatchesFullEigenspace) {
  for (int mask = 0; mask < 4; ++mask) {
    Digraph g = all_digraphs_n2()[mask];
    for (int ell : {0, 1}) {
      for (int sink : {0, 1}) {
        auto net = SwitchingNet::build(2, ell, 0);
        GraphOracle o(g);
        ReflectionPair pair = build_reflections(net, o, sink);
        Eigen::MatrixXd I = Eigen::MatrixXd::Identity(pair.index.dim(), pair.index.dim());
        Eigen::MatrixXd W = (2 * pair.P_A() - I) * (2 * pair.P_Bperp() - I);
        Eigen::MatrixXd P0 = fixed_space_projector(W);
        StateVec psi0 = default_initial_state(pair.index);
        EXPECT_NEAR(phase0_overlap(pair, psi0), (P0 * psi0).squaredNorm(), 1e-9);
        StateVec other = StateVec::Zero(pair.index.dim());
        other[pair.index.back_s()] = other[pair.index.fwd_t()] = 1 / std::sqrt(2.0);
        EXPECT_NEAR(phase0_overlap(pair, other), (P0 * other).squaredNorm(), 1e-9);
      }
    }
  }
}

TEST(Decide, OverlapIsInverseOfTwoPlusEnergy) {
  for (int seed = 0; seed < 6; ++seed) {
    Digraph g = random_digraph(4, 0.4, seed);
    for (int u = 0; u < 4; ++u)
      for (int v = 0; v < 4; ++v) {
        auto net = SwitchingNet::build(4, 1, u);
        GraphOracle o(g);
        auto on = on_edges(net, o);
        DecisionReport r = decide_phase_estimation(build_reflections(net, on, v),
                                                   default_initial_state(state_index(net)));
        EXPECT_GE(r.overlap0, -1e-12);
        EXPECT_LE(r.overlap0, 1 + 1e-12);
        bool connected = accepts(net, on, v).accepted;
        EXPECT_EQ(r.accepted, connected);
        if (connected)
          EXPECT_NEAR(r.overlap0, 1.0 / (2.0 + witness_energy(net, on, v)), 1e-9);
        else
          EXPECT_NEAR(r.overlap0, 0.0, 1e-9);
      }
  }
}

TEST(Decide, BoundaryStartStateCarriesNoSignal) {
  // (|<-,s> + |->,t>)/sqrt2 lies in B, so its phase-0 overlap ignores the input.
  auto net = SwitchingNet::build(2, 1, 0);
  std::vector<double> seen;
  for (const Digraph& g : all_digraphs_n2()) {
    GraphOracle o(g);
    ReflectionPair pair = build_reflections(net, o, 1);
    StateVec v = StateVec::Zero(pair.index.dim());
    v[pair.index.back_s()] = v[pair.index.fwd_t()] = 1 / std::sqrt(2.0);
    EXPECT_LT((pair.P_B() * v - v).norm(), 1e-12);
    seen.push_back(phase0_overlap(pair, v));
  }
  for (double x : seen) EXPECT_NEAR(x, seen.front(), 1e-9);
}

TEST(Decide, Examples) {
  // No on-edge touches the sink: reject.
  Digraph g(4, {{0, 1}});
  auto net = SwitchingNet::build(4, 1, 0);
  GraphOracle o(g);
  auto r = decide_phase_estimation(build_reflections(net, o, 3), default_initial_state(state_index(net)));
  EXPECT_FALSE(r.accepted);
  for (int L : {1, 2, 4}) {
    auto d = D_L(complete_digraph(4), 0, 3, L, DecideMode::Spectral);
    EXPECT_TRUE(d.answer) << L;
    EXPECT_TRUE(d.report.spectral);
  }
}

TEST(WitnessEnergy, BoundedByPathLength) {
  for (const Digraph& g : all_digraphs_n2())
    for (int u = 0; u < 2; ++u)
      for (int v = 0; v < 2; ++v) {
        auto d = D_L(g, u, v, 2, DecideMode::Exact);
        if (!d.answer) continue;
        EXPECT_LE(d.report.witness_energy, d.report.path_len + 1e-9);
        EXPECT_LE(d.report.path_len, 3);
      }
  auto net = SwitchingNet::build(2, 1, 0);
  std::vector<std::uint8_t> off(net.edge_count(), 0);
  EXPECT_THROW(witness_energy(net, off, 1), Disconnected);
}

TEST(DL, Examples) {
  Digraph path = layered_path(4);
  EXPECT_TRUE(D_L(path, 0, 1, 1, DecideMode::Exact).answer);
  EXPECT_TRUE(D_L(path, 0, 1, 1, DecideMode::Spectral).answer);
  EXPECT_FALSE(D_L(path, 0, 3, 2, DecideMode::Exact).answer);
  EXPECT_FALSE(D_L(path, 0, 3, 2, DecideMode::Spectral).answer);
  auto r = D_L(path, 0, 3, 4, DecideMode::Exact);
  EXPECT_TRUE(r.answer);
  EXPECT_NEAR(r.report.ledger.t_formula, std::sqrt(std::pow(4, std::log2(3.0)) * 81 * 4), 1e-9);
  EXPECT_NEAR(r.report.ledger.t_formula, 54.0, 1e-9);
  EXPECT_EQ(r.report.ledger.oracle_queries, 4u * 81u);
  EXPECT_THROW(D_L(path, 0, 1, 3, DecideMode::Exact), InvalidParams);
  EXPECT_THROW(parse_mode("fast"), InvalidParams);
}

TEST(DistL, Examples) {
  Digraph path = layered_path(5);
  EXPECT_TRUE(Dist_L(path, 0, 3, 3, DecideMode::Exact).answer);
  EXPECT_FALSE(Dist_L(path, 0, 4, 3, DecideMode::Exact).answer);
  EXPECT_TRUE(Dist_L(path, 2, 2, 1, DecideMode::Exact).answer);
  EXPECT_TRUE(Dist_L(path, 1, 2, 1, DecideMode::Exact).answer);
  EXPECT_FALSE(Dist_L(path, 2, 1, 1, DecideMode::Exact).answer);
  EXPECT_THROW(Dist_L(path, 0, 1, 0, DecideMode::Exact), InvalidParams);
}

TEST(DistL, ExhaustiveTwoVertices) {
  for (const Digraph& g : all_digraphs_n2())
    for (int u = 0; u < 2; ++u)
      for (int v = 0; v < 2; ++v)
        for (int L = 1; L <= 4; ++L) {
          bool want = within(g, u, v, L);
          EXPECT_EQ(Dist_L(g, u, v, L, DecideMode::Exact).answer, want);
          EXPECT_EQ(Dist_L(g, u, v, L, DecideMode::Spectral).answer, want);
        }
}

TEST(DistL, SeededFourVertices) {
  int mismatches = 0, instances = 0;
  for (int k = 0; k < 201; ++k) {
    double p = std::vector<double>{0.2, 0.5, 0.8}[k % 3];
    Digraph g = random_digraph(4, p, 1000 + k);
    for (int u = 0; u < 4; ++u)
      for (int v = 0; v < 4; ++v)
        for (int L : {1, 2, 4}) {
          bool want = within(g, u, v, L);
          mismatches += Dist_L(g, u, v, L, DecideMode::Exact).answer != want;
          mismatches += Dist_L(g, u, v, L, DecideMode::Spectral).answer != want;
          ++instances;
        }
  }
  EXPECT_EQ(mismatches, 0);
  EXPECT_EQ(instances, 201 * 16 * 3);
}

TEST(DistL, SeededFourVerticesLengthThree) {
  // L = 3 pads to eight vertices (dim H_N = 4628); exact on the full corpus,
  // spectral on a sample.
  int spectral_checked = 0;
  for (int k = 0; k < 201; ++k) {
    double p = std::vector<double>{0.2, 0.5, 0.8}[k % 3];
    Digraph g = random_digraph(4, p, 1000 + k);
    for (int u = 0; u < 4; ++u)
      for (int v = 0; v < 4; ++v) {
        bool want = within(g, u, v, 3);
        EXPECT_EQ(Dist_L(g, u, v, 3, DecideMode::Exact).answer, want);
        if (k < 3 && u == 0 && v != 0) {
          auto r = Dist_L(g, u, v, 3, DecideMode::Spectral);
          EXPECT_TRUE(r.report.spectral);
          EXPECT_EQ(r.answer, want) << k << ' ' << v;
          ++spectral_checked;
        }
      }
  }
  EXPECT_EQ(spectral_checked, 9);
}

TEST(Ledger, QuantumCellsGrowLikeLogLTimesLogN) {
  for (int n : {2, 4, 16, 256, 1 << 12, 1 << 20})
    for (int L = 2; L <= n; L *= 2) {
      double bound = kQuantumCellsKappa * std::log2(L) * std::log2(n);
      EXPECT_LE(static_cast<double>(quantum_space_cells(n, L)), bound) << n << ' ' << L;
    }
}
