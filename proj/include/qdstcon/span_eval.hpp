#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qdstcon/flow_algebra.hpp"
#include "qdstcon/ledger.hpp"

namespace qdstcon {

// Overlap below which the decider rejects. One global constant.
inline constexpr double kAcceptThreshold = 1e-3;
// Eigenvalue cutoff for the kernel of the compressed phase-0 operator.
inline constexpr double kKernelTol = 1e-9;
// Largest dim H_N = 2|E|+4 decided spectrally; above it D_L answers exactly.
inline constexpr std::int64_t kSpectralCap = 5000;
// Largest ||P_B(Gram-Schmidt) - (I - P_Bperp)||_F accepted by build_reflections.
inline constexpr double kBasisTol = 1e-8;

// Input-independent spaces of one network and sink.
struct BSpaces {
  Eigen::MatrixXd bperp;  // orthonormal basis of B-perp
  Eigen::MatrixXd stars;  // orthonormal basis of span of the signed stars
  double basis_gap = 0;   // ||P_B - (I - P_Bperp)||_F
};

// Builds and checks BSpaces; throws BasisMismatch above kBasisTol.
std::shared_ptr<const BSpaces> build_b_spaces(const SwitchingNet& net, int sink);

// Reflections around A(x) and B. P_A is block diagonal and kept as the on
// mask; dense matrices are built on request.
struct ReflectionPair {
  StateIndex index{0};
  int sink = 0;
  std::vector<std::uint8_t> on;
  std::shared_ptr<const BSpaces> spaces;

  Eigen::MatrixXd P_A() const;
  // Gram-Schmidt on the spanning set (symmetric edge vectors plus stars).
  Eigen::MatrixXd P_B() const;
  Eigen::MatrixXd P_Bperp() const;
  // (2 P_A - I)(2 P_B - I).
  Eigen::MatrixXd U() const;
};

ReflectionPair build_reflections(const SwitchingNet& net, GraphOracle& oracle, int sink);
ReflectionPair build_reflections(const SwitchingNet& net, const std::vector<std::uint8_t>& on, int sink);

// (|s> - |t>) / sqrt 2.
StateVec default_initial_state(const StateIndex& ix);

struct DecisionReport {
  bool accepted = false;
  double overlap0 = 0;
  double witness_energy = -1;  // -1 when not accepted
  int path_len = -1;           // -1 when no accepting path exists
  bool spectral = true;        // false when answered exactly above the cap
  ResourceLedger ledger;
};

// Squared overlap of psi0 with the phase-0 eigenspace of
// W = (2P_A - I)(2P_Bperp - I) = -U, i.e. (A n Bperp) + (Aperp n B).
double phase0_overlap(const ReflectionPair& pair, const StateVec& psi0);

DecisionReport decide_phase_estimation(const ReflectionPair& pair, const StateVec& psi0,
                                       double threshold = kAcceptThreshold);

// Minimum energy of a unit source-sink flow on the on-subgraph; throws Disconnected.
double witness_energy(const SwitchingNet& net, const std::vector<std::uint8_t>& on, int sink);
double witness_energy(const SwitchingNet& net, GraphOracle& oracle, int sink);

enum class DecideMode { Exact, Spectral };
DecideMode parse_mode(const std::string& text);

// quantum_space_cells(n, L) <= kQuantumCellsKappa * log L * log n for L, n >= 2.
inline constexpr double kQuantumCellsKappa = 8.0;

// sqrt(L^{log 3} (2n+1)^{log L} n).
double t_formula(int n, int L);
// Qubits of the simulated evaluation: log dim H_N plus the phase register.
std::uint64_t quantum_space_cells(int n, int L);

struct DistResult {
  bool answer = false;
  DecisionReport report;
};

// Path of length <= L from u to v, L a power of two. Pads n to a power of two >= L.
DistResult D_L(const Digraph& g, int u, int v, int L, DecideMode mode);
// Any L >= 1; prepends a source path to reach the next power of two.
DistResult Dist_L(const Digraph& g, int u, int v, int L, DecideMode mode);

}  // namespace qdstcon
