#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qdstcon/closed_forms.hpp"
#include "qdstcon/flow_algebra.hpp"

namespace qdstcon {

// Gate costs of the primitive steps, in units of elementary gates. A register
// of log n qubits costs log n per swap, Hadamard layer, write or compare.
struct GateModel {
  static constexpr int kRotationBase = 2;  // plus log n for the compare feeding the angle
  static constexpr int kFlag = 2;          // compute and uncompute one flag bit
  static constexpr int kBoundary = 2;      // direction qubit prep
  // Budget: gate_count(ell) - gate_count(ell-1) <= kBudgetC * log2(n)^kBudgetK.
  static constexpr int kBudgetC = 8;
  static constexpr int kBudgetK = 1;
};

// One basis state of the simulated registers.
struct RegisterBasis {
  int part = 0;           // 0: edge register, 1: |<-,s>, 2: |->,t>
  int dir = 0;            // 0: |->,e>, 1: |<-,e>
  std::vector<int> tag;   // tag of sigma_k, k = 1..ell at positions 0..ell-1
  std::vector<int> pay;   // payload of sigma_k
  int idx = 0;            // last edge index i
};

// Dense amplitudes over part x dir x (tag, payload)^ell x idx.
class RegisterState {
 public:
  RegisterState(int n, int ell);
  static RegisterState basis(int n, int ell, const RegisterBasis& b);

  int n() const { return n_; }
  int ell() const { return ell_; }
  std::int64_t size() const { return amp_.size(); }
  std::int64_t encode(const RegisterBasis& b) const;
  RegisterBasis decode(std::int64_t index) const;

  Eigen::VectorXd& amplitudes() { return amp_; }
  const Eigen::VectorXd& amplitudes() const { return amp_; }

  // Edge register read as |sigma, i>; throws InvariantViolation if any
  // amplitude sits outside part 0, dir 0 or on an invalid symbol.
  FlowFn edge_vector() const;
  // Full H_N vector, including direction and boundary parts.
  StateVec state_vector() const;

 private:
  std::int64_t edge_index(const RegisterBasis& b) const;

  int n_;
  int ell_;
  std::int64_t block_;  // (3n)^ell
  Eigen::VectorXd amp_;
};

enum class StepKind { Rotation, Swap, Hadamard, Write, Flag, Call };

struct PrepStep {
  StepKind kind;
  int level;  // 1-based recursion level, 0 for top-level steps
  int cost;
  std::string label;
  std::function<void(RegisterState&)> apply;
};

struct PrepCircuit {
  int n = 0;
  int ell = 0;
  std::vector<PrepStep> steps;

  std::int64_t gate_count() const;
  void run(RegisterState& state) const;
  std::string describe() const;
};

// Squared amplitudes over a ternary register value, with signs.
struct Weights {
  std::array<Rational, 3> w;
  std::array<int, 3> sign{1, 1, 1};
};

// Circuits. Inputs are basis states described next to each builder.
// Layer superposition from prefix sums, then uniform expansion. Input: all zero.
PrepCircuit sum_of_flows_circuit(int n, int ell);
// sum_j (-1)^{x.j} theta-bar_j over levels first_level+1..ell. Input: idx = x.
PrepCircuit fourier_circuit(int n, int ell, int first_level = 0);
// psi_{z,x}. Input: pay[0] = z, idx = x.
PrepCircuit psi_circuit(int n, int ell);
// theta-bar_j as an H_N vector. Input: all zero; j is held in a classical register.
PrepCircuit theta_circuit(int n, int ell, int j, bool with_boundary);

struct AmplitudeSpec {
  int m = 0;  // number of digits
  std::function<Rational(const std::vector<int>& prefix)> S;
  std::function<int(const std::vector<int>& digits)> sign;  // optional, default +1
};

struct GroverRudolphOutput {
  Eigen::VectorXd state;  // index = digits read most significant first
  int rotations = 0;
};

// Loads sum_s alpha_s |s> / |alpha| one digit at a time. Throws NegativePrefix
// on S(p) < 0 and InvalidParams when S(p) differs from the sum over children.
GroverRudolphOutput grover_rudolph(const AmplitudeSpec& spec, int d);

// Layer amplitudes sqrt(n^{|tau|_0} / (n+2)^ell) over tau in {0,1,2}^ell.
GroverRudolphOutput layer_superposition(int n, int ell);

struct PrepOutput {
  Eigen::VectorXd vector;
  std::int64_t gate_count = 0;
  int ell = 0;
};

PrepOutput prepare_sum_of_flows(const SwitchingNet& net);
PrepOutput fourier_flows_C(const SwitchingNet& net, int x);  // x = 0 runs prepare_sum_of_flows
PrepOutput prepare_psi(const SwitchingNet& net, int z, int x);
PrepOutput prepare_theta(const SwitchingNet& net, int j, bool with_boundary);

// |a/|a| - b/|b||; 2 when either vector is zero.
double residual_up_to_scale(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct PrepReport {
  std::string family;
  double max_residual = 0;
  std::int64_t gate_count = 0;  // largest over the family's inputs
  int cases = 0;
};

// Runs every preparer on every input at (n, ell) against the flow_algebra references.
std::vector<PrepReport> verify_preparers(int n, int ell);

}  // namespace qdstcon
