#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qdstcon/ledger.hpp"

namespace qdstcon {

// Hidden constants of the asymptotic bounds. Zero gives the bare formula shape.
struct TradeoffConstants {
  double c_classical = 1.0;  // multiplies log n log log n in the classical exponent
  double c_quantum = 1.0;    // multiplies log n log log n in the quantum exponent
  double c_L = 1.0;          // L = clamp(ceil(c_L n log n / S), 1, n)
};

// log2 of the classical running time: log^2(n/S) + c log n log log n.
// log(n/S) is read as 0 for S >= n. Throws DomainError unless n >= 2 and S >= log^2 n.
double log_T_classical(double n, double S, double c = 1.0);
// log2 of the quantum running time: (1/2) log n log(n/S) + c log n log log n.
double log_T_quantum(double n, double S, double c = 1.0);

// The same exponents without the domain check (n >= 2 and S >= 1 still required).
double classical_exponent(double n, double S, double c);
double quantum_exponent(double n, double S, double c);

int choose_L(std::uint64_t n, std::uint64_t S, double c_L = 1.0);

struct CrossoverResult {
  std::uint64_t S_star = 0;  // 0 when no grid point qualifies
  int k_star = -1;           // S_star = 2^k_star
  double resolution = 2.0;   // grid ratio
};

// Largest S = 2^k < n with quantum <= classical. The grid ignores the
// log^2 n lower limit so that small n can be scanned.
CrossoverResult crossover_scan(std::uint64_t n, double c_classical, double c_quantum);
inline CrossoverResult crossover_scan(std::uint64_t n, double c) { return crossover_scan(n, c, c); }

struct TradeoffPoint {
  std::uint64_t n = 0;
  std::uint64_t S = 0;
  double log_T_classical = 0;
  double log_T_quantum = 0;
  int L_chosen = 1;
  bool crossover_flag = false;  // S < n and quantum <= classical
};

TradeoffPoint tradeoff_point(std::uint64_t n, std::uint64_t S, const TradeoffConstants& k);

struct SweepConfig {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> points;  // (n, S), deduplicated, config order
  std::string decider = "exact";
  std::uint64_t seed = 1;
  int reps = 1;
  double density = 0.3;
  std::uint64_t max_run_n = 64;  // larger n get formula values only
  TradeoffConstants constants;
};

// {"runs": [{"n": 16, "S": [16, 32]}], "decider": "exact", "seed": 1, "reps": 1,
//  "density": 0.3, "max_run_n": 64, "constants": {"c_classical": 1, "c_quantum": 1, "c_L": 1}}
// Throws ConfigError.
SweepConfig parse_sweep_config(const std::string& json_text);

struct SweepRow {
  TradeoffPoint point;
  std::optional<ResourceLedger> measured;
};

// Runs dstcon on a seeded random digraph from vertex 1 to vertex n for every
// point with n <= max_run_n. Rows follow config order.
std::vector<SweepRow> sweep(const SweepConfig& config);

inline constexpr const char* kSweepHeader =
    "n,S,L,logT_classical,logT_quantum,measured_time_steps,measured_space_cells,"
    "measured_quantum_cells,crossover";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace qdstcon
