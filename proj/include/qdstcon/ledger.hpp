#pragma once

#include <cstdint>

namespace qdstcon {

// Resource accounting shared by the deciders and the outer algorithm.
struct ResourceLedger {
  std::uint64_t time_steps = 0;        // decider calls weighted by their cost model
  std::uint64_t space_cells = 0;       // peak stored (vertex, log L) records
  std::uint64_t oracle_queries = 0;
  std::uint64_t quantum_space_cells = 0;
  std::uint64_t decider_calls = 0;
  double t_formula = 0;                // accounted quantum time of the last D_L call
  bool guard_exhausted = false;

  void absorb(const ResourceLedger& inner) {
    oracle_queries += inner.oracle_queries;
    if (inner.quantum_space_cells > quantum_space_cells) quantum_space_cells = inner.quantum_space_cells;
    if (inner.t_formula > 0) t_formula = inner.t_formula;
  }
};

}  // namespace qdstcon
