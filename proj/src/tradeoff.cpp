#include "qdstcon/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>

#include "qdstcon/driver.hpp"
#include "qdstcon/errors.hpp"
#include "qdstcon/graph.hpp"

namespace qdstcon {

namespace {

void check_args(double n, double S) {
  if (!(n >= 2)) throw DomainError("tradeoff formulas need n >= 2");
  if (!(S >= 1)) throw DomainError("tradeoff formulas need S >= 1");
}

double log_ratio(double n, double S) { return std::max(0.0, std::log2(n / S)); }

double lower_order(double n, double c) {
  double lg = std::log2(n);
  return c * lg * std::log2(lg);
}

void check_domain(double n, double S) {
  check_args(n, S);
  double lg = std::log2(n);
  if (S < lg * lg) throw DomainError("S must be at least log^2 n");
}

}  // namespace

double classical_exponent(double n, double S, double c) {
  check_args(n, S);
  double r = log_ratio(n, S);
  return r * r + lower_order(n, c);
}

double quantum_exponent(double n, double S, double c) {
  check_args(n, S);
  return 0.5 * std::log2(n) * log_ratio(n, S) + lower_order(n, c);
}

double log_T_classical(double n, double S, double c) {
  check_domain(n, S);
  return classical_exponent(n, S, c);
}

double log_T_quantum(double n, double S, double c) {
  check_domain(n, S);
  return quantum_exponent(n, S, c);
}

int choose_L(std::uint64_t n, std::uint64_t S, double c_L) {
  if (n < 1 || S < 1) throw DomainError("choose_L needs n, S >= 1");
  double lg = std::max(1.0, std::log2(static_cast<double>(n)));
  double L = std::ceil(c_L * static_cast<double>(n) * lg / static_cast<double>(S));
  return static_cast<int>(std::clamp(L, 1.0, static_cast<double>(n)));
}

CrossoverResult crossover_scan(std::uint64_t n, double c_classical, double c_quantum) {
  CrossoverResult out;
  if (n < 2) return out;
  double nd = static_cast<double>(n);
  for (int k = 0; k < 64 && (std::uint64_t{1} << k) < n; ++k) {
    double S = std::ldexp(1.0, k);
    if (quantum_exponent(nd, S, c_quantum) <= classical_exponent(nd, S, c_classical)) {
      out.S_star = std::uint64_t{1} << k;
      out.k_star = k;
    }
  }
  return out;
}

TradeoffPoint tradeoff_point(std::uint64_t n, std::uint64_t S, const TradeoffConstants& k) {
  TradeoffPoint p;
  p.n = n;
  p.S = S;
  double nd = static_cast<double>(n), Sd = static_cast<double>(S);
  p.log_T_classical = log_T_classical(nd, Sd, k.c_classical);
  p.log_T_quantum = log_T_quantum(nd, Sd, k.c_quantum);
  p.L_chosen = choose_L(n, S, k.c_L);
  p.crossover_flag = S < n && p.log_T_quantum <= p.log_T_classical;
  return p;
}

SweepConfig parse_sweep_config(const std::string& json_text) {
  using nlohmann::json;
  SweepConfig cfg;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    if (!j.contains("runs") || !j["runs"].is_array() || j["runs"].empty())
      throw ConfigError("config needs a non-empty \"runs\" array");
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    for (const auto& run : j["runs"]) {
      auto n = run.at("n").get<std::uint64_t>();
      if (n < 2 || n > (std::uint64_t{1} << 62)) throw ConfigError("run n must lie in [2, 2^62]");
      const auto& grid = run.at("S");
      if (!grid.is_array() || grid.empty()) throw ConfigError("run S must be a non-empty array");
      for (const auto& s : grid) {
        auto S = s.get<std::uint64_t>();
        if (S < 1) throw ConfigError("S must be positive");
        if (seen.insert({n, S}).second) cfg.points.emplace_back(n, S);
      }
    }
    cfg.decider = j.value("decider", cfg.decider);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.reps = j.value("reps", cfg.reps);
    cfg.density = j.value("density", cfg.density);
    cfg.max_run_n = j.value("max_run_n", cfg.max_run_n);
    if (j.contains("constants")) {
      const auto& c = j["constants"];
      cfg.constants.c_classical = c.value("c_classical", cfg.constants.c_classical);
      cfg.constants.c_quantum = c.value("c_quantum", cfg.constants.c_quantum);
      cfg.constants.c_L = c.value("c_L", cfg.constants.c_L);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  }
  if (cfg.reps < 1 || cfg.reps % 2 == 0) throw ConfigError("reps must be odd and >= 1");
  if (!(cfg.density >= 0 && cfg.density <= 1)) throw ConfigError("density must lie in [0, 1]");
  if (cfg.max_run_n > 4096) throw ConfigError("max_run_n above 4096");
  try {
    make_decider(cfg.decider, cfg.seed);
  } catch (const InvalidParams& e) {
    throw ConfigError(e.what());
  }
  for (auto [n, S] : cfg.points) {
    try {
      tradeoff_point(n, S, cfg.constants);
    } catch (const DomainError& e) {
      throw ConfigError("point n=" + std::to_string(n) + " S=" + std::to_string(S) + ": " + e.what());
    }
  }
  return cfg;
}

std::vector<SweepRow> sweep(const SweepConfig& config) {
  std::vector<SweepRow> rows;
  for (auto [n, S] : config.points) {
    SweepRow row;
    row.point = tradeoff_point(n, S, config.constants);
    if (n <= config.max_run_n) {
      int nn = static_cast<int>(n);
      std::uint64_t seed = config.seed * 1000003u + n;
      Digraph g = random_digraph(nn, config.density, seed);
      auto decider = make_decider(config.decider, seed);
      row.measured = dstcon(g, 0, nn - 1, row.point.L_chosen, *decider, config.reps).ledger;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    const auto& p = r.point;
    out << p.n << ',' << p.S << ',' << p.L_chosen << ',' << num(p.log_T_classical) << ','
        << num(p.log_T_quantum) << ',';
    if (r.measured)
      out << r.measured->time_steps << ',' << r.measured->space_cells << ','
          << r.measured->quantum_space_cells;
    else
      out << ",,";
    out << ',' << (p.crossover_flag ? 1 : 0) << '\n';
  }
}

}  // namespace qdstcon
