#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "qdstcon/driver.hpp"
#include "qdstcon/errors.hpp"
#include "qdstcon/flow_algebra.hpp"
#include "qdstcon/graph.hpp"
#include "qdstcon/pebbling.hpp"
#include "qdstcon/span_eval.hpp"
#include "qdstcon/state_prep.hpp"
#include "qdstcon/switching_net.hpp"
#include "qdstcon/tradeoff.hpp"

using namespace qdstcon;
using nlohmann::json;

namespace {

json ledger_json(const ResourceLedger& l) {
  return {{"time_steps", l.time_steps},
          {"space_cells", l.space_cells},
          {"oracle_queries", l.oracle_queries},
          {"quantum_space_cells", l.quantum_space_cells},
          {"decider_calls", l.decider_calls},
          {"t_formula", l.t_formula},
          {"guard_exhausted", l.guard_exhausted}};
}

int to_index(int one_based, int n, const char* what) {
  if (one_based < 1 || one_based > n)
    throw InvalidParams(std::string(what) + " must lie in 1.." + std::to_string(n));
  return one_based - 1;
}

int ell_of_length(int L) {
  if (L < 1 || !is_power_of_two(static_cast<std::uint64_t>(L))) throw InvalidParams("L must be a power of two");
  return ceil_log2(static_cast<std::uint64_t>(L));
}

std::vector<int> parse_path(const std::string& text, int n) {
  std::vector<int> path;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      path.push_back(to_index(std::stoi(item), n, "path vertex"));
    } catch (const std::logic_error&) {
      throw BadPath("bad path entry '" + item + "'");
    }
  }
  return path;
}

void net_dump(int n, int ell, int root) {
  SwitchingNet net = SwitchingNet::build(n, ell, to_index(root, n, "root"));
  for (std::int64_t e = 0; e < net.edge_count(); ++e) std::cout << format_edge_line(net, e) << '\n';
}

void basis_dump(int n, int ell, int root, int sink) {
  SwitchingNet net = SwitchingNet::build(n, ell, to_index(root, n, "root"));
  int j = to_index(sink, n, "sink");
  SpaceBasis bperp = build_Bperp_basis(net, j);
  SpaceBasis minus = build_B_minus_basis(net, j);
  SpaceBasis b = build_B_basis(net, j);
  std::int64_t E = net.edge_count();
  std::cout << "space,dim\n";
  std::cout << "H," << 2 * E + 4 << '\n';
  std::cout << "B_minus," << minus.size() << '\n';
  std::cout << "B," << b.size() << '\n';
  std::cout << "B_perp," << bperp.size() << '\n';
  std::cout << "E+4-V," << E + 4 - net.vertex_count() << '\n';
  std::cout << "\ngram\n";
  Eigen::MatrixXd gram = bperp.vectors.transpose() * bperp.vectors;
  char buf[32];
  for (int r = 0; r < gram.rows(); ++r) {
    for (int c = 0; c < gram.cols(); ++c) {
      double x = gram(r, c);
      std::snprintf(buf, sizeof buf, "%.12f", std::abs(x) < 5e-13 ? 0.0 : x);
      std::cout << (c ? "," : "") << buf;
    }
    std::cout << '\n';
  }
}

void prep_verify(int n, int L) {
  auto reports = verify_preparers(n, ell_of_length(L));
  std::printf("%-16s %14s %10s %6s\n", "family", "max_residual", "gates", "cases");
  bool ok = true;
  for (const auto& r : reports) {
    std::printf("%-16s %14.3e %10lld %6d\n", r.family.c_str(), r.max_residual,
                static_cast<long long>(r.gate_count), r.cases);
    ok = ok && r.max_residual < 1e-9;
  }
  if (!ok) throw InvariantViolation("a preparer missed its reference vector");
}

void decide_cmd(const std::string& file, int u, int v, int L, const std::string& mode, bool as_json) {
  Digraph g = load_graph(file);
  DistResult r = Dist_L(g, to_index(u, g.size(), "u"), to_index(v, g.size(), "v"), L, parse_mode(mode));
  const DecisionReport& d = r.report;
  if (as_json) {
    json out = {{"accepted", r.answer},
                {"overlap0", d.overlap0},
                {"witness_energy", d.witness_energy},
                {"path_len", d.path_len},
                {"spectral", d.spectral},
                {"ledger", ledger_json(d.ledger)}};
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << (r.answer ? "accept" : "reject") << " overlap0=" << d.overlap0 << '\n';
  }
}

void dstcon_cmd(const std::string& file, int s, int t, int L, const std::string& spec, int reps,
                std::uint64_t seed, bool as_json) {
  Digraph g = load_graph(file);
  auto decider = make_decider(spec, seed);
  DstconResult r = dstcon(g, to_index(s, g.size(), "s"), to_index(t, g.size(), "t"), L, *decider, reps);
  bool connected = r.result == Connectivity::Connected;
  if (as_json) {
    json out = {{"result", connected ? "connected" : "not_connected"},
                {"j_used", r.j_used},
                {"peak_records", r.peak_records},
                {"decider", decider->name()},
                {"ledger", ledger_json(r.ledger)}};
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << (connected ? "connected" : "not connected") << '\n';
  }
}

void pebble_cmd(int L, const std::string& file, const std::string& path_text) {
  Digraph g = file.empty() ? layered_path(L + 1) : load_graph(file);
  std::vector<int> path;
  if (path_text.empty()) {
    if (!file.empty()) throw BadPath("--path is required with --graph");
    for (int k = 0; k <= L; ++k) path.push_back(k);
  } else {
    path = parse_path(path_text, g.size());
  }
  auto moves = strategy_moves(g, path, L);
  replay(g, path.front(), moves);
  write_trace(std::cout, L, path, moves);
}

void sweep_cmd(const std::string& file, const std::string& out_path) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config '" + file + "'");
  std::stringstream text;
  text << in.rdbuf();
  auto rows = sweep(parse_sweep_config(text.str()));
  if (out_path.empty()) {
    write_sweep_csv(std::cout, rows);
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ConfigError("cannot write '" + out_path + "'");
  write_sweep_csv(out, rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed st-connectivity with span-program path deciders"};
  app.require_subcommand(1);

  int n = 2, ell = 1, root = 1, sink = 1, L = 2, u = 1, v = 1, s = 1, t = 1, reps = 1;
  std::uint64_t seed = 1;
  std::string graph, mode = "exact", decider = "exact", path, config, out;
  bool as_json = false;

  auto* net = app.add_subcommand("net", "Switching network");
  net->require_subcommand(1);
  auto* net_dump_cmd = net->add_subcommand("dump", "One line per edge: sigma;i;label_from;label_to");
  net_dump_cmd->add_option("--n", n)->required();
  net_dump_cmd->add_option("--ell", ell)->required();
  net_dump_cmd->add_option("--root", root);

  auto* basis = app.add_subcommand("basis", "Flow bases");
  basis->require_subcommand(1);
  auto* basis_dump_cmd = basis->add_subcommand("dump", "Dimension table and B-perp Gram matrix as CSV");
  basis_dump_cmd->add_option("--n", n)->required();
  basis_dump_cmd->add_option("--ell", ell)->required();
  basis_dump_cmd->add_option("--root", root);
  basis_dump_cmd->add_option("--sink", sink);

  auto* prep = app.add_subcommand("prep", "State preparation");
  prep->require_subcommand(1);
  auto* prep_verify_cmd = prep->add_subcommand("verify", "Residual and gate table of the preparers");
  prep_verify_cmd->add_option("--n", n)->required();
  prep_verify_cmd->add_option("--L", L)->required();

  auto* decide = app.add_subcommand("decide", "Is there a path of length <= L from u to v");
  decide->add_option("--graph", graph)->required();
  decide->add_option("--u", u)->required();
  decide->add_option("--v", v)->required();
  decide->add_option("--L", L)->required();
  decide->add_option("--mode", mode)->check(CLI::IsMember({"spectral", "exact"}));
  decide->add_flag("--json", as_json);

  auto* dst = app.add_subcommand("dstcon", "Is t reachable from s");
  dst->add_option("--graph", graph)->required();
  dst->add_option("--s", s)->required();
  dst->add_option("--t", t)->required();
  dst->add_option("--L", L)->required();
  dst->add_option("--decider", decider);
  dst->add_option("--reps", reps);
  dst->add_option("--seed", seed);
  dst->add_flag("--json", as_json);

  auto* pebble = app.add_subcommand("pebble", "Pebbling strategy trace for a path of length L");
  pebble->add_option("--L", L)->required();
  pebble->add_option("--graph", graph);
  pebble->add_option("--path", path, "comma separated 1-based vertices");

  auto* sw = app.add_subcommand("sweep", "Tradeoff CSV from a JSON config");
  sw->add_option("--config", config)->required();
  sw->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*net_dump_cmd) net_dump(n, ell, root);
    else if (*basis_dump_cmd) basis_dump(n, ell, root, sink);
    else if (*prep_verify_cmd) prep_verify(n, L);
    else if (*decide) decide_cmd(graph, u, v, L, mode, as_json);
    else if (*dst) dstcon_cmd(graph, s, t, L, decider, reps, seed, as_json);
    else if (*pebble) pebble_cmd(L, graph, path);
    else if (*sw) sweep_cmd(config, out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
