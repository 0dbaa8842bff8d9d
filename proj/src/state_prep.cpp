#include "qdstcon/state_prep.hpp"

#include <cmath>
#include <sstream>

#include "qdstcon/errors.hpp"

namespace qdstcon {

namespace {

int log2_exact(int n) {
  if (n < 2 || !is_power_of_two(static_cast<std::uint64_t>(n)))
    throw InvalidParams("n must be a power of two >= 2");
  return ceil_log2(static_cast<std::uint64_t>(n));
}

int parity(int a) { return __builtin_popcount(static_cast<unsigned>(a)) & 1; }

using Pred = std::function<bool(const RegisterBasis&)>;
using Emit = std::function<void(const RegisterBasis&, double)>;

// Applies a map on basis states, linear in the amplitudes.
void transform(RegisterState& s,
               const std::function<void(const RegisterBasis&, double, const Emit&)>& f) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(s.size());
  Emit emit = [&](const RegisterBasis& b, double a) { out[s.encode(b)] += a; };
  const Eigen::VectorXd& amp = s.amplitudes();
  for (std::int64_t k = 0; k < s.size(); ++k) {
    if (amp[k] == 0.0) continue;
    f(s.decode(k), amp[k], emit);
  }
  s.amplitudes() = std::move(out);
}

// A register field addressed by level; level -1 means idx.
int& field(RegisterBasis& b, bool payload, int level) {
  if (level < 0) return b.idx;
  return payload ? b.pay[level] : b.tag[level];
}

void hadamard(RegisterState& s, int level, const Pred& when) {
  int n = s.n();
  double scale = 1.0 / std::sqrt(static_cast<double>(n));
  transform(s, [&](const RegisterBasis& b, double a, const Emit& emit) {
    if (!when(b)) return emit(b, a);
    RegisterBasis c = b;
    int v = field(c, true, level);
    for (int w = 0; w < n; ++w) {
      field(c, true, level) = w;
      emit(c, parity(v & w) ? -a * scale : a * scale);
    }
  });
}

void swap_with_idx(RegisterState& s, int level, const Pred& when) {
  transform(s, [&](const RegisterBasis& b, double a, const Emit& emit) {
    if (!when(b)) return emit(b, a);
    RegisterBasis c = b;
    std::swap(c.pay[level], c.idx);
    emit(c, a);
  });
}

void xor_value(RegisterState& s, int level, int value, const Pred& when) {
  transform(s, [&](const RegisterBasis& b, double a, const Emit& emit) {
    if (!when(b)) return emit(b, a);
    RegisterBasis c = b;
    field(c, true, level) ^= value;
    emit(c, a);
  });
}

// Rotates a fresh ternary register (tag at level, or part when level < 0)
// from 0 into sum_t sign_t sqrt(w_t / sum w) |t>.
void rotate(RegisterState& s, int level, const std::function<Weights(const RegisterBasis&)>& weights,
            const Pred& when) {
  transform(s, [&](const RegisterBasis& b, double a, const Emit& emit) {
    if (!when(b)) return emit(b, a);
    RegisterBasis c = b;
    int& target = level < 0 ? c.part : c.tag[level];
    if (target != 0) throw InvariantViolation("rotation target register is not fresh");
    Weights w = weights(b);
    Rational total = w.w[0] + w.w[1] + w.w[2];
    if (total <= 0) throw InvariantViolation("rotation with zero total weight");
    for (int t = 0; t < 3; ++t) {
      if (w.w[t] < 0) throw NegativePrefix("negative squared amplitude");
      if (w.w[t] == 0) continue;
      target = t;
      emit(c, a * w.sign[t] * std::sqrt(to_double(w.w[t] / total)));
    }
  });
}

Pred always() {
  return [](const RegisterBasis&) { return true; };
}

PrepStep step(StepKind kind, int level, int cost, std::string label,
              std::function<void(RegisterState&)> apply) {
  return {kind, level, cost, std::move(label), std::move(apply)};
}

// Appends the Fourier recursion over levels first..ell-1 (0-based), each
// gated by `gate`, plus the final Hadamard on idx.
void append_fourier(PrepCircuit& c, int first, const Pred& gate) {
  int n = c.n, logn = log2_exact(n);
  for (int lv = first; lv < c.ell; ++lv) {
    int sub = c.ell - lv - 1;
    Rational n0 = N_zero(n, sub), nx = N_x(n, sub);
    c.steps.push_back(step(StepKind::Call, lv + 1, 0, "enter C level", [](RegisterState&) {}));
    c.steps.push_back(step(StepKind::Rotation, lv + 1, GateModel::kRotationBase + logn,
                           "rotate tag by idx == 0", [=](RegisterState& s) {
                             rotate(
                                 s, lv,
                                 [=](const RegisterBasis& b) {
                                   if (b.idx == 0) return Weights{{n * n0, n0, n0}};
                                   return Weights{{Rational(0), nx, n0}};
                                 },
                                 gate);
                           }));
    c.steps.push_back(step(StepKind::Swap, lv + 1, logn, "swap payload, idx if tag 2",
                           [=](RegisterState& s) {
                             swap_with_idx(s, lv, [=](const RegisterBasis& b) {
                               return gate(b) && b.tag[lv] == 2;
                             });
                           }));
    c.steps.push_back(step(StepKind::Hadamard, lv + 1, logn, "H payload if tag != 0",
                           [=](RegisterState& s) {
                             hadamard(s, lv, [=](const RegisterBasis& b) {
                               return gate(b) && b.tag[lv] != 0;
                             });
                           }));
  }
  c.steps.push_back(step(StepKind::Hadamard, c.ell + 1, logn, "H idx",
                         [=](RegisterState& s) { hadamard(s, -1, gate); }));
}

void check_index(int n, int v, const char* what) {
  if (v < 0 || v >= n) throw InvalidParams(std::string(what) + " out of range");
}

}  // namespace

RegisterState::RegisterState(int n, int ell) : n_(n), ell_(ell), block_(1) {
  log2_exact(n);
  if (ell < 0) throw InvalidParams("ell must be >= 0");
  for (int k = 0; k < ell; ++k) block_ *= 3 * n;
  if (6 * block_ * n > 50'000'000) throw CapExceeded("register simulation too large");
  amp_ = Eigen::VectorXd::Zero(6 * block_ * n);
}

RegisterState RegisterState::basis(int n, int ell, const RegisterBasis& b) {
  RegisterState s(n, ell);
  s.amp_[s.encode(b)] = 1.0;
  return s;
}

std::int64_t RegisterState::encode(const RegisterBasis& b) const {
  std::int64_t mid = 0;
  for (int k = 0; k < ell_; ++k) mid = mid * 3 * n_ + b.tag[k] * n_ + b.pay[k];
  return ((b.part * 2 + b.dir) * block_ + mid) * n_ + b.idx;
}

RegisterBasis RegisterState::decode(std::int64_t index) const {
  RegisterBasis b;
  b.tag.assign(ell_, 0);
  b.pay.assign(ell_, 0);
  b.idx = static_cast<int>(index % n_);
  index /= n_;
  std::int64_t mid = index % block_;
  index /= block_;
  b.dir = static_cast<int>(index % 2);
  b.part = static_cast<int>(index / 2);
  for (int k = ell_ - 1; k >= 0; --k) {
    int digit = static_cast<int>(mid % (3 * n_));
    mid /= 3 * n_;
    b.tag[k] = digit / n_;
    b.pay[k] = digit % n_;
  }
  return b;
}

std::int64_t RegisterState::edge_index(const RegisterBasis& b) const {
  std::int64_t leaf = 0;
  for (int k = 0; k < ell_; ++k) {
    if (b.tag[k] == 0 && b.pay[k] != 0)
      throw InvariantViolation("amplitude on tag 0 with nonzero payload");
    leaf = leaf * (2 * n_ + 1) + symbol_code({b.tag[k], b.pay[k]}, n_);
  }
  return leaf * n_ + b.idx;
}

FlowFn RegisterState::edge_vector() const {
  std::int64_t edges = n_;
  for (int k = 0; k < ell_; ++k) edges *= 2 * n_ + 1;
  FlowFn v = FlowFn::Zero(edges);
  for (std::int64_t k = 0; k < size(); ++k) {
    if (amp_[k] == 0.0) continue;
    RegisterBasis b = decode(k);
    if (b.part != 0 || b.dir != 0) throw InvariantViolation("amplitude outside the edge register");
    v[edge_index(b)] += amp_[k];
  }
  return v;
}

StateVec RegisterState::state_vector() const {
  std::int64_t edges = n_;
  for (int k = 0; k < ell_; ++k) edges *= 2 * n_ + 1;
  StateIndex ix{edges};
  StateVec v = StateVec::Zero(ix.dim());
  for (std::int64_t k = 0; k < size(); ++k) {
    if (amp_[k] == 0.0) continue;
    RegisterBasis b = decode(k);
    if (b.part == 0) {
      std::int64_t e = edge_index(b);
      v[b.dir ? ix.bwd(e) : ix.fwd(e)] += amp_[k];
      continue;
    }
    bool clean = b.dir == 0 && b.idx == 0;
    for (int t = 0; t < ell_; ++t) clean = clean && b.tag[t] == 0 && b.pay[t] == 0;
    if (!clean) throw InvariantViolation("boundary part with dirty registers");
    v[b.part == 1 ? ix.back_s() : ix.fwd_t()] += amp_[k];
  }
  return v;
}

std::int64_t PrepCircuit::gate_count() const {
  std::int64_t total = 0;
  for (const auto& s : steps) total += s.cost;
  return total;
}

void PrepCircuit::run(RegisterState& state) const {
  if (state.n() != n || state.ell() != ell) throw InvalidParams("register shape mismatch");
  for (const auto& s : steps) s.apply(state);
}

std::string PrepCircuit::describe() const {
  static const char* names[] = {"rot", "swap", "H", "write", "flag", "call"};
  std::ostringstream out;
  for (const auto& s : steps) {
    out << names[static_cast<int>(s.kind)] << " l=" << s.level << " cost=" << s.cost << "  "
        << s.label << '\n';
  }
  return out.str();
}

PrepCircuit sum_of_flows_circuit(int n, int ell) {
  int logn = log2_exact(n);
  PrepCircuit c{n, ell, {}};
  for (int lv = 0; lv < ell; ++lv) {
    c.steps.push_back(step(StepKind::Rotation, lv + 1, GateModel::kRotationBase + logn,
                           "rotate tag by prefix sums", [=](RegisterState& s) {
                             rotate(
                                 s, lv,
                                 [=](const RegisterBasis& b) {
                                   std::vector<int> p(b.tag.begin(), b.tag.begin() + lv);
                                   Weights w;
                                   for (int t = 0; t < 3; ++t) {
                                     p.push_back(t);
                                     w.w[t] = prefix_sum_S(n, ell, p);
                                     p.pop_back();
                                   }
                                   return w;
                                 },
                                 always());
                           }));
  }
  for (int lv = 0; lv < ell; ++lv) {
    c.steps.push_back(step(StepKind::Hadamard, lv + 1, logn, "H payload if tag != 0",
                           [=](RegisterState& s) {
                             hadamard(s, lv, [=](const RegisterBasis& b) { return b.tag[lv] != 0; });
                           }));
  }
  c.steps.push_back(step(StepKind::Hadamard, ell + 1, logn, "H idx",
                         [](RegisterState& s) { hadamard(s, -1, always()); }));
  return c;
}

PrepCircuit fourier_circuit(int n, int ell, int first_level) {
  log2_exact(n);
  if (first_level < 0 || first_level > ell) throw InvalidParams("first level out of range");
  PrepCircuit c{n, ell, {}};
  append_fourier(c, first_level, always());
  return c;
}

PrepCircuit psi_circuit(int n, int ell) {
  int logn = log2_exact(n);
  if (ell < 1) throw InvalidParams("psi_{z,x} needs ell >= 1");
  PrepCircuit c{n, ell, {}};
  Rational n0 = N_zero(n, ell - 1), nz = N_x(n, ell - 1);
  c.steps.push_back(step(StepKind::Rotation, 1, GateModel::kRotationBase + logn,
                         "rotate tag by idx == 0", [=](RegisterState& s) {
                           rotate(
                               s, 0,
                               [=](const RegisterBasis& b) {
                                 if (b.idx == 0) return Weights{{n * nz, n0, nz}};
                                 return Weights{{Rational(0), nz, nz}};
                               },
                               always());
                         }));
  c.steps.push_back(step(StepKind::Swap, 1, logn, "swap payload, idx if tag != 1",
                         [](RegisterState& s) {
                           swap_with_idx(s, 0, [](const RegisterBasis& b) { return b.tag[0] != 1; });
                         }));
  c.steps.push_back(step(StepKind::Hadamard, 1, logn, "H payload if tag != 0", [](RegisterState& s) {
    hadamard(s, 0, [](const RegisterBasis& b) { return b.tag[0] != 0; });
  }));
  append_fourier(c, 1, always());
  return c;
}

PrepCircuit theta_circuit(int n, int ell, int j, bool with_boundary) {
  int logn = log2_exact(n);
  check_index(n, j, "sink index");
  PrepCircuit c{n, ell, {}};
  Pred edge_part = [](const RegisterBasis& b) { return b.part == 0; };
  if (with_boundary) {
    Rational f = F_j(n, ell);
    c.steps.push_back(step(StepKind::Rotation, 0, GateModel::kRotationBase, "rotate part",
                           [=](RegisterState& s) {
                             rotate(
                                 s, -1,
                                 [=](const RegisterBasis&) {
                                   return Weights{{2 * f, Rational(1), Rational(1)}, {1, -1, 1}};
                                 },
                                 always());
                           }));
  }
  c.steps.push_back(step(StepKind::Hadamard, 0, GateModel::kBoundary, "direction to |->-|<->",
                         [=](RegisterState& s) {
                           double r = 1.0 / std::sqrt(2.0);
                           transform(s, [&](const RegisterBasis& b, double a, const Emit& emit) {
                             if (!edge_part(b)) return emit(b, a);
                             RegisterBasis d = b;
                             d.dir = 0;
                             emit(d, a * r);
                             d.dir = 1;
                             emit(d, -a * r);
                           });
                         }));
  // Sum mode once any earlier tag is not 1: the remaining block carries sum_i theta-bar_i.
  auto sum_mode = [](const RegisterBasis& b, int lv) {
    for (int k = 0; k < lv; ++k)
      if (b.tag[k] != 1) return true;
    return false;
  };
  for (int lv = 0; lv < ell; ++lv) {
    int sub = ell - lv - 1;
    Rational n0 = N_zero(n, sub), fj = F_j(n, sub);
    c.steps.push_back(step(StepKind::Flag, lv + 1, GateModel::kFlag, "flag sum mode",
                           [](RegisterState&) {}));
    c.steps.push_back(step(StepKind::Rotation, lv + 1, GateModel::kRotationBase + logn,
                           "rotate tag by mode", [=](RegisterState& s) {
                             rotate(
                                 s, lv,
                                 [=](const RegisterBasis& b) {
                                   if (sum_mode(b, lv)) return Weights{{n * n0, n0, n0}};
                                   return Weights{{n0, n * fj, n0}};
                                 },
                                 edge_part);
                           }));
    c.steps.push_back(step(StepKind::Write, lv + 1, logn, "write j if tag 2 in theta mode",
                           [=](RegisterState& s) {
                             xor_value(s, lv, j, [=](const RegisterBasis& b) {
                               return edge_part(b) && b.tag[lv] == 2 && !sum_mode(b, lv);
                             });
                           }));
    c.steps.push_back(step(StepKind::Hadamard, lv + 1, logn, "H payload", [=](RegisterState& s) {
      hadamard(s, lv, [=](const RegisterBasis& b) {
        if (!edge_part(b)) return false;
        return b.tag[lv] == 1 || (b.tag[lv] == 2 && sum_mode(b, lv));
      });
    }));
  }
  c.steps.push_back(step(StepKind::Write, ell + 1, logn, "write j into idx in theta mode",
                         [=](RegisterState& s) {
                           xor_value(s, -1, j, [=](const RegisterBasis& b) {
                             return edge_part(b) && !sum_mode(b, ell);
                           });
                         }));
  c.steps.push_back(step(StepKind::Hadamard, ell + 1, logn, "H idx in sum mode",
                         [=](RegisterState& s) {
                           hadamard(s, -1, [=](const RegisterBasis& b) {
                             return edge_part(b) && sum_mode(b, ell);
                           });
                         }));
  return c;
}

GroverRudolphOutput grover_rudolph(const AmplitudeSpec& spec, int d) {
  if (d < 2 || spec.m < 0 || !spec.S) throw InvalidParams("bad amplitude spec");
  std::int64_t size = 1;
  for (int k = 0; k < spec.m; ++k) size *= d;
  GroverRudolphOutput out;
  out.state = Eigen::VectorXd::Zero(size);
  Rational root = spec.S({});
  if (root < 0) throw NegativePrefix("S(root) < 0");
  if (root == 0) throw InvalidParams("all amplitudes are zero");
  // Depth-first over prefixes; amplitude of a prefix is sqrt(S(p) / S(root)).
  std::vector<int> p;
  std::function<void(const Rational&)> descend = [&](const Rational& sp) {
    if (static_cast<int>(p.size()) == spec.m) {
      std::int64_t index = 0;
      for (int digit : p) index = index * d + digit;
      int sign = spec.sign ? spec.sign(p) : 1;
      out.state[index] = sign * std::sqrt(to_double(sp / root));
      return;
    }
    std::vector<Rational> child(d);
    Rational total = 0;
    for (int t = 0; t < d; ++t) {
      p.push_back(t);
      child[t] = spec.S(p);
      p.pop_back();
      if (child[t] < 0) throw NegativePrefix("S(p) < 0");
      total += child[t];
    }
    if (total != sp) throw InvalidParams("prefix sums are not additive");
    for (int t = 0; t < d; ++t) {
      if (child[t] == 0) continue;
      p.push_back(t);
      descend(child[t]);
      p.pop_back();
    }
  };
  descend(root);
  out.rotations = spec.m;
  return out;
}

GroverRudolphOutput layer_superposition(int n, int ell) {
  log2_exact(n);
  AmplitudeSpec spec;
  spec.m = ell;
  spec.S = [=](const std::vector<int>& p) { return prefix_sum_S(n, ell, p); };
  return grover_rudolph(spec, 3);
}

PrepOutput prepare_sum_of_flows(const SwitchingNet& net) {
  PrepCircuit c = sum_of_flows_circuit(net.n(), net.ell());
  RegisterState s(net.n(), net.ell());
  s.amplitudes()[0] = 1.0;
  c.run(s);
  return {s.edge_vector(), c.gate_count(), net.ell()};
}

PrepOutput fourier_flows_C(const SwitchingNet& net, int x) {
  check_index(net.n(), x, "x");
  if (x == 0) return prepare_sum_of_flows(net);
  PrepCircuit c = fourier_circuit(net.n(), net.ell());
  RegisterBasis b;
  b.tag.assign(net.ell(), 0);
  b.pay.assign(net.ell(), 0);
  b.idx = x;
  RegisterState s = RegisterState::basis(net.n(), net.ell(), b);
  c.run(s);
  return {s.edge_vector(), c.gate_count(), net.ell()};
}

PrepOutput prepare_psi(const SwitchingNet& net, int z, int x) {
  if (z == 0) throw ZeroZ("psi_{z,x} needs z != 0");
  check_index(net.n(), z, "z");
  check_index(net.n(), x, "x");
  PrepCircuit c = psi_circuit(net.n(), net.ell());
  RegisterBasis b;
  b.tag.assign(net.ell(), 0);
  b.pay.assign(net.ell(), 0);
  b.pay[0] = z;
  b.idx = x;
  RegisterState s = RegisterState::basis(net.n(), net.ell(), b);
  c.run(s);
  return {s.edge_vector(), c.gate_count(), net.ell()};
}

PrepOutput prepare_theta(const SwitchingNet& net, int j, bool with_boundary) {
  PrepCircuit c = theta_circuit(net.n(), net.ell(), j, with_boundary);
  RegisterState s(net.n(), net.ell());
  s.amplitudes()[0] = 1.0;
  c.run(s);
  return {s.state_vector(), c.gate_count(), net.ell()};
}

double residual_up_to_scale(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw InvalidParams("vector sizes differ");
  double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 2.0;
  return (a / na - b / nb).norm();
}

std::vector<PrepReport> verify_preparers(int n, int ell) {
  SwitchingNet net = SwitchingNet::build(n, ell, 0);
  std::vector<PrepReport> out;
  auto record = [](PrepReport& r, const PrepOutput& got, const Eigen::VectorXd& ref) {
    r.max_residual = std::max(r.max_residual, residual_up_to_scale(got.vector, ref));
    r.gate_count = std::max(r.gate_count, got.gate_count);
    ++r.cases;
  };
  std::vector<FlowFn> theta(n);
  for (int j = 0; j < n; ++j) theta[j] = theta_bar(n, ell, j);

  PrepReport sof{"sum_of_flows"};
  FlowFn sum = FlowFn::Zero(net.edge_count());
  for (const auto& t : theta) sum += t;
  record(sof, prepare_sum_of_flows(net), sum);
  out.push_back(sof);

  PrepReport four{"fourier_C"};
  for (int x = 0; x < n; ++x) {
    FlowFn ref = FlowFn::Zero(net.edge_count());
    for (int j = 0; j < n; ++j) ref += (parity(x & j) ? -1.0 : 1.0) * theta[j];
    record(four, fourier_flows_C(net, x), ref);
  }
  out.push_back(four);

  if (ell >= 1) {
    PrepReport psi{"psi"};
    for (int z = 1; z < n; ++z)
      for (int x = 0; x < n; ++x) record(psi, prepare_psi(net, z, x), psi_state(net, z, x));
    out.push_back(psi);
  }

  for (bool boundary : {false, true}) {
    PrepReport th{boundary ? "theta_boundary" : "theta"};
    for (int j = 0; j < n; ++j)
      record(th, prepare_theta(net, j, boundary), theta_state(net, j, boundary));
    out.push_back(th);
  }
  return out;
}

}  // namespace qdstcon
