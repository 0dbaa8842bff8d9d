#include "qdstcon/closed_forms.hpp"

#include <algorithm>
#include <cmath>

#include "qdstcon/errors.hpp"
#include "qdstcon/flow_algebra.hpp"

namespace qdstcon {

namespace {

BigInt pow_int(int base, int e) {
  BigInt r = 1;
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

Rational ratio(const BigInt& a, const BigInt& b) { return Rational(a, b); }

void check(int n, int ell) {
  if (n < 2 || !is_power_of_two(static_cast<std::uint64_t>(n)))
    throw InvalidParams("n must be a power of two >= 2");
  if (ell < 0) throw InvalidParams("ell must be >= 0");
}

}  // namespace

BigInt layer_size(int n, const std::vector<int>& tau) {
  int zeros = static_cast<int>(std::count(tau.begin(), tau.end(), 0));
  return pow_int(n, 1 + static_cast<int>(tau.size()) - zeros);
}

Rational sum_inverse_layers(int n, int ell) {
  check(n, ell);
  return ratio(pow_int(n + 2, ell), pow_int(n, ell + 1));
}

Rational N_zero(int n, int ell) { return n * n * sum_inverse_layers(n, ell); }

Rational N_x(int n, int ell) {
  check(n, ell);
  return ratio(n * (pow_int(n + 2, ell) + n), pow_int(n, ell) * (n + 1));
}

Rational N_x_recurrence(int n, int ell) {
  check(n, ell);
  Rational nx = n;
  for (int k = 1; k <= ell; ++k) nx = (nx + N_zero(n, k - 1)) / n;
  return nx;
}

Rational N_x_published(int n, int ell) {
  check(n, ell);
  if (n == 2) {
    Rational nx = n;
    for (int k = 1; k <= ell; ++k) nx = n * nx + n * N_zero(n, k - 1);
    return nx;
  }
  Rational tail = Rational(pow_int(n, ell)) - ratio(pow_int(n + 2, ell), pow_int(n, ell));
  return Rational(pow_int(n, ell + 1)) + ratio(pow_int(n, 3), BigInt((n - 2) * (n + 1))) * tail;
}

Rational F_j(int n, int ell) {
  check(n, ell);
  return ratio(2 * pow_int(n + 2, ell) + n - 1, pow_int(n, ell) * (n + 1));
}

Rational F_j_recurrence(int n, int ell) {
  check(n, ell);
  Rational f = 1;
  for (int k = 1; k <= ell; ++k) f = (2 * N_zero(n, k - 1) + n * f) / (n * n);
  return f;
}

Rational prefix_sum_S(int n, int ell, const std::vector<int>& p) {
  check(n, ell);
  int k = static_cast<int>(p.size());
  if (k > ell) throw InvalidParams("prefix longer than ell");
  int zeros = static_cast<int>(std::count(p.begin(), p.end(), 0));
  return ratio(pow_int(n + 2, ell - k), pow_int(n, ell + 1 - zeros));
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

InnerConstants inner_constants(int n, int ell) {
  std::vector<FlowFn> T;
  for (int j = 0; j < n; ++j) T.push_back(theta_bar(n, ell, j));
  InnerConstants c;
  c.c1 = T[0].squaredNorm();
  c.c0 = T[n > 1 ? 1 : 0].dot(T[0]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double want = i == j ? c.c1 : c.c0;
      c.spread = std::max(c.spread, std::abs(T[i].dot(T[j]) - want));
    }
  return c;
}

}  // namespace qdstcon
