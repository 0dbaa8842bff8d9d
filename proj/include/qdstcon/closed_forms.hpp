#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "qdstcon/switching_net.hpp"

namespace qdstcon {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// |E_tau| for a layer tau in {0,1,2}^ell.
BigInt layer_size(int n, const std::vector<int>& tau);
// Sum over tau of 1/|E_tau|.
Rational sum_inverse_layers(int n, int ell);
// ||sum_j theta-bar_j(2^ell)||^2.
Rational N_zero(int n, int ell);
// ||sum_j (-1)^{x.j} theta-bar_j(2^ell)||^2 for x != 0.
Rational N_x(int n, int ell);
Rational N_x_recurrence(int n, int ell);
// The published expression n^{l+1} + n^3/((n-2)(n+1)) (n^l - (n+2)^l/n^l), with its
// own recurrence at n = 2. Kept for comparison; it is not the norm above.
Rational N_x_published(int n, int ell);
// ||theta-bar_j(2^ell)||^2.
Rational F_j(int n, int ell);
Rational F_j_recurrence(int n, int ell);
// Prefix sum S(p) of squared amplitudes of the layer superposition; p has
// length k <= ell over {0,1,2}.
Rational prefix_sum_S(int n, int ell, const std::vector<int>& p);

double to_double(const Rational& r);

// Inner products <theta-bar_i|theta-bar_j> split as c0 (i != j) and c1 (i == j),
// computed numerically from the vectors.
struct InnerConstants {
  double c0 = 0;
  double c1 = 0;
  double spread = 0;  // largest deviation from constancy
};
InnerConstants inner_constants(int n, int ell);

}  // namespace qdstcon
