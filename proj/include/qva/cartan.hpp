#pragma once

#include <numeric>
#include <vector>

#include "qva/rational.hpp"

namespace qva {

// Symmetrizable generalized Cartan matrix together with its symmetrizing
// integers r_i (relatively prime, positive) and the global scale parameter r.
struct CartanDatum {
  int n = 0;
  std::vector<std::vector<long>> A;
  std::vector<long> ri;
  long r = 1;

  long a(int i, int j) const { return A[i][j]; }
  // r_i a_ij = r_j a_ji, the symmetric pairing entry
  long b(int i, int j) const { return ri[i] * A[i][j]; }
  long n_off(int i, int j) const { return i == j ? 0 : 1; }      // n_ij = 1 - delta_ij
  long m_serre(int i, int j) const { return 1 - A[i][j]; }       // m_ij = 1 - a_ij
};

// Validates the GCM axioms, solves D*A symmetric for D = diag(r_i) with the
// r_i positive and relatively prime.
inline CartanDatum make_cartan(const std::vector<std::vector<long>>& A, long r = 1) {
  CartanDatum d;
  d.n = (int)A.size();
  d.A = A;
  d.r = r;
  if (r <= 0) throw std::domain_error("make_cartan: r must be positive");
  for (auto& row : A)
    if ((int)row.size() != d.n)
      throw std::domain_error("make_cartan: matrix not square");
  for (int i = 0; i < d.n; ++i) {
    if (A[i][i] != 2) throw std::domain_error("make_cartan: diagonal must be 2");
    for (int j = 0; j < d.n; ++j) {
      if (i != j && A[i][j] > 0)
        throw std::domain_error("make_cartan: positive off-diagonal entry");
      if ((A[i][j] == 0) != (A[j][i] == 0))
        throw std::domain_error("make_cartan: zero pattern not symmetric");
    }
  }
  // propagate ratios across the Dynkin graph, one component at a time
  std::vector<Rat> dvec(d.n, Rat(0));
  for (int start = 0; start < d.n; ++start) {
    if (dvec[start] != 0) continue;
    dvec[start] = 1;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < d.n; ++j) {
        if (i == j || A[i][j] == 0) continue;
        Rat need = dvec[i] * A[i][j] / A[j][i];
        if (dvec[j] == 0) {
          dvec[j] = need;
          stack.push_back(j);
        } else if (dvec[j] != need) {
          throw std::domain_error("make_cartan: matrix not symmetrizable");
        }
      }
    }
  }
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j)
      if (dvec[i] * A[i][j] != dvec[j] * A[j][i])
        throw std::domain_error("make_cartan: matrix not symmetrizable");
  // clear denominators and divide by the gcd
  Int lcm_den = 1;
  for (auto& v : dvec) lcm_den = boost::multiprecision::lcm(lcm_den, Int(denominator(v)));
  std::vector<Int> ints(d.n);
  Int g = 0;
  for (int i = 0; i < d.n; ++i) {
    ints[i] = Int(numerator(dvec[i])) * (lcm_den / Int(denominator(dvec[i])));
    g = boost::multiprecision::gcd(g, ints[i]);
  }
  d.ri.resize(d.n);
  for (int i = 0; i < d.n; ++i) d.ri[i] = (long)(ints[i] / g);
  return d;
}

inline CartanDatum cartan_A1() { return make_cartan({{2}}); }
inline CartanDatum cartan_A2() { return make_cartan({{2, -1}, {-1, 2}}); }
// rank-2 matrix with the (1,2) symmetrizer
inline CartanDatum cartan_B2() { return make_cartan({{2, -2}, {-1, 2}}); }

}  // namespace qva
