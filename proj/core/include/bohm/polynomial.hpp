#pragma once

#include <map>
#include <string>
#include <utility>

#include "bohm/common.hpp"

namespace bohm {

/// Finite sum of c_ab x^a p^b with complex coefficients. Used as the exact
/// descriptor of polynomial phase-space symbols.
class PhasePolynomial {
 public:
  using Exponents = std::pair<int, int>;  // (power of x, power of p)

  PhasePolynomial() = default;
  static PhasePolynomial constant(cplx c);
  static PhasePolynomial monomial(int a, int b, cplx c = 1.0);
  static PhasePolynomial x() { return monomial(1, 0); }
  static PhasePolynomial p() { return monomial(0, 1); }

  const std::map<Exponents, cplx>& terms() const { return terms_; }
  cplx coefficient(int a, int b) const;
  void add_term(int a, int b, cplx c);

  int degree_x() const;
  int degree_p() const;
  int total_degree() const;
  bool is_zero() const { return terms_.empty(); }

  cplx operator()(double x, double p) const;

  /// d^i/dx^i d^j/dp^j, exact.
  PhasePolynomial derivative(int i, int j) const;
  PhasePolynomial conj() const;

  PhasePolynomial& operator+=(const PhasePolynomial& o);
  PhasePolynomial& operator-=(const PhasePolynomial& o);
  PhasePolynomial& operator*=(cplx s);
  friend PhasePolynomial operator+(PhasePolynomial a, const PhasePolynomial& b) { return a += b; }
  friend PhasePolynomial operator-(PhasePolynomial a, const PhasePolynomial& b) { return a -= b; }
  friend PhasePolynomial operator*(PhasePolynomial a, cplx s) { return a *= s; }
  friend PhasePolynomial operator*(cplx s, PhasePolynomial a) { return a *= s; }
  /// Commutative pointwise product.
  friend PhasePolynomial operator*(const PhasePolynomial& a, const PhasePolynomial& b);

  /// Largest coefficient magnitude of a - b.
  friend double max_coefficient_difference(const PhasePolynomial& a, const PhasePolynomial& b);

  std::string to_string() const;

 private:
  void prune();
  std::map<Exponents, cplx> terms_;
};

}  // namespace bohm
