#pragma once

#include <array>
#include <string>
#include <vector>

#include "bohm/common.hpp"
#include "bohm/grid.hpp"

namespace bohm {

/// Generators 0..p-1 square to +1, generators p..p+q-1 square to -1.
struct CliffordSignature {
  int p = 3;
  int q = 0;

  int dimension() const { return p + q; }
  unsigned blade_count() const { return 1u << dimension(); }
  double metric(int generator) const { return generator < p ? 1.0 : -1.0; }
  void validate() const;
  bool operator==(const CliffordSignature&) const = default;

  static CliffordSignature schrodinger() { return {0, 1}; }
  static CliffordSignature pauli() { return {3, 0}; }
  static CliffordSignature dirac() { return {1, 3}; }
};

/// Basis blades are bitmasks over generators, canonically ordered by
/// increasing generator index: 0b101 is e_0 e_2 (written e1e3 in 1-based
/// notation).
using Blade = unsigned;

int blade_grade(Blade b);
std::string blade_name(Blade b);

/// Sign and result blade of the product of two basis blades.
struct BladeProduct {
  double sign;
  Blade blade;
};
BladeProduct blade_product(Blade a, Blade b, const CliffordSignature& sig);

/// Element of Cl(p, q) with complex coefficients (at most 16 blades).
class Multivector {
 public:
  static constexpr unsigned kMaxBlades = 16;

  Multivector() = default;
  explicit Multivector(const CliffordSignature& sig);
  static Multivector scalar(const CliffordSignature& sig, cplx value);
  static Multivector generator(const CliffordSignature& sig, int index);  // 0-based
  static Multivector blade(const CliffordSignature& sig, Blade b, cplx coef = 1.0);

  const CliffordSignature& signature() const { return sig_; }
  cplx& operator[](Blade b) { return c_[b]; }
  const cplx& operator[](Blade b) const { return c_[b]; }

  Multivector& operator+=(const Multivector& o);
  Multivector& operator-=(const Multivector& o);
  Multivector& operator*=(cplx s);
  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, cplx s) { return a *= s; }
  friend Multivector operator*(cplx s, Multivector a) { return a *= s; }
  /// Geometric product.
  friend Multivector operator*(const Multivector& a, const Multivector& b);

  Multivector grade(int g) const;
  double max_abs() const;

 private:
  CliffordSignature sig_;
  std::array<cplx, kMaxBlades> c_{};
};

Multivector geometric_product(const Multivector& a, const Multivector& b);

/// Reverses generator order in every blade: sign (-1)^{g(g-1)/2} on grade g.
Multivector reversion(const Multivector& a);

/// Reversion, negation of every negative-square generator, and complex
/// conjugation of the coefficients. Under the usual matrix representations
/// this is the Hermitian adjoint. For Cl(p, 0) with real coefficients it
/// coincides with reversion.
Multivector adjoint(const Multivector& a);

/// Grade-0 coefficient.
cplx scalar_part(const Multivector& a);

/// Normalized trace under the standard irreducible representation:
///   Cl(3,0) (Pauli): c_0 + i c_123, equal to trace/2;
///   Cl(0,1) (complex numbers): c_0 + i c_e;
///   otherwise the grade-0 part.
/// For Cl(3,0) the grade-0 part alone equals Re(trace)/2 on real elements.
cplx trace_form(const Multivector& a);

/// max |rho*rho - rho| over blade coefficients.
double purity_check(const Multivector& rho);

/// Multivector-valued field stored blade by blade (structure of arrays),
/// with real coefficients. The Schrodinger and Pauli embeddings only need
/// real coefficients: in Cl(3,0) the unit pseudoscalar plays the role of i.
struct MultivectorField {
  CliffordSignature sig;
  Grid1D grid;
  std::vector<std::vector<double>> coef;  // coef[blade][j]

  MultivectorField() = default;
  MultivectorField(const CliffordSignature& s, const Grid1D& g);

  std::size_t size() const { return grid.n; }
  Multivector at(std::size_t j) const;
  void set(std::size_t j, const Multivector& m);  // drops imaginary parts
};

MultivectorField product(const MultivectorField& a, const MultivectorField& b);
MultivectorField adjoint(const MultivectorField& a);
MultivectorField operator+(const MultivectorField& a, const MultivectorField& b);
MultivectorField operator-(const MultivectorField& a, const MultivectorField& b);
MultivectorField scaled(const MultivectorField& a, double s);
/// Blade-wise spatial derivative (spectral).
MultivectorField differentiate(const MultivectorField& a, int order);

}  // namespace bohm
