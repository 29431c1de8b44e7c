#pragma once

#include <optional>
#include <vector>

#include "bohm/grid.hpp"
#include "bohm/polynomial.hpp"

namespace bohm {

/// Row-major n_x by n_p array over a PhaseSpaceGrid: index ix * n_p + ip.
/// Momentum rows are in ascending order (pgrid.x(ip)).
template <class T>
struct PhaseArray {
  PhaseSpaceGrid psgrid;
  std::vector<T> values;

  PhaseArray() = default;
  explicit PhaseArray(const PhaseSpaceGrid& g) : psgrid(g), values(g.xgrid.n * g.pgrid.n) {}

  std::size_t nx() const { return psgrid.xgrid.n; }
  std::size_t np() const { return psgrid.pgrid.n; }
  bool empty() const { return values.empty(); }
  T& at(std::size_t ix, std::size_t ip) { return values[ix * np() + ip]; }
  const T& at(std::size_t ix, std::size_t ip) const { return values[ix * np() + ip]; }
  double x(std::size_t ix) const { return psgrid.xgrid.x(ix); }
  double p(std::size_t ip) const { return psgrid.pgrid.x(ip); }
};

/// Real quasi-distribution F(x, p). Negative values are kept as computed.
struct WignerField : PhaseArray<double> {
  using PhaseArray<double>::PhaseArray;
  double hbar() const { return psgrid.hbar; }

  RField position_marginal() const;  // integral over p
  RField momentum_marginal() const;  // integral over x, on pgrid
  double total() const;
  double min() const;
  double max() const;
};

/// Complex phase-space symbol A(x, p), optionally carrying an exact
/// polynomial descriptor. A symbol without samples is purely algebraic.
struct PhaseSymbol : PhaseArray<cplx> {
  using PhaseArray<cplx>::PhaseArray;

  std::optional<PhasePolynomial> poly;
  bool truncated = false;  // a series product stopped before the series ended

  bool sampled() const { return !values.empty(); }

  static PhaseSymbol polynomial(const PhasePolynomial& poly);
  /// Samples the polynomial on the grid and keeps it as the descriptor.
  static PhaseSymbol polynomial(const PhasePolynomial& poly, const PhaseSpaceGrid& g);
  template <class Fn>
  static PhaseSymbol sample(const PhaseSpaceGrid& g, Fn&& fn) {
    PhaseSymbol s(g);
    for (std::size_t i = 0; i < s.nx(); ++i)
      for (std::size_t l = 0; l < s.np(); ++l) s.at(i, l) = fn(s.x(i), s.p(l));
    return s;
  }
  static PhaseSymbol from_wigner(const WignerField& F);

  /// Largest |A - descriptor| over the samples; 0 without either part.
  double descriptor_mismatch() const;
};

/// Independent x and p grids for symbols that are not tied to a state;
/// the Wigner transform always uses make_phase_space_grid instead.
PhaseSpaceGrid symbol_grid(const Grid1D& xgrid, const Grid1D& pgrid, double hbar);

}  // namespace bohm
