#include "bohm/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bohm/fft.hpp"

namespace bohm {

RField WignerField::position_marginal() const {
  RField out(psgrid.xgrid);
  const double dp = psgrid.pgrid.dx;
  for (std::size_t i = 0; i < nx(); ++i) {
    double s = 0.0;
    for (std::size_t l = 0; l < np(); ++l) s += at(i, l);
    out[i] = s * dp;
  }
  return out;
}

RField WignerField::momentum_marginal() const {
  RField out(psgrid.pgrid);
  const double dx = psgrid.xgrid.dx;
  for (std::size_t i = 0; i < nx(); ++i)
    for (std::size_t l = 0; l < np(); ++l) out[l] += at(i, l);
  for (auto& v : out.values) v *= dx;
  return out;
}

double WignerField::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * psgrid.xgrid.dx * psgrid.pgrid.dx;
}

double WignerField::min() const { return *std::min_element(values.begin(), values.end()); }
double WignerField::max() const { return *std::max_element(values.begin(), values.end()); }

PhaseSymbol PhaseSymbol::polynomial(const PhasePolynomial& poly) {
  PhaseSymbol s;
  s.poly = poly;
  return s;
}

PhaseSymbol PhaseSymbol::polynomial(const PhasePolynomial& poly, const PhaseSpaceGrid& g) {
  PhaseSymbol s = sample(g, [&](double x, double p) { return poly(x, p); });
  s.poly = poly;
  return s;
}

PhaseSymbol PhaseSymbol::from_wigner(const WignerField& F) {
  PhaseSymbol s(F.psgrid);
  std::copy(F.values.begin(), F.values.end(), s.values.begin());
  return s;
}

double PhaseSymbol::descriptor_mismatch() const {
  if (!poly || !sampled()) return 0.0;
  double mx = 0.0;
  for (std::size_t i = 0; i < nx(); ++i)
    for (std::size_t l = 0; l < np(); ++l) mx = std::max(mx, std::abs(at(i, l) - (*poly)(x(i), p(l))));
  return mx;
}

PhaseSpaceGrid symbol_grid(const Grid1D& xgrid, const Grid1D& pgrid, double hbar) {
  if (!(hbar > 0.0)) throw ConfigError("symbol_grid: hbar must be positive");
  return PhaseSpaceGrid{xgrid, pgrid, hbar};
}

PhaseSymbol cross_wigner(const CField& f, const CField& g, double hbar) {
  if (!(f.grid == g.grid)) throw ConfigError("cross_wigner: grids differ");
  if (!(hbar > 0.0)) throw ConfigError("cross_wigner: hbar must be positive");
  const Grid1D& grid = f.grid;
  const std::size_t n = grid.n;
  const std::size_t n2 = 2 * n;
  const std::vector<cplx> ff = upsample(f.values, 2);
  const std::vector<cplx> gf = upsample(g.values, 2);
  auto fine = [n2](std::size_t centre, long off) {
    return static_cast<std::size_t>((static_cast<long>(centre) + off + static_cast<long>(n2)) % static_cast<long>(n2));
  };

  PhaseSymbol out(make_phase_space_grid(grid, hbar));
  const long double pref = grid.dx / (2.0L * std::numbers::pi_v<long double> * hbar);
  const long half = static_cast<long>(n / 2);
  // Rows are transformed in long double: column moments (fixed p) divide by
  // the momentum density, which can be far below the row scale rho(x).
  using lcplx = std::complex<long double>;
  auto prod = [&](std::size_t a, std::size_t b) { return std::conj(lcplx(ff[a])) * lcplx(gf[b]); };
  std::vector<lcplx> row(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t c = 2 * j;
    for (long m = -half + 1; m < half; ++m) {
      const std::size_t slot = static_cast<std::size_t>((m + static_cast<long>(n)) % static_cast<long>(n));
      row[slot] = prod(fine(c, -m), fine(c, m));
    }
    // m = -n/2 and m = +n/2 alias onto the same bin; average them.
    row[n / 2] = 0.5L * (prod(fine(c, half), fine(c, -half)) + prod(fine(c, -half), fine(c, half)));
    fft::forward(row);
    for (std::size_t l = 0; l < n; ++l) out.at(j, l) = cplx(pref * row[(l + n / 2) % n]);
  }
  return out;
}

WignerField wigner_transform(const CField& psi, double hbar) {
  const PhaseSymbol w = cross_wigner(psi, psi, hbar);
  WignerField F(w.psgrid);
  for (std::size_t k = 0; k < w.values.size(); ++k) F.values[k] = w.values[k].real();
  return F;
}

}  // namespace bohm
