#include "bohm/grid.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "bohm/fft.hpp"

namespace bohm {

std::vector<double> Grid1D::points() const {
  std::vector<double> xs(n);
  for (std::size_t j = 0; j < n; ++j) xs[j] = x(j);
  return xs;
}

double Grid1D::wavenumber(std::size_t j) const {
  return 2.0 * pi * static_cast<double>(fft::frequency_index(j, n)) / length();
}

std::size_t Grid1D::nearest_index(double xv) const {
  const auto ln = static_cast<long>(n);
  long j = std::lround((xv - x_min) / dx) % ln;
  if (j < 0) j += ln;
  return static_cast<std::size_t>(j);
}

Grid1D build_grid(double x_min, double x_max, std::size_t n) {
  if (!(x_max > x_min)) throw ConfigError("grid: x_max must exceed x_min");
  if (!std::isfinite(x_min) || !std::isfinite(x_max)) throw ConfigError("grid: bounds must be finite");
  if (n < 8 || !std::has_single_bit(n)) {
    throw ConfigError("grid: n must be a power of two >= 8 (got " + std::to_string(n) + ")");
  }
  return Grid1D{x_min, x_max, n, (x_max - x_min) / static_cast<double>(n)};
}

RField sample(const Grid1D& grid, const std::function<double(double)>& f) {
  RField out(grid);
  for (std::size_t j = 0; j < grid.n; ++j) out[j] = f(grid.x(j));
  return out;
}

CField sample_complex(const Grid1D& grid, const std::function<cplx(double)>& f) {
  CField out(grid);
  for (std::size_t j = 0; j < grid.n; ++j) out[j] = f(grid.x(j));
  return out;
}

RField abs_squared(const CField& f) {
  RField out(f.grid);
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = std::norm(f[j]);
  return out;
}

RField real_part(const CField& f) {
  RField out(f.grid);
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j].real();
  return out;
}

RField imag_part(const CField& f) {
  RField out(f.grid);
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j].imag();
  return out;
}

CField to_complex(const RField& f) {
  CField out(f.grid);
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j];
  return out;
}

Grid1D momentum_grid(const Grid1D& xgrid, double hbar) {
  const double dp = 2.0 * pi * hbar / xgrid.length();
  const double half = static_cast<double>(xgrid.n / 2);
  return Grid1D{-half * dp, half * dp, xgrid.n, dp};
}

PhaseSpaceGrid make_phase_space_grid(const Grid1D& xgrid, double hbar) {
  return PhaseSpaceGrid{xgrid, momentum_grid(xgrid, hbar), hbar};
}

namespace {

void spectral_derivative_inplace(std::vector<cplx>& v, const Grid1D& grid, int order) {
  fft::forward(v);
  const std::size_t n = grid.n;
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = grid.wavenumber(j);
    cplx factor = order == 1 ? cplx(0.0, k) : cplx(-k * k, 0.0);
    // The Nyquist mode has no well-defined odd derivative on a real grid.
    if (order == 1 && j == n / 2) factor = 0.0;
    v[j] *= factor * scale;
  }
  fft::inverse(v);
}

template <class T>
std::vector<T> central4(const std::vector<T>& f, double dx, int order) {
  const std::size_t n = f.size();
  std::vector<T> out(n);
  auto at = [&](std::size_t j, int off) {
    return f[(j + n + static_cast<std::size_t>(off + 2) - 2) % n];
  };
  if (order == 1) {
    const double c = 1.0 / (12.0 * dx);
    for (std::size_t j = 0; j < n; ++j)
      out[j] = (-at(j, 2) + 8.0 * at(j, 1) - 8.0 * at(j, -1) + at(j, -2)) * c;
  } else {
    const double c = 1.0 / (12.0 * dx * dx);
    for (std::size_t j = 0; j < n; ++j)
      out[j] = (-at(j, 2) + 16.0 * at(j, 1) - 30.0 * at(j, 0) + 16.0 * at(j, -1) - at(j, -2)) * c;
  }
  return out;
}

void check_order(int order) {
  if (order != 1 && order != 2) throw ConfigError("differentiate: order must be 1 or 2");
}

}  // namespace

CField differentiate(const CField& f, int order, DiffScheme scheme) {
  check_order(order);
  if (scheme == DiffScheme::central4) return CField(f.grid, central4(f.values, f.grid.dx, order));
  std::vector<cplx> v = f.values;
  spectral_derivative_inplace(v, f.grid, order);
  return CField(f.grid, std::move(v));
}

RField differentiate(const RField& f, int order, DiffScheme scheme) {
  check_order(order);
  if (scheme == DiffScheme::central4) return RField(f.grid, central4(f.values, f.grid.dx, order));
  std::vector<cplx> v(f.values.begin(), f.values.end());
  spectral_derivative_inplace(v, f.grid, order);
  RField out(f.grid);
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = v[j].real();
  return out;
}

double integrate(const RField& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * f.grid.dx;
}

cplx integrate(const CField& f) {
  cplx s = 0.0;
  for (const cplx& v : f.values) s += v;
  return s * f.grid.dx;
}

double norm_squared(const CField& psi) { return integrate(abs_squared(psi)); }

CField normalized(const CField& psi) {
  const double nrm = norm_squared(psi);
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NumericError("normalize: state has zero norm");
  CField out = psi;
  const double s = 1.0 / std::sqrt(nrm);
  for (auto& v : out.values) v *= s;
  return out;
}

CField to_momentum_rep(const CField& psi, double hbar) {
  const Grid1D& g = psi.grid;
  const std::size_t n = g.n;
  std::vector<cplx> v = psi.values;
  fft::forward(v);
  // Sum over x_m = x_min + m dx picks up exp(-i k x_min) relative to the DFT.
  const double pref = g.dx / std::sqrt(2.0 * pi * hbar);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = g.wavenumber(j);
    v[j] *= pref * std::polar(1.0, -k * g.x_min);
  }
  fft::shift(v);
  return CField(momentum_grid(g, hbar), std::move(v));
}

CField from_momentum_rep(const CField& phi, const Grid1D& xgrid, double hbar) {
  if (phi.grid.n != xgrid.n) throw ConfigError("from_momentum_rep: grid size mismatch");
  const std::size_t n = xgrid.n;
  std::vector<cplx> v = phi.values;
  fft::unshift(v);
  const double pref = std::sqrt(2.0 * pi * hbar) / (xgrid.dx * static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const double k = xgrid.wavenumber(j);
    v[j] *= pref * std::polar(1.0, k * xgrid.x_min);
  }
  fft::inverse(v);
  return CField(xgrid, std::move(v));
}

double boundary_leakage(const CField& psi) {
  double peak = 0.0;
  for (const auto& v : psi.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  const double edge = std::max(std::abs(psi.values.front()), std::abs(psi.values.back()));
  return edge / peak;
}

std::vector<cplx> upsample(std::span<const cplx> values, std::size_t factor) {
  // Done in long double: the interpolated tail of a localized state is
  // otherwise buried under roundoff of order eps * max|psi|, which the
  // Wigner moments later divide by a tiny density.
  using lcplx = std::complex<long double>;
  const std::size_t n = values.size();
  const std::size_t m = n * factor;
  std::vector<lcplx> spec(values.begin(), values.end());
  fft::forward(spec);
  std::vector<lcplx> fine(m, lcplx{});
  for (std::size_t j = 0; j < n; ++j) {
    const long f = fft::frequency_index(j, n);
    if (j == n / 2) {
      // Split the Nyquist bin symmetrically so real inputs stay real.
      fine[n / 2] += 0.5L * spec[j];
      fine[m - n / 2] += 0.5L * spec[j];
      continue;
    }
    const std::size_t dst = f >= 0 ? static_cast<std::size_t>(f) : m - static_cast<std::size_t>(-f);
    fine[dst] = spec[j];
  }
  fft::inverse(fine);
  const long double scale = 1.0L / static_cast<long double>(n);
  std::vector<cplx> out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = cplx(fine[k] * scale);
  // The interpolant passes through the original samples.
  for (std::size_t j = 0; j < n; ++j) out[j * factor] = values[j];
  return out;
}

}  // namespace bohm
