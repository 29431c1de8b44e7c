#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "bohm/common.hpp"

namespace bohm {

/// Uniform periodic 1-D grid. Samples sit at x_j = x_min + j*dx for
/// j = 0..n-1; x_max itself is excluded (it aliases x_min).
struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n = 8;
  double dx = 0.125;

  double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx; }
  double length() const { return x_max - x_min; }
  std::vector<double> points() const;

  // Angular wavenumber of FFT bin j (unshifted order).
  double wavenumber(std::size_t j) const;

  // Nearest sample index to position x, wrapped periodically.
  std::size_t nearest_index(double x) const;

  bool operator==(const Grid1D&) const = default;
};

/// Validates bounds and size. n must be a power of two and at least 8.
Grid1D build_grid(double x_min, double x_max, std::size_t n);

/// Samples of a scalar quantity on a Grid1D. Real and complex fields are
/// distinct types; the "kind" of the field is its value type.
template <class T>
struct Field {
  Grid1D grid;
  std::vector<T> values;

  Field() = default;
  explicit Field(const Grid1D& g) : grid(g), values(g.n) {}
  Field(const Grid1D& g, std::vector<T> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.n) throw ConfigError("field size does not match grid.n");
  }

  std::size_t size() const { return values.size(); }
  T& operator[](std::size_t j) { return values[j]; }
  const T& operator[](std::size_t j) const { return values[j]; }

  bool all_finite() const;
};

using CField = Field<cplx>;
using RField = Field<double>;

template <class T>
bool Field<T>::all_finite() const {
  for (const auto& v : values) {
    if constexpr (std::is_same_v<T, cplx>) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    } else {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

RField sample(const Grid1D& grid, const std::function<double(double)>& f);
CField sample_complex(const Grid1D& grid, const std::function<cplx(double)>& f);

RField abs_squared(const CField& f);
RField real_part(const CField& f);
RField imag_part(const CField& f);
CField to_complex(const RField& f);

/// Momentum-space companion of a position grid: p_j = hbar*k_j, stored in
/// ascending (shifted) order so pgrid.x(j) is the momentum of sample j.
struct PhaseSpaceGrid {
  Grid1D xgrid;
  Grid1D pgrid;
  double hbar = 1.0;

  bool operator==(const PhaseSpaceGrid&) const = default;
};

Grid1D momentum_grid(const Grid1D& xgrid, double hbar);
PhaseSpaceGrid make_phase_space_grid(const Grid1D& xgrid, double hbar);

enum class DiffScheme { spectral, central4 };

RField differentiate(const RField& f, int order, DiffScheme scheme = DiffScheme::spectral);
CField differentiate(const CField& f, int order, DiffScheme scheme = DiffScheme::spectral);

/// Periodic rectangle rule: sum_j f_j dx.
double integrate(const RField& f);
cplx integrate(const CField& f);

double norm_squared(const CField& psi);
CField normalized(const CField& psi);

/// phi(p) = (2 pi hbar)^{-1/2} * integral psi(x) exp(-i p x/hbar) dx,
/// evaluated on momentum_grid(psi.grid, hbar). Unitary: Parseval holds.
CField to_momentum_rep(const CField& psi, double hbar);

/// Inverse of to_momentum_rep; xgrid is the grid psi originally lived on.
CField from_momentum_rep(const CField& phi, const Grid1D& xgrid, double hbar);

/// |psi| at the two boundary samples relative to max|psi|. Scenarios keep
/// this below ~1e-8 so the periodic wrap stays invisible.
double boundary_leakage(const CField& psi);

/// Band-limited (trigonometric) interpolation onto a grid with factor-times
/// finer spacing over the same periodic domain.
std::vector<cplx> upsample(std::span<const cplx> values, std::size_t factor);

}  // namespace bohm
