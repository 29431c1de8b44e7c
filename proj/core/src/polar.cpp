#include "bohm/polar.hpp"

#include <algorithm>
#include <cmath>

namespace bohm {

Mask mask_union(const Mask& a, const Mask& b) {
  if (a.size() != b.size()) throw ConfigError("mask_union: size mismatch");
  Mask out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = static_cast<std::uint8_t>(a[j] | b[j]);
  return out;
}

std::size_t masked_count(const Mask& m) { return static_cast<std::size_t>(std::count(m.begin(), m.end(), 1)); }

double MaskedField::max_abs_off_mask() const {
  double mx = 0.0;
  for (std::size_t j = 0; j < field.size(); ++j)
    if (!mask[j]) mx = std::max(mx, std::abs(field[j]));
  return mx;
}

double max_abs_difference(const MaskedField& a, const MaskedField& b) {
  if (a.field.size() != b.field.size()) throw ConfigError("max_abs_difference: size mismatch");
  double mx = 0.0;
  for (std::size_t j = 0; j < a.field.size(); ++j)
    if (!a.mask[j] && !b.mask[j]) mx = std::max(mx, std::abs(a.field[j] - b.field[j]));
  return mx;
}

double wrap_angle(double a) { return a - 2.0 * pi * std::round(a / (2.0 * pi)); }

PolarField polar_decompose(const CField& psi, double hbar) {
  const std::size_t n = psi.size();
  PolarField pf{RField(psi.grid), RField(psi.grid), Mask(n, 0), hbar, {}};
  double rho_max = 0.0;
  std::size_t anchor = 0;
  for (std::size_t j = 0; j < n; ++j) {
    pf.R[j] = std::abs(psi[j]);
    const double rho = pf.R[j] * pf.R[j];
    if (rho > rho_max) {
      rho_max = rho;
      anchor = j;
    }
  }
  if (!(rho_max > 0.0)) throw NumericError("polar_decompose: wavefunction vanishes everywhere");
  for (std::size_t j = 0; j < n; ++j)
    pf.node_mask[j] = pf.R[j] * pf.R[j] < kNodeThreshold * rho_max ? 1 : 0;

  std::vector<double> phase(n);
  phase[anchor] = std::arg(psi[anchor]);
  auto sweep = [&](long step) {
    double ref = phase[anchor];
    for (long j = static_cast<long>(anchor) + step; j >= 0 && j < static_cast<long>(n); j += step) {
      const auto u = static_cast<std::size_t>(j);
      phase[u] = ref + wrap_angle(std::arg(psi[u]) - ref);
      if (!pf.node_mask[u]) ref = phase[u];
    }
  };
  sweep(+1);
  sweep(-1);
  for (std::size_t j = 0; j < n; ++j) pf.S[j] = hbar * phase[j];
  pf.samples = psi.values;
  return pf;
}

CField reconstruct(const PolarField& pf) {
  CField psi(pf.R.grid);
  for (std::size_t j = 0; j < psi.size(); ++j) psi[j] = std::polar(pf.R[j], pf.S[j] / pf.hbar);
  return psi;
}

namespace {

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

// Im(conj(psi) psi') / |psi|^2, i.e. the phase gradient in radians per length.
RField log_derivative_imag(const CField& psi, const CField& dpsi) {
  RField out(psi.grid);
  for (std::size_t j = 0; j < psi.size(); ++j)
    out[j] = finite_or_zero((std::conj(psi[j]) * dpsi[j]).imag() / std::norm(psi[j]));
  return out;
}

CField source(const PolarField& pf) {
  return pf.samples.size() == pf.R.size() ? CField(pf.R.grid, pf.samples) : reconstruct(pf);
}

}  // namespace

MaskedField quantum_potential(const PolarField& pf, const Units& units) {
  const CField psi = source(pf);
  const CField d1 = differentiate(psi, 1);
  const CField d2 = differentiate(psi, 2);
  MaskedField q{RField(psi.grid), pf.node_mask};
  const double c = -units.hbar * units.hbar / (2.0 * units.mass);
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double rho = std::norm(psi[j]);
    const double re2 = (std::conj(psi[j]) * d2[j]).real() / rho;
    const double im1 = (std::conj(psi[j]) * d1[j]).imag() / rho;
    q.field[j] = finite_or_zero(c * (re2 + im1 * im1));
  }
  return q;
}

MaskedField bohm_momentum(const PolarField& pf) {
  const CField psi = source(pf);
  const CField d1 = differentiate(psi, 1);
  MaskedField p{log_derivative_imag(psi, d1), pf.node_mask};
  for (auto& v : p.field.values) v *= pf.hbar;
  return p;
}

MaskedField bohm_energy(const PolarField& at_t, const PolarField& at_t_plus_dt, double dt) {
  if (!(at_t.S.grid == at_t_plus_dt.S.grid)) throw ConfigError("bohm_energy: inconsistent grids");
  if (!(dt != 0.0)) throw ConfigError("bohm_energy: dt must be nonzero");
  MaskedField e{RField(at_t.S.grid), mask_union(at_t.node_mask, at_t_plus_dt.node_mask)};
  const double hbar = at_t.hbar;
  for (std::size_t j = 0; j < e.field.size(); ++j) {
    const double dS = hbar * wrap_angle((at_t_plus_dt.S[j] - at_t.S[j]) / hbar);
    e.field[j] = -dS / dt;
  }
  return e;
}

RField probability_current(const CField& psi, const Units& units) {
  const CField d1 = differentiate(psi, 1);
  RField j(psi.grid);
  for (std::size_t i = 0; i < psi.size(); ++i)
    j[i] = units.hbar / units.mass * (std::conj(psi[i]) * d1[i]).imag();
  return j;
}

BohmFieldSet bohm_fields(const CField& psi, const Units& units) {
  const PolarField pf = polar_decompose(psi, units.hbar);
  BohmFieldSet set{abs_squared(psi), quantum_potential(pf, units), bohm_momentum(pf), std::nullopt,
                   pf.node_mask};
  return set;
}

BohmFieldSet bohm_fields(const CField& psi, const CField& psi_next, double dt, const Units& units) {
  BohmFieldSet set = bohm_fields(psi, units);
  const PolarField next = polar_decompose(psi_next, units.hbar);
  set.E_B = bohm_energy(polar_decompose(psi, units.hbar), next, dt);
  set.mask = mask_union(set.mask, next.node_mask);
  return set;
}

ResidualFields residual_fields(const EvolutionRecord& record, double t) {
  const Snapshot& snap = record.at(t);
  if (snap.prev.size() != snap.psi.size() || snap.next.size() != snap.psi.size())
    throw NumericError("residuals: snapshot is missing its fine-step neighbours");
  const Units& u = record.units;
  const double dt = record.dt;
  const Grid1D& g = snap.psi.grid;
  const std::size_t n = g.n;

  const PolarField pf = polar_decompose(snap.psi, u.hbar);
  const PolarField pf_prev = polar_decompose(snap.prev, u.hbar);
  const PolarField pf_next = polar_decompose(snap.next, u.hbar);
  Mask mask = mask_union(pf.node_mask, mask_union(pf_prev.node_mask, pf_next.node_mask));

  const RField current = probability_current(snap.psi, u);
  const RField div_current = differentiate(current, 1);
  const MaskedField Q = quantum_potential(pf, u);

  // Hamilton-Jacobi path: raw complex phase increments and gradient.
  const CField d1 = differentiate(snap.psi, 1);
  // Energy path: polar-field E_B and P_B.
  const MaskedField E_B = bohm_energy(pf_prev, pf_next, 2.0 * dt);
  const MaskedField P_B = bohm_momentum(pf);

  ResidualFields out{RField(g), RField(g), RField(g), std::move(mask)};
  for (std::size_t j = 0; j < n; ++j) {
    const double rho_t = (std::norm(snap.next[j]) - std::norm(snap.prev[j])) / (2.0 * dt);
    out.continuity[j] = rho_t + div_current[j];

    const double dS_dt = u.hbar * std::arg(snap.next[j] * std::conj(snap.prev[j])) / (2.0 * dt);
    const double grad_S = u.hbar * (std::conj(snap.psi[j]) * d1[j]).imag() / std::norm(snap.psi[j]);
    const double V = record.potential[j];
    out.qhj[j] = finite_or_zero(dS_dt + grad_S * grad_S / (2.0 * u.mass) + Q.field[j] + V);

    const double p = P_B.field[j];
    out.energy[j] = finite_or_zero(E_B.field[j] - (p * p / (2.0 * u.mass) + Q.field[j] + V));
  }
  return out;
}

ResidualReport residuals(const EvolutionRecord& record, double t) {
  const ResidualFields f = residual_fields(record, t);
  ResidualReport r;
  for (std::size_t j = 0; j < f.mask.size(); ++j) {
    if (f.mask[j]) continue;
    r.continuity_max = std::max(r.continuity_max, std::abs(f.continuity[j]));
    r.qhj_max = std::max(r.qhj_max, std::abs(f.qhj[j]));
    r.energy_conservation_max = std::max(r.energy_conservation_max, std::abs(f.energy[j]));
  }
  return r;
}

}  // namespace bohm
