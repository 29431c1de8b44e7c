#include "bohm/clifford_bohm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bohm/fft.hpp"

namespace bohm {
namespace {

// Blade bitmasks for Cl(3,0).
constexpr Blade kE1 = 1, kE2 = 2, kE3 = 4, kE12 = 3, kE13 = 5, kE23 = 6, kE123 = 7;
// The single generator of Cl(0,1).
constexpr Blade kE = 1;

Mask node_mask_of(const RField& rho) {
  double peak = 0.0;
  for (double v : rho.values) peak = std::max(peak, v);
  Mask m(rho.size(), 0);
  for (std::size_t j = 0; j < rho.size(); ++j) m[j] = rho[j] < kNodeThreshold * peak ? 1 : 0;
  return m;
}

MultivectorField apply_hamiltonian(const MultivectorField& psi, const RField& V, const Units& u) {
  MultivectorField out = scaled(differentiate(psi, 2), -u.hbar * u.hbar / (2.0 * u.mass));
  for (auto b = 0u; b < psi.sig.blade_count(); ++b)
    for (std::size_t j = 0; j < psi.size(); ++j) out.coef[b][j] += V[j] * psi.coef[b][j];
  return out;
}

MultivectorField times_blade(const MultivectorField& a, Blade b) {
  MultivectorField unit(a.sig, a.grid);
  std::fill(unit.coef[b].begin(), unit.coef[b].end(), 1.0);
  return product(unit, a);
}

// Phase gradient Im(psi'/psi) of a band-limited component. The Euler angles
// themselves are not periodic on the cell (chirps, off-grid momenta), so they
// cannot be differentiated spectrally; the components they parametrize can.
RField phase_gradient(const CField& psi) {
  const CField d = differentiate(psi, 1);
  RField g(psi.grid);
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double r2 = std::norm(psi[j]);
    g[j] = r2 > 0.0 ? (std::conj(psi[j]) * d[j]).imag() / r2 : 0.0;
  }
  return g;
}

}  // namespace

double IdealElement::membership_error() const {
  double mx = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const Multivector m = psi.at(j);
    mx = std::max(mx, (m * epsilon - m).max_abs());
  }
  return mx;
}

CliffordDensity density_element(const IdealElement& psi) {
  bool any = false;
  for (const auto& c : psi.psi.coef)
    any = any || std::any_of(c.begin(), c.end(), [](double v) { return v != 0.0; });
  if (!any) throw NumericError("density_element: zero ideal element");
  return {product(psi.psi, adjoint(psi.psi)), psi.epsilon};
}

double purity_check(const CliffordDensity& rho, const Mask& mask, bool local_normalize) {
  const double eps_scalar = scalar_part(rho.epsilon).real();
  double mx = 0.0;
  for (std::size_t j = 0; j < rho.rho.size(); ++j) {
    if (!mask.empty() && mask[j]) continue;
    Multivector r = rho.rho.at(j);
    if (local_normalize) {
      const double s = scalar_part(r).real();
      if (!(s > 0.0)) continue;
      r *= eps_scalar / s;
    }
    mx = std::max(mx, purity_check(r));
  }
  return mx;
}

Multivector pauli_idempotent() {
  const auto sig = CliffordSignature::pauli();
  return (Multivector::scalar(sig, 1.0) + Multivector::generator(sig, 2)) * cplx(0.5);
}

IdealElement schrodinger_embed(const PolarField& pf) {
  const auto sig = CliffordSignature::schrodinger();
  IdealElement el{MultivectorField(sig, pf.R.grid), Multivector::scalar(sig, 1.0), pf.node_mask};
  for (std::size_t j = 0; j < pf.R.size(); ++j) {
    const double a = pf.S[j] / pf.hbar;
    el.psi.coef[0][j] = pf.R[j] * std::cos(a);
    el.psi.coef[kE][j] = pf.R[j] * std::sin(a);
  }
  return el;
}

IdealElement schrodinger_embed(const CField& psi) {
  const auto sig = CliffordSignature::schrodinger();
  IdealElement el{MultivectorField(sig, psi.grid), Multivector::scalar(sig, 1.0), node_mask_of(abs_squared(psi))};
  for (std::size_t j = 0; j < psi.size(); ++j) {
    el.psi.coef[0][j] = psi[j].real();
    el.psi.coef[kE][j] = psi[j].imag();
  }
  return el;
}

PolarField schrodinger_unembed(const IdealElement& el, double hbar) {
  if (!(el.psi.sig == CliffordSignature::schrodinger())) throw ConfigError("schrodinger_unembed: not a Cl(0,1) field");
  CField psi(el.psi.grid);
  for (std::size_t j = 0; j < psi.size(); ++j) psi[j] = cplx(el.psi.coef[0][j], el.psi.coef[kE][j]);
  return polar_decompose(psi, hbar);
}

AlgebraicResidualFields algebraic_residual_fields(const EvolutionRecord& record, double t) {
  const Snapshot& snap = record.at(t);
  if (snap.prev.size() != snap.psi.size() || snap.next.size() != snap.psi.size())
    throw NumericError("algebraic residuals: snapshot is missing its fine-step neighbours");
  const Units& u = record.units;
  const double dt = record.dt;
  const IdealElement psi = schrodinger_embed(snap.psi);
  const IdealElement prev = schrodinger_embed(snap.prev);
  const IdealElement next = schrodinger_embed(snap.next);

  const MultivectorField Hpsi = apply_hamiltonian(psi.psi, record.potential, u);
  const MultivectorField a = product(Hpsi, adjoint(psi.psi));
  const MultivectorField b = product(psi.psi, adjoint(Hpsi));
  const MultivectorField rho = density_element(psi).rho;
  const MultivectorField drho =
      scaled(density_element(next).rho - density_element(prev).rho, u.hbar / (2.0 * dt));
  const MultivectorField liouville = times_blade(drho, kE) - (a - b);
  const MultivectorField anti = a + b;
  const MultivectorField turn = product(next.psi, adjoint(prev.psi));

  const Grid1D& g = snap.psi.grid;
  AlgebraicResidualFields out{RField(g), RField(g), mask_union(psi.mask, mask_union(prev.mask, next.mask))};
  for (std::size_t j = 0; j < g.n; ++j) {
    out.liouville[j] = liouville.coef[kE][j] / u.hbar;
    const double dS_dt = u.hbar * std::atan2(turn.coef[kE][j], turn.coef[0][j]) / (2.0 * dt);
    const double q = dS_dt + anti.coef[0][j] / (2.0 * rho.coef[0][j]);
    out.qhj[j] = std::isfinite(q) ? q : 0.0;
  }
  return out;
}

AlgebraicResiduals algebraic_evolution_residuals(const EvolutionRecord& record, double t) {
  const AlgebraicResidualFields f = algebraic_residual_fields(record, t);
  AlgebraicResiduals r;
  for (std::size_t j = 0; j < f.mask.size(); ++j) {
    if (f.mask[j]) continue;
    r.liouville_max = std::max(r.liouville_max, std::abs(f.liouville[j]));
    r.qhj_max = std::max(r.qhj_max, std::abs(f.qhj[j]));
  }
  return r;
}

RField PauliSpinorField::rho() const {
  RField r(psi1.grid);
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = std::norm(psi1[j]) + std::norm(psi2[j]);
  return r;
}

double PauliSpinorField::norm_squared() const { return integrate(rho()); }

PauliSpinorField make_pauli_spinor(CField psi1, CField psi2, bool normalize) {
  if (!(psi1.grid == psi2.grid)) throw ConfigError("pauli spinor: component grids differ");
  PauliSpinorField s{std::move(psi1), std::move(psi2)};
  if (normalize) {
    const double n2 = s.norm_squared();
    if (!(n2 > 0.0)) throw NumericError("pauli spinor: zero norm");
    const double k = 1.0 / std::sqrt(n2);
    for (auto& v : s.psi1.values) v *= k;
    for (auto& v : s.psi2.values) v *= k;
  }
  return s;
}

IdealElement pauli_embed(const PauliSpinorField& s) {
  const auto sig = CliffordSignature::pauli();
  IdealElement el{MultivectorField(sig, s.grid()), pauli_idempotent(), node_mask_of(s.rho())};
  auto& c = el.psi.coef;
  for (std::size_t j = 0; j < s.grid().n; ++j) {
    const double r1 = 0.5 * s.psi1[j].real(), i1 = 0.5 * s.psi1[j].imag();
    const double r2 = 0.5 * s.psi2[j].real(), i2 = 0.5 * s.psi2[j].imag();
    c[0][j] = r1;
    c[kE3][j] = r1;
    c[kE12][j] = i1;
    c[kE123][j] = i1;
    c[kE1][j] = r2;
    c[kE13][j] = r2;
    c[kE2][j] = i2;
    c[kE23][j] = i2;
  }
  return el;
}

PauliSpinorField pauli_unembed(const IdealElement& el) {
  if (!(el.psi.sig == CliffordSignature::pauli())) throw ConfigError("pauli_unembed: not a Cl(3,0) field");
  const auto& c = el.psi.coef;
  PauliSpinorField s{CField(el.psi.grid), CField(el.psi.grid)};
  for (std::size_t j = 0; j < el.psi.size(); ++j) {
    s.psi1[j] = cplx(c[0][j] + c[kE3][j], c[kE12][j] + c[kE123][j]);
    s.psi2[j] = cplx(c[kE1][j] + c[kE13][j], c[kE2][j] + c[kE23][j]);
  }
  return s;
}

EulerAngleField euler_from_spinor(const PauliSpinorField& s) {
  const Grid1D& g = s.grid();
  EulerAngleField e{RField(g), RField(g), RField(g), s.rho(), Mask(g.n, 0)};
  for (std::size_t j = 0; j < g.n; ++j) {
    const double a1 = std::arg(s.psi1[j]);
    const double a2 = std::arg(s.psi2[j]);
    e.theta[j] = 2.0 * std::atan2(std::abs(s.psi2[j]), std::abs(s.psi1[j]));
    // Left unwrapped on purpose: (phi + psi_e)/2 must return arg(psi1)
    // exactly, or the reconstruction picks up a global sign.
    e.phi[j] = a1 - a2 + 0.5 * pi;
    e.psi_e[j] = a1 + a2 - 0.5 * pi;
    e.pole_mask[j] = std::sin(e.theta[j]) < 1e-8 ? 1 : 0;
  }
  return e;
}

PauliSpinorField spinor_from_euler(const EulerAngleField& e) {
  const Grid1D& g = e.theta.grid;
  PauliSpinorField s{CField(g), CField(g)};
  for (std::size_t j = 0; j < g.n; ++j) {
    const double r = std::sqrt(e.rho[j]);
    s.psi1[j] = std::polar(r * std::cos(0.5 * e.theta[j]), 0.5 * (e.phi[j] + e.psi_e[j]));
    s.psi2[j] = cplx(0.0, 1.0) * std::polar(r * std::sin(0.5 * e.theta[j]), 0.5 * (e.psi_e[j] - e.phi[j]));
  }
  return s;
}

PauliComponentsResult pauli_bohm_components(const PauliSpinorField& s, double hbar,
                                            const std::optional<SlicePair<PauliSpinorField>>& slices) {
  const Grid1D& g = s.grid();
  const RField rho = s.rho();
  const Mask mask = node_mask_of(rho);

  // Bilinear form: 2 rho P = -i hbar [(d psi) psi^* - psi (d psi)^*] traced,
  // written with Clifford products on the ideal element.
  // One spectral derivative per component feeds both forms; the embedding is
  // linear, so embedding the derivatives is differentiating the element.
  const CField d1 = differentiate(s.psi1, 1), d2 = differentiate(s.psi2, 1);
  const IdealElement el = pauli_embed(s);
  const MultivectorField d = pauli_embed(PauliSpinorField{d1, d2}).psi;
  const MultivectorField J = product(d, adjoint(el.psi)) - product(el.psi, adjoint(d));
  const MultivectorField R = product(el.psi, adjoint(el.psi));
  MaskedField bil{RField(g), mask};
  for (std::size_t j = 0; j < g.n; ++j) {
    if (mask[j]) continue;
    const cplx tj = trace_form(J.at(j));
    const double rj = 2.0 * trace_form(R.at(j)).real();  // rho
    bil.field[j] = (cplx(0.0, -hbar) * 2.0 * tj).real() / (2.0 * rj);
  }

  // Weighted mean over components: rho_i grad S_i = hbar Im(psi_i^* d psi_i).
  // A component below its own node threshold can still carry a share of the
  // total density, so its raw phase gradient is kept; an identically zero
  // component contributes nothing.
  MaskedField wm{RField(g), mask};
  for (std::size_t j = 0; j < g.n; ++j) {
    if (mask[j]) continue;
    double acc = 0.0;
    if (s.psi1[j] != 0.0) acc += std::norm(s.psi1[j]) * (hbar * (d1[j] / s.psi1[j]).imag());
    if (s.psi2[j] != 0.0) acc += std::norm(s.psi2[j]) * (hbar * (d2[j] / s.psi2[j]).imag());
    wm.field[j] = acc / rho[j];
  }

  PauliComponentsResult out{std::move(bil), std::move(wm), std::nullopt};
  if (slices) {
    const auto& [prev, next, dt] = *slices;
    MaskedField e{RField(g), mask};
    for (std::size_t j = 0; j < g.n; ++j) {
      if (mask[j]) continue;
      const double dS1 = hbar * std::arg(next.psi1[j] * std::conj(prev.psi1[j])) / (2.0 * dt);
      const double dS2 = hbar * std::arg(next.psi2[j] * std::conj(prev.psi2[j])) / (2.0 * dt);
      e.field[j] = -(dS1 * std::norm(s.psi1[j]) + dS2 * std::norm(s.psi2[j])) / rho[j];
    }
    out.E_B = std::move(e);
  }
  return out;
}

PauliEulerResult pauli_bohm_euler(const EulerAngleField& e, double hbar,
                                  const std::optional<SlicePair<EulerAngleField>>& slices) {
  const Grid1D& g = e.theta.grid;
  const Mask mask = node_mask_of(e.rho);
  // phi = a1 - a2 + pi/2 and psi_e = a1 + a2 - pi/2 with a_i = arg(psi_i).
  const PauliSpinorField s = spinor_from_euler(e);
  const RField da1 = phase_gradient(s.psi1);
  const RField da2 = phase_gradient(s.psi2);
  RField dpsi(g), dphi(g);
  for (std::size_t j = 0; j < g.n; ++j) {
    dpsi[j] = da1[j] + da2[j];
    dphi[j] = da1[j] - da2[j];
  }
  PauliEulerResult out{MaskedField{RField(g), mask}, std::nullopt, e.pole_mask};
  for (std::size_t j = 0; j < g.n; ++j) {
    if (mask[j]) continue;
    out.P_B.field[j] = 0.5 * hbar * (dpsi[j] + std::cos(e.theta[j]) * dphi[j]);
  }
  if (slices) {
    const auto& [prev, next, dt] = *slices;
    MaskedField eb{RField(g), mask};
    for (std::size_t j = 0; j < g.n; ++j) {
      if (mask[j]) continue;
      const double dpsi_t = wrap_angle(next.psi_e[j] - prev.psi_e[j]) / (2.0 * dt);
      const double dphi_t = wrap_angle(next.phi[j] - prev.phi[j]) / (2.0 * dt);
      eb.field[j] = -0.5 * hbar * (dpsi_t + std::cos(e.theta[j]) * dphi_t);
    }
    out.E_B = std::move(eb);
  }
  return out;
}

MaskedField clifford_wigner_cev(const PauliSpinorField& s, double hbar) {
  const Grid1D& g = s.grid();
  const std::size_t n = g.n, n2 = 2 * n;
  // Band-limited half-step samples of the ideal element.
  const Grid1D fine_grid{g.x_min, g.x_max, n2, 0.5 * g.dx};
  const PauliSpinorField fine{CField(fine_grid, upsample(s.psi1.values, 2)), CField(fine_grid, upsample(s.psi2.values, 2))};
  const IdealElement el = pauli_embed(fine);
  std::vector<Multivector> phi(n2), phi_adj(n2);
  for (std::size_t j = 0; j < n2; ++j) {
    phi[j] = el.psi.at(j);
    phi_adj[j] = adjoint(phi[j]);
  }
  auto at = [n2](std::size_t c, long off) {
    return static_cast<std::size_t>((static_cast<long>(c) + off + static_cast<long>(n2)) % static_cast<long>(n2));
  };
  // Spin-traced two-point function: 2 tr-form[Phi(X + y/2) Phi^+(X - y/2)].
  auto two_point = [&](std::size_t c, long m) { return 2.0 * trace_form(phi[at(c, m)] * phi_adj[at(c, -m)]); };

  // Long double rows and sums, as for the scalar transform.
  using lcplx = std::complex<long double>;
  const long double dp = 2.0L * std::numbers::pi_v<long double> * hbar / g.length();
  const long double pref = g.dx / (2.0L * std::numbers::pi_v<long double> * hbar);
  const long half = static_cast<long>(n / 2);
  std::vector<long double> first(n), zeroth(n);
  std::vector<lcplx> row(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (long m = -half + 1; m < half; ++m)
      row[static_cast<std::size_t>((m + static_cast<long>(n)) % static_cast<long>(n))] = lcplx(two_point(2 * j, m));
    row[n / 2] = 0.5L * (lcplx(two_point(2 * j, half)) + lcplx(two_point(2 * j, -half)));
    fft::forward(row);
    long double s0 = 0.0L, s1 = 0.0L;
    for (std::size_t l = 0; l < n; ++l) {
      const long double F = pref * row[(l + n / 2) % n].real();
      const long double p = (static_cast<long double>(l) - static_cast<long double>(half)) * dp;
      s0 += F * dp;
      s1 += p * F * dp;
    }
    zeroth[j] = s0;
    first[j] = s1;
  }
  const Mask mask = node_mask_of(s.rho());
  MaskedField out{RField(g), mask};
  for (std::size_t j = 0; j < n; ++j)
    if (!mask[j]) out.field[j] = static_cast<double>(first[j] / zeroth[j]);
  return out;
}

PauliSpinorField PauliEvolutionRecord::spinor(std::size_t k) const {
  return {up.snapshots.at(k).psi, down.snapshots.at(k).psi};
}

SlicePair<PauliSpinorField> PauliEvolutionRecord::slices(std::size_t k) const {
  const Snapshot& a = up.snapshots.at(k);
  const Snapshot& b = down.snapshots.at(k);
  return {{a.prev, b.prev}, {a.next, b.next}, up.dt};
}

PauliEvolutionRecord pauli_evolve(const PauliSpinorField& s0, const Potential& potential,
                                  const EvolutionOptions& options, const Units& units) {
  return {split_step_evolve(s0.psi1, potential, options, units), split_step_evolve(s0.psi2, potential, options, units)};
}

double pauli_continuity_max(const PauliEvolutionRecord& rec, std::size_t k) {
  const SlicePair<PauliSpinorField> sl = rec.slices(k);
  const PauliSpinorField s = rec.spinor(k);
  const Units& u = rec.up.units;
  const double dt = rec.up.dt;
  const RField rho = s.rho(), rp = sl.prev.rho(), rn = sl.next.rho();
  const RField j1 = probability_current(s.psi1, u);
  const RField j2 = probability_current(s.psi2, u);
  RField jt(j1.grid);
  for (std::size_t j = 0; j < jt.size(); ++j) jt[j] = j1[j] + j2[j];
  const RField div = differentiate(jt, 1);
  const Mask mask = mask_union(node_mask_of(rho), mask_union(node_mask_of(rp), node_mask_of(rn)));
  double mx = 0.0;
  for (std::size_t j = 0; j < rho.size(); ++j)
    if (!mask[j]) mx = std::max(mx, std::abs((rn[j] - rp[j]) / (2.0 * dt) + div[j]));
  return mx;
}

double pauli_liouville_max(const PauliEvolutionRecord& rec, std::size_t k) {
  const SlicePair<PauliSpinorField> sl = rec.slices(k);
  const Units& u = rec.up.units;
  const double dt = rec.up.dt;
  const IdealElement psi = pauli_embed(rec.spinor(k));
  const IdealElement prev = pauli_embed(sl.prev);
  const IdealElement next = pauli_embed(sl.next);
  const MultivectorField Hpsi = apply_hamiltonian(psi.psi, rec.up.potential, u);
  const MultivectorField comm = product(Hpsi, adjoint(psi.psi)) - product(psi.psi, adjoint(Hpsi));
  const MultivectorField drho =
      scaled(density_element(next).rho - density_element(prev).rho, u.hbar / (2.0 * dt));
  const MultivectorField res = times_blade(drho, kE123) - comm;
  const Mask mask = mask_union(psi.mask, mask_union(prev.mask, next.mask));
  double mx = 0.0;
  // The pseudoscalar blade carries the trace; trace/2 = scalar + i pseudoscalar.
  for (std::size_t j = 0; j < res.size(); ++j)
    if (!mask[j]) mx = std::max(mx, std::abs(2.0 * res.coef[kE123][j] / u.hbar));
  return mx;
}

double pauli_purity_max(const PauliEvolutionRecord& rec) {
  double mx = 0.0;
  for (std::size_t k = 0; k < rec.size(); ++k) {
    const IdealElement el = pauli_embed(rec.spinor(k));
    mx = std::max(mx, purity_check(density_element(el), el.mask, true));
  }
  return mx;
}

}  // namespace bohm
