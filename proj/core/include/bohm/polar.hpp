#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bohm/grid.hpp"
#include "bohm/schrodinger.hpp"

namespace bohm {

/// Per-sample flag: 1 where the density is below the node threshold and
/// phase-derived quantities are undefined.
using Mask = std::vector<std::uint8_t>;

Mask mask_union(const Mask& a, const Mask& b);
std::size_t masked_count(const Mask& m);

/// Field with explicit node flags. Masked entries keep their raw value
/// when finite (0 otherwise); consumers must consult `mask`.
struct MaskedField {
  RField field;
  Mask mask;

  double max_abs_off_mask() const;
};

/// Largest |a - b| over samples unmasked in both.
double max_abs_difference(const MaskedField& a, const MaskedField& b);

/// psi = R exp(iS/hbar).
struct PolarField {
  RField R;
  RField S;
  Mask node_mask;
  double hbar = 1.0;
  // The decomposed samples, when known. Derivatives of psi taken from these
  // avoid the rounding of S (|S| grows with x), which a spectral derivative
  // spreads into the tails. Empty means rebuild from R and S.
  std::vector<cplx> samples;
};

/// Relative node threshold on rho = R^2.
inline constexpr double kNodeThreshold = 1e-12;

/// Wrap an angle to [-pi, pi].
double wrap_angle(double a);

/// R = |psi|; S = hbar * unwrap(arg psi), unwrapped outward from the density
/// maximum. Each sample is unwrapped against the last unmasked sample, so
/// crossing a masked interval re-anchors the phase.
PolarField polar_decompose(const CField& psi, double hbar = 1.0);

CField reconstruct(const PolarField& pf);

/// Q = -hbar^2 (d2R/dx2) / (2 m R). Evaluated through the smooth identity
/// R''/R = Re(psi''/psi) + (Im(psi'/psi))^2 so that nodes of R (kinks in
/// |psi|) do not pollute the spectral derivative.
MaskedField quantum_potential(const PolarField& pf, const Units& units);

/// P_B = dS/dx = hbar Im(conj(psi) psi') / rho, psi taken from pf.samples or rebuilt from (R, S).
MaskedField bohm_momentum(const PolarField& pf);

/// E_B = -(S(t+dt) - S(t))/dt. The difference is taken modulo 2 pi hbar so
/// independent unwrapping anchors cannot introduce jumps.
MaskedField bohm_energy(const PolarField& at_t, const PolarField& at_t_plus_dt, double dt);

/// Probability current j = (hbar/m) Im(conj(psi) psi') = rho dS/dx / m.
RField probability_current(const CField& psi, const Units& units);

struct BohmFieldSet {
  RField rho;
  MaskedField Q;
  MaskedField P_B;
  std::optional<MaskedField> E_B;
  Mask mask;
};

BohmFieldSet bohm_fields(const CField& psi, const Units& units);
BohmFieldSet bohm_fields(const CField& psi, const CField& psi_next, double dt, const Units& units);

struct ResidualReport {
  double continuity_max = 0.0;
  double qhj_max = 0.0;
  double energy_conservation_max = 0.0;
};

/// Residual fields at a recorded snapshot, time derivatives from the
/// centered pair (t - dt, t + dt).
struct ResidualFields {
  RField continuity;
  RField qhj;
  RField energy;
  Mask mask;
};

ResidualFields residual_fields(const EvolutionRecord& record, double t);
ResidualReport residuals(const EvolutionRecord& record, double t);

}  // namespace bohm
