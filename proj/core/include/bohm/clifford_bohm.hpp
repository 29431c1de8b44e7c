#pragma once

#include <optional>

#include "bohm/clifford.hpp"
#include "bohm/polar.hpp"
#include "bohm/schrodinger.hpp"

namespace bohm {

/// Psi_L together with the idempotent generating its left ideal.
struct IdealElement {
  MultivectorField psi;
  Multivector epsilon;
  Mask mask;  // samples where the embedded state is a node

  /// max |Psi_L epsilon - Psi_L| over the field.
  double membership_error() const;
};

/// rho_psi = Psi_L Psi_L^dagger, with the signature-aware adjoint.
struct CliffordDensity {
  MultivectorField rho;
  Multivector epsilon;
};

CliffordDensity density_element(const IdealElement& psi);

/// max |rho^2 - rho| over unmasked samples. With `local_normalize`, each
/// sample is first rescaled so that its scalar part matches that of epsilon,
/// which is how a field-valued pure state is compared with an idempotent.
double purity_check(const CliffordDensity& rho, const Mask& mask, bool local_normalize = true);

/// epsilon = (1 + e3)/2 in Cl(3,0).
Multivector pauli_idempotent();

/// Cl(0,1) embedding Psi_L = R (cos(S/hbar) + e sin(S/hbar)); epsilon = 1.
IdealElement schrodinger_embed(const PolarField& pf);
IdealElement schrodinger_embed(const CField& psi);
PolarField schrodinger_unembed(const IdealElement& el, double hbar);

struct AlgebraicResiduals {
  double liouville_max = 0.0;
  double qhj_max = 0.0;
};

struct AlgebraicResidualFields {
  RField liouville;
  RField qhj;
  Mask mask;
};

/// Evaluates e hbar d(rho)/dt = (H Psi) Psi^+ - Psi (H Psi)^+ (e-blade) and
/// the anticommutator counterpart (scalar blade, divided by 2 rho) on the
/// Cl(0,1) embedding of the snapshot at t and its neighbours.
AlgebraicResidualFields algebraic_residual_fields(const EvolutionRecord& record, double t);
AlgebraicResiduals algebraic_evolution_residuals(const EvolutionRecord& record, double t);

/// Two-component Pauli spinor on a shared grid.
struct PauliSpinorField {
  CField psi1;
  CField psi2;

  RField rho() const;
  double norm_squared() const;
  const Grid1D& grid() const { return psi1.grid; }
};

PauliSpinorField make_pauli_spinor(CField psi1, CField psi2, bool normalize = true);

/// Real Cl(3,0) embedding of the matrix [[psi1, 0], [psi2, 0]] with the
/// unit pseudoscalar acting as i; epsilon = (1 + e3)/2.
IdealElement pauli_embed(const PauliSpinorField& s);
PauliSpinorField pauli_unembed(const IdealElement& el);

/// psi1 = sqrt(rho) cos(theta/2) exp(i(phi + psi_e)/2),
/// psi2 = i sqrt(rho) sin(theta/2) exp(i(psi_e - phi)/2).
struct EulerAngleField {
  RField theta;
  RField phi;
  RField psi_e;
  RField rho;
  Mask pole_mask;  // sin(theta) < 1e-8: phi and psi_e are individually ambiguous
};

EulerAngleField euler_from_spinor(const PauliSpinorField& s);
PauliSpinorField spinor_from_euler(const EulerAngleField& e);

/// Neighbouring time slices t - dt and t + dt.
template <class T>
struct SlicePair {
  T prev;
  T next;
  double dt = 0.0;
};

struct PauliComponentsResult {
  MaskedField P_bilinear;  // hbar sum_i Im(conj(psi_i) psi_i') / rho, via Clifford products
  MaskedField P_weighted;  // sum_i rho_i dS_i/dx / rho
  std::optional<MaskedField> E_B;
};

PauliComponentsResult pauli_bohm_components(const PauliSpinorField& s, double hbar,
                                            const std::optional<SlicePair<PauliSpinorField>>& slices = {});

struct PauliEulerResult {
  MaskedField P_B;  // hbar (d psi_e/dx + cos(theta) d phi/dx)/2
  std::optional<MaskedField> E_B;
  Mask pole_mask;
};

PauliEulerResult pauli_bohm_euler(const EulerAngleField& e, double hbar,
                                  const std::optional<SlicePair<EulerAngleField>>& slices = {});

/// Spin-traced Wigner function of the Clifford two-point density, then its
/// first momentum moment divided by rho.
MaskedField clifford_wigner_cev(const PauliSpinorField& s, double hbar);

/// Field-free Pauli evolution: both components follow the scalar
/// Schrodinger equation with the same potential.
struct PauliEvolutionRecord {
  EvolutionRecord up;
  EvolutionRecord down;

  std::size_t size() const { return up.snapshots.size(); }
  PauliSpinorField spinor(std::size_t k) const;
  SlicePair<PauliSpinorField> slices(std::size_t k) const;
  double time(std::size_t k) const { return up.snapshots[k].t; }
};

PauliEvolutionRecord pauli_evolve(const PauliSpinorField& s0, const Potential& potential,
                                  const EvolutionOptions& options, const Units& units = {});

/// Continuity residual of the total density from the two components.
double pauli_continuity_max(const PauliEvolutionRecord& rec, std::size_t k);
/// Trace (pseudoscalar) part of the Cl(3,0) Liouville residual, scaled to
/// the total density.
double pauli_liouville_max(const PauliEvolutionRecord& rec, std::size_t k);
/// Largest locally normalized purity defect over all snapshots.
double pauli_purity_max(const PauliEvolutionRecord& rec);

}  // namespace bohm
