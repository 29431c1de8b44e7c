#pragma once

#include <span>
#include <vector>

#include "bohm/phase_space.hpp"
#include "bohm/polar.hpp"
#include "bohm/polynomial.hpp"
#include "bohm/schrodinger.hpp"
#include "bohm/wigner.hpp"

namespace bohm {

enum class StarBackend { series, spectral };
enum class BracketKind { moyal, baker, poisson };

struct BracketConfig {
  double hbar = 1.0;
  int series_order = 16;  // highest total derivative order kept in the series
  StarBackend backend = StarBackend::series;

  void validate() const;
};

/// a * b = a exp[(i hbar/2)(<-d_x ->d_p - <-d_p ->d_x)] b.
///
/// series: sums the bidifferential expansion up to series_order. Polynomial
///   descriptors are differentiated exactly (so polynomial pairs give exact
///   results once the series terminates); sampled symbols use 2-D spectral
///   derivatives. The output is flagged `truncated` when terms were dropped.
/// spectral: exact twisted convolution of sampled symbols, written in the
///   mixed (x-Fourier, p) form as a sum over Bopp-shifted profiles:
///     (a*b)^(K, p) = sum_{k1+k2=K} a^(k1, p + hbar k2/2) b^(k2, p - hbar k1/2).
///   Symbols must be smooth and decay towards the edges of both periods.
PhaseSymbol star_product(const PhaseSymbol& a, const PhaseSymbol& b, const BracketConfig& cfg);

/// moyal: (a*b - b*a)/(i hbar); baker: (a*b + b*a)/2; poisson from first
/// derivatives directly.
PhaseSymbol bracket(const PhaseSymbol& a, const PhaseSymbol& b, BracketKind kind, const BracketConfig& cfg);

const char* to_string(BracketKind kind);

struct ClassicalLimitRow {
  double hbar = 0.0;
  double moyal_deviation = 0.0;  // max |{a,b}_MB - {a,b}_PB|
  double baker_deviation = 0.0;  // max |{a,b}_BB - a b|
};

struct ClassicalLimitReport {
  std::vector<ClassicalLimitRow> rows;
  double moyal_exponent = 0.0;  // NaN when a deviation vanishes
  double baker_exponent = 0.0;
};

/// Deviations are maxima over a (2*samples+1)^2 lattice on [-box, box]^2.
ClassicalLimitReport classical_limit_report(const PhasePolynomial& a, const PhasePolynomial& b,
                                            std::span<const double> hbar_values, double box = 1.0,
                                            int samples = 10);

/// Least-squares slope of log(y) against log(x).
double fit_power_law_exponent(std::span<const double> x, std::span<const double> y);

/// p-bar(x) = integral p F dp / rho(x), masked where rho is negligible.
MaskedField cev_momentum(const WignerField& F);

/// X-bar(p) = -dS_p/dp from the polar form of the momentum-space wavefunction
/// (phi sampled on the momentum grid).
MaskedField cev_position(const CField& phi, double hbar);

/// X-bar(p) = integral x F dx / integral F dx from the Wigner field.
MaskedField cev_position(const WignerField& F);

struct WeakValueField {
  CField value;
  Mask mask;
};

/// -i hbar psi'/psi. Real part is the Bohm momentum, imaginary part the
/// osmotic term -hbar R'/R.
WeakValueField weak_value_momentum(const CField& psi, double hbar);

/// Real 2x2 affine map z -> M z + d of phase-space points.
struct AffineFlow {
  double m[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
  double d[2] = {0.0, 0.0};
};

/// Exact Hamiltonian flow over time t for a real polynomial of degree <= 2.
AffineFlow quadratic_flow(const PhasePolynomial& H, double t);

/// One step of dF/dt = -{F, H}_MB.
/// Quadratic polynomial H: the exact classical flow, applied as three
/// spectral shears plus a translation. Otherwise: RK4 on the bracket under a
/// CFL-style guard.
WignerField moyal_liouville_step(const WignerField& F, const PhaseSymbol& H, double dt, const BracketConfig& cfg);

/// Energy symbol from a snapshot and its fine-step neighbours,
/// (hbar/2) * (-i) (W[psi, dpsi/dt] - W[dpsi/dt, psi]); see README for the
/// calibration of the constant.
PhaseSymbol energy_symbol(const Snapshot& snap, double dt, double hbar);

/// {H, F}_BB for H = p^2/2m + V(x): kinetic part T F - hbar^2/(8m) d_x^2 F,
/// potential part [V(x - hbar q/2) + V(x + hbar q/2)]/2 in the Fourier
/// variable q conjugate to p.
PhaseSymbol baker_bracket_hamiltonian(const WignerField& F, const Potential& V, const Units& units);

/// max |E(x,p,t) + {H, F}_BB| at the snapshot nearest t.
double energy_symbol_residual(const EvolutionRecord& record, double t, const BracketConfig& cfg);

}  // namespace bohm
