#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "bohm/grid.hpp"

namespace bohm {

struct FreePotential {};
struct HarmonicPotential {
  double omega = 1.0;
  double center = 0.0;
};
struct GaussianBarrier {
  double height = 1.0;
  double width = 1.0;
  double center = 0.0;
};
// Samples on the simulation grid; evaluation between samples is periodic
// cubic (Catmull-Rom) interpolation.
struct TabulatedPotential {
  Grid1D grid;
  std::vector<double> values;
};

/// Static external potential V(x). Only time-independent potentials exist.
class Potential {
 public:
  using Kind = std::variant<FreePotential, HarmonicPotential, GaussianBarrier, TabulatedPotential>;

  Potential() = default;
  Potential(Kind kind, double mass = 1.0);

  static Potential free() { return Potential(FreePotential{}); }
  static Potential harmonic(double omega, double mass = 1.0, double center = 0.0) {
    return Potential(HarmonicPotential{omega, center}, mass);
  }

  double operator()(double x) const;
  RField evaluate(const Grid1D& grid) const;

  const Kind& kind() const { return kind_; }
  double mass() const { return mass_; }
  bool is_free() const { return std::holds_alternative<FreePotential>(kind_); }

 private:
  Kind kind_ = FreePotential{};
  double mass_ = 1.0;
};

/// psi(x) = (2 pi s^2)^{-1/4} exp(-(x-x0)^2/(4 s^2)) exp(i p0 x/hbar),
/// renormalized on the grid. Requires s > 4 dx.
CField gaussian_packet(const Grid1D& grid, double center, double width, double momentum,
                       double hbar = 1.0);

/// Gaussian packet with an additional quadratic phase exp(i chirp x^2/hbar),
/// i.e. S = p0 x + chirp x^2.
CField chirped_gaussian(const Grid1D& grid, double center, double width, double chirp,
                        double hbar = 1.0);

/// Normalized harmonic-oscillator eigenfunction of level `level`.
CField harmonic_eigenstate(const Grid1D& grid, unsigned level, double omega, const Units& units,
                           double center = 0.0);

/// exp(i k x)/sqrt(L) with k = 2 pi m/L, exactly periodic on the grid.
CField plane_wave(const Grid1D& grid, long mode);
double plane_wave_k(const Grid1D& grid, long mode);

/// Normalized w1*psi1 + w2*psi2. Throws NumericError on zero resultant norm.
CField superpose(const CField& psi1, const CField& psi2, cplx w1, cplx w2);

/// Stored state at a recorded time, plus its fine-step neighbours at
/// t - dt and t + dt for centered time differences.
struct Snapshot {
  double t = 0.0;
  CField psi;
  CField prev;
  CField next;
};

struct EvolutionRecord {
  Grid1D grid;
  Units units;
  double dt = 0.0;
  RField potential;          // V sampled on the grid
  Potential potential_model; // callable V(x) for off-grid evaluation
  std::vector<Snapshot> snapshots;

  std::vector<double> times() const;
  std::size_t index_of(double t) const;  // throws NumericError when absent
  const Snapshot& at(double t) const { return snapshots[index_of(t)]; }
  const Snapshot& back() const { return snapshots.back(); }
};

struct EvolutionOptions {
  double dt = 1e-3;
  std::size_t steps = 1000;
  std::size_t stride = 1;  // snapshot every `stride` fine steps
};

/// Strang-split propagator exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2) with the
/// kinetic factor applied in momentum space. Guard: dt*max|V|/hbar < 0.5.
EvolutionRecord split_step_evolve(const CField& psi0, const Potential& potential,
                                  const EvolutionOptions& options, const Units& units = {});

/// Reusable single-step propagator for callers that need raw stepping.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const Grid1D& grid, const RField& potential, double dt, const Units& units);
  void step(std::vector<cplx>& psi) const;
  // Extended-precision state; evolve keeps psi in long double between steps
  // so the roundoff floor in the tails sits well below the node threshold.
  void step(std::vector<std::complex<long double>>& psi) const;
  double dt() const { return dt_; }

 private:
  Grid1D grid_;
  double dt_;
  std::vector<std::complex<long double>> half_potential_;
  std::vector<std::complex<long double>> kinetic_;
};

void check_step_guard(const RField& potential, double dt, double hbar);

}  // namespace bohm
