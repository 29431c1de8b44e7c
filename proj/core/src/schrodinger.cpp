#include "bohm/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bohm/fft.hpp"

namespace bohm {
namespace {

double catmull_rom_periodic(const Grid1D& g, const std::vector<double>& v, double x) {
  const double s = (x - g.x_min) / g.dx;
  const double fl = std::floor(s);
  const double t = s - fl;
  const auto n = static_cast<long>(g.n);
  auto at = [&](long j) { return v[static_cast<std::size_t>(((j % n) + n) % n)]; };
  const long i = static_cast<long>(fl);
  const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
}

}  // namespace

Potential::Potential(Kind kind, double mass) : kind_(std::move(kind)), mass_(mass) {
  if (const auto* tab = std::get_if<TabulatedPotential>(&kind_)) {
    if (tab->values.size() != tab->grid.n) throw ConfigError("potential: tabulated size mismatch");
    for (double v : tab->values)
      if (!std::isfinite(v)) throw ConfigError("potential: tabulated values must be finite");
  }
}

double Potential::operator()(double x) const {
  struct Visitor {
    double x;
    double mass;
    double operator()(const FreePotential&) const { return 0.0; }
    double operator()(const HarmonicPotential& h) const {
      const double d = x - h.center;
      return 0.5 * mass * h.omega * h.omega * d * d;
    }
    double operator()(const GaussianBarrier& b) const {
      const double d = (x - b.center) / b.width;
      return b.height * std::exp(-0.5 * d * d);
    }
    double operator()(const TabulatedPotential& t) const { return catmull_rom_periodic(t.grid, t.values, x); }
  };
  return std::visit(Visitor{x, mass_}, kind_);
}

RField Potential::evaluate(const Grid1D& grid) const {
  if (const auto* tab = std::get_if<TabulatedPotential>(&kind_); tab && tab->grid == grid) {
    return RField(grid, tab->values);
  }
  return sample(grid, [this](double x) { return (*this)(x); });
}

CField gaussian_packet(const Grid1D& grid, double center, double width, double momentum, double hbar) {
  if (!(width > 4.0 * grid.dx)) {
    throw ConfigError("gaussian_packet: width must exceed 4*dx (resolution guard)");
  }
  const double amp = std::pow(2.0 * pi * width * width, -0.25);
  CField psi = sample_complex(grid, [&](double x) {
    const double d = x - center;
    return amp * std::exp(-d * d / (4.0 * width * width)) * std::polar(1.0, momentum * x / hbar);
  });
  return normalized(psi);
}

CField chirped_gaussian(const Grid1D& grid, double center, double width, double chirp, double hbar) {
  CField psi = gaussian_packet(grid, center, width, 0.0, hbar);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double x = grid.x(j);
    psi[j] *= std::polar(1.0, chirp * x * x / hbar);
  }
  return psi;
}

CField harmonic_eigenstate(const Grid1D& grid, unsigned level, double omega, const Units& units,
                           double center) {
  const double alpha = units.mass * omega / units.hbar;
  const double scale = std::sqrt(alpha);
  const double norm0 = std::pow(alpha / pi, 0.25);
  CField psi(grid);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double xi = scale * (grid.x(j) - center);
    // Normalized Hermite-function recurrence; stable for large levels.
    double prev = 0.0;
    double cur = norm0 * std::exp(-0.5 * xi * xi);
    for (unsigned k = 0; k < level; ++k) {
      const double next = std::sqrt(2.0 / (k + 1.0)) * xi * cur - std::sqrt(k / (k + 1.0)) * prev;
      prev = cur;
      cur = next;
    }
    psi[j] = cur;
  }
  return normalized(psi);
}

double plane_wave_k(const Grid1D& grid, long mode) { return 2.0 * pi * static_cast<double>(mode) / grid.length(); }

CField plane_wave(const Grid1D& grid, long mode) {
  const double k = plane_wave_k(grid, mode);
  const double amp = 1.0 / std::sqrt(grid.length());
  return sample_complex(grid, [&](double x) { return amp * std::polar(1.0, k * x); });
}

CField superpose(const CField& psi1, const CField& psi2, cplx w1, cplx w2) {
  if (!(psi1.grid == psi2.grid)) throw ConfigError("superpose: grids differ");
  CField out(psi1.grid);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = w1 * psi1[j] + w2 * psi2[j];
  const double nrm = norm_squared(out);
  double scale = 0.0;
  for (std::size_t j = 0; j < out.size(); ++j) scale += std::norm(w1 * psi1[j]) + std::norm(w2 * psi2[j]);
  scale *= out.grid.dx;
  if (!(nrm > 1e-24 * std::max(scale, 1e-300))) throw NumericError("superpose: resultant has zero norm");
  return normalized(out);
}

std::vector<double> EvolutionRecord::times() const {
  std::vector<double> ts;
  ts.reserve(snapshots.size());
  for (const auto& s : snapshots) ts.push_back(s.t);
  return ts;
}

std::size_t EvolutionRecord::index_of(double t) const {
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    if (std::abs(snapshots[k].t - t) <= 0.5 * dt) return k;
  }
  throw NumericError("evolution record: no snapshot pair at t = " + std::to_string(t));
}

void check_step_guard(const RField& potential, double dt, double hbar) {
  double vmax = 0.0;
  for (double v : potential.values) vmax = std::max(vmax, std::abs(v));
  if (!(dt > 0.0)) throw ConfigError("propagator guard: dt must be positive");
  if (dt * vmax / hbar >= 0.5) {
    throw ConfigError("propagator guard: dt*max|V|/hbar = " + std::to_string(dt * vmax / hbar) +
                      " must stay below 0.5");
  }
}

SplitStepPropagator::SplitStepPropagator(const Grid1D& grid, const RField& potential, double dt,
                                         const Units& units)
    : grid_(grid), dt_(dt), half_potential_(grid.n), kinetic_(grid.n) {
  // Negative dt is a backward step; the guard applies to its magnitude.
  check_step_guard(potential, std::abs(dt), units.hbar);
  for (std::size_t j = 0; j < grid.n; ++j) {
    half_potential_[j] = std::polar(1.0L, -0.5L * potential[j] * dt / units.hbar);
    const long double k = grid.wavenumber(j);
    const long double kinetic = units.hbar * k * k / (2.0L * units.mass);
    // 1/n folds the inverse-FFT normalization into the kinetic factor.
    kinetic_[j] = std::polar(1.0L / static_cast<long double>(grid.n), -kinetic * dt);
  }
}

void SplitStepPropagator::step(std::vector<cplx>& psi) const {
  std::vector<std::complex<long double>> w(psi.begin(), psi.end());
  step(w);
  for (std::size_t j = 0; j < psi.size(); ++j) psi[j] = cplx(w[j]);
}

void SplitStepPropagator::step(std::vector<std::complex<long double>>& psi) const {
  const std::size_t n = grid_.n;
  for (std::size_t j = 0; j < n; ++j) psi[j] *= half_potential_[j];
  fft::forward(psi);
  for (std::size_t j = 0; j < n; ++j) psi[j] *= kinetic_[j];
  fft::inverse(psi);
  for (std::size_t j = 0; j < n; ++j) psi[j] *= half_potential_[j];
}

EvolutionRecord split_step_evolve(const CField& psi0, const Potential& potential,
                                  const EvolutionOptions& options, const Units& units) {
  if (options.stride == 0) throw ConfigError("evolve: stride must be >= 1");
  const Grid1D& grid = psi0.grid;
  EvolutionRecord rec;
  rec.grid = grid;
  rec.units = units;
  rec.dt = options.dt;
  rec.potential = potential.evaluate(grid);
  rec.potential_model = potential;
  check_step_guard(rec.potential, options.dt, units.hbar);

  const SplitStepPropagator forward(grid, rec.potential, options.dt, units);
  const SplitStepPropagator backward(grid, rec.potential, -options.dt, units);

  // Strang splitting is time-symmetric, so one backward step gives psi(-dt).
  using lvec = std::vector<std::complex<long double>>;
  auto to_field = [&grid](const lvec& v) {
    CField f(grid);
    for (std::size_t j = 0; j < v.size(); ++j) f[j] = cplx(v[j]);
    return f;
  };
  lvec before(psi0.values.begin(), psi0.values.end());
  backward.step(before);

  lvec cur(psi0.values.begin(), psi0.values.end());
  std::size_t pending = SIZE_MAX;  // snapshot awaiting its `next` neighbour
  for (std::size_t step = 0; step <= options.steps; ++step) {
    if (step % options.stride == 0 || step == options.steps) {
      Snapshot snap;
      snap.t = static_cast<double>(step) * options.dt;
      snap.psi = to_field(cur);
      snap.prev = to_field(before);
      rec.snapshots.push_back(std::move(snap));
      pending = rec.snapshots.size() - 1;
    }
    before = cur;
    forward.step(cur);
    if (pending != SIZE_MAX) {
      rec.snapshots[pending].next = to_field(cur);
      pending = SIZE_MAX;
    }
  }
  return rec;
}

}  // namespace bohm
