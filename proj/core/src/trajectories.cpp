#include "bohm/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "bohm/polar.hpp"

namespace bohm {

std::size_t TrajectoryEnsemble::active_count() const {
  return static_cast<std::size_t>(std::count(exited.begin(), exited.end(), 0));
}

GridCdf::GridCdf(const RField& rho) : grid_(rho.grid), density_(rho.values), cumulative_(rho.size() + 1) {
  double total = 0.0;
  for (double v : density_) {
    if (v < 0.0 || !std::isfinite(v)) throw ConfigError("density must be finite and non-negative");
    total += v;
  }
  if (!(total > 0.0)) throw NumericError("density has zero mass");
  cumulative_[0] = 0.0;
  for (std::size_t j = 0; j < density_.size(); ++j) {
    density_[j] /= total;
    cumulative_[j + 1] = cumulative_[j] + density_[j];
  }
}

double GridCdf::operator()(double x) const {
  const double s = (x - grid_.x_min) / grid_.dx + 0.5;
  if (s <= 0.0) return 0.0;
  const auto j = static_cast<std::size_t>(std::floor(s));
  if (j >= density_.size()) return 1.0;
  return cumulative_[j] + density_[j] * (s - static_cast<double>(j));
}

std::vector<double> sample_initial(const RField& rho0, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("sample_initial: particle count must be positive");
  const GridCdf cdf_check(rho0);  // validates the density
  (void)cdf_check;
  const Grid1D& g = rho0.grid;
  std::vector<double> cumulative(g.n + 1, 0.0);
  for (std::size_t j = 0; j < g.n; ++j) cumulative[j + 1] = cumulative[j] + rho0[j];
  const double total = cumulative.back();

  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) {
    // 53 random bits -> [0, 1); avoids implementation-defined distributions.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double target = u * total;
    auto it = std::upper_bound(cumulative.begin() + 1, cumulative.end(), target);
    std::size_t j = static_cast<std::size_t>(std::distance(cumulative.begin(), it)) - 1;
    j = std::min(j, g.n - 1);
    while (rho0[j] <= 0.0 && j + 1 < g.n) ++j;
    const double frac = rho0[j] > 0.0 ? (target - cumulative[j]) / rho0[j] : 0.5;
    x = g.x(j) + (std::clamp(frac, 0.0, 1.0) - 0.5) * g.dx;
  }
  return out;
}

RField guidance_velocity(const CField& psi, const Units& units) {
  const PolarField pf = polar_decompose(psi, units.hbar);
  const CField d1 = differentiate(psi, 1);
  const std::size_t n = psi.size();
  RField v(psi.grid);
  for (std::size_t j = 0; j < n; ++j)
    v[j] = units.hbar / units.mass * (std::conj(psi[j]) * d1[j]).imag() / std::norm(psi[j]);

  // Fill node samples from the nearest unmasked neighbour (periodic distance).
  std::vector<long> nearest(n, -1);
  for (std::size_t j = 0; j < n; ++j)
    if (!pf.node_mask[j]) nearest[j] = static_cast<long>(j);
  for (int pass = 0; pass < 2; ++pass) {
    long last = -1;
    for (std::size_t c = 0; c < 2 * n; ++c) {
      const std::size_t j = c % n;
      if (!pf.node_mask[j]) last = static_cast<long>(j);
      else if (last >= 0) {
        const auto dist = [&](long a) { return (static_cast<long>(j) - a + 2 * static_cast<long>(n)) % static_cast<long>(n); };
        if (nearest[j] < 0 || dist(last) < dist(nearest[j])) nearest[j] = last;
      }
    }
    for (long c = 2 * static_cast<long>(n) - 1; c >= 0; --c) {
      const auto j = static_cast<std::size_t>(c % static_cast<long>(n));
      if (!pf.node_mask[j]) last = static_cast<long>(j);
      else if (last >= 0) {
        const auto dist = [&](long a) {
          const long d = std::labs(static_cast<long>(j) - a);
          return std::min(d, static_cast<long>(n) - d);
        };
        if (nearest[j] < 0 || dist(last) < dist(nearest[j])) nearest[j] = last;
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    if (pf.node_mask[j]) v[j] = nearest[j] >= 0 ? v[static_cast<std::size_t>(nearest[j])] : 0.0;
  return v;
}

namespace {

double catmull_rom(const std::vector<double>& v, const Grid1D& g, double x) {
  const double s = (x - g.x_min) / g.dx;
  const double fl = std::floor(s);
  const double t = s - fl;
  const auto n = static_cast<long>(g.n);
  const long i = static_cast<long>(fl);
  auto at = [&](long j) { return v[static_cast<std::size_t>(((j % n) + n) % n)]; };
  const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
}

// Largest |dv/dx| between neighbouring off-node samples. The tails and the
// periodic seam (where v jumps and particles count as exited) hold no mass
// and would otherwise dictate the step size.
double max_gradient(const std::vector<double>& v, const RField& rho, double dx) {
  const double cut = kNodeThreshold * *std::max_element(rho.values.begin(), rho.values.end());
  double mx = 0.0;
  for (std::size_t j = 0; j + 1 < v.size(); ++j)
    if (rho[j] >= cut || rho[j + 1] >= cut) mx = std::max(mx, std::abs(v[j + 1] - v[j]) / dx);
  return mx;
}

}  // namespace

TrajectoryEnsemble integrate_ensemble(const EvolutionRecord& record, std::span<const double> initial,
                                      const IntegrationOptions& options, std::uint64_t seed) {
  if (record.snapshots.empty()) throw NumericError("integrate_ensemble: empty record");
  if (options.record_every == 0) throw ConfigError("integrate_ensemble: record_every must be >= 1");
  const Grid1D& g = record.grid;
  const std::size_t n_snap = record.snapshots.size();
  const std::size_t np = initial.size();

  std::vector<std::vector<double>> vel(n_snap);
  std::vector<double> grad(n_snap);
  for (std::size_t k = 0; k < n_snap; ++k) {
    vel[k] = guidance_velocity(record.snapshots[k].psi, record.units).values;
    grad[k] = max_gradient(vel[k], abs_squared(record.snapshots[k].psi), g.dx);
  }

  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < n_snap; k += options.record_every) kept.push_back(k);
  if (kept.back() != n_snap - 1) kept.push_back(n_snap - 1);

  TrajectoryEnsemble ens;
  ens.n_particles = np;
  ens.seed = seed;
  for (std::size_t k : kept) ens.times.push_back(record.snapshots[k].t);
  ens.positions.assign(kept.size() * np, 0.0);
  ens.exited.assign(np, 0);

  // Substep counts depend only on the fields, so every particle shares them.
  std::vector<std::size_t> substeps(n_snap, 1);
  for (std::size_t k = 0; k + 1 < n_snap; ++k) {
    const double h = record.snapshots[k + 1].t - record.snapshots[k].t;
    const double lip = std::max(grad[k], grad[k + 1]);
    substeps[k] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(h * lip / options.max_gradient_step)));
  }

  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double x = initial[i];
      bool out = !(x >= g.x_min && x < g.x_max);
      std::size_t slot = 0;
      ens.positions[slot * np + i] = x;
      ++slot;
      for (std::size_t k = 0; k + 1 < n_snap; ++k) {
        const double t0 = record.snapshots[k].t;
        const double t1 = record.snapshots[k + 1].t;
        const double span = t1 - t0;
        auto velocity = [&](double xx, double tt) {
          const double w = (tt - t0) / span;
          return (1.0 - w) * catmull_rom(vel[k], g, xx) + w * catmull_rom(vel[k + 1], g, xx);
        };
        if (!out) {
          const double h = span / static_cast<double>(substeps[k]);
          for (std::size_t s = 0; s < substeps[k]; ++s) {
            const double t = t0 + static_cast<double>(s) * h;
            const double k1 = velocity(x, t);
            const double k2 = velocity(x + 0.5 * h * k1, t + 0.5 * h);
            const double k3 = velocity(x + 0.5 * h * k2, t + 0.5 * h);
            const double k4 = velocity(x + h * k3, t + h);
            x += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
          }
          if (!(x >= g.x_min && x < g.x_max) || !std::isfinite(x)) out = true;
        }
        if (slot < kept.size() && kept[slot] == k + 1) {
          ens.positions[slot * np + i] = x;
          ++slot;
        }
      }
      ens.exited[i] = out ? 1 : 0;
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(np)));
  if (threads == 1) {
    worker(0, np);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (np + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(np, b + chunk);
      if (b < e) pool.emplace_back(worker, b, e);
    }
  }
  return ens;
}

double ks_distance(std::vector<double> samples, const RField& rho) {
  if (samples.empty()) throw NumericError("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const GridCdf cdf(rho);
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double equivariance_check(const TrajectoryEnsemble& ensemble, const EvolutionRecord& record,
                          std::size_t time_index) {
  const double t = ensemble.times.at(time_index);
  const RField rho = abs_squared(record.at(t).psi);
  std::vector<double> xs;
  xs.reserve(ensemble.n_particles);
  const auto row = ensemble.at_time(time_index);
  for (std::size_t i = 0; i < ensemble.n_particles; ++i)
    if (!ensemble.exited[i]) xs.push_back(row[i]);
  return ks_distance(std::move(xs), rho);
}

bool order_preserved(const TrajectoryEnsemble& ensemble) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < ensemble.n_particles; ++i)
    if (!ensemble.exited[i]) idx.push_back(i);
  const auto first = ensemble.at_time(0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return first[a] < first[b]; });
  for (std::size_t t = 1; t < ensemble.times.size(); ++t) {
    const auto row = ensemble.at_time(t);
    for (std::size_t q = 1; q < idx.size(); ++q)
      if (row[idx[q]] < row[idx[q - 1]]) return false;
  }
  return true;
}

bool side_preserved(const TrajectoryEnsemble& ensemble, double axis) {
  const auto first = ensemble.at_time(0);
  for (std::size_t t = 1; t < ensemble.times.size(); ++t) {
    const auto row = ensemble.at_time(t);
    for (std::size_t i = 0; i < ensemble.n_particles; ++i) {
      if (ensemble.exited[i]) continue;
      if (first[i] < axis && row[i] > axis) return false;
      if (first[i] > axis && row[i] < axis) return false;
    }
  }
  return true;
}

}  // namespace bohm
