#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bohm/grid.hpp"
#include "bohm/schrodinger.hpp"

namespace bohm {

/// Paths of n_particles Bohm trajectories recorded at `times`.
/// Storage is time-major: positions[t_index * n_particles + particle].
struct TrajectoryEnsemble {
  std::size_t n_particles = 0;
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<std::uint8_t> exited;  // left the periodic cell; excluded from statistics
  std::uint64_t seed = 0;

  double position(std::size_t particle, std::size_t time_index) const {
    return positions[time_index * n_particles + particle];
  }
  std::span<const double> at_time(std::size_t time_index) const {
    return {positions.data() + time_index * n_particles, n_particles};
  }
  std::size_t active_count() const;
};

/// Inverse-CDF sampling from the piecewise-constant density whose cells are
/// centered on the grid samples. Deterministic for a fixed seed.
std::vector<double> sample_initial(const RField& rho0, std::size_t n, std::uint64_t seed);

/// CDF of a sampled density under the same cell-centered convention.
class GridCdf {
 public:
  explicit GridCdf(const RField& rho);
  double operator()(double x) const;

 private:
  Grid1D grid_;
  std::vector<double> density_;     // normalized
  std::vector<double> cumulative_;  // mass below the left edge of cell j
};

/// Velocity field v = (hbar/m) Im(conj(psi) psi')/|psi|^2 with node samples
/// replaced by the nearest off-node value.
RField guidance_velocity(const CField& psi, const Units& units);

struct IntegrationOptions {
  std::size_t record_every = 1;  // keep positions at every k-th snapshot
  unsigned threads = 1;
  double max_gradient_step = 0.5;  // substep so that h * max|dv/dx| stays below this
};

/// RK4 through the snapshot velocity fields: cubic (Catmull-Rom) in space,
/// linear in time between snapshots.
TrajectoryEnsemble integrate_ensemble(const EvolutionRecord& record, std::span<const double> initial,
                                      const IntegrationOptions& options = {}, std::uint64_t seed = 0);

/// Two-sided Kolmogorov-Smirnov distance between the active particles at
/// `time_index` and |psi|^2 at the matching record time.
double equivariance_check(const TrajectoryEnsemble& ensemble, const EvolutionRecord& record,
                          std::size_t time_index);

/// KS distance of a sample against a gridded density.
double ks_distance(std::vector<double> samples, const RField& rho);

/// No-crossing: particles ordered at t=0 remain ordered at every time.
bool order_preserved(const TrajectoryEnsemble& ensemble);

/// Particles never cross `axis` from the side they started on.
bool side_preserved(const TrajectoryEnsemble& ensemble, double axis);

}  // namespace bohm
