#include <gtest/gtest.h>

#include "bohm/schrodinger.hpp"
#include "oracles/oracles.hpp"

using namespace bohm;

namespace {

double mean_x(const CField& psi) {
  double m = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) m += psi.grid.x(j) * std::norm(psi[j]) * psi.grid.dx;
  return m / norm_squared(psi);
}

double width_x(const CField& psi) {
  const double mu = mean_x(psi);
  double v = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double d = psi.grid.x(j) - mu;
    v += d * d * std::norm(psi[j]) * psi.grid.dx;
  }
  return std::sqrt(v / norm_squared(psi));
}

double max_abs_diff(const CField& a, const CField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace

TEST(GaussianPacket, RealPositiveNormalized) {
  const Grid1D g = build_grid(-10, 10, 256);
  const CField psi = gaussian_packet(g, 0, 1, 0);
  for (const auto& z : psi.values) {
    EXPECT_EQ(z.imag(), 0.0);
    EXPECT_GT(z.real(), 0.0);
  }
  EXPECT_NEAR(norm_squared(psi), 1.0, 1e-14);
}

TEST(GaussianPacket, MeanMomentum) {
  const Grid1D g = build_grid(-10, 10, 256);
  const CField phi = to_momentum_rep(gaussian_packet(g, 0, 1, 2), 1.0);
  double m = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) m += phi.grid.x(j) * std::norm(phi[j]) * phi.grid.dx;
  EXPECT_NEAR(m, 2.0, 1e-8);
}

TEST(GaussianPacket, ResolutionGuard) {
  const Grid1D g = build_grid(-10, 10, 256);
  EXPECT_THROW(gaussian_packet(g, 0, g.dx, 0), ConfigError);
}

TEST(Superpose, ZeroNormRejected) {
  const Grid1D g = build_grid(-10, 10, 128);
  const CField psi = gaussian_packet(g, 0, 1, 0);
  EXPECT_THROW(superpose(psi, psi, 1.0, -1.0), NumericError);
}

TEST(Superpose, SymmetricPair) {
  const Grid1D g = build_grid(-16, 16, 256);
  const CField psi = superpose(gaussian_packet(g, -5, 0.7, 0), gaussian_packet(g, 5, 0.7, 0), 1, 1);
  // x_j and -x_j: index j and n - j
  for (std::size_t j = 1; j < g.n; ++j) EXPECT_NEAR(std::norm(psi[j]), std::norm(psi[g.n - j]), 1e-14);
  EXPECT_NEAR(norm_squared(psi), 1.0, 1e-13);
}

TEST(Superpose, CounterPropagatingFringes) {
  const Grid1D g = build_grid(-16, 16, 512);
  const double p0 = 1.7;
  const CField a = gaussian_packet(g, 0, 1.5, p0), b = gaussian_packet(g, 0, 1.5, -p0);
  const CField psi = superpose(a, b, 1, 1);
  // |a + b|^2 / N = 4 cos^2(p0 x) |env|^2 / N; compare shapes via the ratio to the envelope
  const CField env = gaussian_packet(g, 0, 1.5, 0);
  double scale = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) scale = std::max(scale, std::norm(psi[j]));
  double c = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    const double want = std::pow(std::cos(p0 * g.x(j)), 2) * std::norm(env[j]);
    c = std::max(c, want);
  }
  for (std::size_t j = 0; j < g.n; ++j) {
    const double want = std::pow(std::cos(p0 * g.x(j)), 2) * std::norm(env[j]) / c * scale;
    EXPECT_NEAR(std::norm(psi[j]), want, 1e-12);
  }
}

TEST(SplitStep, FreeGaussianMatchesClosedForm) {
  const Grid1D g = build_grid(-30, 30, 1024);
  const double s = 1.0, p0 = 0.8;
  EvolutionOptions o;
  o.dt = 0.01;
  o.steps = 200;
  o.stride = 100;
  const auto rec = split_step_evolve(gaussian_packet(g, -1, s, p0), Potential::free(), o);
  ASSERT_EQ(rec.snapshots.size(), 3u);
  for (const auto& snap : rec.snapshots) {
    const CField exact = sample_complex(g, [&](double x) { return oracle::free_gaussian(x, snap.t, -1, s, p0, 1, 1); });
    EXPECT_LT(max_abs_diff(snap.psi, exact), 1e-10) << "t=" << snap.t;
  }
  const double w = width_x(rec.back().psi);
  const double want = std::sqrt(s * s + std::pow(2.0 / (2 * s), 2));
  EXPECT_LT(std::abs(w - want) / want, 1e-4);
}

// The sampled eigenstate is not the Strang propagator's own stationary
// state; |psi| breathes by O(dt^2), about 5e-8 at dt = 1e-3.
TEST(SplitStep, HarmonicGroundStateStationary) {
  const Grid1D g = build_grid(-10, 10, 256);
  EvolutionOptions o;
  o.dt = 2.5e-4;
  o.steps = 8000;
  o.stride = 1000;
  const CField psi0 = harmonic_eigenstate(g, 0, 1.0, {});
  const auto rec = split_step_evolve(psi0, Potential::harmonic(1.0), o);
  for (const auto& s : rec.snapshots)
    for (std::size_t j = 0; j < g.n; ++j) EXPECT_NEAR(std::abs(s.psi[j]), std::abs(psi0[j]), 1e-8);
}

TEST(SplitStep, PlaneWavePhase) {
  const Grid1D g = build_grid(0, 2 * pi, 64);
  const long mode = 3;
  const double k = plane_wave_k(g, mode);
  EvolutionOptions o;
  o.dt = 0.01;
  o.steps = 100;
  o.stride = 100;
  const CField psi0 = plane_wave(g, mode);
  const auto rec = split_step_evolve(psi0, Potential::free(), o);
  const double t = rec.back().t;
  for (std::size_t j = 0; j < g.n; ++j) {
    EXPECT_NEAR(std::abs(rec.back().psi[j]), std::abs(psi0[j]), 1e-13);
    EXPECT_LT(std::abs(rec.back().psi[j] - psi0[j] * std::polar(1.0, -k * k * t / 2)), 1e-12);
  }
}

TEST(SplitStep, NormConserved) {
  const Grid1D g = build_grid(-15, 15, 256);
  EvolutionOptions o;
  o.dt = 0.005;
  o.steps = 400;
  o.stride = 50;
  const Potential V(GaussianBarrier{2.0, 0.5, 1.0});
  const auto rec = split_step_evolve(gaussian_packet(g, -4, 1, 2), V, o);
  for (const auto& s : rec.snapshots) EXPECT_LT(std::abs(std::sqrt(norm_squared(s.psi)) - 1.0), 1e-10);
}

TEST(SplitStep, SecondOrderInTime) {
  const Grid1D g = build_grid(-15, 15, 256);
  const Potential V(GaussianBarrier{2.0, 0.5, 1.0});
  const CField psi0 = gaussian_packet(g, -3, 1, 1.5);
  const double T = 1.0;
  auto run = [&](double dt) {
    EvolutionOptions o;
    o.dt = dt;
    o.steps = static_cast<std::size_t>(std::llround(T / dt));
    o.stride = o.steps;
    return split_step_evolve(psi0, V, o).back().psi;
  };
  const double dt = 0.02;
  const CField ref = run(dt / 8);
  const double e1 = max_abs_diff(run(dt), ref), e2 = max_abs_diff(run(dt / 2), ref);
  EXPECT_GE(e1 / e2, 3.5) << e1 << " " << e2;
}

TEST(SplitStep, CoherentStateFollowsClassicalPath) {
  const Grid1D g = build_grid(-12, 12, 256);
  const double x0 = 2.0;
  EvolutionOptions o;
  o.dt = 2 * pi / 4000;
  o.steps = 4000;
  o.stride = 250;
  const auto rec = split_step_evolve(harmonic_eigenstate(g, 0, 1.0, {}, x0), Potential::harmonic(1.0), o);
  for (const auto& s : rec.snapshots) {
    const double want = x0 * std::cos(s.t);
    EXPECT_LT(std::abs(mean_x(s.psi) - want), 1e-4 * x0) << "t=" << s.t;
  }
}

TEST(SplitStep, StepGuardNamed) {
  const Grid1D g = build_grid(-10, 10, 64);
  EvolutionOptions o;
  o.dt = 0.1;
  o.steps = 10;
  try {
    split_step_evolve(gaussian_packet(g, 0, 2, 0), Potential::harmonic(1.0), o);
    FAIL() << "expected guard";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("dt*max|V|/hbar"), std::string::npos);
  }
  o.stride = 0;
  o.dt = 0.001;
  EXPECT_THROW(split_step_evolve(gaussian_packet(g, 0, 2, 0), Potential::harmonic(1.0), o), ConfigError);
}

TEST(SplitStep, SnapshotNeighboursAreOneStepAway) {
  const Grid1D g = build_grid(-10, 10, 128);
  const Potential V(GaussianBarrier{1.0, 1.0, 0.0});
  EvolutionOptions o;
  o.dt = 0.01;
  o.steps = 20;
  o.stride = 10;
  const CField psi0 = gaussian_packet(g, -2, 1, 1);
  const auto rec = split_step_evolve(psi0, V, o);
  EvolutionOptions one = o;
  one.steps = 11;
  one.stride = 11;
  const auto r2 = split_step_evolve(psi0, V, one);
  EXPECT_LT(max_abs_diff(rec.snapshots[1].next, r2.back().psi), 1e-14);
  EvolutionOptions nine = o;
  nine.steps = 9;
  nine.stride = 9;
  EXPECT_LT(max_abs_diff(rec.snapshots[1].prev, split_step_evolve(psi0, V, nine).back().psi), 1e-14);
  EXPECT_EQ(rec.index_of(0.1), 1u);
  EXPECT_THROW(rec.index_of(0.05), NumericError);
}

TEST(Eigenstates, OrthonormalHermiteFunctions) {
  const Grid1D g = build_grid(-12, 12, 512);
  std::vector<CField> h;
  for (unsigned n = 0; n < 6; ++n) h.push_back(harmonic_eigenstate(g, n, 1.3, {}));
  for (unsigned a = 0; a < 6; ++a)
    for (unsigned b = 0; b < 6; ++b) {
      cplx ip = 0.0;
      for (std::size_t j = 0; j < g.n; ++j) ip += std::conj(h[a][j]) * h[b][j] * g.dx;
      EXPECT_NEAR(std::abs(ip), a == b ? 1.0 : 0.0, 1e-12);
    }
}
