#include <gtest/gtest.h>

#include <random>

#include "bohm/fft.hpp"
#include "bohm/grid.hpp"
#include "bohm/schrodinger.hpp"
#include "oracles/oracles.hpp"

using namespace bohm;

namespace {

double max_err(const RField& a, const std::function<double(double)>& f) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - f(a.grid.x(j))));
  return m;
}

std::vector<cplx> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<cplx> v(n);
  for (auto& z : v) z = {d(rng), d(rng)};
  return v;
}

}  // namespace

TEST(BuildGrid, SpacingFromBounds) {
  const Grid1D g = build_grid(-10, 10, 512);
  EXPECT_DOUBLE_EQ(g.dx, 0.0390625);
  EXPECT_EQ(g.points().size(), 512u);
}

TEST(BuildGrid, SamplesAtMultiplesOfDx) {
  const Grid1D g = build_grid(0, 2 * pi, 8);
  for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(g.x(j), j * pi / 4, 1e-15);
}

TEST(BuildGrid, Rejects) {
  EXPECT_THROW(build_grid(5, 1, 64), ConfigError);
  EXPECT_THROW(build_grid(0, 1, 100), ConfigError);
  EXPECT_THROW(build_grid(0, 1, 4), ConfigError);
  EXPECT_THROW(build_grid(0, INFINITY, 64), ConfigError);
}

TEST(Fft, MatchesBruteForceDft) {
  for (std::size_t n : {8u, 64u, 256u}) {
    const auto x = random_vector(n, 7 + n);
    auto f = x;
    fft::forward(f);
    const auto ref = oracle::dft(x, -1);
    auto b = x;
    fft::inverse(b);
    const auto refb = oracle::dft(x, +1);
    for (std::size_t k = 0; k < n; ++k) {
      EXPECT_NEAR(std::abs(f[k] - ref[k]), 0.0, 1e-11 * n);
      EXPECT_NEAR(std::abs(b[k] - refb[k]), 0.0, 1e-11 * n);
    }
  }
}

TEST(Fft, LongDoubleAgrees) {
  const auto x = random_vector(128, 3);
  std::vector<std::complex<long double>> xl(x.begin(), x.end());
  auto xd = x;
  fft::forward(xd);
  fft::forward(std::span<std::complex<long double>>(xl));
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_LT(std::abs(cplx(xl[k]) - xd[k]), 1e-12);
}

TEST(Fft, AlongAxisMatchesPerLine) {
  const std::size_t rows = 8, cols = 16;
  const auto v = random_vector(rows * cols, 5);
  for (int axis : {0, 1}) {
    auto batched = v;
    fft::along_axis(batched, rows, cols, axis, false);
    const std::size_t n = axis == 1 ? cols : rows, lines = axis == 1 ? rows : cols;
    for (std::size_t l = 0; l < lines; ++l) {
      std::vector<cplx> line(n);
      auto at = [&](std::size_t k) { return axis == 1 ? l * cols + k : k * cols + l; };
      for (std::size_t k = 0; k < n; ++k) line[k] = v[at(k)];
      const auto ref = oracle::dft(line, -1);
      for (std::size_t k = 0; k < n; ++k) EXPECT_LT(std::abs(batched[at(k)] - ref[k]), 1e-12);
    }
  }
  auto bad = v;
  EXPECT_THROW(fft::along_axis(bad, rows, cols + 1, 0, false), ConfigError);
}

TEST(Fft, ShiftRoundTrip) {
  auto v = random_vector(16, 1);
  const auto orig = v;
  fft::shift(v);
  EXPECT_EQ(v[8], orig[0]);
  fft::unshift(v);
  EXPECT_EQ(v, orig);
  EXPECT_EQ(fft::frequency_index(9, 16), -7);
}

TEST(Differentiate, ConstantGivesZero) {
  const Grid1D g = build_grid(0, 1, 64);
  const RField c = sample(g, [](double) { return 3.5; });
  for (auto scheme : {DiffScheme::spectral, DiffScheme::central4})
    for (int order : {1, 2}) EXPECT_LT(max_err(differentiate(c, order, scheme), [](double) { return 0.0; }), 1e-12);
}

TEST(Differentiate, SpectralSine) {
  const Grid1D g = build_grid(0, 2 * pi, 256);
  const RField f = sample(g, [](double x) { return std::sin(3 * x); });
  EXPECT_LT(max_err(differentiate(f, 1), [](double x) { return 3 * std::cos(3 * x); }), 1e-10);
}

TEST(Differentiate, SpectralPlaneWavesExact) {
  const Grid1D g = build_grid(-3, 5, 64);
  for (long m : {-7L, 0L, 1L, 13L}) {
    const double k = plane_wave_k(g, m);
    const CField f = sample_complex(g, [&](double x) { return std::polar(1.0, k * x); });
    for (int order : {1, 2}) {
      const CField d = differentiate(f, order);
      const cplx fac = std::pow(cplx(0.0, k), order);
      for (std::size_t j = 0; j < g.n; ++j) EXPECT_LT(std::abs(d[j] - fac * f[j]), 1e-12 * (1 + std::abs(fac)));
    }
  }
}

// The fourth-order stencil's leading truncation term for f'' is -dx^4 f^(6)/90.
// For exp(-x^2), f^(6) = H_6(x) exp(-x^2) peaks at |H_6(0)| = 120, which sets the
// achievable accuracy at this spacing (about 3.1e-6).
TEST(Differentiate, Central4MatchesTruncationEstimate) {
  const Grid1D g = build_grid(-10, 10, 512);
  const RField f = sample(g, [](double x) { return std::exp(-x * x); });
  auto exact = [](double x) { return (4 * x * x - 2) * std::exp(-x * x); };
  const double err = max_err(differentiate(f, 2, DiffScheme::central4), exact);
  const double estimate = std::pow(g.dx, 4) * 120.0 / 90.0;
  EXPECT_LT(err, 1.02 * estimate);
  EXPECT_GT(err, 0.95 * estimate);

  const Grid1D g2 = build_grid(-10, 10, 1024);
  const RField f2 = sample(g2, [](double x) { return std::exp(-x * x); });
  const double err2 = max_err(differentiate(f2, 2, DiffScheme::central4), exact);
  EXPECT_NEAR(err / err2, 16.0, 0.5);
  EXPECT_LT(err2, 1e-6);
}

TEST(Differentiate, PeriodicDerivativeIntegratesToZero) {
  const Grid1D g = build_grid(-pi, pi, 128);
  const RField f = sample(g, [](double x) { return std::exp(std::sin(x)) + std::cos(3 * x); });
  EXPECT_LT(std::abs(integrate(differentiate(f, 1))), 1e-10);
}

TEST(Integrate, Examples) {
  const Grid1D g0 = build_grid(0, 1, 16);
  EXPECT_EQ(integrate(RField(g0)), 0.0);
  const Grid1D g = build_grid(-10, 10, 512);
  const CField psi = sample_complex(g, [](double x) { return std::pow(2 * pi, -0.25) * std::exp(-x * x / 4); });
  EXPECT_NEAR(norm_squared(psi), 1.0, 1e-12);
  const Grid1D g2 = build_grid(0, 2 * pi, 128);
  EXPECT_NEAR(integrate(sample(g2, [](double x) { return std::sin(x) * std::sin(x); })), pi, 1e-12);
}

TEST(MomentumRep, GaussianWidth) {
  const Grid1D g = build_grid(-20, 20, 512);
  for (double hbar : {1.0, 0.5}) {
    const double s = 1.3;
    const CField phi = to_momentum_rep(gaussian_packet(g, 0.0, s, 0.0, hbar), hbar);
    double m2 = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) m2 += phi.grid.x(j) * phi.grid.x(j) * std::norm(phi[j]) * phi.grid.dx;
    EXPECT_NEAR(std::sqrt(m2), hbar / (2 * s), 1e-10);
  }
}

TEST(MomentumRep, PlaneWaveSingleBin) {
  const Grid1D g = build_grid(0, 10, 64);
  const CField phi = to_momentum_rep(plane_wave(g, 5), 1.0);
  std::size_t best = 0;
  for (std::size_t j = 0; j < g.n; ++j)
    if (std::norm(phi[j]) > std::norm(phi[best])) best = j;
  EXPECT_NEAR(phi.grid.x(best), plane_wave_k(g, 5), 1e-12);
  double rest = 0.0;
  for (std::size_t j = 0; j < g.n; ++j)
    if (j != best) rest += std::norm(phi[j]);
  EXPECT_LT(rest, 1e-20);
}

TEST(MomentumRep, RoundTripAndParseval) {
  const Grid1D g = build_grid(-8, 8, 256);
  const CField psi = normalized(superpose(gaussian_packet(g, -2, 0.8, 1.5), chirped_gaussian(g, 1, 1.1, 0.3), 1.0, cplx(0, 0.7)));
  for (double hbar : {1.0, 0.25}) {
    const CField phi = to_momentum_rep(psi, hbar);
    double pn = 0.0;
    for (const auto& z : phi.values) pn += std::norm(z) * phi.grid.dx;
    EXPECT_NEAR(pn, norm_squared(psi), 1e-12);
    const CField back = from_momentum_rep(phi, g, hbar);
    for (std::size_t j = 0; j < g.n; ++j) EXPECT_LT(std::abs(back[j] - psi[j]), 1e-12);
  }
}

TEST(MomentumRep, ConventionAgainstDirectSum) {
  // phi(p) = (2 pi hbar)^{-1/2} sum_j psi(x_j) exp(-i p x_j/hbar) dx
  const Grid1D g = build_grid(-6, 10, 32);
  const double hbar = 0.7;
  const CField psi = gaussian_packet(g, 1.0, 2.5, 0.4, hbar);
  const CField phi = to_momentum_rep(psi, hbar);
  for (std::size_t l = 0; l < g.n; ++l) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) acc += psi[j] * std::polar(1.0, -phi.grid.x(l) * g.x(j) / hbar) * g.dx;
    EXPECT_LT(std::abs(acc / std::sqrt(2 * pi * hbar) - phi[l]), 1e-12);
  }
}

TEST(Upsample, BandLimitedInterpolationIsExact) {
  const Grid1D g = build_grid(0, 2 * pi, 32);
  auto f = [](double x) { return cplx(std::cos(3 * x), 0.5 * std::sin(7 * x)) + 0.2; };
  const CField v = sample_complex(g, f);
  const auto up = upsample(v.values, 2);
  ASSERT_EQ(up.size(), 64u);
  for (std::size_t j = 0; j < up.size(); ++j) EXPECT_LT(std::abs(up[j] - f(j * g.dx / 2)), 1e-13);
  for (std::size_t j = 0; j < g.n; ++j) EXPECT_EQ(up[2 * j], v[j]);
}

TEST(Fields, SizeMismatchRejected) {
  const Grid1D g = build_grid(0, 1, 8);
  EXPECT_THROW(CField(g, std::vector<cplx>(7)), ConfigError);
}

TEST(BoundaryLeakage, SmallForCentredPacket) {
  const Grid1D g = build_grid(-20, 20, 256);
  EXPECT_LT(boundary_leakage(gaussian_packet(g, 0, 1, 0)), 1e-8);
  EXPECT_GT(boundary_leakage(gaussian_packet(g, 17, 1, 0)), 1e-8);
}
