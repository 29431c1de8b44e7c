#include <gtest/gtest.h>

#include <random>

#include "bohm/moyal.hpp"
#include "oracles/oracles.hpp"

using namespace bohm;

namespace {

oracle::Poly to_oracle(const PhasePolynomial& p) {
  oracle::Poly out;
  for (const auto& [e, c] : p.terms()) out[e] = c;
  return out;
}

PhasePolynomial from_oracle(const oracle::Poly& p) {
  PhasePolynomial out;
  for (const auto& [e, c] : p) out.add_term(e.first, e.second, c);
  return out;
}

PhasePolynomial random_poly(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PhasePolynomial out;
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b)
      if (u(rng) > -0.3) out.add_term(a, b, cplx(u(rng), u(rng)));
  return out;
}

PhaseSymbol sym(const PhasePolynomial& p) { return PhaseSymbol::polynomial(p); }

double sup_gap(const WignerField& a, const std::function<double(double, double)>& want) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.nx(); ++i)
    for (std::size_t l = 0; l < a.np(); ++l) m = std::max(m, std::abs(a.at(i, l) - want(a.x(i), a.p(l))));
  return m;
}

double sup_gap(const WignerField& a, const WignerField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) m = std::max(m, std::abs(a.values[k] - b.values[k]));
  return m;
}

double gap(const MaskedField& a, const MaskedField& b) { return max_abs_difference(a, b); }

double off_mask(const MaskedField& f, const std::function<double(double)>& want) {
  double m = 0.0;
  for (std::size_t j = 0; j < f.field.size(); ++j)
    if (!f.mask[j]) m = std::max(m, std::abs(f.field[j] - want(f.field.grid.x(j))));
  return m;
}

EvolutionRecord evolve(const CField& psi0, const Potential& V, double dt, std::size_t steps, std::size_t stride,
                       const Units& u = {}) {
  EvolutionOptions o;
  o.dt = dt;
  o.steps = steps;
  o.stride = stride;
  return split_step_evolve(psi0, V, o, u);
}

}  // namespace

TEST(Wigner, GaussianClosedForm) {
  const Grid1D g = build_grid(-15, 15, 256);
  for (double hbar : {1.0, 0.5}) {
    const double s = 1.2, x0 = 0.7, p0 = 0.9;
    const WignerField F = wigner_transform(gaussian_packet(g, x0, s, p0, hbar), hbar);
    EXPECT_LT(sup_gap(F, [&](double x, double p) { return oracle::gaussian_wigner(x, p, x0, p0, s, hbar); }), 1e-6);
    EXPECT_NEAR(F.total(), 1.0, 1e-8);
  }
}

TEST(Wigner, MarginalsMatchDensities) {
  const Grid1D g = build_grid(-20, 20, 512);
  const std::vector<CField> states = {
      gaussian_packet(g, -1, 1, 2), chirped_gaussian(g, 0.5, 1.3, 0.4),
      superpose(gaussian_packet(g, -3, 0.8, 0), gaussian_packet(g, 3, 0.8, 1), 1, cplx(0, 1)),
      harmonic_eigenstate(g, 4, 1.0, {})};
  for (const CField& psi : states) {
    const WignerField F = wigner_transform(psi, 1.0);
    const RField rho = abs_squared(psi), phi2 = abs_squared(to_momentum_rep(psi, 1.0));
    const RField px = F.position_marginal(), pp = F.momentum_marginal();
    for (std::size_t j = 0; j < g.n; ++j) {
      EXPECT_NEAR(px[j], rho[j], 1e-8);
      EXPECT_NEAR(pp[j], phi2[j], 1e-8);
    }
  }
}

TEST(Wigner, CatStateNegativeFringes) {
  const Grid1D g = build_grid(-20, 20, 512);
  const double a = 3.0, s = 0.7;
  const WignerField F = wigner_transform(superpose(gaussian_packet(g, -a, s, 0), gaussian_packet(g, a, s, 0), 1, 1), 1.0);
  EXPECT_LT(sup_gap(F, [&](double x, double p) { return oracle::cat_wigner(x, p, a, s, 1.0); }), 1e-6);
  EXPECT_LT(F.min(), -0.1 / pi);
  // the negative lobes sit on the midpoint column
  const std::size_t mid = g.nearest_index(0.0);
  double col_min = 0.0;
  for (std::size_t l = 0; l < F.np(); ++l) col_min = std::min(col_min, F.at(mid, l));
  EXPECT_NEAR(col_min, F.min(), 1e-12);
}

TEST(Wigner, PlaneWaveSingleRow) {
  const Grid1D g = build_grid(0, 2 * pi, 64);
  const double hbar = 0.5;
  const WignerField F = wigner_transform(plane_wave(g, 3), hbar);
  const double p0 = hbar * plane_wave_k(g, 3);
  double off = 0.0, on = 0.0;
  for (std::size_t i = 0; i < F.nx(); ++i)
    for (std::size_t l = 0; l < F.np(); ++l) {
      if (std::abs(F.p(l) - p0) < 1e-9) on += F.at(i, l);
      else off = std::max(off, std::abs(F.at(i, l)));
    }
  EXPECT_LT(off, 1e-12);
  EXPECT_NEAR(on * F.psgrid.xgrid.dx * F.psgrid.pgrid.dx, 1.0, 1e-12);
}

TEST(Star, Examples) {
  BracketConfig cfg;
  cfg.hbar = 0.7;
  const double h = cfg.hbar;
  const auto x = PhasePolynomial::x(), p = PhasePolynomial::p();
  EXPECT_EQ(max_coefficient_difference(*star_product(sym(x), sym(p), cfg).poly,
                                       PhasePolynomial::monomial(1, 1) + PhasePolynomial::constant(cplx(0, h / 2))),
            0.0);
  const auto f = PhasePolynomial::monomial(3, 1, 2.0) + PhasePolynomial::monomial(0, 2, cplx(0, 1));
  EXPECT_EQ(max_coefficient_difference(*star_product(sym(f), sym(PhasePolynomial::constant(1)), cfg).poly, f), 0.0);
  const auto want = PhasePolynomial::monomial(2, 2) + PhasePolynomial::monomial(1, 1, cplx(0, 2 * h)) +
                    PhasePolynomial::constant(-h * h / 2);
  EXPECT_LT(max_coefficient_difference(
                *star_product(sym(PhasePolynomial::monomial(2, 0)), sym(PhasePolynomial::monomial(0, 2)), cfg).poly, want),
            1e-15);
}

TEST(Star, MatchesBidifferentialOracle) {
  std::mt19937_64 rng(2024);
  BracketConfig cfg;
  cfg.series_order = 32;
  for (double hbar : {1.0, 0.3}) {
    cfg.hbar = hbar;
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = random_poly(rng, 4), b = random_poly(rng, 4);
      const PhaseSymbol ab = star_product(sym(a), sym(b), cfg);
      EXPECT_FALSE(ab.truncated);
      EXPECT_LT(oracle::max_diff(to_oracle(*ab.poly), oracle::star(to_oracle(a), to_oracle(b), hbar)), 1e-12);
    }
  }
}

TEST(Star, AssociativeOnPolynomials) {
  std::mt19937_64 rng(7);
  BracketConfig cfg;
  cfg.series_order = 32;
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = sym(random_poly(rng, 4)), b = sym(random_poly(rng, 4)), c = sym(random_poly(rng, 4));
    const auto left = star_product(star_product(a, b, cfg), c, cfg);
    const auto right = star_product(a, star_product(b, c, cfg), cfg);
    EXPECT_LT(max_coefficient_difference(*left.poly, *right.poly), 1e-10);
  }
}

TEST(Star, Hermiticity) {
  std::mt19937_64 rng(11);
  BracketConfig cfg;
  cfg.series_order = 32;
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_poly(rng, 4), b = random_poly(rng, 4);
    const auto lhs = star_product(sym(a), sym(b), cfg).poly->conj();
    const auto rhs = *star_product(sym(b.conj()), sym(a.conj()), cfg).poly;
    EXPECT_LT(max_coefficient_difference(lhs, rhs), 1e-12);
  }
}

TEST(Star, TruncationFlagged) {
  BracketConfig cfg;
  cfg.series_order = 2;
  EXPECT_TRUE(star_product(sym(PhasePolynomial::monomial(3, 0)), sym(PhasePolynomial::monomial(0, 3)), cfg).truncated);
  cfg.series_order = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Brackets, Examples) {
  BracketConfig cfg;
  cfg.hbar = 0.6;
  const double h = cfg.hbar;
  const auto x = sym(PhasePolynomial::x()), p = sym(PhasePolynomial::p());
  EXPECT_LT(max_coefficient_difference(*bracket(x, p, BracketKind::moyal, cfg).poly, PhasePolynomial::constant(1)), 1e-15);
  EXPECT_LT(max_coefficient_difference(*bracket(x, p, BracketKind::baker, cfg).poly, PhasePolynomial::monomial(1, 1)),
            1e-15);
  const auto x2 = sym(PhasePolynomial::monomial(2, 0)), p2 = sym(PhasePolynomial::monomial(0, 2));
  const auto four_xp = PhasePolynomial::monomial(1, 1, 4.0);
  EXPECT_LT(max_coefficient_difference(*bracket(x2, p2, BracketKind::moyal, cfg).poly, four_xp), 1e-14);
  EXPECT_LT(max_coefficient_difference(*bracket(x2, p2, BracketKind::poisson, cfg).poly, four_xp), 1e-14);

  const auto x3 = PhasePolynomial::monomial(3, 0), p3 = PhasePolynomial::monomial(0, 3);
  const auto mb = *bracket(sym(x3), sym(p3), BracketKind::moyal, cfg).poly;
  EXPECT_LT(max_coefficient_difference(mb, PhasePolynomial::monomial(2, 2, 9.0) + PhasePolynomial::constant(-1.5 * h * h)),
            1e-13);
  // and through the oracle's own product
  const auto fg = oracle::star(to_oracle(x3), to_oracle(p3), h), gf = oracle::star(to_oracle(p3), to_oracle(x3), h);
  oracle::Poly ob;
  for (const auto& [e, c] : fg) ob[e] += c / cplx(0, h);
  for (const auto& [e, c] : gf) ob[e] -= c / cplx(0, h);
  EXPECT_LT(oracle::max_diff(to_oracle(mb), ob), 1e-13);
}

TEST(Brackets, SymmetryOnRandomPolynomials) {
  std::mt19937_64 rng(3);
  BracketConfig cfg;
  cfg.series_order = 32;
  cfg.hbar = 0.8;
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = sym(random_poly(rng, 4)), b = sym(random_poly(rng, 4));
    const auto mab = *bracket(a, b, BracketKind::moyal, cfg).poly, mba = *bracket(b, a, BracketKind::moyal, cfg).poly;
    EXPECT_LT(max_coefficient_difference(mab, -1.0 * mba), 1e-12);
    const auto bab = *bracket(a, b, BracketKind::baker, cfg).poly, bba = *bracket(b, a, BracketKind::baker, cfg).poly;
    EXPECT_LT(max_coefficient_difference(bab, bba), 1e-12);
  }
}

TEST(ClassicalLimit, CubicPair) {
  const std::vector<double> hs = {1.0, 0.5, 0.25};
  const auto rep = classical_limit_report(PhasePolynomial::monomial(3, 0), PhasePolynomial::monomial(0, 3), hs);
  ASSERT_EQ(rep.rows.size(), 3u);
  const double want[] = {1.5, 0.375, 0.09375};
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(rep.rows[i].moyal_deviation, want[i], 1e-12);
  EXPECT_NEAR(rep.moyal_exponent, 2.0, 1e-6);
  EXPECT_NEAR(rep.baker_exponent, 2.0, 1e-6);
}

TEST(ClassicalLimit, QuadraticPairVanishes) {
  const std::vector<double> hs = {1.0, 0.5, 0.25};
  const auto rep = classical_limit_report(PhasePolynomial::monomial(2, 0), PhasePolynomial::monomial(0, 2), hs);
  for (const auto& row : rep.rows) EXPECT_EQ(row.moyal_deviation, 0.0);
  EXPECT_TRUE(std::isnan(rep.moyal_exponent));
}

TEST(ClassicalLimit, PowerLawFit) {
  const std::vector<double> x = {1, 2, 4, 8}, y = {3, 24, 192, 1536};
  EXPECT_NEAR(fit_power_law_exponent(x, y), 3.0, 1e-12);
}

TEST(Cev, MomentumExamples) {
  const Grid1D g0 = build_grid(0, 2 * pi, 64);
  const double k = plane_wave_k(g0, 2);
  EXPECT_LT(off_mask(cev_momentum(wigner_transform(plane_wave(g0, 2), 1.0)), [&](double) { return k; }), 1e-10);

  const Grid1D g = build_grid(-20, 20, 512);
  EXPECT_LT(cev_momentum(wigner_transform(gaussian_packet(g, 0, 1.2, 0), 1.0)).max_abs_off_mask(), 1e-6);
  const CField chirp = chirped_gaussian(g, 0.3, 1.4, 0.3);
  const MaskedField cev = cev_momentum(wigner_transform(chirp, 1.0));
  EXPECT_LT(gap(cev, bohm_momentum(polar_decompose(chirp))), 1e-6);
  EXPECT_LT(off_mask(cev, [](double x) { return 0.6 * x; }), 1e-6);
}

TEST(Cev, MomentumEqualsBohmMomentumOnStates) {
  const Grid1D g = build_grid(-20, 20, 512);
  for (double hbar : {1.0, 0.5}) {
    for (const CField& psi :
         {gaussian_packet(g, -1, 1, 2, hbar), superpose(gaussian_packet(g, -2.5, 0.8, 0, hbar), gaussian_packet(g, 2.5, 0.8, 1, hbar), 1, 1),
          harmonic_eigenstate(g, 3, 1.0, {hbar, 1.0})}) {
      EXPECT_LT(gap(cev_momentum(wigner_transform(psi, hbar)), bohm_momentum(polar_decompose(psi, hbar))), 1e-6);
    }
  }
}

TEST(Cev, PositionExamples) {
  const Grid1D g = build_grid(-20, 20, 512);
  const double x0 = 2.5;
  const MaskedField shifted = cev_position(to_momentum_rep(gaussian_packet(g, x0, 1.0, 0.5), 1.0), 1.0);
  EXPECT_LT(off_mask(shifted, [&](double) { return x0; }), 1e-8);
  EXPECT_GT(masked_count(shifted.mask), 0u);
  EXPECT_LT(cev_position(to_momentum_rep(harmonic_eigenstate(g, 2, 1.0, {}), 1.0), 1.0).max_abs_off_mask(), 1e-8);

  // The moment ratio is read down to densities of 1e-12, where the offset
  // window must still hold the correlation; hence the wider box.
  const Grid1D gw = build_grid(-30, 30, 1024);
  const CField chirp = chirped_gaussian(gw, 0.5, 1.2, 0.25);
  EXPECT_LT(gap(cev_position(to_momentum_rep(chirp, 1.0), 1.0), cev_position(wigner_transform(chirp, 1.0))), 1e-6);
}

TEST(WeakValue, Examples) {
  const Grid1D g0 = build_grid(0, 2 * pi, 64);
  const double k = plane_wave_k(g0, 3);
  const WeakValueField pw = weak_value_momentum(plane_wave(g0, 3), 0.5);
  for (const auto& z : pw.value.values) {
    EXPECT_NEAR(z.real(), 0.5 * k, 1e-12);
    EXPECT_NEAR(z.imag(), 0.0, 1e-12);
  }
  const Grid1D g = build_grid(-15, 15, 512);
  const double s = 1.3, hbar = 0.8;
  const WeakValueField wg = weak_value_momentum(gaussian_packet(g, 0, s, 0, hbar), hbar);
  for (std::size_t j = 0; j < g.n; ++j) {
    if (wg.mask[j]) continue;
    EXPECT_NEAR(wg.value[j].real(), 0.0, 1e-9);
    EXPECT_NEAR(wg.value[j].imag(), hbar * g.x(j) / (2 * s * s), 1e-8);
  }
  for (const CField& psi : {chirped_gaussian(g, 0, 1.2, 0.3), superpose(gaussian_packet(g, -3, 0.7, 1), gaussian_packet(g, 3, 0.7, -1), 1, 1)}) {
    const WeakValueField w = weak_value_momentum(psi, 1.0);
    EXPECT_LT(gap({real_part(w.value), w.mask}, bohm_momentum(polar_decompose(psi))), 1e-9);
  }
}

TEST(Liouville, FreeShear) {
  const Grid1D g = build_grid(-20, 20, 256);
  const double s = 1.0, x0 = -2.0, p0 = 1.0, t = 1.5;
  const WignerField F0 = wigner_transform(gaussian_packet(g, x0, s, p0), 1.0);
  BracketConfig cfg;
  const PhaseSymbol H = sym(PhasePolynomial::monomial(0, 2, 0.5));
  const WignerField F = moyal_liouville_step(F0, H, t, cfg);
  EXPECT_LT(sup_gap(F, [&](double x, double p) { return oracle::gaussian_wigner(x - p * t, p, x0, p0, s, 1.0); }), 1e-6);
}

TEST(Liouville, HarmonicRotationPeriod) {
  const Grid1D g = build_grid(-15, 15, 256);
  const WignerField F0 = wigner_transform(superpose(gaussian_packet(g, 2, 0.8, 0.5), gaussian_packet(g, -1, 1, 0), 1, 1), 1.0);
  BracketConfig cfg;
  const PhaseSymbol H = sym(PhasePolynomial::monomial(0, 2, 0.5) + PhasePolynomial::monomial(2, 0, 0.5));
  WignerField F = F0;
  for (int k = 0; k < 8; ++k) F = moyal_liouville_step(F, H, 2 * pi / 8, cfg);
  EXPECT_LT(sup_gap(F, F0), 1e-5);
  // quarter period: F(x, p) = F0(-p, x) for unit omega
  const double x0 = 2.0, p0 = 0.5, sg = 0.8;
  WignerField Q = wigner_transform(gaussian_packet(g, x0, sg, p0), 1.0);
  for (int k = 0; k < 2; ++k) Q = moyal_liouville_step(Q, H, 2 * pi / 8, cfg);
  EXPECT_LT(sup_gap(Q, [&](double x, double p) { return oracle::gaussian_wigner(-p, x, x0, p0, sg, 1.0); }), 1e-6);
}

TEST(Liouville, PictureConsistencyHarmonic) {
  const Grid1D g = build_grid(-15, 15, 256);
  const double w = 1.0;
  const CField psi0 = superpose(gaussian_packet(g, 1.5, 0.9, 0.5), harmonic_eigenstate(g, 1, w, {}), 1, cplx(0, 0.5));
  const auto rec = evolve(psi0, Potential::harmonic(w), 1e-3, 2000, 250);
  BracketConfig cfg;
  const PhaseSymbol H = sym(PhasePolynomial::monomial(0, 2, 0.5) + PhasePolynomial::monomial(2, 0, 0.5 * w * w));
  WignerField F = wigner_transform(psi0, 1.0);
  for (std::size_t k = 1; k < rec.snapshots.size(); ++k) {
    F = moyal_liouville_step(F, H, rec.snapshots[k].t - rec.snapshots[k - 1].t, cfg);
    EXPECT_LT(sup_gap(F, wigner_transform(rec.snapshots[k].psi, 1.0)), 1e-5) << "t=" << rec.snapshots[k].t;
  }
}

// Quartic H takes the RK4 route; the oracle is split-step in the other picture.
TEST(Liouville, AnharmonicRk4MatchesSchrodingerPicture) {
  // the offset window needs exp(-(L/2)^2 / 8 s^2) negligible
  const Grid1D g = build_grid(-8, 8, 128);
  const double eps = 0.05;
  const CField psi0 = gaussian_packet(g, 1.0, 0.6, 0.3);
  const Potential V(TabulatedPotential{g, sample(g, [&](double x) { return eps * std::pow(x, 4); }).values});
  const auto rec = evolve(psi0, V, 1e-4, 1500, 1500);
  const PhaseSymbol H = sym(PhasePolynomial::monomial(0, 2, 0.5) + PhasePolynomial::monomial(4, 0, eps));
  BracketConfig cfg;
  WignerField F = wigner_transform(psi0, 1.0);
  for (int k = 0; k < 150; ++k) F = moyal_liouville_step(F, H, 1e-3, cfg);
  const WignerField W = wigner_transform(rec.back().psi, 1.0);
  EXPECT_LT(sup_gap(F, W), 1e-5);
  EXPECT_GT(sup_gap(F, wigner_transform(psi0, 1.0)), 1e-2);
  EXPECT_THROW(moyal_liouville_step(F, H, 0.1, cfg), ConfigError);
}

TEST(EnergySymbol, HarmonicGroundState) {
  const Grid1D g = build_grid(-10, 10, 256);
  for (double w : {1.0, 2.0}) {
    const auto rec = evolve(harmonic_eigenstate(g, 0, w, {}), Potential::harmonic(w), 1e-3, 400, 200);
    BracketConfig cfg;
    for (double t : rec.times()) EXPECT_LT(energy_symbol_residual(rec, t, cfg), 1e-5 * w);
  }
}

// The centred difference carries (E dt)^2/6 relative error, so the pair must
// be fine: 2e-7 at dt = 1e-3, 2e-9 here.
TEST(EnergySymbol, PlaneWave) {
  const Grid1D g = build_grid(0, 2 * pi, 64);
  const auto rec = evolve(plane_wave(g, 2), Potential::free(), 1e-4, 1000, 500);
  BracketConfig cfg;
  for (double t : rec.times()) EXPECT_LT(energy_symbol_residual(rec, t, cfg), 1e-8);
}

TEST(EnergySymbol, FreeGaussianConvergesInDt) {
  const Grid1D g = build_grid(-20, 20, 256);
  const CField psi0 = gaussian_packet(g, 0, 1, 0.5);
  BracketConfig cfg;
  auto r = [&](double dt) {
    return energy_symbol_residual(evolve(psi0, Potential::free(), dt, std::llround(0.4 / dt), std::llround(0.2 / dt)), 0.2, cfg);
  };
  const double a = r(0.02), b = r(0.01);
  EXPECT_GE(a / b, 3.5) << a << " " << b;
}

TEST(EnergySymbol, Errors) {
  const Grid1D g = build_grid(-10, 10, 64);
  EvolutionRecord rec = evolve(gaussian_packet(g, 0, 2, 0), Potential::free(), 1e-3, 10, 10);
  BracketConfig cfg;
  cfg.hbar = 0.5;
  EXPECT_THROW(energy_symbol_residual(rec, 0.0, cfg), ConfigError);
  cfg.hbar = 1.0;
  rec.snapshots[0].next = CField();
  EXPECT_THROW(energy_symbol_residual(rec, 0.0, cfg), NumericError);
}

TEST(Backends, SeriesMatchesSpectralOnGaussians) {
  const Grid1D axis = build_grid(-20.0, 20.0, 64);
  for (double hbar : {1.0, 0.5}) {
    const PhaseSpaceGrid g = symbol_grid(axis, axis, hbar);
    const PhaseSymbol a = PhaseSymbol::sample(g, [](double x, double p) {
      return cplx(std::exp(-((x - 0.5) * (x - 0.5) + p * p) / 8.0), 0.0);
    });
    const PhaseSymbol b = PhaseSymbol::sample(g, [](double x, double p) {
      return std::exp(-(x * x + (p + 0.3) * (p + 0.3)) / 6.0) * cplx(1.0, 0.2 * x);
    });
    BracketConfig series, spectral;
    series.hbar = spectral.hbar = hbar;
    spectral.backend = StarBackend::spectral;
    const PhaseSymbol s1 = star_product(a, b, series), s2 = star_product(a, b, spectral);
    double m = 0.0;
    for (std::size_t k = 0; k < s1.values.size(); ++k) m = std::max(m, std::abs(s1.values[k] - s2.values[k]));
    EXPECT_LT(m, 1e-8) << "hbar=" << hbar;
  }
}

TEST(Backends, SpectralAgreesWithPolynomialOracleInsideBox) {
  // a Gaussian times a polynomial: the series terminates in neither backend,
  // so compare the Moyal bracket's hbar -> 0 shape instead: {a, b}_MB -> {a, b}_PB
  const Grid1D axis = build_grid(-16.0, 16.0, 64);
  const PhaseSpaceGrid g = symbol_grid(axis, axis, 0.05);
  const PhaseSymbol a = PhaseSymbol::sample(g, [](double x, double p) { return cplx(std::exp(-(x * x + p * p) / 8.0), 0); });
  const PhaseSymbol b = PhaseSymbol::sample(g, [](double x, double p) { return cplx(std::exp(-((x - 1) * (x - 1) + p * p) / 10.0), 0); });
  BracketConfig cfg;
  cfg.hbar = 0.05;
  cfg.backend = StarBackend::spectral;
  const PhaseSymbol mb = bracket(a, b, BracketKind::moyal, cfg), pb = bracket(a, b, BracketKind::poisson, cfg);
  double m = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < mb.values.size(); ++k) {
    m = std::max(m, std::abs(mb.values[k] - pb.values[k]));
    scale = std::max(scale, std::abs(pb.values[k]));
  }
  EXPECT_LT(m, 1e-3 * scale);
}

TEST(PhaseSymbol, DescriptorMatchesSamples) {
  const Grid1D axis = build_grid(-2, 2, 32);
  const auto poly = PhasePolynomial::monomial(3, 1, 0.5) + PhasePolynomial::monomial(0, 2, cplx(0, 1));
  const PhaseSymbol s = PhaseSymbol::polynomial(poly, symbol_grid(axis, axis, 1.0));
  EXPECT_LT(s.descriptor_mismatch(), 1e-10);
  EXPECT_EQ(from_oracle(to_oracle(poly)).terms(), poly.terms());
}
