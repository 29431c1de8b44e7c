#include <benchmark/benchmark.h>

#include "bohm/clifford_bohm.hpp"
#include "bohm/moyal.hpp"
#include "bohm/trajectories.hpp"

using namespace bohm;

namespace {

CField packet(std::size_t n) { return gaussian_packet(build_grid(-20.0, 20.0, n), 0.0, 1.0, 1.0); }

void BM_SplitStep(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const CField psi = packet(n);
  SplitStepPropagator prop(psi.grid, Potential::harmonic(0.1).evaluate(psi.grid), 1e-3, {});
  std::vector<cplx> v = psi.values;
  for (auto _ : st) {
    prop.step(v);
    benchmark::DoNotOptimize(v.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SplitStep)->RangeMultiplier(2)->Range(256, 4096);

void BM_BohmFields(benchmark::State& st) {
  const CField psi = packet(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(bohm_fields(psi, {}));
}
BENCHMARK(BM_BohmFields)->RangeMultiplier(2)->Range(256, 4096);

void BM_Wigner(benchmark::State& st) {
  const CField psi = packet(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(wigner_transform(psi, 1.0));
}
BENCHMARK(BM_Wigner)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);

void BM_StarSpectral(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const Grid1D axis = build_grid(-12.0, 12.0, n);
  const PhaseSpaceGrid g = symbol_grid(axis, axis, 0.25);
  const PhaseSymbol a = PhaseSymbol::sample(g, [](double x, double p) { return cplx(std::exp(-0.5 * (x * x + p * p))); });
  const PhaseSymbol b = PhaseSymbol::sample(g, [](double x, double p) { return cplx(std::exp(-(x * x + p * p))); });
  BracketConfig cfg;
  cfg.hbar = 0.25;
  cfg.backend = StarBackend::spectral;
  for (auto _ : st) benchmark::DoNotOptimize(star_product(a, b, cfg));
}
BENCHMARK(BM_StarSpectral)->RangeMultiplier(2)->Range(32, 128)->Unit(benchmark::kMillisecond);

void BM_LiouvilleQuadratic(benchmark::State& st) {
  const CField psi = gaussian_packet(build_grid(-10.0, 10.0, static_cast<std::size_t>(st.range(0))), 2.0, 0.7, 0.5);
  WignerField F = wigner_transform(psi, 1.0);
  const PhaseSymbol H =
      PhaseSymbol::polynomial(0.5 * PhasePolynomial::monomial(0, 2) + 0.5 * PhasePolynomial::monomial(2, 0));
  for (auto _ : st) F = moyal_liouville_step(F, H, 0.1, {});
}
BENCHMARK(BM_LiouvilleQuadratic)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

void BM_GeometricProduct(benchmark::State& st) {
  const auto sig = CliffordSignature::dirac();
  Multivector a(sig), b(sig);
  for (unsigned k = 0; k < sig.blade_count(); ++k) {
    a[k] = cplx(0.1 * k, -0.05 * k);
    b[k] = cplx(1.0 / (k + 1), 0.3);
  }
  for (auto _ : st) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_GeometricProduct);

void BM_PauliFieldProduct(benchmark::State& st) {
  const Grid1D g = build_grid(-20.0, 20.0, static_cast<std::size_t>(st.range(0)));
  const IdealElement el = pauli_embed(make_pauli_spinor(gaussian_packet(g, -1, 1, 0.5), gaussian_packet(g, 1, 1, -0.5)));
  for (auto _ : st) benchmark::DoNotOptimize(product(el.psi, adjoint(el.psi)));
}
BENCHMARK(BM_PauliFieldProduct)->RangeMultiplier(4)->Range(256, 4096);

void BM_Trajectories(benchmark::State& st) {
  const Grid1D g = build_grid(-20.0, 20.0, 512);
  EvolutionOptions opt;
  opt.dt = 0.005;
  opt.steps = 200;
  opt.stride = 25;
  const CField psi0 = superpose(gaussian_packet(g, -3, 0.7, 0), gaussian_packet(g, 3, 0.7, 0), 1.0, 1.0);
  const EvolutionRecord rec = split_step_evolve(psi0, Potential::free(), opt);
  const auto init = sample_initial(abs_squared(psi0), static_cast<std::size_t>(st.range(0)), 7);
  IntegrationOptions io;
  io.threads = static_cast<unsigned>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(integrate_ensemble(rec, init, io, 7));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Trajectories)->Args({10000, 1})->Args({10000, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
