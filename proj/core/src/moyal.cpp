#include "bohm/moyal.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "bohm/fft.hpp"

namespace bohm {
namespace {

constexpr int kUnbounded = INT_MAX / 4;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Angular wavenumber of bin j on a periodic axis of the given length.
double axis_wavenumber(std::size_t j, std::size_t n, double length) {
  return 2.0 * pi * static_cast<double>(fft::frequency_index(j, n)) / length;
}

double x_period(const PhaseSpaceGrid& g) { return g.xgrid.length(); }
double p_period(const PhaseSpaceGrid& g) { return g.pgrid.dx * static_cast<double>(g.pgrid.n); }

// Transform along x (stride np) for every p column.
void fft_along_x(std::vector<cplx>& v, std::size_t nx, std::size_t np, bool inverse) {
  fft::along_axis(v, nx, np, 0, inverse);
}

void fft_along_p(std::vector<cplx>& v, std::size_t nx, std::size_t np, bool inverse) {
  fft::along_axis(v, nx, np, 1, inverse);
}

// g(s) = f(s + shift) on a periodic line, by phase ramp in Fourier space.
// The Nyquist bin takes cos() so real lines stay real.
void shift_line(std::span<cplx> line, double period, double shift) {
  const std::size_t n = line.size();
  fft::forward(line);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = axis_wavenumber(j, n, period);
    line[j] *= (j == n / 2 ? cplx(std::cos(k * shift), 0.0) : std::polar(1.0, k * shift)) / static_cast<double>(n);
  }
  fft::inverse(line);
}

// Derivatives of one symbol, cached. Polynomial descriptors are
// differentiated exactly and sampled; otherwise 2-D spectral.
class DerivativeSource {
 public:
  DerivativeSource(const PhaseSymbol& s, const PhaseSpaceGrid& g) : sym_(s), grid_(g) {}

  const std::vector<cplx>& get(int i, int j) {
    auto it = cache_.find({i, j});
    if (it != cache_.end()) return it->second;
    return cache_[{i, j}] = compute(i, j);
  }

  int degree_x() const { return sym_.poly ? sym_.poly->degree_x() : kUnbounded; }
  int degree_p() const { return sym_.poly ? sym_.poly->degree_p() : kUnbounded; }

 private:
  std::vector<cplx> compute(int i, int j) {
    const std::size_t nx = grid_.xgrid.n, np = grid_.pgrid.n;
    std::vector<cplx> out(nx * np);
    if (sym_.poly) {
      const PhasePolynomial d = sym_.poly->derivative(i, j);
      // power tables instead of std::pow per sample
      const int dx = d.degree_x(), dp = d.degree_p();
      std::vector<double> xp(nx * (dx + 1)), pp(np * (dp + 1));
      for (std::size_t a = 0; a < nx; ++a) {
        double v = 1.0;
        for (int e = 0; e <= dx; ++e, v *= grid_.xgrid.x(a)) xp[a * (dx + 1) + e] = v;
      }
      for (std::size_t b = 0; b < np; ++b) {
        double v = 1.0;
        for (int e = 0; e <= dp; ++e, v *= grid_.pgrid.x(b)) pp[b * (dp + 1) + e] = v;
      }
      for (const auto& [e, c] : d.terms())
        for (std::size_t a = 0; a < nx; ++a) {
          const cplx cx = c * xp[a * (dx + 1) + e.first];
          for (std::size_t b = 0; b < np; ++b) out[a * np + b] += cx * pp[b * (dp + 1) + e.second];
        }
      return out;
    }
    if (hat_.empty()) {
      hat_ = sym_.values;
      fft_along_x(hat_, nx, np, false);
      fft_along_p(hat_, nx, np, false);
    }
    auto factors = [](std::size_t n, double period, int order) {
      std::vector<cplx> f(n);
      for (std::size_t a = 0; a < n; ++a) {
        const cplx ik(0.0, axis_wavenumber(a, n, period));
        cplx v = 1.0;
        for (int e = 0; e < order; ++e) v *= ik;
        f[a] = (order % 2 == 1 && a == n / 2) ? cplx{} : v;
      }
      return f;
    };
    const std::vector<cplx> fx = factors(nx, x_period(grid_), i), fp = factors(np, p_period(grid_), j);
    const double scale = 1.0 / static_cast<double>(nx * np);
    for (std::size_t a = 0; a < nx; ++a) {
      const cplx sx = fx[a] * scale;
      for (std::size_t b = 0; b < np; ++b) out[a * np + b] = hat_[a * np + b] * sx * fp[b];
    }
    fft_along_p(out, nx, np, true);
    fft_along_x(out, nx, np, true);
    return out;
  }

  const PhaseSymbol& sym_;
  PhaseSpaceGrid grid_;
  std::vector<cplx> hat_;
  std::map<std::pair<int, int>, std::vector<cplx>> cache_;
};

// Highest order at which the bidifferential series can be nonzero.
int series_extent(int ax, int ap, int bx, int bp) {
  const long v = static_cast<long>(std::min(ax, bp)) + std::min(ap, bx);
  return static_cast<int>(std::min<long>(v, kUnbounded));
}

cplx series_coefficient(int n, int r, double hbar) {
  return std::pow(cplx(0.0, 0.5 * hbar), n) / factorial(n) * binomial(n, r) * (r % 2 ? -1.0 : 1.0);
}

PhasePolynomial polynomial_star(const PhasePolynomial& a, const PhasePolynomial& b, double hbar, int order,
                                bool& truncated) {
  const int extent = series_extent(a.degree_x(), a.degree_p(), b.degree_x(), b.degree_p());
  PhasePolynomial out;
  truncated = false;
  for (int n = 0; n <= extent; ++n) {
    PhasePolynomial term;
    for (int r = 0; r <= n; ++r)
      term += series_coefficient(n, r, hbar) * (a.derivative(n - r, r) * b.derivative(r, n - r));
    if (n <= order) out += term;
    else if (!term.is_zero()) truncated = true;
  }
  return out;
}

const PhaseSpaceGrid* common_grid(const PhaseSymbol& a, const PhaseSymbol& b) {
  if (a.sampled() && b.sampled() && !(a.psgrid == b.psgrid))
    throw ConfigError("star_product: symbols live on different phase-space grids");
  if (a.sampled()) return &a.psgrid;
  if (b.sampled()) return &b.psgrid;
  return nullptr;
}

// Sampled route; sources cache their derivatives so a bracket can reuse
// them for both orderings.
PhaseSymbol series_star(DerivativeSource& da, DerivativeSource& db, const PhaseSpaceGrid& g, const BracketConfig& cfg) {
  const int extent = series_extent(da.degree_x(), da.degree_p(), db.degree_x(), db.degree_p());
  const int top = std::min(extent, cfg.series_order);
  PhaseSymbol out(g);
  std::vector<cplx> last_term;
  for (int n = 0; n <= top; ++n) {
    std::vector<cplx> term(out.values.size(), cplx{});
    for (int r = 0; r <= n; ++r) {
      if (n - r > da.degree_x() || r > da.degree_p() || r > db.degree_x() || n - r > db.degree_p()) continue;
      const cplx c = series_coefficient(n, r, cfg.hbar);
      const auto& ua = da.get(n - r, r);
      const auto& ub = db.get(r, n - r);
      for (std::size_t k = 0; k < term.size(); ++k) term[k] += c * ua[k] * ub[k];
    }
    for (std::size_t k = 0; k < term.size(); ++k) out.values[k] += term[k];
    last_term = std::move(term);
  }
  if (extent > cfg.series_order) {
    double tail = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < out.values.size(); ++k) {
      tail = std::max(tail, std::abs(last_term[k]));
      scale = std::max(scale, std::abs(out.values[k]));
    }
    out.truncated = tail > 1e-12 * scale;
  }
  return out;
}

PhaseSymbol series_star(const PhaseSymbol& a, const PhaseSymbol& b, const BracketConfig& cfg) {
  const PhaseSpaceGrid* g = common_grid(a, b);
  if (a.poly && b.poly) {
    bool truncated = false;
    const PhasePolynomial prod = polynomial_star(*a.poly, *b.poly, cfg.hbar, cfg.series_order, truncated);
    PhaseSymbol out = g ? PhaseSymbol::polynomial(prod, *g) : PhaseSymbol::polynomial(prod);
    out.truncated = truncated;
    return out;
  }
  if (!g) throw ConfigError("star_product: symbol has neither samples nor a polynomial descriptor");
  DerivativeSource da(a, *g), db(b, *g);
  return series_star(da, db, *g, cfg);
}

PhaseSymbol spectral_star(const PhaseSymbol& a, const PhaseSymbol& b, const BracketConfig& cfg) {
  const PhaseSpaceGrid* gp = common_grid(a, b);
  if (!gp || !a.sampled() || !b.sampled())
    throw ConfigError("star_product: the spectral backend needs sampled symbols");
  const PhaseSpaceGrid& g = *gp;
  const std::size_t nx = g.xgrid.n, np = g.pgrid.n;
  const double Lx = x_period(g), Lp = p_period(g);

  // Fourier in x, then in p: hat[u * np + q].
  auto transform = [&](const PhaseSymbol& s) {
    std::vector<cplx> h = s.values;
    fft_along_x(h, nx, np, false);
    fft_along_p(h, nx, np, false);
    return h;
  };
  const std::vector<cplx> ah = transform(a);
  const std::vector<cplx> bh = transform(b);

  std::vector<cplx> acc(nx * np, cplx{});
  std::vector<cplx> sa(np), sb(np);
  const double inv_np = 1.0 / static_cast<double>(np);
  auto shifted_profile = [&](const std::vector<cplx>& hat, std::size_t u, double shift, std::vector<cplx>& dst) {
    for (std::size_t q = 0; q < np; ++q) {
      const double w = axis_wavenumber(q, np, Lp);
      const cplx ph = q == np / 2 ? cplx(std::cos(w * shift), 0.0) : std::polar(1.0, w * shift);
      dst[q] = hat[u * np + q] * ph * inv_np;
    }
    fft::inverse(dst);
  };
  for (std::size_t u = 0; u < nx; ++u) {
    const double k1 = axis_wavenumber(u, nx, Lx);
    for (std::size_t v = 0; v < nx; ++v) {
      const double k2 = axis_wavenumber(v, nx, Lx);
      shifted_profile(ah, u, 0.5 * cfg.hbar * k2, sa);
      shifted_profile(bh, v, -0.5 * cfg.hbar * k1, sb);
      cplx* dst = acc.data() + ((u + v) % nx) * np;
      for (std::size_t l = 0; l < np; ++l) dst[l] += sa[l] * sb[l];
    }
  }
  fft_along_x(acc, nx, np, true);
  const double scale = 1.0 / static_cast<double>(nx * nx);
  PhaseSymbol out(g);
  for (std::size_t k = 0; k < acc.size(); ++k) out.values[k] = acc[k] * scale;
  return out;
}

PhaseSymbol combine(const PhaseSymbol& ab, const PhaseSymbol& ba, cplx wa, cplx wb) {
  PhaseSymbol out = ab;
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = wa * ab.values[k] + wb * ba.values[k];
  if (ab.poly && ba.poly) out.poly = wa * *ab.poly + wb * *ba.poly;
  else out.poly.reset();
  out.truncated = ab.truncated || ba.truncated;
  return out;
}

PhaseSymbol poisson(const PhaseSymbol& a, const PhaseSymbol& b) {
  const PhaseSpaceGrid* g = common_grid(a, b);
  if (a.poly && b.poly) {
    const PhasePolynomial pb =
        a.poly->derivative(1, 0) * b.poly->derivative(0, 1) - a.poly->derivative(0, 1) * b.poly->derivative(1, 0);
    return g ? PhaseSymbol::polynomial(pb, *g) : PhaseSymbol::polynomial(pb);
  }
  if (!g) throw ConfigError("bracket: symbol has neither samples nor a polynomial descriptor");
  DerivativeSource da(a, *g), db(b, *g);
  PhaseSymbol out(*g);
  const auto &ax = da.get(1, 0), &ap = da.get(0, 1), &bx = db.get(1, 0), &bp = db.get(0, 1);
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = ax[k] * bp[k] - ap[k] * bx[k];
  return out;
}

MaskedField masked_ratio(const RField& num, const RField& den) {
  double peak = 0.0;
  for (double v : den.values) peak = std::max(peak, std::abs(v));
  MaskedField out{RField(num.grid), Mask(num.size(), 0)};
  for (std::size_t j = 0; j < num.size(); ++j) {
    if (!(std::abs(den[j]) >= kNodeThreshold * peak) || peak == 0.0) {
      out.mask[j] = 1;
      continue;
    }
    out.field[j] = num[j] / den[j];
  }
  return out;
}

// Pullback out(x, p) = in(x + u p, p).
void pull_x(std::vector<double>& F, const PhaseSpaceGrid& g, const std::function<double(double)>& shift_of_p) {
  const std::size_t nx = g.xgrid.n, np = g.pgrid.n;
  std::vector<cplx> line(nx);
  for (std::size_t l = 0; l < np; ++l) {
    const double s = shift_of_p(g.pgrid.x(l));
    if (s == 0.0) continue;
    for (std::size_t i = 0; i < nx; ++i) line[i] = F[i * np + l];
    shift_line(line, x_period(g), s);
    for (std::size_t i = 0; i < nx; ++i) F[i * np + l] = line[i].real();
  }
}

// Pullback out(x, p) = in(x, p + v x).
void pull_p(std::vector<double>& F, const PhaseSpaceGrid& g, const std::function<double(double)>& shift_of_x) {
  const std::size_t nx = g.xgrid.n, np = g.pgrid.n;
  std::vector<cplx> line(np);
  for (std::size_t i = 0; i < nx; ++i) {
    const double s = shift_of_x(g.xgrid.x(i));
    if (s == 0.0) continue;
    for (std::size_t l = 0; l < np; ++l) line[l] = F[i * np + l];
    shift_line(line, p_period(g), s);
    for (std::size_t l = 0; l < np; ++l) F[i * np + l] = line[l].real();
  }
}

// F <- F(N z) for det N = 1, via N = Sx(u) Sp(v) Sx(w).
void pull_linear(std::vector<double>& F, const PhaseSpaceGrid& g, const double (&N)[2][2]) {
  const double a = N[0][0], b = N[0][1], c = N[1][0], e = N[1][1];
  if (std::abs(c) < 1e-12) {
    if (std::abs(a - 1.0) < 1e-12 && std::abs(e - 1.0) < 1e-12) {
      pull_x(F, g, [b](double p) { return b * p; });
      return;
    }
    // N = Sp(-1) N' with N' = Sp(1) N, whose lower-left entry is a != 0.
    pull_p(F, g, [](double x) { return -x; });
    const double Np[2][2] = {{a, b}, {a + c, b + e}};
    pull_linear(F, g, Np);
    return;
  }
  const double v = c, u = (a - 1.0) / c, w = (e - 1.0) / c;
  pull_x(F, g, [u](double p) { return u * p; });
  pull_p(F, g, [v](double x) { return v * x; });
  pull_x(F, g, [w](double p) { return w * p; });
}

}  // namespace

void BracketConfig::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("bracket config: hbar must be positive");
  if (series_order < 1) throw ConfigError("bracket config: series_order must be >= 1");
}

const char* to_string(BracketKind kind) {
  switch (kind) {
    case BracketKind::moyal: return "moyal";
    case BracketKind::baker: return "baker";
    case BracketKind::poisson: return "poisson";
  }
  return "?";
}

PhaseSymbol star_product(const PhaseSymbol& a, const PhaseSymbol& b, const BracketConfig& cfg) {
  cfg.validate();
  return cfg.backend == StarBackend::series ? series_star(a, b, cfg) : spectral_star(a, b, cfg);
}

PhaseSymbol bracket(const PhaseSymbol& a, const PhaseSymbol& b, BracketKind kind, const BracketConfig& cfg) {
  cfg.validate();
  if (kind == BracketKind::poisson) return poisson(a, b);
  PhaseSymbol ab, ba;
  const PhaseSpaceGrid* g = common_grid(a, b);
  if (cfg.backend == StarBackend::series && !(a.poly && b.poly) && g) {
    DerivativeSource da(a, *g), db(b, *g);
    ab = series_star(da, db, *g, cfg);
    ba = series_star(db, da, *g, cfg);
  } else {
    ab = star_product(a, b, cfg);
    ba = star_product(b, a, cfg);
  }
  if (kind == BracketKind::moyal) {
    const cplx w = 1.0 / cplx(0.0, cfg.hbar);
    return combine(ab, ba, w, -w);
  }
  return combine(ab, ba, 0.5, 0.5);
}

double fit_power_law_exponent(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("fit: need at least two matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ClassicalLimitReport classical_limit_report(const PhasePolynomial& a, const PhasePolynomial& b,
                                            std::span<const double> hbar_values, double box, int samples) {
  if (samples < 1 || !(box > 0.0)) throw ConfigError("classical_limit_report: empty evaluation box");
  const PhaseSymbol sa = PhaseSymbol::polynomial(a), sb = PhaseSymbol::polynomial(b);
  auto max_on_box = [&](const PhasePolynomial& d) {
    double mx = 0.0;
    for (int i = -samples; i <= samples; ++i)
      for (int j = -samples; j <= samples; ++j)
        mx = std::max(mx, std::abs(d(box * i / samples, box * j / samples)));
    return mx;
  };
  const PhasePolynomial pb = *bracket(sa, sb, BracketKind::poisson, {}).poly;
  const PhasePolynomial prod = a * b;
  ClassicalLimitReport rep;
  std::vector<double> hs, mb, bb;
  for (double h : hbar_values) {
    BracketConfig cfg;
    cfg.hbar = h;
    cfg.series_order = series_extent(a.degree_x(), a.degree_p(), b.degree_x(), b.degree_p()) + 1;
    const PhaseSymbol m = bracket(sa, sb, BracketKind::moyal, cfg);
    const PhaseSymbol k = bracket(sa, sb, BracketKind::baker, cfg);
    ClassicalLimitRow row{h, max_on_box(*m.poly - pb), max_on_box(*k.poly - prod)};
    rep.rows.push_back(row);
    hs.push_back(h);
    mb.push_back(row.moyal_deviation);
    bb.push_back(row.baker_deviation);
  }
  rep.moyal_exponent = fit_power_law_exponent(hs, mb);
  rep.baker_exponent = fit_power_law_exponent(hs, bb);
  return rep;
}

MaskedField cev_momentum(const WignerField& F) {
  const RField rho = F.position_marginal();
  RField first(F.psgrid.xgrid);
  for (std::size_t i = 0; i < F.nx(); ++i) {
    double s = 0.0;
    for (std::size_t l = 0; l < F.np(); ++l) s += F.p(l) * F.at(i, l);
    first[i] = s * F.psgrid.pgrid.dx;
  }
  return masked_ratio(first, rho);
}

MaskedField cev_position(const CField& phi, double hbar) {
  MaskedField slope = bohm_momentum(polar_decompose(phi, hbar));
  for (auto& v : slope.field.values) v = -v;
  return slope;
}

MaskedField cev_position(const WignerField& F) {
  const RField rho = F.momentum_marginal();
  RField first(F.psgrid.pgrid);
  for (std::size_t i = 0; i < F.nx(); ++i)
    for (std::size_t l = 0; l < F.np(); ++l) first[l] += F.x(i) * F.at(i, l);
  for (auto& v : first.values) v *= F.psgrid.xgrid.dx;
  return masked_ratio(first, rho);
}

WeakValueField weak_value_momentum(const CField& psi, double hbar) {
  const PolarField pf = polar_decompose(psi, hbar);
  const CField d1 = differentiate(psi, 1);
  WeakValueField out{CField(psi.grid), pf.node_mask};
  for (std::size_t j = 0; j < psi.size(); ++j) {
    if (pf.node_mask[j]) continue;
    out.value[j] = cplx(0.0, -hbar) * d1[j] / psi[j];
  }
  return out;
}

AffineFlow quadratic_flow(const PhasePolynomial& H, double t) {
  if (H.total_degree() > 2) throw ConfigError("quadratic_flow: Hamiltonian degree exceeds 2");
  for (const auto& [e, c] : H.terms())
    if (std::abs(c.imag()) > 1e-14 * std::max(1.0, std::abs(c)))
      throw ConfigError("quadratic_flow: Hamiltonian must be real");
  const double alpha = 2.0 * H.coefficient(2, 0).real();
  const double beta = H.coefficient(1, 1).real();
  const double gamma = 2.0 * H.coefficient(0, 2).real();
  const double delta = H.coefficient(1, 0).real();
  const double eps = H.coefficient(0, 1).real();
  // z' = A z + c with A traceless, so A^2 = disc * I.
  const double A[2][2] = {{beta, gamma}, {-alpha, -beta}};
  const double c[2] = {eps, -delta};
  const double disc = beta * beta - alpha * gamma;
  double c0, c1, s0, s1;  // exp(At) = c0 I + c1 A; integral_0^t exp(As) ds = s0 I + s1 A
  if (disc < 0.0) {
    const double w = std::sqrt(-disc);
    c0 = std::cos(w * t);
    c1 = std::sin(w * t) / w;
    s0 = std::sin(w * t) / w;
    s1 = (1.0 - std::cos(w * t)) / (w * w);
  } else if (disc > 0.0) {
    const double w = std::sqrt(disc);
    c0 = std::cosh(w * t);
    c1 = std::sinh(w * t) / w;
    s0 = std::sinh(w * t) / w;
    s1 = (std::cosh(w * t) - 1.0) / (w * w);
  } else {
    c0 = 1.0;
    c1 = t;
    s0 = t;
    s1 = 0.5 * t * t;
  }
  AffineFlow f;
  for (int r = 0; r < 2; ++r)
    for (int q = 0; q < 2; ++q) f.m[r][q] = (r == q ? c0 : 0.0) + c1 * A[r][q];
  for (int r = 0; r < 2; ++r) f.d[r] = s0 * c[r] + s1 * (A[r][0] * c[0] + A[r][1] * c[1]);
  return f;
}

WignerField moyal_liouville_step(const WignerField& F, const PhaseSymbol& H, double dt, const BracketConfig& cfg) {
  cfg.validate();
  if (!(dt != 0.0) || !std::isfinite(dt)) throw ConfigError("moyal_liouville_step: dt must be finite and nonzero");
  const PhaseSpaceGrid& g = F.psgrid;

  if (H.poly && H.poly->total_degree() <= 2) {
    // F(z, t + dt) = F(Phi_{-dt}(z), t) with Phi_{-dt}(z) = M(-dt)(z - d(dt)).
    const AffineFlow fwd = quadratic_flow(*H.poly, dt);
    const AffineFlow back = quadratic_flow(*H.poly, -dt);
    WignerField out = F;
    pull_linear(out.values, g, back.m);
    const double dx = fwd.d[0], dp = fwd.d[1];
    pull_x(out.values, g, [dx](double) { return -dx; });
    pull_p(out.values, g, [dp](double) { return -dp; });
    return out;
  }

  if (H.sampled() && !(H.psgrid == g)) throw ConfigError("moyal_liouville_step: H lives on a different grid");
  // Classical speeds bound the stable RK4 step for spectral derivatives.
  PhaseSymbol Hs = H.sampled() ? H : (H.poly ? PhaseSymbol::polynomial(*H.poly, g) : H);
  if (!Hs.sampled()) throw ConfigError("moyal_liouville_step: H has no samples");
  const std::size_t nx = g.xgrid.n, np = g.pgrid.n;
  double vx = 0.0, vp = 0.0;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t l = 1; l + 1 < np; ++l)
      vx = std::max(vx, std::abs(Hs.at(i, l + 1) - Hs.at(i, l - 1)) / (2.0 * g.pgrid.dx));
  for (std::size_t i = 1; i + 1 < nx; ++i)
    for (std::size_t l = 0; l < np; ++l)
      vp = std::max(vp, std::abs(Hs.at(i + 1, l) - Hs.at(i - 1, l)) / (2.0 * g.xgrid.dx));
  const double courant = std::abs(dt) * pi * (vx / g.xgrid.dx + vp / g.pgrid.dx);
  if (courant >= 2.5)
    throw ConfigError("moyal_liouville_step: CFL guard violated (" + std::to_string(courant) + " >= 2.5)");

  auto rhs = [&](const std::vector<double>& f) {
    PhaseSymbol s(g);
    for (std::size_t k = 0; k < f.size(); ++k) s.values[k] = f[k];
    const PhaseSymbol mb = bracket(s, H, BracketKind::moyal, cfg);
    std::vector<double> out(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) out[k] = -mb.values[k].real();
    return out;
  };
  const std::vector<double>& f0 = F.values;
  auto axpy = [](const std::vector<double>& a, double s, const std::vector<double>& b) {
    std::vector<double> r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] + s * b[k];
    return r;
  };
  const auto k1 = rhs(f0);
  const auto k2 = rhs(axpy(f0, 0.5 * dt, k1));
  const auto k3 = rhs(axpy(f0, 0.5 * dt, k2));
  const auto k4 = rhs(axpy(f0, dt, k3));
  WignerField out = F;
  for (std::size_t k = 0; k < f0.size(); ++k) out.values[k] = f0[k] + dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
  return out;
}

PhaseSymbol energy_symbol(const Snapshot& snap, double dt, double hbar) {
  if (snap.prev.size() != snap.psi.size() || snap.next.size() != snap.psi.size())
    throw NumericError("energy_symbol: snapshot is missing its fine-step neighbours");
  CField dpsi(snap.psi.grid);
  for (std::size_t j = 0; j < dpsi.size(); ++j) dpsi[j] = (snap.next[j] - snap.prev[j]) / (2.0 * dt);
  const PhaseSymbol w1 = cross_wigner(snap.psi, dpsi, hbar);
  const PhaseSymbol w2 = cross_wigner(dpsi, snap.psi, hbar);
  PhaseSymbol out(w1.psgrid);
  const cplx c = cplx(0.0, -1.0) * (0.5 * hbar);
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = c * (w1.values[k] - w2.values[k]);
  return out;
}

PhaseSymbol baker_bracket_hamiltonian(const WignerField& F, const Potential& V, const Units& units) {
  const PhaseSpaceGrid& g = F.psgrid;
  const std::size_t nx = g.xgrid.n, np = g.pgrid.n;
  const double hbar = g.hbar;
  PhaseSymbol out(g);

  // Kinetic: T F - hbar^2/(8m) d_x^2 F.
  std::vector<cplx> fxx(F.values.begin(), F.values.end());
  fft_along_x(fxx, nx, np, false);
  for (std::size_t i = 0; i < nx; ++i) {
    const double k = axis_wavenumber(i, nx, x_period(g));
    for (std::size_t l = 0; l < np; ++l) fxx[i * np + l] *= -k * k / static_cast<double>(nx);
  }
  fft_along_x(fxx, nx, np, true);

  // Potential: symmetric Bopp shift in the variable conjugate to p.
  std::vector<cplx> fq(F.values.begin(), F.values.end());
  fft_along_p(fq, nx, np, false);
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = g.xgrid.x(i);
    for (std::size_t l = 0; l < np; ++l) {
      const double q = axis_wavenumber(l, np, p_period(g));
      const double a = 0.5 * hbar * q;
      fq[i * np + l] *= 0.5 * (V(x - a) + V(x + a)) / static_cast<double>(np);
    }
  }
  fft_along_p(fq, nx, np, true);

  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t l = 0; l < np; ++l) {
      const std::size_t k = i * np + l;
      const double p = g.pgrid.x(l);
      out.values[k] = p * p / (2.0 * units.mass) * F.values[k] - hbar * hbar / (8.0 * units.mass) * fxx[k] + fq[k];
    }
  return out;
}

double energy_symbol_residual(const EvolutionRecord& record, double t, const BracketConfig& cfg) {
  cfg.validate();
  if (std::abs(cfg.hbar - record.units.hbar) > 1e-15 * record.units.hbar)
    throw ConfigError("energy_symbol_residual: bracket hbar differs from the record");
  const Snapshot& snap = record.at(t);
  const PhaseSymbol E = energy_symbol(snap, record.dt, record.units.hbar);
  const WignerField F = wigner_transform(snap.psi, record.units.hbar);
  const PhaseSymbol bb = baker_bracket_hamiltonian(F, record.potential_model, record.units);
  double mx = 0.0;
  for (std::size_t k = 0; k < E.values.size(); ++k) mx = std::max(mx, std::abs(E.values[k] + bb.values[k]));
  return mx;
}

}  // namespace bohm
