#pragma once

// Independent reference implementations. Nothing here calls into bohm::core
// beyond plain data types, so a bug in the library cannot cancel itself.

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// O(n^2) DFT, sign = -1 forward, +1 inverse, unnormalized.
inline std::vector<cplx> dft(const std::vector<cplx>& x, int sign) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<long double> acc = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      const long double a = sign * 2.0L * std::numbers::pi_v<long double> * static_cast<long double>((j * k) % n) /
                            static_cast<long double>(n);
      acc += std::complex<long double>(x[j]) * std::complex<long double>(std::cos(a), std::sin(a));
    }
    out[k] = cplx(acc);
  }
  return out;
}

// Polynomial in (x, p) as exponent map. Kept deliberately dumb.
using Poly = std::map<std::pair<int, int>, cplx>;

inline Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) out[{ea.first + eb.first, ea.second + eb.second}] += ca * cb;
  return out;
}

inline Poly deriv(const Poly& a, int i, int j) {
  Poly out;
  for (const auto& [e, c] : a) {
    if (e.first < i || e.second < j) continue;
    double f = 1.0;
    for (int k = 0; k < i; ++k) f *= e.first - k;
    for (int k = 0; k < j; ++k) f *= e.second - k;
    out[{e.first - i, e.second - j}] += c * f;
  }
  return out;
}

inline double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Moyal product from the textbook bidifferential sum
//   f*g = sum_n (i hbar/2)^n / n! sum_j C(n,j) (-1)^j (dx^{n-j} dp^j f)(dp^{n-j} dx^j g).
// Terminates for polynomials once n exceeds the degrees.
inline Poly star(const Poly& f, const Poly& g, double hbar) {
  int deg = 0;
  for (const auto& [e, c] : f) deg = std::max(deg, e.first + e.second);
  for (const auto& [e, c] : g) deg = std::max(deg, e.first + e.second);
  Poly out;
  cplx pre = 1.0;
  double fact = 1.0;
  for (int n = 0; n <= 2 * deg; ++n) {
    if (n > 0) {
      pre *= cplx(0.0, hbar / 2.0);
      fact *= n;
    }
    for (int j = 0; j <= n; ++j) {
      const Poly term = mul(deriv(f, n - j, j), deriv(g, j, n - j));
      const double s = binom(n, j) * ((j % 2) ? -1.0 : 1.0) / fact;
      for (const auto& [e, c] : term) out[e] += pre * s * c;
    }
  }
  return out;
}

inline double max_diff(const Poly& a, const Poly& b) {
  double m = 0.0;
  for (const auto& [e, c] : a) {
    auto it = b.find(e);
    m = std::max(m, std::abs(c - (it == b.end() ? cplx(0.0) : it->second)));
  }
  for (const auto& [e, c] : b)
    if (!a.count(e)) m = std::max(m, std::abs(c));
  return m;
}

// 2x2 complex matrices for the Pauli representation of Cl(3,0).
using Mat2 = std::array<cplx, 4>;  // row-major

inline Mat2 matmul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

inline Mat2 dagger(const Mat2& a) { return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}; }

inline Mat2 sigma(int i) {
  const cplx I(0.0, 1.0);
  if (i == 0) return {0.0, 1.0, 1.0, 0.0};
  if (i == 1) return {0.0, -I, I, 0.0};
  return {1.0, 0.0, 0.0, -1.0};
}

// Matrix of the basis blade with bitmask b (generators in increasing order).
inline Mat2 blade_matrix(unsigned b) {
  Mat2 m{1.0, 0.0, 0.0, 1.0};
  for (int i = 0; i < 3; ++i)
    if (b & (1u << i)) m = matmul(m, sigma(i));
  return m;
}

// coefficients indexed by blade bitmask 0..7
inline Mat2 to_matrix(const std::array<cplx, 8>& c) {
  Mat2 out{};
  for (unsigned b = 0; b < 8; ++b) {
    const Mat2 m = blade_matrix(b);
    for (int k = 0; k < 4; ++k) out[k] += c[b] * m[k];
  }
  return out;
}

inline double max_diff(const Mat2& a, const Mat2& b) {
  double m = 0.0;
  for (int k = 0; k < 4; ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

// Wigner function of (2 pi s^2)^{-1/4} exp(-(x-x0)^2/4s^2 + i p0 x/hbar).
inline double gaussian_wigner(double x, double p, double x0, double p0, double s, double hbar) {
  const double dx = x - x0, dp = p - p0;
  return std::exp(-dx * dx / (2 * s * s) - 2 * s * s * dp * dp / (hbar * hbar)) / (pi * hbar);
}

// Wigner function of N (g(x-a) + g(x+a)), g real Gaussian of width s.
inline double cat_wigner(double x, double p, double a, double s, double hbar) {
  const double overlap = std::exp(-a * a / (2 * s * s));  // <g(.-a)|g(.+a)>
  const double norm = 1.0 / (2.0 + 2.0 * overlap);
  const double cross = 2.0 * std::exp(-x * x / (2 * s * s) - 2 * s * s * p * p / (hbar * hbar)) *
                       std::cos(2.0 * p * a / hbar) / (pi * hbar);
  return norm * (gaussian_wigner(x, p, a, 0.0, s, hbar) + gaussian_wigner(x, p, -a, 0.0, s, hbar) + cross);
}

// Free Gaussian packet (same convention as gaussian_wigner) at time t.
inline cplx free_gaussian(double x, double t, double x0, double s, double p0, double hbar, double m) {
  const cplx a(1.0, hbar * t / (2 * m * s * s));
  const double v = p0 / m;
  const double d = x - x0 - v * t;
  return std::pow(2 * pi * s * s, -0.25) / std::sqrt(a) *
         std::exp(-d * d / (4 * s * s * a) + cplx(0.0, p0 * (x - 0.5 * v * t) / hbar));
}

inline double free_gaussian_width(double t, double s, double hbar, double m) {
  const double tau = hbar * t / (2 * m * s * s);
  return s * std::sqrt(1 + tau * tau);
}

// Bohm trajectories of that packet scale with the width about the drifting centre.
inline double free_gaussian_path(double x_init, double t, double x0, double s, double p0, double hbar, double m) {
  return x0 + p0 / m * t + (x_init - x0) * free_gaussian_width(t, s, hbar, m) / s;
}

}  // namespace oracle
