#include "bohm/clifford.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace bohm {

void CliffordSignature::validate() const {
  if (p < 0 || q < 0 || p + q > 4) throw ConfigError("clifford signature: need p, q >= 0 and p + q <= 4");
}

int blade_grade(Blade b) { return std::popcount(b); }

std::string blade_name(Blade b) {
  if (b == 0) return "1";
  std::string s = "e";
  for (int i = 0; i < 8; ++i)
    if (b & (1u << i)) s += std::to_string(i + 1);
  return s;
}

BladeProduct blade_product(Blade a, Blade b, const CliffordSignature& sig) {
  // Count transpositions needed to move every generator of b past the
  // higher generators of a.
  int swaps = 0;
  for (Blade t = a >> 1; t; t >>= 1) swaps += std::popcount(t & b);
  double sign = swaps % 2 ? -1.0 : 1.0;
  const Blade common = a & b;
  for (int i = 0; i < sig.dimension(); ++i)
    if (common & (1u << i)) sign *= sig.metric(i);
  return {sign, a ^ b};
}

Multivector::Multivector(const CliffordSignature& sig) : sig_(sig) { sig_.validate(); }

Multivector Multivector::scalar(const CliffordSignature& sig, cplx value) {
  Multivector m(sig);
  m.c_[0] = value;
  return m;
}

Multivector Multivector::generator(const CliffordSignature& sig, int index) {
  if (index < 0 || index >= sig.dimension()) throw ConfigError("clifford: generator index out of range");
  return blade(sig, 1u << index);
}

Multivector Multivector::blade(const CliffordSignature& sig, Blade b, cplx coef) {
  Multivector m(sig);
  if (b >= sig.blade_count()) throw ConfigError("clifford: blade outside the algebra");
  m.c_[b] = coef;
  return m;
}

Multivector& Multivector::operator+=(const Multivector& o) {
  if (!(sig_ == o.sig_)) throw ConfigError("clifford: signature mismatch");
  for (unsigned b = 0; b < kMaxBlades; ++b) c_[b] += o.c_[b];
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& o) {
  if (!(sig_ == o.sig_)) throw ConfigError("clifford: signature mismatch");
  for (unsigned b = 0; b < kMaxBlades; ++b) c_[b] -= o.c_[b];
  return *this;
}

Multivector& Multivector::operator*=(cplx s) {
  for (auto& v : c_) v *= s;
  return *this;
}

Multivector operator*(const Multivector& a, const Multivector& b) {
  if (!(a.sig_ == b.sig_)) throw ConfigError("clifford: signature mismatch");
  Multivector out(a.sig_);
  const unsigned nb = a.sig_.blade_count();
  for (Blade i = 0; i < nb; ++i) {
    if (a.c_[i] == cplx{}) continue;
    for (Blade j = 0; j < nb; ++j) {
      if (b.c_[j] == cplx{}) continue;
      const BladeProduct bp = blade_product(i, j, a.sig_);
      out.c_[bp.blade] += bp.sign * a.c_[i] * b.c_[j];
    }
  }
  return out;
}

Multivector Multivector::grade(int g) const {
  Multivector out(sig_);
  for (Blade b = 0; b < sig_.blade_count(); ++b)
    if (blade_grade(b) == g) out.c_[b] = c_[b];
  return out;
}

double Multivector::max_abs() const {
  double mx = 0.0;
  for (const auto& v : c_) mx = std::max(mx, std::abs(v));
  return mx;
}

Multivector geometric_product(const Multivector& a, const Multivector& b) { return a * b; }

Multivector reversion(const Multivector& a) {
  Multivector out = a;
  for (Blade b = 0; b < a.signature().blade_count(); ++b) {
    const int g = blade_grade(b);
    if ((g * (g - 1) / 2) % 2) out[b] = -out[b];
  }
  return out;
}

Multivector adjoint(const Multivector& a) {
  const CliffordSignature& sig = a.signature();
  Multivector out = reversion(a);
  const Blade negative = ((1u << sig.dimension()) - 1) & ~((1u << sig.p) - 1);
  for (Blade b = 0; b < sig.blade_count(); ++b) {
    out[b] = std::conj(out[b]);
    if (std::popcount(b & negative) % 2) out[b] = -out[b];
  }
  return out;
}

cplx scalar_part(const Multivector& a) { return a[0]; }

cplx trace_form(const Multivector& a) {
  const CliffordSignature& sig = a.signature();
  const cplx i(0.0, 1.0);
  if (sig == CliffordSignature::pauli()) return a[0] + i * a[7];
  if (sig == CliffordSignature::schrodinger()) return a[0] + i * a[1];
  return a[0];
}

double purity_check(const Multivector& rho) { return (rho * rho - rho).max_abs(); }

MultivectorField::MultivectorField(const CliffordSignature& s, const Grid1D& g)
    : sig(s), grid(g), coef(s.blade_count(), std::vector<double>(g.n, 0.0)) {
  sig.validate();
}

Multivector MultivectorField::at(std::size_t j) const {
  Multivector m(sig);
  for (Blade b = 0; b < sig.blade_count(); ++b) m[b] = coef[b][j];
  return m;
}

void MultivectorField::set(std::size_t j, const Multivector& m) {
  for (Blade b = 0; b < sig.blade_count(); ++b) coef[b][j] = m[b].real();
}

namespace {

void check_compatible(const MultivectorField& a, const MultivectorField& b) {
  if (!(a.sig == b.sig) || !(a.grid == b.grid)) throw ConfigError("multivector fields are incompatible");
}

}  // namespace

MultivectorField product(const MultivectorField& a, const MultivectorField& b) {
  check_compatible(a, b);
  MultivectorField out(a.sig, a.grid);
  const unsigned nb = a.sig.blade_count();
  for (Blade i = 0; i < nb; ++i)
    for (Blade k = 0; k < nb; ++k) {
      const BladeProduct bp = blade_product(i, k, a.sig);
      auto& dst = out.coef[bp.blade];
      const auto& x = a.coef[i];
      const auto& y = b.coef[k];
      for (std::size_t j = 0; j < a.size(); ++j) dst[j] += bp.sign * x[j] * y[j];
    }
  return out;
}

MultivectorField adjoint(const MultivectorField& a) {
  MultivectorField out = a;
  const Multivector probe = adjoint([&] {
    Multivector ones(a.sig);
    for (Blade b = 0; b < a.sig.blade_count(); ++b) ones[b] = 1.0;
    return ones;
  }());
  for (Blade b = 0; b < a.sig.blade_count(); ++b)
    if (probe[b].real() < 0.0)
      for (auto& v : out.coef[b]) v = -v;
  return out;
}

MultivectorField operator+(const MultivectorField& a, const MultivectorField& b) {
  check_compatible(a, b);
  MultivectorField out = a;
  for (Blade k = 0; k < a.sig.blade_count(); ++k)
    for (std::size_t j = 0; j < a.size(); ++j) out.coef[k][j] += b.coef[k][j];
  return out;
}

MultivectorField operator-(const MultivectorField& a, const MultivectorField& b) {
  check_compatible(a, b);
  MultivectorField out = a;
  for (Blade k = 0; k < a.sig.blade_count(); ++k)
    for (std::size_t j = 0; j < a.size(); ++j) out.coef[k][j] -= b.coef[k][j];
  return out;
}

MultivectorField scaled(const MultivectorField& a, double s) {
  MultivectorField out = a;
  for (auto& c : out.coef)
    for (auto& v : c) v *= s;
  return out;
}

MultivectorField differentiate(const MultivectorField& a, int order) {
  // The derivative operator is real, so blades 2m and 2m+1 share one complex
  // transform. Under the Schrodinger embedding that pair is (Re psi, Im psi),
  // which keeps the roundoff identical to differentiating psi itself.
  MultivectorField out(a.sig, a.grid);
  const std::vector<double> none(a.size(), 0.0);
  for (Blade k = 0; k < a.sig.blade_count(); k += 2) {
    const bool paired = k + 1 < a.sig.blade_count();  // Cl(0,0) has one blade
    const auto& re = a.coef[k];
    const auto& im = paired ? a.coef[k + 1] : none;
    const auto nz = [](double v) { return v != 0.0; };
    if (std::none_of(re.begin(), re.end(), nz) && std::none_of(im.begin(), im.end(), nz)) continue;
    CField z(a.grid);
    for (std::size_t j = 0; j < a.size(); ++j) z[j] = cplx(re[j], im[j]);
    const CField dz = differentiate(z, order);
    for (std::size_t j = 0; j < a.size(); ++j) {
      out.coef[k][j] = dz[j].real();
      if (paired) out.coef[k + 1][j] = dz[j].imag();
    }
  }
  return out;
}

}  // namespace bohm
