#include "bohm/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bohm {
namespace {

// a (a-1) ... (a-k+1); zero when k > a.
double falling(int a, int k) {
  if (k > a) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= a - i;
  return r;
}

}  // namespace

PhasePolynomial PhasePolynomial::constant(cplx c) { return monomial(0, 0, c); }

PhasePolynomial PhasePolynomial::monomial(int a, int b, cplx c) {
  if (a < 0 || b < 0) throw ConfigError("polynomial exponents must be non-negative");
  PhasePolynomial out;
  out.add_term(a, b, c);
  return out;
}

cplx PhasePolynomial::coefficient(int a, int b) const {
  const auto it = terms_.find({a, b});
  return it == terms_.end() ? cplx{} : it->second;
}

void PhasePolynomial::add_term(int a, int b, cplx c) {
  if (c == cplx{}) return;
  auto& slot = terms_[{a, b}];
  slot += c;
  if (slot == cplx{}) terms_.erase({a, b});
}

int PhasePolynomial::degree_x() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first);
  return d;
}

int PhasePolynomial::degree_p() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.second);
  return d;
}

int PhasePolynomial::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
  return d;
}

cplx PhasePolynomial::operator()(double x, double p) const {
  cplx s{};
  for (const auto& [e, c] : terms_) s += c * std::pow(x, e.first) * std::pow(p, e.second);
  return s;
}

PhasePolynomial PhasePolynomial::derivative(int i, int j) const {
  PhasePolynomial out;
  for (const auto& [e, c] : terms_) {
    const double f = falling(e.first, i) * falling(e.second, j);
    if (f != 0.0) out.add_term(e.first - i, e.second - j, c * f);
  }
  return out;
}

PhasePolynomial PhasePolynomial::conj() const {
  PhasePolynomial out;
  for (const auto& [e, c] : terms_) out.terms_[e] = std::conj(c);
  return out;
}

PhasePolynomial& PhasePolynomial::operator+=(const PhasePolynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, c);
  return *this;
}

PhasePolynomial& PhasePolynomial::operator-=(const PhasePolynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, -c);
  return *this;
}

PhasePolynomial& PhasePolynomial::operator*=(cplx s) {
  for (auto& [e, c] : terms_) c *= s;
  prune();
  return *this;
}

PhasePolynomial operator*(const PhasePolynomial& a, const PhasePolynomial& b) {
  PhasePolynomial out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
  return out;
}

double max_coefficient_difference(const PhasePolynomial& a, const PhasePolynomial& b) {
  const PhasePolynomial d = a - b;
  double mx = 0.0;
  for (const auto& [e, c] : d.terms_) mx = std::max(mx, std::abs(c));
  return mx;
}

void PhasePolynomial::prune() {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == cplx{}; });
}

std::string PhasePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    if (e.first) os << " x^" << e.first;
    if (e.second) os << " p^" << e.second;
  }
  return os.str();
}

}  // namespace bohm
