#include "bcs/special.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bcs {

Dimension::Dimension(int d) : d_(d) {
  if (d < 1 || d > 3)
    throw std::invalid_argument("dimension must be 1, 2 or 3 (got " + std::to_string(d) + ")");
}

double sphere_area(Dimension d) {
  switch (d.value()) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    default: return 4.0 * std::numbers::pi;
  }
}

namespace special {
namespace {

// e^{ix} E1(ix) by the Lentz continued fraction; converges quickly for x > 2.
std::complex<double> scaled_e1_imag(double x) {
  using C = std::complex<double>;
  const double tiny = 1e-300;
  C b(1.0, x);
  C c(1.0 / tiny, 0.0);
  C d = 1.0 / b;
  C h = d;
  for (int i = 1; i < 100000; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const C del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
  }
  return h;
}

}  // namespace

double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

double bessel_j1(double x) {
  const double v = std::cyl_bessel_j(1.0, std::abs(x));
  return x < 0 ? -v : v;
}

double si(double x) {
  if (x < 0) return -si(-x);
  if (x <= 4.0) {
    const double x2 = x * x;
    double term = x;  // x^{2n+1}/(2n+1)!
    double sum = x;
    for (int n = 1; n < 60; ++n) {
      term *= -x2 / ((2.0 * n) * (2.0 * n + 1.0));
      const double add = term / (2.0 * n + 1.0);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  const std::complex<double> h = scaled_e1_imag(x) * std::complex<double>(std::cos(x), -std::sin(x));
  return 0.5 * std::numbers::pi + h.imag();
}

double cin(double x) {
  x = std::abs(x);
  if (x <= 4.0) {
    const double x2 = x * x;
    double term = 1.0;  // x^{2n}/(2n)!
    double sum = 0.0;
    for (int n = 1; n < 60; ++n) {
      term *= -x2 / ((2.0 * n - 1.0) * (2.0 * n));
      const double add = -term / (2.0 * n);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  const std::complex<double> h = scaled_e1_imag(x) * std::complex<double>(std::cos(x), -std::sin(x));
  const double ci = -h.real();
  return euler_gamma + std::log(x) - ci;
}

double arcoth(double k) {
  if (!(k > 1.0)) throw std::domain_error("arcoth requires k > 1");
  return 0.5 * std::log1p(2.0 / (k - 1.0));
}

double legendre(int l, double s) {
  if (l < 0) throw std::invalid_argument("legendre degree must be nonnegative");
  double p0 = 1.0, p1 = s;
  if (l == 0) return p0;
  for (int k = 2; k <= l; ++k) {
    const double p2 = ((2.0 * k - 1.0) * s * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  }
  return std::sin(x) / x;
}

double j_d(double r, double mu, Dimension d) {
  if (!(mu > 0.0)) throw std::domain_error("j_d requires mu > 0");
  const double k = std::sqrt(mu) * r;
  switch (d.value()) {
    case 1: return std::sqrt(2.0 / std::numbers::pi) * std::cos(k);
    case 2: return bessel_j0(k);
    default: return 2.0 / std::sqrt(2.0 * std::numbers::pi) * sinc(k);
  }
}

}  // namespace special
}  // namespace bcs
