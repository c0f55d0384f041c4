#include "bcs/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bcs {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2OverPi = std::sqrt(2.0 / kPi);

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// (sin x - x cos x) / x^3
double sphere_ball_factor(double x) {
  if (std::abs(x) < 0.5) {
    const double x2 = x * x;
    double sum = 0.0, pow = 1.0, fact = 6.0;  // (2n+1)! starting at n = 1
    for (int n = 1; n <= 12; ++n) {
      const double term = 2.0 * n * pow / fact;
      sum += (n % 2 == 1) ? term : -term;
      pow *= x2;
      fact *= (2.0 * n + 2.0) * (2.0 * n + 3.0);
    }
    return sum;
  }
  return (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

void require_finite_positive(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) throw std::invalid_argument(what);
}

}  // namespace

Tabulated::Tabulated(std::vector<double> r, std::vector<double> v) : r_(std::move(r)), v_(std::move(v)) {
  if (r_.size() != v_.size() || r_.size() < 2)
    throw std::invalid_argument("tabulated potential needs at least two (r, v) samples");
  if (r_.front() != 0.0) throw std::invalid_argument("tabulated potential must start at r = 0");
  for (std::size_t i = 0; i + 1 < r_.size(); ++i)
    if (!(r_[i + 1] > r_[i])) throw std::invalid_argument("tabulated radii must be strictly increasing");
  double vmax = 0.0;
  for (double x : v_) {
    if (!std::isfinite(x)) throw std::invalid_argument("tabulated values must be finite");
    vmax = std::max(vmax, std::abs(x));
  }
  if (std::abs(v_.back()) > 1e-12 * vmax)
    throw std::invalid_argument("tabulated potential must decay below 1e-12 max|V| at its last node");

  const std::size_t n = r_.size();
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = r_[i + 1] - r_[i];
    delta[i] = (v_[i + 1] - v_[i]) / h[i];
  }
  slope_.assign(n, 0.0);
  slope_[0] = delta[0];
  slope_[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) continue;
    // weighted harmonic mean keeps each cubic piece monotone
    const double w1 = 2.0 * h[i] + h[i - 1];
    const double w2 = h[i] + 2.0 * h[i - 1];
    slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) {
      slope_[i] = slope_[i + 1] = 0.0;
      continue;
    }
    const double al = slope_[i] / delta[i], be = slope_[i + 1] / delta[i];
    if (al < 0.0) slope_[i] = 0.0;
    if (be < 0.0) slope_[i + 1] = 0.0;
    const double s = al * al + be * be;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      slope_[i] = tau * al * delta[i];
      slope_[i + 1] = tau * be * delta[i];
    }
  }
}

double Tabulated::eval(double r) const {
  if (r < 0.0 || r > r_.back()) return 0.0;
  auto it = std::upper_bound(r_.begin(), r_.end(), r);
  std::size_t i = it == r_.begin() ? 0 : static_cast<std::size_t>(it - r_.begin()) - 1;
  if (i >= r_.size() - 1) i = r_.size() - 2;
  const double h = r_[i + 1] - r_[i];
  const double t = (r - r_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * v_[i] + (t3 - 2 * t2 + t) * h * slope_[i] +
         (-2 * t3 + 3 * t2) * v_[i + 1] + (t3 - t2) * h * slope_[i + 1];
}

RadialPotential::RadialPotential(Profile profile, Dimension dim) : profile_(std::move(profile)), dim_(dim) {
  std::visit(Overloaded{
                 [](const Gaussian& g) {
                   require_finite_positive(g.ell, "gaussian length must be positive");
                   if (!std::isfinite(g.a)) throw std::invalid_argument("amplitude must be finite");
                 },
                 [](const Exponential& e) {
                   require_finite_positive(e.ell, "exponential length must be positive");
                   if (!std::isfinite(e.a)) throw std::invalid_argument("amplitude must be finite");
                 },
                 [](const StepWell& s) {
                   require_finite_positive(s.R, "step-well radius must be positive");
                   if (!std::isfinite(s.a)) throw std::invalid_argument("amplitude must be finite");
                 },
                 [](const Tabulated&) {},
             },
             profile_);
}

double RadialPotential::operator()(double r) const {
  return std::visit(Overloaded{
                        [r](const Gaussian& g) { return g.a * std::exp(-(r * r) / (g.ell * g.ell)); },
                        [r](const Exponential& e) { return e.a * std::exp(-r / e.ell); },
                        [r](const StepWell& s) { return r < s.R ? s.a : 0.0; },
                        [r](const Tabulated& t) { return t.eval(r); },
                    },
                    profile_);
}

double RadialPotential::support_radius() const {
  return std::visit(Overloaded{
                        [](const Gaussian& g) { return 7.5 * g.ell; },
                        [](const Exponential& e) { return 60.0 * e.ell; },
                        [](const StepWell& s) { return s.R; },
                        [](const Tabulated& t) { return t.r().back(); },
                    },
                    profile_);
}

std::vector<double> RadialPotential::breaks() const {
  if (const auto* t = std::get_if<Tabulated>(&profile_))
    return {t->r().begin() + 1, t->r().end() - 1};
  return {};
}

double RadialPotential::range() const {
  return std::visit(Overloaded{
                        [](const Gaussian& g) { return g.ell; },
                        [](const Exponential& e) { return e.ell; },
                        [](const StepWell& s) { return s.R; },
                        [](const Tabulated& t) { return t.r().back() / 4.0; },
                    },
                    profile_);
}

double RadialPotential::magnitude() const {
  double amp = std::visit(Overloaded{
                              [](const Gaussian& g) { return std::abs(g.a); },
                              [](const Exponential& e) { return std::abs(e.a); },
                              [](const StepWell& s) { return std::abs(s.a); },
                              [](const Tabulated& t) {
                                double m = 0.0;
                                for (double x : t.v()) m = std::max(m, std::abs(x));
                                return m;
                              },
                          },
                          profile_);
  return amp * std::pow(range(), dim_.value());
}

bool RadialPotential::nonnegative() const {
  return std::visit(Overloaded{
                        [](const Gaussian& g) { return g.a >= 0.0; },
                        [](const Exponential& e) { return e.a >= 0.0; },
                        [](const StepWell& s) { return s.a >= 0.0; },
                        [](const Tabulated& t) {
                          return std::all_of(t.v().begin(), t.v().end(), [](double x) { return x >= 0.0; });
                        },
                    },
                    profile_);
}

bool RadialPotential::is_zero() const { return magnitude() == 0.0; }

PointValue v_of_r(const RadialPotential& V, double r) {
  if (!(r >= 0.0)) throw std::domain_error("v_of_r requires r >= 0");
  if (const auto* t = std::get_if<Tabulated>(&V.profile()); t && r > t->r().back()) return {0.0, true};
  return {V(r), false};
}

quad::QuadResult radial_integral(const RadialPotential& V, quad::FunctionRef g, double rel_tol) {
  const double rc = V.support_radius();
  auto integrand = [&](double r) { return V(r) * g(r); };
  std::vector<double> coarse_breaks;
  for (int i = 0; i <= 16; ++i) coarse_breaks.push_back(rc * i / 16.0);
  auto absval = [&](double r) { return std::abs(integrand(r)); };
  const double scale = quad::integrate_panels(absval, coarse_breaks, 16);
  if (scale == 0.0) return {0.0, 0.0, 16 * 16, true};
  quad::QuadSpec spec;
  spec.rel_tol = rel_tol;
  spec.abs_tol = rel_tol * 1e-2 * scale;
  spec.singular_points = V.breaks();
  return quad::integrate_finite(integrand, 0.0, rc, spec);
}

double fourier_hat(const RadialPotential& V, double k) {
  if (!(k >= 0.0)) throw std::domain_error("fourier_hat requires k >= 0");
  const int d = V.dim().value();
  return std::visit(
      Overloaded{
          [&](const Gaussian& g) {
            const double l2 = g.ell * g.ell;
            return g.a * std::pow(0.5 * l2, 0.5 * d) * std::exp(-0.25 * k * k * l2);
          },
          [&](const Exponential& e) {
            const double q = 1.0 + k * k * e.ell * e.ell;
            switch (d) {
              case 1: return e.a * kSqrt2OverPi * e.ell / q;
              case 2: return e.a * e.ell * e.ell / (q * std::sqrt(q));
              default: return e.a * 2.0 * kSqrt2OverPi * e.ell * e.ell * e.ell / (q * q);
            }
          },
          [&](const StepWell& s) {
            const double x = k * s.R;
            switch (d) {
              case 1: return s.a * kSqrt2OverPi * s.R * special::sinc(x);
              case 2: {
                if (x < 1e-4) return s.a * 0.5 * s.R * s.R * (1.0 - x * x / 8.0);
                return s.a * s.R * special::bessel_j1(x) / k;
              }
              default: return s.a * kSqrt2OverPi * s.R * s.R * s.R * sphere_ball_factor(x);
            }
          },
          [&](const Tabulated&) {
            quad::QuadResult r;
            switch (d) {
              case 1:
                r = radial_integral(V, [k](double x) { return std::cos(k * x); });
                return kSqrt2OverPi * r.require("fourier_hat").value;
              case 2:
                r = radial_integral(V, [k](double x) { return special::bessel_j0(k * x) * x; });
                return r.require("fourier_hat").value;
              default:
                r = radial_integral(V, [k](double x) { return special::sinc(k * x) * x * x; });
                return kSqrt2OverPi * r.require("fourier_hat").value;
            }
          },
      },
      V.profile());
}

double momentum_cutoff(const RadialPotential& V, double rel) {
  const double ell = V.range();
  const double v0 = std::abs(fourier_hat(V, 0.0));
  if (v0 == 0.0) return 4.0 / ell;
  double k = 1.0 / ell;
  for (int it = 0; it < 12; ++it, k *= 2.0) {
    double worst = 0.0;
    for (int j = 0; j <= 32; ++j) worst = std::max(worst, std::abs(fourier_hat(V, k * (1.0 + 3.0 * j / 32.0))));
    if (worst <= rel * v0) return k;
  }
  return k;
}

double moment(const RadialPotential& V, int n) {
  if (n < 0) throw std::invalid_argument("moment order must be nonnegative");
  const int p = n + V.dim().value() - 1;
  const auto r = radial_integral(V, [p](double x) { return std::pow(x, p); });
  return sphere_area(V.dim()) * r.require("moment").value;
}

double e_mu(const RadialPotential& V, double mu) {
  if (!(mu > 0.0)) throw std::domain_error("e_mu requires mu > 0");
  const Dimension dim = V.dim();
  const int p = dim.value() - 1;
  const auto r = radial_integral(V, [&](double x) {
    const double j = special::j_d(x, mu, dim);
    return j * j * std::pow(x, p);
  });
  return r.require("e_mu").value;
}

std::vector<double> vmu_spectrum(const RadialPotential& V, double mu, int l_max) {
  if (!(mu > 0.0)) throw std::domain_error("vmu_spectrum requires mu > 0");
  if (l_max < 0) throw std::invalid_argument("l_max must be nonnegative");
  const int d = V.dim().value();
  if (d == 1) throw std::invalid_argument("vmu_spectrum: unsupported dimension d = 1");
  std::vector<double> out;
  if (V.is_zero()) return std::vector<double>(static_cast<std::size_t>(l_max) + 1, 0.0);
  const double sm = std::sqrt(mu);
  const double scale = std::abs(fourier_hat(V, 0.0)) + 1e-300;
  quad::QuadSpec spec;
  spec.abs_tol = 1e-14 * scale;
  spec.rel_tol = 1e-12;
  for (int l = 0; l <= l_max; ++l) {
    quad::QuadResult r;
    if (d == 2) {
      r = quad::integrate_finite(
          [&](double th) { return fourier_hat(V, 2.0 * sm * std::sin(0.5 * th)) * std::cos(l * th); }, 0.0,
          kPi, spec);
      out.push_back(r.require("vmu_spectrum").value / kPi);
    } else {
      r = quad::integrate_finite(
          [&](double s) {
            return fourier_hat(V, std::sqrt(std::max(0.0, 2.0 * mu * (1.0 - s)))) * special::legendre(l, s);
          },
          -1.0, 1.0, spec);
      out.push_back(r.require("vmu_spectrum").value / std::sqrt(2.0 * kPi));
    }
  }
  return out;
}

}  // namespace bcs
