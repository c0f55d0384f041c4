#include "bcs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "bcs/quad.hpp"

namespace bcs {

KernelParams::KernelParams(double T, double mu) : T_(T), mu_(mu) {
  if (!std::isfinite(T) || !(T > 0.0)) throw std::domain_error("temperature T must be positive");
  if (!std::isfinite(mu) || !(mu > 0.0)) throw std::domain_error("chemical potential mu must be positive");
}

namespace kernels {
namespace {

constexpr double kLn2 = std::numbers::ln2;

double log_cosh(double x) {
  const double ax = std::abs(x);
  if (ax < 20.0) return std::log(std::cosh(ax));
  return ax - kLn2 + std::log1p(std::exp(-2.0 * ax));
}

// log(sinh s / s), even in s
double log_sinhc(double s) {
  const double as = std::abs(s);
  if (as < 1e-4) {
    const double s2 = as * as;
    return s2 / 6.0 - s2 * s2 / 180.0;
  }
  if (as < 20.0) return std::log(std::sinh(as) / as);
  return as - kLn2 + std::log1p(-std::exp(-2.0 * as)) - std::log(as);
}

// (x+y)/(tanh x + tanh y), the kernel in units of 2T.
double reduced_kernel(double x, double y) {
  const double s = x + y;
  if (x * y >= 0.0 && std::abs(s) >= 1e-4) return s / (std::tanh(x) + std::tanh(y));
  return std::exp(log_cosh(x) + log_cosh(y) - log_sinhc(s));
}

}  // namespace

double kt(double a, double b, const KernelParams& params) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::domain_error("kt requires finite arguments");
  const double two_t = 2.0 * params.T();
  return two_t * reduced_kernel(a / two_t, b / two_t);
}

double bt(double psq, double qsq, double pq_dot, const KernelParams& params) {
  if (!(psq >= 0.0) || !(qsq >= 0.0) || !std::isfinite(pq_dot))
    throw std::domain_error("bt requires |p|^2, |q|^2 >= 0");
  if (pq_dot * pq_dot > psq * qsq * (1.0 + 1e-12) + 1e-300)
    throw std::domain_error("bt: p.q violates Cauchy-Schwarz");
  const double sum = psq + qsq - params.mu();
  const double k = kt(sum + 2.0 * pq_dot, sum - 2.0 * pq_dot, params);
  return 1.0 / k;
}

double bt0_shifted(double e, double T) {
  const double x = e / (2.0 * T);
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return (1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0) / (2.0 * T);
  }
  return std::tanh(x) / e;
}

double m_mu(const KernelParams& params, Dimension d) {
  const double mu = params.mu(), T = params.T();
  const double s = std::sqrt(mu);
  const double top = std::sqrt(2.0 * mu);
  const int p = d.value() - 1;
  quad::QuadSpec spec;
  spec.rel_tol = 1e-12;
  spec.abs_tol = 1e-14 * std::pow(mu, 0.5 * d.value() - 1.0);
  // Integrate in u = t - sqrt(mu): for tiny T the peak is narrower than the
  // spacing of doubles near sqrt(mu).
  spec.singular_points.push_back(0.0);
  for (double off = T / s; off < s; off *= 2.0) {
    spec.singular_points.push_back(-off);
    spec.singular_points.push_back(off);
  }
  auto f = [&](double u) { return bt0_shifted(u * (2.0 * s + u), T) * std::pow(s + u, p); };
  return quad::integrate_finite(f, -s, top - s, spec).require("m_mu").value;
}

bool check_tanh_inequality(double x, double y) {
  auto phi = [](double z) {
    if (std::abs(z) < 1e-4) return 1.0 + z * z / 3.0;
    return z / std::tanh(z);
  };
  const double lhs = reduced_kernel(x, y);
  const double rhs = 0.5 * (phi(x) + phi(y));
  return lhs >= rhs - 1e-12 * std::max(1.0, std::abs(rhs));
}

SandwichFit fit_sandwich_constants(double T0, double mu, int samples, unsigned seed) {
  if (samples < 1) throw std::invalid_argument("fit_sandwich_constants needs samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mom(0.0, 3.0 * std::sqrt(mu));
  std::uniform_real_distribution<double> temp(T0, 10.0 * T0);
  double c1 = std::numeric_limits<double>::infinity();
  double c2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double p = mom(rng), q = mom(rng);
    const KernelParams kp(temp(rng), mu);
    const double k = kt(p * p - mu, q * q - mu, kp);
    c1 = std::min(c1, k / (kp.T() + p * p + q * q));
    c2 = std::max(c2, k / (p * p + q * q + 1.0));
  }
  return {c1, c2};
}

}  // namespace kernels
}  // namespace bcs
