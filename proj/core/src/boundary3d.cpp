#include "bcs/boundary3d.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bcs/parallel.hpp"

namespace bcs::boundary {
namespace {

constexpr double kPi = std::numbers::pi;
const double kJ3Zero = 2.0 / std::sqrt(2.0 * kPi);

quad::QuadSpec tight() {
  quad::QuadSpec s;
  s.abs_tol = 1e-14;
  s.rel_tol = 1e-13;
  return s;
}

// artanh(y)/y - 1 for 0 < y < 1, given y = x/u through x and s = u - x so
// that 1 - y keeps full precision near the logarithmic endpoint.
double artanh_ratio_minus_one(double x, double s) {
  const double u = x + s;
  const double y = x / u;
  if (y < 0.1) {
    const double y2 = y * y;
    double sum = 0.0, pw = y2;
    for (int k = 1; k < 40; ++k) {
      const double add = pw / (2.0 * k + 1.0);
      sum += add;
      if (add < 1e-18 * sum) break;
      pw *= y2;
    }
    return sum;
  }
  return 0.5 * std::log((2.0 * x + s) / s) / y - 1.0;
}

// int_0^Y (artanh t / t - 1) dt
double chi2_minus_identity(double Y) {
  if (Y < 0.6) {
    const double y2 = Y * Y;
    double sum = 0.0, pw = Y * y2;
    for (int k = 1; k < 200; ++k) {
      const double odd = 2.0 * k + 1.0;
      const double add = pw / (odd * odd);
      sum += add;
      if (add < 1e-18 * sum) break;
      pw *= y2;
    }
    return sum;
  }
  auto f = [](double t) {
    if (t < 1e-3) return t * t / 3.0 + t * t * t * t / 5.0;
    return std::atanh(t) / t - 1.0;
  };
  return quad::integrate_finite(f, 0.0, Y, tight()).require("t1 tail").value;
}

double t1(double x) {
  if (x == 0.0) return 2.0;
  const double fourpi = 4.0 / kPi;
  const double sx = std::sin(x);
  double value = fourpi * (0.5 * kPi - special::si(2.0 * x) + sx * sx / x);

  // Near part: u in [x, x + pi], with a logarithmic endpoint at u = x.
  auto near = [&](double s) {
    const double u = x + s;
    const double su = std::sin(u);
    return su * su / (u * u) * fourpi * artanh_ratio_minus_one(x, s);
  };
  value += quad::integrate_finite(near, 0.0, kPi, tight()).require("t1 near part").value;

  const double U = x + kPi;
  value += 2.0 / (kPi * x) * chi2_minus_identity(x / U);

  auto amplitude = [&](double u) { return fourpi * artanh_ratio_minus_one(x, u - x) / (u * u); };
  value -= 0.5 * quad::integrate_oscillatory_tail(amplitude, 2.0, U, quad::Trig::Cos, tight())
                     .require("t1 oscillatory tail")
                     .value;
  return value;
}

double j3_radial(double s, double mu) { return kJ3Zero * special::sinc(std::sqrt(mu) * s); }

}  // namespace

std::string to_string(BoundaryCondition bc) { return bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann"; }

BoundaryCondition parse_bc(const std::string& s) {
  if (s == "dirichlet" || s == "D") return BoundaryCondition::Dirichlet;
  if (s == "neumann" || s == "N") return BoundaryCondition::Neumann;
  throw std::invalid_argument("unknown boundary condition '" + s + "' (expected dirichlet or neumann)");
}

std::string to_string(Sign s) {
  switch (s) {
    case Sign::Positive: return "positive";
    case Sign::Negative: return "negative";
    default: return "inconclusive";
  }
}

double t_j(double x, int j) {
  if (!(x >= 0.0)) throw std::domain_error("t_j requires x >= 0");
  switch (j) {
    case 1: return t1(x);
    case 2: {
      if (x == 0.0) return 0.0;
      const double s = std::sin(x);
      return -2.0 / kPi * s * s / x;
    }
    case 3: {
      const double s = special::sinc(x);
      return -2.0 * s * s;
    }
    case 4: {
      if (x == 0.0) return 0.0;
      const double s = std::sin(x), c = std::cos(x);
      return 4.0 * s / (kPi * x * x) * (s * special::si(2.0 * x) - c * special::cin(2.0 * x));
    }
    default: throw std::invalid_argument("t_j index must be 1..4");
  }
}

double m3(double x, BoundaryCondition bc) {
  const double even = t_j(x, 1) + t_j(x, 2);
  const double odd = t_j(x, 3) + t_j(x, 4);
  return bc == BoundaryCondition::Dirichlet ? even + odd : even - odd;
}

double m3_scaled(double r, double mu, BoundaryCondition bc) {
  if (!(mu > 0.0)) throw std::domain_error("m3_scaled requires mu > 0");
  const double sm = std::sqrt(mu);
  return m3(sm * r, bc) / sm;
}

double line_integral_j3_sq(double rho, double mu) {
  if (!(mu > 0.0)) throw std::domain_error("line_integral_j3_sq requires mu > 0");
  const double k = std::sqrt(mu);
  const double Z = 4.0 * kPi / k;
  auto core = [&](double z) {
    const double j = j3_radial(std::sqrt(z * z + rho * rho), mu);
    return j * j;
  };
  quad::QuadSpec spec = tight();
  const double head = quad::integrate_finite(core, 0.0, Z, spec).require("j3 line integral").value;

  // Beyond z = Z switch to s = sqrt(z^2 + rho^2): sin^2 = (1 - cos 2ks)/2.
  const double S = std::sqrt(Z * Z + rho * rho);
  const double smooth = rho > 0.0 ? std::asin(rho / S) / rho : 1.0 / S;
  auto amplitude = [&](double s) { return 1.0 / (s * std::sqrt((s - rho) * (s + rho))); };
  const double osc =
      quad::integrate_oscillatory_tail(amplitude, 2.0 * k, S, quad::Trig::Cos, spec).require("j3 tail").value;
  const double tail = 2.0 / (kPi * mu) * 0.5 * (smooth - osc);
  return 2.0 * (head + tail);
}

double chi_integral(double r1, double rho, double mu, BoundaryCondition bc) {
  const double a = std::abs(r1);
  if (a == 0.0) return 0.0;
  const double jr = j3_radial(std::sqrt(r1 * r1 + rho * rho), mu);
  const double sg = bc == BoundaryCondition::Dirichlet ? -1.0 : 1.0;
  auto f = [&](double z) {
    const double v = j3_radial(std::sqrt(z * z + rho * rho), mu) + sg * jr;
    return v * v;
  };
  return 2.0 * quad::integrate_finite(f, 0.0, a, tight()).require("chi integral").value;
}

double mtilde_direct(const std::array<double, 3>& r, double mu, BoundaryCondition bc) {
  if (!(mu > 0.0)) throw std::domain_error("mtilde_direct requires mu > 0");
  const double rho = std::hypot(r[1], r[2]);
  const double R = std::hypot(r[0], rho);
  const double jr = j3_radial(R, mu);
  const double sg = bc == BoundaryCondition::Dirichlet ? -1.0 : 1.0;
  return line_integral_j3_sq(rho, mu) - chi_integral(r[0], rho, mu, bc) + sg * kPi / std::sqrt(mu) * jr * jr;
}

CriterionReport criterion(const RadialPotential& V, double mu, BoundaryCondition bc) {
  if (V.dim().value() != 3) throw std::invalid_argument("criterion requires a d = 3 potential");
  if (!(mu > 0.0)) throw std::domain_error("criterion requires mu > 0");
  CriterionReport rep;
  rep.mu = mu;
  rep.bc = bc;
  const double sm = std::sqrt(mu);
  const double pref = 4.0 * kPi / sm;
  const double sgn[4] = {1.0, 1.0, bc == BoundaryCondition::Dirichlet ? 1.0 : -1.0,
                         bc == BoundaryCondition::Dirichlet ? 1.0 : -1.0};
  double err = 0.0;
  for (int j = 1; j <= 4; ++j) {
    const auto r = radial_integral(V, [&](double x) { return t_j(sm * x, j) * x * x; }, 1e-11);
    r.require("criterion");
    rep.per_term[j - 1] = sgn[j - 1] * pref * r.value;
    err += pref * r.error_estimate;
  }
  const auto absv = radial_integral(V, [](double x) { return x * x; }, 1e-8);
  err += 1e-12 * pref * std::abs(absv.value);
  rep.value = rep.per_term[0] + rep.per_term[1] + rep.per_term[2] + rep.per_term[3];
  rep.error_estimate = err;
  if (rep.value > 3.0 * err)
    rep.sign = Sign::Positive;
  else if (rep.value < -3.0 * err)
    rep.sign = Sign::Negative;
  else
    rep.sign = Sign::Inconclusive;
  return rep;
}

std::vector<ProfileRow> m3_profile(double x_max, double step, BoundaryCondition bc, int threads) {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("m3_profile requires step > 0");
  if (!(x_max >= 0.0)) throw std::invalid_argument("m3_profile requires x_max >= 0");
  const auto n = static_cast<std::size_t>(std::floor(x_max / step + 1e-9)) + 1;
  std::vector<ProfileRow> rows(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const double x = static_cast<double>(i) * step;
    rows[i] = {x, m3(x, bc)};
  });
  return rows;
}

}  // namespace bcs::boundary
