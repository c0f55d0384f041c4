#include "bcs/diagnostics.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "bcs/kernels.hpp"

namespace bcs::diag {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTiny = std::numeric_limits<double>::min();

void require_dim(const RadialPotential& V, int d, const char* what) {
  if (V.dim().value() != d) throw std::invalid_argument(what);
}

// s +- (T/s) 2^k, the scales on which B_T(p,0) varies near the Fermi point.
std::vector<double> fermi_breaks(double s, double T, double upper) {
  std::vector<double> b;
  const double w = T / s;
  for (double off = w; off < s || s + off < upper; off *= 2.0) {
    if (s - off > 0.0) b.push_back(s - off);
    if (s + off < upper) b.push_back(s + off);
  }
  b.push_back(s);
  std::sort(b.begin(), b.end());
  return b;
}

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;

Spline tabulate(quad::FunctionRef f, double hi, int n) {
  std::vector<double> y(static_cast<std::size_t>(n) + 1);
  const double h = hi / n;
  for (int i = 0; i <= n; ++i) y[static_cast<std::size_t>(i)] = f(h * i);
  return Spline(y.begin(), y.end(), 0.0, h);
}

// Gauss nodes in y >= 0 for the inner quadratic form at fixed p1, where
// B_T depends on y^2 - c2.
void inner_nodes(double c2, double T, double ymax, double wcap, std::vector<double>& y, std::vector<double>& w,
                 std::vector<double>& e) {
  std::vector<double> br{0.0};
  double c = 0.0;
  if (c2 > 2.0 * T) {
    c = std::sqrt(c2);
    const double delta = T / (2.0 * c);
    std::vector<double> left, right;
    for (double off = delta; c - off > 0.0; off *= 2.0) left.push_back(c - off);
    for (double off = delta; c + off < ymax; off *= 2.0) right.push_back(c + off);
    br.insert(br.end(), left.rbegin(), left.rend());
    if (c < ymax) br.push_back(c);
    br.insert(br.end(), right.begin(), right.end());
  } else {
    const double d0 = 0.25 * std::sqrt(std::abs(c2) + T);
    for (double off = d0; off < ymax; off *= 2.0) br.push_back(off);
  }
  br.push_back(ymax);

  const auto& rule = quad::gauss_legendre(8);
  y.clear();
  w.clear();
  e.clear();
  for (std::size_t k = 0; k + 1 < br.size(); ++k) {
    const double a = br[k], b = br[k + 1];
    if (!(b > a)) continue;
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / wcap)));
    const double step = (b - a) / pieces;
    for (int m = 0; m < pieces; ++m) {
      const double lo = a + m * step;
      const double half = 0.5 * step;
      for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
        const double yy = lo + half * (1.0 + rule.nodes[g]);
        y.push_back(yy);
        w.push_back(half * rule.weights[g]);
        // y^2 - c2 without cancellation near the peak
        e.push_back(c > 0.0 ? (yy - c) * (yy + c) : yy * yy - c2);
      }
    }
  }
}

}  // namespace

double dt_form_d1(const RadialPotential& V, double T, double mu) {
  require_dim(V, 1, "dt_form_d1 requires a d = 1 potential");
  const KernelParams params(T, mu);
  if (V.is_zero()) return 0.0;
  const double s = std::sqrt(mu);
  const double norm = 1.0 / std::sqrt(2.0 * kPi);
  auto integrand = [&](double p) {
    const double f = norm * (fourier_hat(V, std::abs(p - s)) + fourier_hat(V, p + s));
    const double b = kernels::bt0_shifted((p - s) * (p + s), T);
    return b * b * f * f;
  };
  const double P = s + momentum_cutoff(V, 1e-9);
  quad::QuadSpec spec;
  spec.abs_tol = kTiny;
  spec.rel_tol = 1e-10;
  spec.singular_points = fermi_breaks(s, T, P);
  const double half = quad::integrate_finite(integrand, 0.0, P, spec).require("dt_form_d1").value;
  return fourier_hat(V, 0.0) * 2.0 * half;
}

double dt_form_d2(const RadialPotential& V, double T, double mu, bool swap_loops) {
  require_dim(V, 2, "dt_form_d2 requires a d = 2 potential");
  const KernelParams params(T, mu);
  if (V.is_zero()) return 0.0;
  const double s = std::sqrt(mu);
  const double P = s + momentum_cutoff(V, 1e-9);
  const double wcap = 0.5 / V.range();

  // (V j2)^(k) = int V(r) J0(sqrt(mu) r) J0(k r) r dr
  auto vj = [&](double k) {
    return radial_integral(V, [&](double r) { return special::bessel_j0(s * r) * special::bessel_j0(k * r) * r; },
                           1e-11)
        .require("dt_form_d2 transform")
        .value;
  };
  const Spline vj_spline = tabulate(vj, P, 4096);
  const bool tabulated = std::holds_alternative<Tabulated>(V.profile());
  std::optional<Spline> vhat_spline;
  if (tabulated) vhat_spline = tabulate([&](double k) { return fourier_hat(V, k); }, 2.0 * P, 4096);
  auto vhat = [&](double k) { return vhat_spline ? (*vhat_spline)(k) : fourier_hat(V, k); };

  std::vector<double> y, w, e, h;
  auto G = [&](double p1) {
    const double ymax2 = (P - p1) * (P + p1);
    if (!(ymax2 > 0.0)) return 0.0;
    inner_nodes((s - p1) * (s + p1), T, std::sqrt(ymax2), wcap, y, w, e);
    const std::size_t n = y.size();
    h.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      h[i] = vj_spline(std::hypot(p1, y[i])) * kernels::bt0_shifted(e[i], T) * w[i];
    // h is even in y, so the full-line form folds onto y >= 0.
    double acc = 0.0;
    if (!swap_loops) {
      for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += (vhat(std::abs(y[i] - y[j])) + vhat(y[i] + y[j])) * h[j];
        acc += h[i] * row;
      }
    } else {
      for (std::size_t j = n; j-- > 0;) {
        double col = 0.0;
        for (std::size_t i = n; i-- > 0;) col += h[i] * (vhat(std::abs(y[j] - y[i])) + vhat(y[j] + y[i]));
        acc += col * h[j];
      }
    }
    return 2.0 * acc;
  };

  quad::QuadSpec spec;
  spec.abs_tol = kTiny;
  spec.rel_tol = 1e-8;
  spec.singular_points = fermi_breaks(s, T, P);
  return 2.0 * quad::integrate_finite(G, 0.0, P, spec).require("dt_form_d2").value;
}

WeakCouplingTerms rhs_weak_coupling_d3(const RadialPotential& V, double mu, boundary::BoundaryCondition bc) {
  require_dim(V, 3, "rhs_weak_coupling_d3 requires a d = 3 potential");
  if (!(mu > 0.0)) throw std::domain_error("rhs_weak_coupling_d3 requires mu > 0");
  WeakCouplingTerms out;
  if (V.is_zero()) return out;

  const double rc = V.support_radius();
  const double sg = bc == boundary::BoundaryCondition::Dirichlet ? -1.0 : 1.0;
  const std::vector<double> vbreaks = V.breaks();
  const double scale = V.magnitude();

  quad::QuadSpec inner;
  inner.rel_tol = 1e-11;
  inner.abs_tol = 1e-15 * scale;
  quad::QuadSpec outer;
  outer.rel_tol = 1e-9;
  outer.abs_tol = 1e-13 * scale;

  // int_0^{sqrt(rc^2 - rho^2)} V(sqrt(r1^2 + rho^2)) g(r1) dr1
  auto along_axis = [&](double rho, auto&& g) {
    const double top = std::sqrt(std::max(0.0, (rc - rho) * (rc + rho)));
    if (!(top > 0.0)) return 0.0;
    quad::QuadSpec sp = inner;
    for (double b : vbreaks)
      if (b > rho) sp.singular_points.push_back(std::sqrt((b - rho) * (b + rho)));
    auto f = [&](double r1) { return V(std::hypot(r1, rho)) * g(r1); };
    return quad::integrate_finite(f, 0.0, top, sp).require("weak coupling axis integral").value;
  };

  auto line = [&](double rho) {
    const double W = 2.0 * along_axis(rho, [](double) { return 1.0; });
    return W == 0.0 ? 0.0 : rho * W * boundary::line_integral_j3_sq(rho, mu);
  };
  auto chi = [&](double rho) {
    return rho * 2.0 * along_axis(rho, [&](double r1) { return boundary::chi_integral(r1, rho, mu, bc); });
  };
  quad::QuadSpec os = outer;
  os.singular_points = vbreaks;
  out.line = 2.0 * kPi * quad::integrate_finite(line, 0.0, rc, os).require("weak coupling line term").value;
  out.chi = -2.0 * kPi * quad::integrate_finite(chi, 0.0, rc, os).require("weak coupling chi term").value;

  const double k = std::sqrt(mu);
  const double j0 = 2.0 / std::sqrt(2.0 * kPi);
  const double sphere_int = radial_integral(V, [&](double R) {
                              const double j = j0 * special::sinc(k * R);
                              return j * j * R * R;
                            }).require("weak coupling sphere term").value;
  out.sphere = sg * kPi / k * 4.0 * kPi * sphere_int;
  out.sum = out.line + out.chi + out.sphere;
  return out;
}

std::string to_string(GrowthModel m) { return m == GrowthModel::InverseT ? "inverse_T" : "log_cubed"; }

GrowthModel parse_growth_model(const std::string& s) {
  if (s == "inverse_T") return GrowthModel::InverseT;
  if (s == "log_cubed") return GrowthModel::LogCubed;
  throw std::invalid_argument("unknown growth model '" + s + "' (expected inverse_T or log_cubed)");
}

GrowthFit fit_growth(std::vector<GrowthSample> samples, GrowthModel model, double mu) {
  if (samples.size() < 3) throw std::invalid_argument("fit_growth needs at least 3 samples");
  for (const auto& smp : samples)
    if (!(smp.T > 0.0) || !std::isfinite(smp.value)) throw std::invalid_argument("fit_growth needs T > 0 and finite values");
  if (model == GrowthModel::LogCubed && !(mu > 0.0)) throw std::invalid_argument("log_cubed model needs mu > 0");
  std::sort(samples.begin(), samples.end(), [](const GrowthSample& a, const GrowthSample& b) { return a.T > b.T; });

  auto basis = [&](double T) {
    if (model == GrowthModel::InverseT) return 1.0 / T;
    const double L = std::log(mu / T);
    return L * L * L;
  };
  double num = 0.0, den = 0.0;
  for (const auto& smp : samples) {
    const double m = basis(smp.T);
    num += smp.value * m;
    den += m * m;
  }
  GrowthFit fit;
  fit.model = model;
  fit.fitted_constant = den > 0.0 ? num / den : 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double m = basis(samples[i].T);
    const double model_value = fit.fitted_constant * m;
    const double dev = model_value != 0.0 ? std::abs(samples[i].value - model_value) / std::abs(model_value)
                                          : (samples[i].value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    fit.max_relative_deviation = std::max(fit.max_relative_deviation, dev);
    const double normalized = samples[i].value / m;
    if (i > 0) fit.successive_ratios.push_back(prev != 0.0 ? normalized / prev : std::numeric_limits<double>::quiet_NaN());
    prev = normalized;
  }
  fit.samples = std::move(samples);
  return fit;
}

}  // namespace bcs::diag
