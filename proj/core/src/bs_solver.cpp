#include "bcs/bs_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bcs::bs {
namespace {

constexpr double kPi = std::numbers::pi;

void append_side(std::vector<double>& bounds, double limit, double h0, double wcap, double far,
                 bool grow_far) {
  double b = 0.0;
  while (b < limit) {
    double w = std::min(std::max(h0, b), wcap);
    if (grow_far && b > far) w = std::max(wcap, 0.25 * b);
    double nb = b + w;
    if (nb >= limit || limit - nb < 0.3 * w) nb = limit;
    bounds.push_back(nb);
    b = nb;
  }
}

Eigen::Map<const Eigen::MatrixXd> as_eigen(const SymMatrix& S) {
  return {S.data.data(), static_cast<Eigen::Index>(S.n), static_cast<Eigen::Index>(S.n)};
}

SymMatrix scale_block(const SymMatrix& M, const SWaveDiscretization& grid, double T) {
  SymMatrix S{M.n, std::vector<double>(M.data.size())};
  std::vector<double> root_b(M.n);
  for (std::size_t i = 0; i < M.n; ++i) root_b[i] = std::sqrt(kernels::bt0_shifted(grid.shifted_energy(i), T));
  for (std::size_t i = 0; i < M.n; ++i)
    for (std::size_t j = 0; j < M.n; ++j) S(i, j) = M(i, j) * (root_b[i] * root_b[j]);
  return S;
}

double top_only(const SymMatrix& S) {
  if (S.n == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(as_eigen(S), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("symmetric eigen-solver did not converge");
  return es.eigenvalues()(static_cast<Eigen::Index>(S.n) - 1);
}

void require_solver_potential(const RadialPotential& V) {
  if (!V.nonnegative()) throw std::invalid_argument("solver requires V >= 0");
}

}  // namespace

double SWaveDiscretization::shifted_energy(std::size_t i) const {
  const double o = offsets[i];
  return o * (2.0 * sqrt_mu + o);
}

SWaveDiscretization make_grid(const RadialPotential& V, double mu, double refinement_scale, int level, int order) {
  if (!(mu > 0.0)) throw std::domain_error("make_grid requires mu > 0");
  if (!(refinement_scale > 0.0)) throw std::domain_error("make_grid requires a positive refinement scale");
  if (level < 0 || level > 6) throw std::invalid_argument("grid level out of range");
  const double s = std::sqrt(mu);
  const double ell = V.range();
  const double wcap = 0.5 / ell;
  const double h0 = std::min(refinement_scale, 0.25 * s);
  const double p_max = std::max(4.0 * std::sqrt(2.0 * mu), s + momentum_cutoff(V, 1e-10));

  std::vector<double> left{0.0}, right{0.0};
  append_side(left, s, h0, wcap, 0.0, false);
  append_side(right, p_max - s, h0, wcap, s + 4.0 / ell, true);

  // offsets of panel boundaries, ascending
  std::vector<double> bounds;
  for (auto it = left.rbegin(); it != left.rend(); ++it) bounds.push_back(-*it);
  for (std::size_t i = 1; i < right.size(); ++i) bounds.push_back(right[i]);

  SWaveDiscretization g;
  g.sqrt_mu = s;
  g.p_max = s + right.back();
  g.refinement_scale = h0 / std::ldexp(1.0, level);
  g.order = order;
  g.level = level;
  const quad::GaussRule& rule = quad::gauss_legendre(order);
  const int sub = 1 << level;
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    const double width = (bounds[k + 1] - bounds[k]) / sub;
    for (int m = 0; m < sub; ++m) {
      const double lo = bounds[k] + m * width;
      for (int j = 0; j < order; ++j) {
        const double o = lo + 0.5 * width * (rule.nodes[j] + 1.0);
        g.offsets.push_back(o);
        g.nodes.push_back(s + o);
        g.weights.push_back(0.5 * width * rule.weights[j]);
      }
    }
  }
  return g;
}

SWaveDiscretization grid_for(const RadialPotential& V, const KernelParams& params, int level) {
  const double h0 = std::min(params.T(), 1e-3 * params.mu()) / std::sqrt(params.mu());
  return make_grid(V, params.mu(), h0, level);
}

double angular_average_vhat(const RadialPotential& V, double p, double q) {
  if (!(p >= 0.0) || !(q >= 0.0)) throw std::domain_error("angular_average_vhat requires p, q >= 0");
  const int d = V.dim().value();
  const double inv_root = 1.0 / std::sqrt(2.0 * kPi);
  if (d == 1) return inv_root * (fourier_hat(V, std::abs(p - q)) + fourier_hat(V, p + q));

  const double dpq = (p - q) * (p - q);
  const double pq = p * q;
  if (pq == 0.0) {
    const double v = fourier_hat(V, std::max(p, q));
    return d == 3 ? 2.0 * inv_root * v : v;
  }
  if (d == 3) {
    if (const auto* g = std::get_if<Gaussian>(&V.profile())) {
      const double alpha = 0.25 * g->ell * g->ell;
      const double c = g->a * std::pow(0.5 * g->ell * g->ell, 1.5);
      const double x = 4.0 * alpha * pq;
      const double ratio = x < 1e-8 ? 2.0 * (1.0 - 0.5 * x) : -std::expm1(-x) / (2.0 * alpha * pq);
      return inv_root * c * std::exp(-alpha * dpq) * ratio;
    }
  }
  const double scale = std::abs(fourier_hat(V, 0.0)) + std::abs(fourier_hat(V, std::abs(p - q)));
  quad::QuadSpec spec;
  spec.abs_tol = 1e-15 * scale + 1e-300;
  spec.rel_tol = 1e-13;
  if (d == 3) {
    auto f = [&](double u) { return fourier_hat(V, std::sqrt(dpq + 2.0 * pq * u)); };  // u = 1 - s
    return inv_root * quad::integrate_finite(f, 0.0, 2.0, spec).require("angular_average_vhat").value;
  }
  auto f = [&](double th) {
    const double sh = std::sin(0.5 * th);
    return fourier_hat(V, std::sqrt(dpq + 4.0 * pq * sh * sh));
  };
  return quad::integrate_finite(f, 0.0, kPi, spec).require("angular_average_vhat").value / kPi;
}

SymMatrix build_potential_block(const RadialPotential& V, const SWaveDiscretization& grid) {
  require_solver_potential(V);
  const std::size_t n = grid.size();
  const double half = 0.5 * (V.dim().value() - 1);
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = std::sqrt(grid.weights[i]) * std::pow(grid.nodes[i], half);
  SymMatrix M{n, std::vector<double>(n * n, 0.0)};
  if (V.is_zero()) return M;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = f[i] * f[j] * angular_average_vhat(V, grid.nodes[i], grid.nodes[j]);
      M(i, j) = v;
      M(j, i) = v;
    }
  return M;
}

SymMatrix build_matrix(const RadialPotential& V, const KernelParams& params, const SWaveDiscretization& grid) {
  require_solver_potential(V);
  const double allowed = params.T() / std::sqrt(params.mu());
  if (grid.refinement_scale > allowed * (1.0 + 1e-12))
    throw std::invalid_argument("grid refinement scale exceeds T/sqrt(mu)");
  return scale_block(build_potential_block(V, grid), grid, params.T());
}

SpectralResult top_eigenvalue(const SymMatrix& S) {
  SpectralResult r;
  if (S.n == 0) throw std::invalid_argument("top_eigenvalue of an empty matrix");
  const auto A = as_eigen(S);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw std::runtime_error("symmetric eigen-solver did not converge");
  const Eigen::Index last = static_cast<Eigen::Index>(S.n) - 1;
  r.top_eigenvalue = es.eigenvalues()(last);
  r.second_eigenvalue = S.n > 1 ? es.eigenvalues()(last - 1) : -std::numeric_limits<double>::infinity();
  Eigen::VectorXd u = es.eigenvectors().col(last);
  if (u.sum() < 0.0) u = -u;
  r.residual = (A * u - r.top_eigenvalue * u).norm() / u.norm();
  r.eigenvector.assign(u.data(), u.data() + u.size());
  return r;
}

double a_t0(const RadialPotential& V, const KernelParams& params, double accuracy) {
  require_solver_potential(V);
  if (V.is_zero()) return 0.0;
  double prev = 0.0;
  for (int level = 0; level <= 3; ++level) {
    const SWaveDiscretization g = grid_for(V, params, level);
    const double a = top_only(scale_block(build_potential_block(V, g), g, params.T()));
    if (level > 0 && std::abs(a - prev) <= accuracy * std::abs(a)) return a;
    prev = a;
  }
  return prev;
}

namespace {

struct FixedGridProblem {
  SWaveDiscretization grid;
  SymMatrix block;
  double a(double T) const { return top_only(scale_block(block, grid, T)); }
};

// Root of lambda a(T) = 1 in ln T on a fixed grid (Illinois false position).
double solve_on_grid(const FixedGridProblem& prob, double lambda, double xlo, double xhi, double tol,
                     double& residual) {
  double flo = lambda * prob.a(std::exp(xlo)) - 1.0;
  double fhi = lambda * prob.a(std::exp(xhi)) - 1.0;
  for (int grow = 0; flo < 0.0 && grow < 20; ++grow) {
    xlo -= std::log(4.0);
    flo = lambda * prob.a(std::exp(xlo)) - 1.0;
  }
  for (int grow = 0; fhi > 0.0 && grow < 20; ++grow) {
    xhi += std::log(4.0);
    fhi = lambda * prob.a(std::exp(xhi)) - 1.0;
  }
  if (flo < 0.0 || fhi > 0.0) throw std::runtime_error("tc0: lost the bracket on the refined grid");
  int side = 0;
  double x = xlo, f = flo;
  for (int it = 0; it < 200; ++it) {
    x = (xlo * fhi - xhi * flo) / (fhi - flo);
    if (!(x > xlo && x < xhi)) x = 0.5 * (xlo + xhi);
    f = lambda * prob.a(std::exp(x)) - 1.0;
    if (std::abs(f) <= tol || xhi - xlo < 1e-14 * std::max(1.0, std::abs(x))) break;
    if (f > 0.0) {
      xlo = x;
      flo = f;
      if (side == 1) fhi *= 0.5;
      side = 1;
    } else {
      xhi = x;
      fhi = f;
      if (side == -1) flo *= 0.5;
      side = -1;
    }
  }
  residual = std::abs(f);
  return std::exp(x);
}

}  // namespace

Tc0Result tc0(const RadialPotential& V, double mu, double lambda, const Tc0Options& opts) {
  require_solver_potential(V);
  if (!(lambda > 0.0)) throw std::domain_error("tc0 requires lambda > 0");
  if (!(mu > 0.0)) throw std::domain_error("tc0 requires mu > 0");
  const double e = e_mu(V, mu);
  if (!(e > 0.0)) throw std::domain_error("tc0 requires e_mu > 0");
  const Dimension dim = V.dim();
  const double t_floor = opts.floor_ratio * mu, t_ceil = opts.ceiling_ratio * mu;

  auto f_own_grid = [&](double T) {
    const KernelParams kp(T, mu);
    const SWaveDiscretization g = grid_for(V, kp, 0);
    return lambda * top_only(scale_block(build_potential_block(V, g), g, T)) - 1.0;
  };

  // Bracket around the leading-order weak-coupling guess.
  const double guess_exp = -1.0 / (lambda * e * std::pow(mu, 0.5 * dim.value() - 1.0));
  double T0 = mu * std::exp(std::max(guess_exp, std::log(opts.floor_ratio)));
  T0 = std::clamp(T0, t_floor, t_ceil);
  double f0 = f_own_grid(T0);
  double t_lo = T0, t_hi = T0;
  if (f0 > 0.0) {
    double f = f0;
    while (f > 0.0) {
      t_lo = t_hi;
      if (t_hi >= t_ceil) throw std::runtime_error("tc0: bracket expansion failed (lambda a_T > 1 at T = 1e3 mu)");
      t_hi = std::min(t_hi * 8.0, t_ceil);
      f = f_own_grid(t_hi);
    }
  } else {
    double f = f0;
    while (f < 0.0) {
      t_hi = t_lo;
      if (t_lo <= t_floor) {
        std::ostringstream os;
        os << "tc0: T_c below resolvable range (lambda a_T < 1 at T = " << t_floor << ")";
        throw std::runtime_error(os.str());
      }
      t_lo = std::max(t_lo / 8.0, t_floor);
      f = f_own_grid(t_lo);
    }
  }

  Tc0Result out;
  out.lambda = lambda;
  double xlo = std::log(t_lo), xhi = std::log(t_hi);
  const KernelParams lo_params(t_lo, mu);
  for (int level = 0; level <= 2; ++level) {
    FixedGridProblem prob{grid_for(V, lo_params, level), {}};
    prob.block = build_potential_block(V, prob.grid);
    double residual = 0.0;
    const double Tc = solve_on_grid(prob, lambda, xlo, xhi, opts.root_tol, residual);
    const double a = prob.a(Tc);

    FixedGridProblem finer{grid_for(V, lo_params, level + 1), {}};
    finer.block = build_potential_block(V, finer.grid);
    const double a_fine = finer.a(Tc);

    out.Tc = Tc;
    out.residual = std::abs(lambda * a - 1.0);
    out.a = a;
    out.level = level;
    out.grid_size = prob.grid.size();
    out.refinement_scale = prob.grid.refinement_scale * std::ldexp(1.0, level);
    out.grid_change = std::abs(a_fine - a) / std::abs(a_fine);
    if (out.grid_change <= opts.accuracy) break;
    xlo = std::log(Tc) - 0.05;
    xhi = std::log(Tc) + 0.05;
    if (xlo < std::log(t_lo)) xlo = std::log(t_lo);
  }
  out.e_m_lambda = e * kernels::m_mu(KernelParams(out.Tc, mu), dim) * lambda;
  return out;
}

double GroundState::position(double r) const {
  long double sum = 0.0L;
  const int p = dim.value() - 1;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double pi = grid.nodes[i];
    sum += grid.weights[i] * std::pow(pi, p) * phi_hat[i] * special::j_d(r, pi * pi, dim);
  }
  return static_cast<double>(sum);
}

GroundState ground_state(const RadialPotential& V, double mu, double lambda, const Tc0Options& opts) {
  GroundState gs;
  gs.dim = V.dim();
  gs.tc = tc0(V, mu, lambda, opts);
  const double T = gs.tc.Tc;
  // Same grid as the final root solve.
  gs.grid = make_grid(V, mu, gs.tc.refinement_scale, gs.tc.level);
  const SymMatrix M = build_potential_block(V, gs.grid);
  const SymMatrix S = scale_block(M, gs.grid, T);
  const SpectralResult sr = top_eigenvalue(S);
  gs.gap = (sr.top_eigenvalue - sr.second_eigenvalue) / sr.top_eigenvalue;
  if (gs.gap < 1e-8) throw std::runtime_error("near-degenerate ground state");

  const std::size_t n = gs.grid.size();
  const double half = 0.5 * (gs.dim.value() - 1);
  std::vector<double> f(n), b(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = std::sqrt(gs.grid.weights[i]) * std::pow(gs.grid.nodes[i], half);
    b[i] = kernels::bt0_shifted(gs.grid.shifted_energy(i), T);
    g[i] = std::sqrt(b[i]) * sr.eigenvector[i];  // g_i = f_i phi_i
  }
  // Normalization: <Phi, V Phi> = |S^{d-1}| e_mu, i.e. g^T M g = e_mu.
  double quad_form = 0.0;
  std::vector<double> mg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += M(i, j) * g[j];
    mg[i] = acc;
    quad_form += g[i] * acc;
  }
  const double e = e_mu(V, mu);
  double scale = std::sqrt(e / quad_form);

  // Phase: (V Phi)^ at the Fermi momentum must be positive.
  double at_fermi = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    at_fermi += f[j] * angular_average_vhat(V, std::sqrt(mu), gs.grid.nodes[j]) * g[j];
  if (at_fermi < 0.0) scale = -scale;
  at_fermi *= scale;

  gs.phi_hat.resize(n);
  double phi_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    gs.phi_hat[i] = scale * g[i] / f[i];
    phi_max = std::max(phi_max, std::abs(gs.phi_hat[i]));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double vphi = scale * mg[i] / f[i];
    worst = std::max(worst, std::abs(gs.phi_hat[i] - lambda * b[i] * vphi));
  }
  gs.residual = worst / phi_max;
  gs.psi_distance_sq = sphere_area(gs.dim) * 2.0 * (e - at_fermi);
  return gs;
}

}  // namespace bcs::bs
