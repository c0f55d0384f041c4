#pragma once

#include <vector>

#include "bcs/kernels.hpp"
#include "bcs/potentials.hpp"

namespace bcs::bs {

// Radial momentum grid: composite Gauss-Legendre panels refined geometrically
// toward the Fermi momentum sqrt(mu). Offsets p_i - sqrt(mu) are stored
// separately so that p_i^2 - mu stays exact near the Fermi surface.
struct SWaveDiscretization {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> offsets;
  double p_max = 0.0;
  double refinement_scale = 0.0;
  double sqrt_mu = 0.0;
  int order = 0;
  int level = 0;

  std::size_t size() const { return nodes.size(); }
  double shifted_energy(std::size_t i) const;  // p_i^2 - mu
};

SWaveDiscretization make_grid(const RadialPotential& V, double mu, double refinement_scale,
                              int level = 0, int order = 8);
// Grid whose innermost width is min(T, 1e-3 mu)/sqrt(mu).
SWaveDiscretization grid_for(const RadialPotential& V, const KernelParams& params, int level = 0);

// Dense symmetric matrix, row-major.
struct SymMatrix {
  std::size_t n = 0;
  std::vector<double> data;
  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

// w_d(p,q): s-wave projection of convolution with V^, including (2pi)^{-d/2}.
double angular_average_vhat(const RadialPotential& V, double p, double q);

// Temperature-independent part sqrt(w_i w_j) (p_i p_j)^{(d-1)/2} w_d(p_i,p_j).
SymMatrix build_potential_block(const RadialPotential& V, const SWaveDiscretization& grid);
// Birman-Schwinger matrix at temperature T on the given grid.
SymMatrix build_matrix(const RadialPotential& V, const KernelParams& params,
                       const SWaveDiscretization& grid);

struct SpectralResult {
  double top_eigenvalue = 0.0;
  double second_eigenvalue = 0.0;
  std::vector<double> eigenvector;  // unit norm, sum of entries >= 0
  double residual = 0.0;            // |S u - a u| / |u|
  SWaveDiscretization grid;
};

SpectralResult top_eigenvalue(const SymMatrix& S);

// Top eigenvalue of the Birman-Schwinger operator, refined until two
// successive grid levels agree to `accuracy` (relative).
double a_t0(const RadialPotential& V, const KernelParams& params, double accuracy = 1e-6);

struct Tc0Result {
  double lambda = 0.0;
  double Tc = 0.0;
  double residual = 0.0;    // |lambda a_{Tc} - 1|
  double e_m_lambda = 0.0;  // e_mu m_mu(Tc) lambda
  double a = 0.0;
  double grid_change = 0.0;  // relative change of a_{Tc} under one grid doubling
  int level = 0;
  std::size_t grid_size = 0;
  double refinement_scale = 0.0;  // innermost panel width of the final grid
};

struct Tc0Options {
  double accuracy = 1e-6;       // grid self-convergence target for a_T
  double root_tol = 1e-10;      // target for |lambda a - 1|
  double floor_ratio = 1e-30;   // smallest admissible T/mu
  double ceiling_ratio = 1e3;   // largest admissible T/mu
};

Tc0Result tc0(const RadialPotential& V, double mu, double lambda, const Tc0Options& opts = {});

struct GroundState {
  Tc0Result tc;
  SWaveDiscretization grid;
  std::vector<double> phi_hat;  // on grid nodes
  double residual = 0.0;        // max_i |eval_eq residual| / max |phi_hat|
  double gap = 0.0;             // (a_1 - a_2)/a_1 on the grid
  double psi_distance_sq = 0.0;  // |V^{1/2}(j_d - Phi)|^2
  Dimension dim{3};

  // Position-space profile Phi(r) = sum_i w_i p_i^{d-1} phi_i j_d(r; p_i^2).
  double position(double r) const;
};

GroundState ground_state(const RadialPotential& V, double mu, double lambda, const Tc0Options& opts = {});

}  // namespace bcs::bs
