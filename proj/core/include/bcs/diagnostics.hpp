#pragma once

#include <array>
#include <string>
#include <vector>

#include "bcs/boundary3d.hpp"
#include "bcs/potentials.hpp"

namespace bcs::diag {

// <Psi, D_T Psi> for Psi = V^{1/2} j_1 (d = 1).
double dt_form_d1(const RadialPotential& V, double T, double mu);

// <Psi, D_T Psi> for Psi = V^{1/2} j_2 (d = 2). With swap_loops the inner
// quadratic form is accumulated in transposed order.
double dt_form_d2(const RadialPotential& V, double T, double mu, bool swap_loops = false);

struct WeakCouplingTerms {
  double line = 0.0;    // int V(r) j3(z1, r~)^2 dr dz1
  double chi = 0.0;     // -int V |j3(z1, r~) -+ j3(r)|^2 over |z1| < |r1|
  double sphere = 0.0;  // -+(pi/sqrt mu) int V j3^2
  double sum = 0.0;
};

// The three lambda -> 0 trial-state terms in d = 3, integrated in
// cylindrical coordinates around the axis normal to the boundary.
WeakCouplingTerms rhs_weak_coupling_d3(const RadialPotential& V, double mu,
                                       boundary::BoundaryCondition bc);

enum class GrowthModel { InverseT, LogCubed };
std::string to_string(GrowthModel m);
GrowthModel parse_growth_model(const std::string& s);

struct GrowthSample {
  double T;
  double value;
};

struct GrowthFit {
  std::vector<GrowthSample> samples;  // decreasing T
  GrowthModel model = GrowthModel::InverseT;
  double fitted_constant = 0.0;
  double max_relative_deviation = 0.0;
  // (value/model) at each T divided by the same quantity at the previous T.
  std::vector<double> successive_ratios;
};

// Least-squares fit of value = C * model(T); mu enters the log model only.
GrowthFit fit_growth(std::vector<GrowthSample> samples, GrowthModel model, double mu = 1.0);

}  // namespace bcs::diag
