#pragma once

#include <array>
#include <string>
#include <vector>

#include "bcs/potentials.hpp"

namespace bcs::boundary {

enum class BoundaryCondition { Dirichlet, Neumann };

std::string to_string(BoundaryCondition bc);
BoundaryCondition parse_bc(const std::string& s);

// The four closed-form pieces of the spherically averaged boundary density.
double t_j(double x, int j);

// Dirichlet: t1+t2+t3+t4; Neumann: t1+t2-t3-t4.
double m3(double x, BoundaryCondition bc);

// mu^{-1/2} m3(sqrt(mu) r).
double m3_scaled(double r, double mu, BoundaryCondition bc);

// Unaveraged density at the point r, by direct z1-integration.
double mtilde_direct(const std::array<double, 3>& r, double mu, BoundaryCondition bc);

// int_R j3(z, rho)^2 dz, where j3 depends on sqrt(z^2 + rho^2).
double line_integral_j3_sq(double rho, double mu);

// int_{|z|<|r1|} (j3(z, rho) -+ j3(R))^2 dz with R = sqrt(r1^2 + rho^2);
// minus sign for Dirichlet.
double chi_integral(double r1, double rho, double mu, BoundaryCondition bc);

enum class Sign { Positive, Negative, Inconclusive };
std::string to_string(Sign s);

struct CriterionReport {
  double value = 0.0;
  Sign sign = Sign::Inconclusive;
  std::array<double, 4> per_term{};  // signed contributions of t1..t4
  double error_estimate = 0.0;
  double mu = 0.0;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
};

// int_{R^3} V(r) mu^{-1/2} m3(sqrt(mu)|r|) dr.
CriterionReport criterion(const RadialPotential& V, double mu, BoundaryCondition bc);

struct ProfileRow {
  double x;
  double m3;
};

std::vector<ProfileRow> m3_profile(double x_max, double step, BoundaryCondition bc, int threads = 1);

}  // namespace bcs::boundary
