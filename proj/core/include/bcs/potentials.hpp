#pragma once

#include <variant>
#include <vector>

#include "bcs/quad.hpp"
#include "bcs/special.hpp"

namespace bcs {

struct Gaussian {
  double a;    // amplitude
  double ell;  // V(r) = a exp(-r^2/ell^2)
};

struct Exponential {
  double a;
  double ell;  // V(r) = a exp(-r/ell)
};

struct StepWell {
  double a;
  double R;  // V(r) = a for r < R
};

// Radial samples starting at r = 0, joined by monotone (Fritsch-Carlson)
// cubic Hermite pieces. Zero beyond the last node.
class Tabulated {
public:
  Tabulated(std::vector<double> r, std::vector<double> v);

  const std::vector<double>& r() const { return r_; }
  const std::vector<double>& v() const { return v_; }
  double eval(double r) const;

private:
  std::vector<double> r_, v_, slope_;
};

using Profile = std::variant<Gaussian, Exponential, StepWell, Tabulated>;

class RadialPotential {
public:
  RadialPotential(Profile profile, Dimension dim);

  const Profile& profile() const { return profile_; }
  Dimension dim() const { return dim_; }

  // Pointwise value; zero beyond a tabulated range.
  double operator()(double r) const;

  // Radius beyond which |V| is negligible (or exactly zero).
  double support_radius() const;
  // Interior radii where V is not smooth.
  std::vector<double> breaks() const;
  // Characteristic length scale of the profile.
  double range() const;
  // Rough magnitude |a| range^d, used to scale absolute tolerances.
  double magnitude() const;

  bool nonnegative() const;
  bool is_zero() const;

private:
  Profile profile_;
  Dimension dim_;
};

struct PointValue {
  double value;
  bool extrapolated;
};

PointValue v_of_r(const RadialPotential& V, double r);

// V^(k) with the convention (2pi)^{-d/2} int V(r) e^{-ik.r} dr.
double fourier_hat(const RadialPotential& V, double k);

// Smallest k (on a doubling ladder from 1/range) beyond which |V^| stays
// below rel |V^(0)|.
double momentum_cutoff(const RadialPotential& V, double rel);

// int_{R^d} V(r) |r|^n dr.
double moment(const RadialPotential& V, int n);

// (1/|S^{d-1}|) int V j_d^2, the top eigenvalue of the Fermi-sphere operator.
double e_mu(const RadialPotential& V, double mu);

// Angular-momentum eigenvalues v_0..v_lmax of the Fermi-sphere operator (d = 2, 3).
std::vector<double> vmu_spectrum(const RadialPotential& V, double mu, int l_max);

// int_0^inf V(r) g(r) dr over the support of V, respecting its breaks.
quad::QuadResult radial_integral(const RadialPotential& V, quad::FunctionRef g,
                                 double rel_tol = 1e-12);

}  // namespace bcs
