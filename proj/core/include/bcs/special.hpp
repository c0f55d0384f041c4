#pragma once

#include <stdexcept>

namespace bcs {

// Spatial dimension, restricted to 1, 2 or 3.
class Dimension {
public:
  explicit Dimension(int d);
  int value() const noexcept { return d_; }
  friend bool operator==(Dimension, Dimension) = default;

private:
  int d_;
};

// Surface area of the unit sphere S^{d-1} (|S^0| = 2).
double sphere_area(Dimension d);

namespace special {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

double bessel_j0(double x);
double bessel_j1(double x);
double si(double x);
double cin(double x);
double arcoth(double k);
// Legendre polynomial P_l(s).
double legendre(int l, double s);

// sin(x)/x with the Taylor branch near zero.
double sinc(double x);

// Plane-wave average over the Fermi sphere |p| = sqrt(mu).
double j_d(double r, double mu, Dimension d);

}  // namespace special
}  // namespace bcs
