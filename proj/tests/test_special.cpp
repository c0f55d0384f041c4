#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bcs/special.hpp"
#include "oracles.hpp"

using namespace bcs;

namespace {
// Reference values from a 30-digit multiprecision evaluation.
struct Ref {
  double x, si, cin, j0, j1;
};
constexpr Ref kRefs[] = {
    {0.5, 0.49310741804306668916, 0.061852563148200452525, 0.93846980724081290423, 0.24226845767487388638},
    {1.0, 0.94608307036718301494, 0.23981174200056472594, 0.76519768655796655145, 0.44005058574493351596},
    {3.9, 1.7765013604478054544, 2.0616915672449487074, -0.40182601488763990745, -0.027244039620779891184},
    {4.1, 1.7387436264917689967, 2.1443680304399159536, -0.38866967983585371972, -0.10327325774733857266},
    {10.0, 1.6583475942188740493, 2.9252571909000339173, -0.2459357644513483352, 0.04347274616886143667},
    {30.0, 1.566756540030351111, 4.0114454638457593798, -0.086367983581040211336, -0.11875106261662293652},
    {100.0, 1.5622254668890562934, 5.1875346760322347208, 0.019985850304223122424, -0.077145352014112158033},
};
}  // namespace

TEST_SUITE("special") {
  TEST_CASE("sine and entire cosine integrals against reference values") {
    for (const auto& r : kRefs) {
      CAPTURE(r.x);
      CHECK(special::si(r.x) == doctest::Approx(r.si).epsilon(1e-13));
      CHECK(special::cin(r.x) == doctest::Approx(r.cin).epsilon(1e-13));
    }
  }

  TEST_CASE("Si and Cin agree with power series and are odd/even") {
    for (double x : {1e-6, 0.01, 0.7, 2.0, 3.99, 4.01, 6.0}) {
      CAPTURE(x);
      CHECK(special::si(x) == doctest::Approx(oracle::si_series(x)).epsilon(1e-13));
      CHECK(special::cin(x) == doctest::Approx(oracle::cin_series(x)).epsilon(1e-12));
      CHECK(special::si(-x) == doctest::Approx(-special::si(x)));
      CHECK(special::cin(-x) == doctest::Approx(special::cin(x)));
    }
    CHECK(special::si(0.0) == 0.0);
    CHECK(special::cin(0.0) == 0.0);
    CHECK(special::si(1e6) == doctest::Approx(oracle::pi / 2).epsilon(1e-6));
  }

  TEST_CASE("Bessel functions") {
    for (const auto& r : kRefs) {
      CAPTURE(r.x);
      CHECK(special::bessel_j0(r.x) == doctest::Approx(r.j0).epsilon(1e-12));
      CHECK(special::bessel_j1(r.x) == doctest::Approx(r.j1).epsilon(1e-12));
    }
    for (double x : {0.0, 0.3, 2.5, 7.9, 8.1})
      CHECK(special::bessel_j0(x) == doctest::Approx(oracle::j0_series(x)).epsilon(1e-12));
    CHECK(special::bessel_j0(-2.0) == doctest::Approx(special::bessel_j0(2.0)));
    CHECK(special::bessel_j1(-2.0) == doctest::Approx(-special::bessel_j1(2.0)));
  }

  TEST_CASE("arcoth") {
    CHECK(special::arcoth(2.0) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
    CHECK(special::arcoth(1e8) == doctest::Approx(1e-8).epsilon(1e-12));
    CHECK_THROWS_AS(special::arcoth(1.0), std::domain_error);
    CHECK_THROWS_AS(special::arcoth(0.5), std::domain_error);
  }

  TEST_CASE("Legendre polynomials") {
    CHECK(special::legendre(0, 0.3) == 1.0);
    CHECK(special::legendre(1, 0.3) == doctest::Approx(0.3));
    CHECK(special::legendre(2, 0.5) == doctest::Approx(-0.125));
    CHECK(special::legendre(3, 0.5) == doctest::Approx(-0.4375));
    // orthogonality by an independent rule
    const double ip = oracle::integrate([](double s) { return special::legendre(4, s) * special::legendre(6, s); },
                                        -1.0, 1.0, 4, 20);
    CHECK(std::abs(ip) < 1e-14);
    const double nn = oracle::integrate([](double s) { return std::pow(special::legendre(5, s), 2); }, -1.0, 1.0, 4, 20);
    CHECK(nn == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
  }

  TEST_CASE("sinc is smooth through zero") {
    CHECK(special::sinc(0.0) == 1.0);
    for (double x : {1e-8, 1e-5, 9.9e-5, 1.01e-4, 1e-3, 1.0})
      CHECK(special::sinc(x) == doctest::Approx(std::sin(x) / x).epsilon(1e-15));
  }

  TEST_CASE("plane-wave averages j_d") {
    CHECK(special::j_d(0.0, 1.0, Dimension(1)) == doctest::Approx(std::sqrt(2.0 / oracle::pi)));
    CHECK(special::j_d(0.0, 1.0, Dimension(2)) == doctest::Approx(1.0));
    CHECK(special::j_d(0.0, 1.0, Dimension(3)) == doctest::Approx(std::sqrt(2.0 / oracle::pi)));
    CHECK(special::j_d(2.0, 4.0, Dimension(3)) == doctest::Approx(std::sqrt(2.0 / oracle::pi) * std::sin(4.0) / 4.0));
    // d = 2 profile is the circle average of cos(k.r)
    const double avg = oracle::integrate([](double th) { return std::cos(1.5 * std::cos(th)); }, 0.0, 2 * oracle::pi,
                                         8, 20) / (2 * oracle::pi);
    CHECK(special::j_d(1.5, 1.0, Dimension(2)) == doctest::Approx(avg).epsilon(1e-13));
    CHECK_THROWS_AS(special::j_d(1.0, 0.0, Dimension(3)), std::domain_error);
  }

  TEST_CASE("Dimension and sphere areas") {
    CHECK_THROWS_AS(Dimension(0), std::invalid_argument);
    CHECK_THROWS_AS(Dimension(4), std::invalid_argument);
    CHECK(sphere_area(Dimension(1)) == 2.0);
    CHECK(sphere_area(Dimension(2)) == doctest::Approx(2 * oracle::pi));
    CHECK(sphere_area(Dimension(3)) == doctest::Approx(4 * oracle::pi));
  }
}
