#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bcs/boundary3d.hpp"
#include "bcs/diagnostics.hpp"
#include "oracles.hpp"

using namespace bcs;
using boundary::BoundaryCondition;

namespace {

// V(x) = exp(-x^2) on the line. Both Fourier transforms are taken by direct
// quadrature in x, and B_T(p,0) is 1/K_T(p,p) with K_T(p,p) = e / tanh(e/2T).
double dt_form_d1_brute(double T, double mu) {
  const double s = std::sqrt(mu);
  const double c = 1.0 / std::sqrt(2.0 * oracle::pi);
  const double vhat0 = c * oracle::integrate([](double x) { return std::exp(-x * x); }, -7.0, 7.0, 28, 20);
  auto vj_hat = [&](double p) {
    return c * oracle::integrate(
                   [&](double x) { return std::exp(-x * x) * std::sqrt(2.0 / oracle::pi) * std::cos(s * x) * std::cos(p * x); },
                   -7.0, 7.0, 28, 20);
  };
  auto b = [&](double p) {
    const double e = p * p - mu;
    if (e == 0.0) return 1.0 / (2.0 * T);
    return 1.0 / (e / std::tanh(e / (2.0 * T)));
  };
  std::vector<double> br{0.0};
  for (double off = 64.0 * T; off >= T / 64.0; off /= 2.0)
    if (s - off > 0.0) br.push_back(s - off);
  br.push_back(s);
  for (double off = T / 64.0; off <= 64.0 * T; off *= 2.0) br.push_back(s + off);
  br.push_back(s + 2.0);
  br.push_back(s + 20.0);
  std::sort(br.begin(), br.end());
  auto f = [&](double p) {
    const double v = vj_hat(p);
    return b(p) * b(p) * v * v;
  };
  // integrand is even in p
  return vhat0 * 2.0 * oracle::integrate_breaks(f, br, 2, 20);
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("d = 1 form against a brute-force quadrature") {
    const RadialPotential V(Gaussian{1.0, 1.0}, Dimension(1));
    for (double T : {0.05, 0.01}) {
      CAPTURE(T);
      CHECK(diag::dt_form_d1(V, T, 1.0) == doctest::Approx(dt_form_d1_brute(T, 1.0)).epsilon(1e-6));
    }
  }

  TEST_CASE("zero potential gives zero") {
    CHECK(diag::dt_form_d1(RadialPotential(Gaussian{0.0, 1.0}, Dimension(1)), 0.01, 1.0) == 0.0);
    CHECK(diag::dt_form_d2(RadialPotential(Gaussian{0.0, 1.0}, Dimension(2)), 0.01, 1.0) == 0.0);
    const auto t = diag::rhs_weak_coupling_d3(RadialPotential(Gaussian{0.0, 1.0}, Dimension(3)), 1.0,
                                              BoundaryCondition::Dirichlet);
    CHECK(t.line == 0.0);
    CHECK(t.chi == 0.0);
    CHECK(t.sphere == 0.0);
    CHECK(t.sum == 0.0);
  }

  TEST_CASE("d = 1 form is positive and decreasing in T") {
    const RadialPotential V(Exponential{1.0, 1.0}, Dimension(1));
    double prev = 0.0;
    for (double T : {1e-1, 1e-2, 1e-3}) {
      const double v = diag::dt_form_d1(V, T, 1.0);
      CHECK(v > prev);
      prev = v;
    }
  }

  TEST_CASE("d = 2 form is symmetric under loop exchange") {
    const RadialPotential V(Gaussian{1.0, 1.0}, Dimension(2));
    const double a = diag::dt_form_d2(V, 0.1, 1.0, false);
    const double b = diag::dt_form_d2(V, 0.1, 1.0, true);
    CHECK(a > 0.0);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }

  TEST_CASE("dimension checks") {
    CHECK_THROWS_AS(diag::dt_form_d1(RadialPotential(Gaussian{1.0, 1.0}, Dimension(2)), 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(diag::dt_form_d2(RadialPotential(Gaussian{1.0, 1.0}, Dimension(3)), 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(diag::rhs_weak_coupling_d3(RadialPotential(Gaussian{1.0, 1.0}, Dimension(3)), 0.0,
                                               BoundaryCondition::Neumann),
                    std::domain_error);
  }

  TEST_CASE("weak-coupling terms reproduce the boundary criterion") {
    const RadialPotential V(Gaussian{1.0, 1.0}, Dimension(3));
    for (auto bc : {BoundaryCondition::Dirichlet, BoundaryCondition::Neumann}) {
      const auto t = diag::rhs_weak_coupling_d3(V, 1.0, bc);
      const auto c = boundary::criterion(V, 1.0, bc);
      CAPTURE(boundary::to_string(bc));
      CHECK(t.sum == doctest::Approx(c.value).epsilon(1e-4));
      CHECK(t.sum == doctest::Approx(t.line + t.chi + t.sphere));
      CHECK(t.line > 0.0);
      CHECK(t.chi < 0.0);
      const double sg = bc == BoundaryCondition::Dirichlet ? -1.0 : 1.0;
      CHECK(t.sphere == doctest::Approx(sg * oracle::pi * 4.0 * oracle::pi * e_mu(V, 1.0)).epsilon(1e-9));
    }
  }

  TEST_CASE("growth fits") {
    std::vector<diag::GrowthSample> inv{{1e-4, 3.0e4}, {1e-2, 3.0e2}, {1e-3, 3.0e3}};
    const auto f = diag::fit_growth(inv, diag::GrowthModel::InverseT);
    CHECK(f.fitted_constant == doctest::Approx(3.0));
    CHECK(f.max_relative_deviation < 1e-12);
    CHECK(f.samples.front().T == 1e-2);
    CHECK(f.samples.back().T == 1e-4);
    REQUIRE(f.successive_ratios.size() == 2);
    CHECK(f.successive_ratios[0] == doctest::Approx(1.0));

    const double mu = 2.0;
    std::vector<diag::GrowthSample> lc;
    for (double T : {1e-2, 1e-3, 1e-4}) lc.push_back({T, 0.7 * std::pow(std::log(mu / T), 3)});
    const auto g = diag::fit_growth(lc, diag::GrowthModel::LogCubed, mu);
    CHECK(g.fitted_constant == doctest::Approx(0.7));
    CHECK(g.max_relative_deviation < 1e-12);

    CHECK_THROWS_AS(diag::fit_growth({{1e-2, 1.0}, {1e-3, 2.0}}, diag::GrowthModel::InverseT), std::invalid_argument);
    CHECK(diag::parse_growth_model("log_cubed") == diag::GrowthModel::LogCubed);
    CHECK(diag::to_string(diag::GrowthModel::InverseT) == "inverse_T");
    CHECK_THROWS_AS(diag::parse_growth_model("quadratic"), std::invalid_argument);
  }
}
