#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "bcs/bs_solver.hpp"
#include "oracles.hpp"

using namespace bcs;

namespace {

double radial_side(const RadialPotential& V, double p) {
  const int d = V.dim().value();
  return oracle::integrate(
      [&](double q) { return std::pow(q, d - 1) * bs::angular_average_vhat(V, p, q) * std::exp(-q * q); }, 0.0, 7.0, 28,
      20);
}

}  // namespace

TEST_SUITE("bs_solver") {
  TEST_CASE("grid structure") {
    const RadialPotential V(Gaussian{1.0, 1.0}, Dimension(3));
    const auto g = bs::make_grid(V, 1.0, 1e-3);
    REQUIRE(g.size() > 0);
    double wsum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(g.weights[i] > 0.0);
      if (i > 0) CHECK(g.nodes[i] > g.nodes[i - 1]);
      CHECK(g.nodes[i] - g.sqrt_mu == doctest::Approx(g.offsets[i]).epsilon(1e-12));
      wsum += g.weights[i];
    }
    CHECK(wsum == doctest::Approx(g.p_max).epsilon(1e-12));
    CHECK(g.p_max >= 4.0 * std::sqrt(2.0));
    const auto g1 = bs::make_grid(V, 1.0, 1e-3, 1);
    CHECK(g1.size() == 2 * g.size());
    CHECK(g1.refinement_scale == doctest::Approx(0.5 * g.refinement_scale));
    CHECK_THROWS_AS(bs::make_grid(V, 0.0, 1e-3), std::domain_error);
    CHECK_THROWS_AS(bs::make_grid(V, 1.0, 1e-3, 9), std::invalid_argument);
    // shifted energies stay exact next to the Fermi momentum
    const auto gt = bs::make_grid(V, 1.0, 1e-12);
    for (std::size_t i = 0; i < gt.size(); ++i) {
      const double o = gt.offsets[i];
      CHECK(gt.shifted_energy(i) == doctest::Approx(o * (2.0 + o)).epsilon(1e-13));
    }
  }

  TEST_CASE("s-wave angular average against a Cartesian convolution") {
    const RadialPotential G1(Gaussian{1.0, 1.0}, Dimension(1));
    const RadialPotential E2(Exponential{1.0, 0.7}, Dimension(2));
    const RadialPotential G3(Gaussian{1.0, 1.0}, Dimension(3));
    for (double p : {0.0, 1.1}) {
      for (const RadialPotential* V : {&G1, &E2, &G3}) {
        CAPTURE(p);
        CAPTURE(V->dim().value());
        const double brute = oracle::brute_convolution([&](double k) { return fourier_hat(*V, k); }, V->dim().value(), p,
                                                       7.0, V->dim().value() == 3 ? 8 : 14);
        CHECK(radial_side(*V, p) == doctest::Approx(brute).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("Gaussian closed form matches the general angular quadrature") {
    // A tabulated copy of the same Gaussian forces the quadrature branch.
    std::vector<double> r, v;
    for (int i = 0; i <= 1600; ++i) {
      r.push_back(i * 0.005);
      v.push_back(std::exp(-r.back() * r.back()));
    }
    const RadialPotential T(Tabulated(r, v), Dimension(3));
    const RadialPotential G(Gaussian{1.0, 1.0}, Dimension(3));
    for (double p : {0.2, 1.0})
      for (double q : {0.5, 1.0, 2.0}) CHECK(bs::angular_average_vhat(T, p, q) == doctest::Approx(bs::angular_average_vhat(G, p, q)).epsilon(1e-6));
  }

  TEST_CASE("top eigenvalue against Jacobi on a random symmetric matrix") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> N(0.0, 1.0);
    const std::size_t n = 40;
    bs::SymMatrix S{n, std::vector<double>(n * n)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) S(i, j) = S(j, i) = N(rng);
    const auto lib = bs::top_eigenvalue(S);
    const auto ref = oracle::jacobi_eigenvalues(S.data, n);
    CHECK(lib.top_eigenvalue == doctest::Approx(ref.back()).epsilon(1e-12));
    CHECK(lib.second_eigenvalue == doctest::Approx(ref[n - 2]).epsilon(1e-12));
    CHECK(lib.residual < 1e-12);
  }

  TEST_CASE("Birman-Schwinger matrix top eigenvalue against Jacobi") {
    const RadialPotential V(Gaussian{1.0, 1.0}, Dimension(3));
    const KernelParams P(0.05, 1.0);
    const auto g = bs::grid_for(V, P);
    const auto S = bs::build_matrix(V, P, g);
    const auto ref = oracle::jacobi_eigenvalues(S.data, S.n);
    CHECK(bs::top_eigenvalue(S).top_eigenvalue == doctest::Approx(ref.back()).epsilon(1e-11));
    CHECK(ref.back() > 0.0);
    CHECK_THROWS_AS(bs::build_matrix(V, KernelParams(1e-5, 1.0), g), std::invalid_argument);
  }

  TEST_CASE("a_T decreases with T") {
    const RadialPotential V(Gaussian{1.0, 1.0}, Dimension(3));
    double prev = std::numeric_limits<double>::infinity();
    for (double T : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
      const double a = bs::a_t0(V, KernelParams(T, 1.0));
      CHECK(a < prev);
      prev = a;
    }
  }

  TEST_CASE("critical temperature closes the eigenvalue condition") {
    const RadialPotential V(Gaussian{1.0, 1.0}, Dimension(3));
    const auto r = bs::tc0(V, 1.0, 0.6);
    CHECK(r.residual <= 1e-8);
    CHECK(0.6 * bs::a_t0(V, KernelParams(r.Tc, 1.0), 1e-8) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.grid_change <= 1e-5);
    const auto r2 = bs::tc0(V, 1.0, 0.5);
    CHECK(r2.Tc < r.Tc);
    // weak coupling: ln(mu/Tc) approaches 1/(lambda e_mu) up to a constant
    const double e = e_mu(V, 1.0);
    CHECK(std::abs(std::log(1.0 / r.Tc) - 1.0 / (0.6 * e)) < 3.0);
  }

  TEST_CASE("critical temperature in d = 1 and d = 2") {
    for (int d : {1, 2}) {
      const RadialPotential V(Gaussian{1.0, 1.0}, Dimension(d));
      const auto r = bs::tc0(V, 1.0, 1.0);
      CAPTURE(d);
      CHECK(r.residual <= 1e-8);
      CHECK(r.Tc > 0.0);
    }
  }

  TEST_CASE("solver preconditions") {
    CHECK_THROWS_AS(bs::tc0(RadialPotential(Gaussian{-1.0, 1.0}, Dimension(3)), 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(bs::tc0(RadialPotential(Gaussian{1.0, 1.0}, Dimension(3)), 1.0, 0.0), std::domain_error);
    CHECK_THROWS(bs::tc0(RadialPotential(Gaussian{0.0, 1.0}, Dimension(3)), 1.0, 0.5));
  }

  TEST_CASE("ground state satisfies the eigenvalue equation") {
    const RadialPotential V(Gaussian{1.0, 1.0}, Dimension(3));
    const auto gs = bs::ground_state(V, 1.0, 0.6);
    CHECK(gs.residual <= 1e-6);
    CHECK(gs.gap > 0.5);
    CHECK(gs.psi_distance_sq >= 0.0);
    // close to the Fermi-sphere profile at moderate coupling
    CHECK(std::abs(gs.position(0.0) - special::j_d(0.0, 1.0, Dimension(3))) < 0.1);
  }
}
