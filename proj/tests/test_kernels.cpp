#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "bcs/kernels.hpp"
#include "oracles.hpp"

using namespace bcs;
using namespace bcs::kernels;

TEST_SUITE("kernels") {
  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(KernelParams(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(KernelParams(1.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(KernelParams(std::nan(""), 1.0), std::domain_error);
  }

  TEST_CASE("K_T special values") {
    const KernelParams P(0.05, 1.0);
    CHECK(kt(0.0, 0.0, P) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(kt(0.1, 0.1, P) == doctest::Approx(0.1 / std::tanh(1.0)).epsilon(1e-14));
    for (double x : {0.01, 0.2, 1.0}) {
      const double lim = 0.1 * std::pow(std::cosh(x / 0.1), 2);
      CHECK(kt(x, -x, P) == doctest::Approx(lim).epsilon(1e-12));
      CHECK(kt(x, -x + 1e-9, P) == doctest::Approx(lim).epsilon(1e-6));
    }
  }

  TEST_CASE("K_T agrees with the direct formula where that is well conditioned") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    const KernelParams P(0.3, 1.0);
    for (int i = 0; i < 2000; ++i) {
      const double a = U(rng), b = U(rng);
      if (std::abs(a + b) < 1e-2) continue;
      // extended precision keeps the reference accurate when tanh terms nearly cancel
      const long double la = a, lb = b;
      const double direct = static_cast<double>((la + lb) / (std::tanh(la / 0.6L) + std::tanh(lb / 0.6L)));
      CHECK(kt(a, b, P) == doctest::Approx(direct).epsilon(1e-12));
    }
  }

  TEST_CASE("K_T stays finite or saturates without NaN for large arguments") {
    const KernelParams P(1e-3, 1.0);
    CHECK(std::isfinite(kt(10.0, 10.0, P)));
    CHECK(kt(10.0, 10.0, P) == doctest::Approx(10.0).epsilon(1e-12));
    const double v = kt(5.0, -5.0, P);
    CHECK_FALSE(std::isnan(v));
    CHECK(v >= 2e-3);
  }

  TEST_CASE("B_T values and bounds") {
    const double mu = 1.0, T = 0.1;
    const KernelParams P(T, mu);
    CHECK(bt(mu, 0.0, 0.0, P) == doctest::Approx(1.0 / (2 * T)).epsilon(1e-14));
    CHECK(bt(2.0 * mu, 0.0, 0.0, P) == doctest::Approx(std::tanh(5.0) / mu).epsilon(1e-14));
    CHECK_THROWS_AS(bt(1.0, 1.0, 1.5, P), std::domain_error);
    // (p,q) -> (q,p) and (-p,-q) leave the arguments' symmetric combination invariant
    CHECK(bt(0.8, 1.3, 0.4, P) == doctest::Approx(bt(1.3, 0.8, 0.4, P)));
    CHECK(bt(0.8, 1.3, -0.4, P) == doctest::Approx(bt(0.8, 1.3, 0.4, P)));
    CHECK(bt0_shifted(0.0, T) == doctest::Approx(1.0 / (2 * T)));
    CHECK(bt0_shifted(1e-12, T) == doctest::Approx(1.0 / (2 * T)));
    CHECK(bt0_shifted(0.37, T) == doctest::Approx(std::tanh(0.37 / (2 * T)) / 0.37).epsilon(1e-15));
  }

  TEST_CASE("m_mu for d = 2 against the substituted form") {
    for (double T : {0.1, 1e-2, 1e-3}) {
      const KernelParams P(T, 1.0);
      const double top = 1.0 / (2 * T);
      std::vector<double> br{0.0};
      for (double x = 1.0; x < top; x *= 2.0) br.push_back(x);
      br.push_back(top);
      const double ref = oracle::integrate_breaks([](double s) { return s < 1e-8 ? 1.0 : std::tanh(s) / s; }, br, 4);
      CHECK(m_mu(P, Dimension(2)) == doctest::Approx(ref).epsilon(1e-11));
    }
  }

  TEST_CASE("m_mu for d = 3 against direct quadrature in the offset variable") {
    const double T = 1e-3;
    const KernelParams P(T, 1.0);
    std::vector<double> br{-1.0};
    std::vector<double> pos;
    for (double o = T; o < 1.0; o *= 2) pos.push_back(o);
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) br.push_back(-*it);
    br.push_back(0.0);
    for (double o : pos) if (o < std::sqrt(2.0) - 1.0) br.push_back(o);
    br.push_back(std::sqrt(2.0) - 1.0);
    const double ref = oracle::integrate_breaks(
        [&](double u) {
          const double e = u * (2.0 + u);
          const double b = std::abs(e) < 1e-12 ? 1.0 / (2 * T) : std::tanh(e / (2 * T)) / e;
          return b * (1.0 + u) * (1.0 + u);
        },
        br, 4);
    CHECK(m_mu(P, Dimension(3)) == doctest::Approx(ref).epsilon(1e-11));
  }

  TEST_CASE("m_mu minus the logarithm settles") {
    for (int d = 1; d <= 3; ++d) {
      std::vector<double> diffs;
      double prev = 0.0;
      for (int k = 2; k <= 5; ++k) {
        const double T = std::pow(10.0, -k);
        const double c = m_mu(KernelParams(T, 1.0), Dimension(d)) - std::log(1.0 / T);
        if (k > 2) diffs.push_back(std::abs(c - prev));
        prev = c;
      }
      CAPTURE(d);
      // successive changes shrink until they reach rounding level
      CHECK((diffs[1] < diffs[0] || diffs[1] < 1e-12));
      CHECK((diffs[2] < diffs[1] || diffs[2] < 1e-12));
    }
    // c_2 = ln(2 e^gamma / pi)
    const double c2 = m_mu(KernelParams(1e-8, 1.0), Dimension(2)) - std::log(1e8);
    CHECK(c2 == doctest::Approx(std::log(2.0 * std::exp(std::numbers::egamma) / oracle::pi)).epsilon(1e-6));
  }

  TEST_CASE("m_mu at very small T") {
    const double v = m_mu(KernelParams(1e-16, 1.0), Dimension(3));
    CHECK(v - std::log(1e16) == doctest::Approx(m_mu(KernelParams(1e-12, 1.0), Dimension(3)) - std::log(1e12)).epsilon(1e-6));
  }

  TEST_CASE("m_mu crude bound at high temperature") {
    for (int d = 1; d <= 3; ++d) {
      const double mu = 1.0, T = 1e3;
      CHECK(m_mu(KernelParams(T, mu), Dimension(d)) <= std::pow(std::sqrt(2 * mu), d) / (d * 2 * T));
    }
  }

  TEST_CASE("tanh inequality spot checks") {
    CHECK(check_tanh_inequality(1.0, 1.0));
    CHECK(check_tanh_inequality(3.0, -1.0));
    CHECK(check_tanh_inequality(0.0, 0.0));
    CHECK(check_tanh_inequality(2.0, -2.0));
  }

  TEST_CASE("sandwich constants are positive and consistent") {
    const auto fit = fit_sandwich_constants(0.1, 1.0, 2000);
    CHECK(fit.c1 > 0.0);
    CHECK(std::isfinite(fit.c2));
    CHECK(fit.c2 > 0.0);
  }
}
