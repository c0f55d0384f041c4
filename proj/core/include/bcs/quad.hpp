#pragma once

#include <memory>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace bcs::quad {

// Non-owning reference to a callable double(double). The referenced callable
// must outlive the call that receives it.
class FunctionRef {
public:
  template <class F,
            class = std::enable_if_t<!std::is_same_v<std::decay_t<F>, FunctionRef>>>
  FunctionRef(F&& f) noexcept  // NOLINT(google-explicit-constructor)
      : obj_(const_cast<void*>(static_cast<const void*>(std::addressof(f)))),
        call_([](void* o, double x) -> double {
          return (*static_cast<std::remove_reference_t<F>*>(o))(x);
        }) {}

  double operator()(double x) const { return call_(obj_, x); }

private:
  void* obj_;
  double (*call_)(void*, double);
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = true;  // false: tolerance not met within max_evals

  // Throws QuadError when the requested accuracy was not reached.
  const QuadResult& require(const char* what) const;
};

struct QuadSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  long max_evals = 400000;
  std::vector<double> singular_points;

  void validate() const;
  QuadSpec with_tol(double abs, double rel) const;
};

class QuadError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Algebraic {
  double power;  // |f(x)| = O(x^-power), power > 1
};
struct Exponential {
  double rate;  // |f(x)| = O(exp(-rate x)), rate > 0
};
using Decay = std::variant<Algebraic, Exponential>;

enum class Trig { Sin, Cos };

// Adaptive 21-point Gauss-Kronrod with global bisection.
QuadResult integrate_finite(FunctionRef f, double a, double b, const QuadSpec& spec = {});

QuadResult integrate_semiinfinite(FunctionRef f, double a, Decay decay,
                                  const QuadSpec& spec = {});

// Integral of amplitude(k) * trig(omega k) over [from, inf). The amplitude
// must be monotonically decaying beyond `from`.
QuadResult integrate_oscillatory_tail(FunctionRef amplitude, double omega, double from,
                                      Trig trig, const QuadSpec& spec = {});

// Gauss-Legendre rule on [-1, 1], cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

// Fixed composite Gauss-Legendre over explicit breakpoints.
double integrate_panels(FunctionRef f, const std::vector<double>& breaks, int order);

}  // namespace bcs::quad
