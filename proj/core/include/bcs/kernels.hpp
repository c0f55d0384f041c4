#pragma once

#include "bcs/special.hpp"

namespace bcs {

class KernelParams {
public:
  KernelParams(double T, double mu);
  double T() const noexcept { return T_; }
  double mu() const noexcept { return mu_; }

private:
  double T_, mu_;
};

namespace kernels {

// K_T = (a+b)/(tanh(a/2T)+tanh(b/2T)) with a = p^2-mu, b = q^2-mu.
// May overflow to +inf when the true value exceeds the double range.
double kt(double a, double b, const KernelParams& params);

// B_T(p,q) = 1/K_T(p+q, p-q), from |p|^2, |q|^2 and p.q.
double bt(double psq, double qsq, double pq_dot, const KernelParams& params);

// B_T(p,0) = tanh(e/2T)/e with e = p^2 - mu given directly.
double bt0_shifted(double e, double T);

// m_mu(T) = int_0^{sqrt(2 mu)} B_T(t,0) t^{d-1} dt.
double m_mu(const KernelParams& params, Dimension d);

// (x+y)/(tanh x + tanh y) >= (x/tanh x + y/tanh y)/2 up to 1e-12 slack.
bool check_tanh_inequality(double x, double y);

// Fitted constants of C1 (T + p^2 + q^2) <= K_T <= C2 (p^2 + q^2 + 1).
struct SandwichFit {
  double c1;
  double c2;
};
SandwichFit fit_sandwich_constants(double T0, double mu, int samples, unsigned seed = 7);

}  // namespace kernels
}  // namespace bcs
