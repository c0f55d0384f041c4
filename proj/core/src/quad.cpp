#include "bcs/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <sstream>
#include <string>

namespace bcs::quad {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// 21-point Kronrod extension of the 10-point Gauss rule.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

double eval_checked(FunctionRef f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream os;
    os.precision(17);
    os << "integrand returned " << (std::isnan(y) ? "NaN" : "a non-finite value")
       << " at x = " << x;
    throw QuadError(os.str());
  }
  return y;
}

Panel gk21(FunctionRef f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = eval_checked(f, c);
  double resk = fc * kWgk[10];
  double resg = 0.0;
  double resabs = std::abs(resk);
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kXgk[j];
    f1[j] = eval_checked(f, c - dx);
    f2[j] = eval_checked(f, c + dx);
    resk += kWgk[j] * (f1[j] + f2[j]);
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double ah = std::abs(h);
  resabs *= ah;
  resasc *= ah;
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
    err = std::max(err, 50.0 * kEps * resabs);
  return {a, b, resk * h, err};
}

}  // namespace

const QuadResult& QuadResult::require(const char* what) const {
  if (!converged) {
    std::ostringstream os;
    os.precision(6);
    os << what << ": accuracy not reached (estimate " << value << ", error " << error_estimate
       << ", " << evaluations << " evaluations)";
    throw QuadError(os.str());
  }
  return *this;
}

void QuadSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw QuadError("tolerances must be positive");
  if (max_evals < 21) throw QuadError("max_evals below the 21-point panel size");
}

QuadSpec QuadSpec::with_tol(double abs, double rel) const {
  QuadSpec s = *this;
  s.abs_tol = abs;
  s.rel_tol = rel;
  return s;
}

QuadResult integrate_finite(FunctionRef f, double a, double b, const QuadSpec& spec) {
  spec.validate();
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw QuadError("integrate_finite requires finite a < b");

  std::vector<double> breaks{a};
  {
    std::vector<double> sp;
    for (double s : spec.singular_points)
      if (s > a && s < b) sp.push_back(s);
    std::sort(sp.begin(), sp.end());
    for (double s : sp)
      if (s > breaks.back()) breaks.push_back(s);
    breaks.push_back(b);
  }

  std::priority_queue<Panel> heap;
  std::vector<Panel> frozen;  // too narrow to bisect further
  long evals = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    heap.push(gk21(f, breaks[i], breaks[i + 1]));
    evals += 21;
  }

  auto totals = [&](double& v, double& e) {
    long double sv = 0.0L, se = 0.0L;
    auto copy = heap;
    while (!copy.empty()) {
      sv += copy.top().value;
      se += copy.top().error;
      copy.pop();
    }
    for (const auto& p : frozen) {
      sv += p.value;
      se += p.error;
    }
    v = static_cast<double>(sv);
    e = static_cast<double>(se);
  };

  double value = 0.0, error = 0.0;
  totals(value, error);
  long double run_v = value, run_e = error;
  bool converged = false;
  int since_resum = 0;
  while (true) {
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(static_cast<double>(run_v)));
    if (run_e <= tol) {
      totals(value, error);
      if (error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
        converged = true;
        break;
      }
      run_v = value;
      run_e = error;
    }
    if (heap.empty() || evals + 42 > spec.max_evals) break;
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 8.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    const Panel l = gk21(f, worst.a, mid);
    const Panel r = gk21(f, mid, worst.b);
    evals += 42;
    run_v += (l.value + r.value) - worst.value;
    run_e += (l.error + r.error) - worst.error;
    heap.push(l);
    heap.push(r);
    if (++since_resum == 200) {
      since_resum = 0;
      totals(value, error);
      run_v = value;
      run_e = error;
    }
  }
  totals(value, error);
  return {value, error, evals, converged};
}

QuadResult integrate_semiinfinite(FunctionRef f, double a, Decay decay, const QuadSpec& spec) {
  spec.validate();
  if (!std::isfinite(a)) throw QuadError("integrate_semiinfinite requires finite a");

  if (const auto* ex = std::get_if<Exponential>(&decay)) {
    if (!(ex->rate > 0.0)) throw QuadError("exponential decay rate must be positive");
    const double b = a + (std::log(1.0 / spec.abs_tol) + 5.0) / ex->rate;
    QuadResult r = integrate_finite(f, a, b, spec);
    const double fb = std::abs(eval_checked(f, b));
    const double fb2 = std::abs(eval_checked(f, b + 1.0 / ex->rate));
    const double tail = fb / ex->rate;
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value));
    if (tail > tol && fb2 > 4.0 * std::exp(-1.0) * fb)
      throw QuadError("tail not resolved: samples do not follow the declared exponential decay");
    r.error_estimate += tail;
    r.evaluations += 2;
    return r;
  }

  const double power = std::get<Algebraic>(decay).power;
  if (!(power > 1.0)) throw QuadError("algebraic decay power must exceed 1");

  // Envelope check: |f(x)| x^power must not grow along a geometric sequence.
  const double scale = 1.0 + std::abs(a);
  double env_near = 0.0, env_far = 0.0;
  for (int k = 3; k <= 6; ++k) {
    const double s = scale * std::pow(10.0, k);
    double env = 0.0;
    for (double off : {0.0, 0.25, 0.5, 0.75}) {  // several phases to catch oscillation
      const double x = a + s * (1.0 + off);
      env = std::max(env, std::abs(eval_checked(f, x)) * std::pow(x - a, power));
    }
    (k <= 4 ? env_near : env_far) = std::max(k <= 4 ? env_near : env_far, env);
  }
  if (env_far > 10.0 * env_near + std::numeric_limits<double>::min())
    throw QuadError("tail not resolved: samples decay slower than the declared power");

  QuadSpec mapped = spec;
  mapped.singular_points.clear();
  for (double s : spec.singular_points)
    if (s > a) mapped.singular_points.push_back((s - a) / (1.0 + (s - a)));
  auto g = [&](double t) {
    const double om = 1.0 - t;
    return f(a + t / om) / (om * om);
  };
  QuadResult r = integrate_finite(g, 0.0, 1.0, mapped);
  r.evaluations += 16;
  return r;
}

QuadResult integrate_oscillatory_tail(FunctionRef amplitude, double omega, double from, Trig trig,
                                      const QuadSpec& spec) {
  spec.validate();
  if (!std::isfinite(omega) || !(omega > 1e-8)) throw QuadError("frequency too small");
  if (!std::isfinite(from)) throw QuadError("oscillatory tail requires finite start");
  const double pi = std::numbers::pi;
  const double half = pi / omega;

  const double a0 = std::abs(eval_checked(amplitude, from));
  const double a1 = std::abs(eval_checked(amplitude, from + 8.0 * half));
  const double a2 = std::abs(eval_checked(amplitude, from + 64.0 * half));
  if (a0 == 0.0 && a1 == 0.0 && a2 == 0.0) return {0.0, 0.0, 3, true};
  if (!(a2 < a0) || a1 > a0 || a2 > a1) throw QuadError("amplitude not decaying");

  auto integrand = [&](double k) {
    const double s = trig == Trig::Sin ? std::sin(omega * k) : std::cos(omega * k);
    return amplitude(k) * s;
  };
  const double phase = trig == Trig::Sin ? 0.0 : 0.5;
  const double n0 = std::floor(omega * from / pi - phase) + 1.0;
  auto zero = [&](double n) { return (n + phase) * half; };

  QuadSpec seg = spec;
  seg.singular_points.clear();
  seg.abs_tol = spec.abs_tol * 0.05;
  seg.rel_tol = spec.rel_tol * 0.05;

  long evals = 3;
  double err_sum = 0.0;
  double head = 0.0;
  if (zero(n0) > from) {
    const QuadResult h = integrate_finite(integrand, from, zero(n0), seg);
    head = h.value;
    err_sum += h.error_estimate;
    evals += h.evaluations;
  }

  // Partial sums of the alternating half-period series, accelerated by
  // repeated averaging (Euler transform).
  std::vector<double> partial;
  double running = 0.0;
  auto extend = [&](std::size_t count) {
    while (partial.size() < count) {
      const double n = n0 + static_cast<double>(partial.size());
      const QuadResult t = integrate_finite(integrand, zero(n), zero(n + 1.0), seg);
      running += t.value;
      err_sum += t.error_estimate;
      evals += t.evaluations;
      partial.push_back(running);
    }
  };
  auto accelerate = [&](std::size_t upto) {
    const std::size_t m = std::min<std::size_t>(upto, 24);
    std::vector<double> row(partial.begin() + static_cast<long>(upto - m),
                            partial.begin() + static_cast<long>(upto));
    while (row.size() > 1) {
      for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
      row.pop_back();
    }
    return row.front();
  };

  std::size_t n = 16;
  double est = 0.0, diff = std::numeric_limits<double>::infinity();
  bool converged = false;
  while (n <= 2048) {
    extend(n);
    est = accelerate(n);
    diff = std::abs(est - accelerate(n - 1));
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(head + est));
    if (diff + err_sum <= tol) {
      converged = true;
      break;
    }
    n += 16;
  }
  return {head + est, diff + err_sum, evals, converged};
}

const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 512) throw QuadError("Gauss-Legendre order out of range");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) {
    auto rule = std::make_unique<GaussRule>();
    rule->nodes.resize(n);
    rule->weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - (n == 1 ? 1.0 : p0)) / (x * x - 1.0);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      rule->nodes[i] = -x;
      rule->nodes[n - 1 - i] = x;
      rule->weights[i] = w;
      rule->weights[n - 1 - i] = w;
    }
    slot = std::move(rule);
  }
  return *slot;
}

double integrate_panels(FunctionRef f, const std::vector<double>& breaks, int order) {
  const GaussRule& g = gauss_legendre(order);
  long double sum = 0.0L;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double c = 0.5 * (breaks[i] + breaks[i + 1]);
    const double h = 0.5 * (breaks[i + 1] - breaks[i]);
    for (int j = 0; j < order; ++j) sum += g.weights[j] * h * eval_checked(f, c + h * g.nodes[j]);
  }
  return static_cast<double>(sum);
}

}  // namespace bcs::quad
