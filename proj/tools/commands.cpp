#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string_view>

#include "bcs/bs_solver.hpp"
#include "bcs/diagnostics.hpp"
#include "bcs/kernels.hpp"
#include "bcs/parallel.hpp"

#ifndef BCS_VERSION
#define BCS_VERSION "unknown"
#endif

namespace bcs::cli {
namespace {

using boundary::BoundaryCondition;
constexpr double kPi = std::numbers::pi;

// ---- schema helpers -------------------------------------------------------

void check_keys(const Json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number(const Json& obj, const std::string& key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing required key '" + key + "' in " + where);
  if (!it->is_number()) throw ConfigError("'" + key + "' in " + where + " must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ConfigError("'" + key + "' in " + where + " must be finite");
  return v;
}

double number_or(const Json& obj, const std::string& key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

double positive(double v, const std::string& what) {
  if (!(v > 0.0)) throw ConfigError(what + " must be positive");
  return v;
}

std::vector<double> number_list(const Json& obj, const std::string& key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing required key '" + key + "' in " + where);
  if (!it->is_array()) throw ConfigError("'" + key + "' in " + where + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : *it) {
    if (!x.is_number() || !std::isfinite(x.get<double>()))
      throw ConfigError("'" + key + "' in " + where + " must contain finite numbers only");
    out.push_back(x.get<double>());
  }
  return out;
}

std::string string_or(const Json& obj, const std::string& key, const std::string& fallback, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) throw ConfigError("'" + key + "' in " + where + " must be a string");
  return it->get<std::string>();
}

BoundaryCondition bc_of(const Json& cfg) {
  try {
    return boundary::parse_bc(string_or(cfg, "bc", "dirichlet", "config"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

const Json& section(const Json& cfg, const std::string& key, const Json& empty) {
  const auto it = cfg.find(key);
  return it == cfg.end() ? empty : *it;
}

void check_outputs(const Json& cfg) {
  static const Json empty = Json::object();
  const Json& o = section(cfg, "outputs", empty);
  check_keys(o, {"csv", "json"}, "outputs");
  for (const char* k : {"csv", "json"})
    if (o.contains(k) && !o[k].is_string()) throw ConfigError(std::string("outputs.") + k + " must be a string");
}

Json potential_echo(const Json& spec) { return spec; }

// ---- report helpers -------------------------------------------------------

Json make_report(const std::string& command, Json inputs) {
  Json r;
  r["tool"] = "bcs";
  r["version"] = BCS_VERSION;
  r["command"] = command;
  r["inputs"] = std::move(inputs);
  return r;
}

Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

void finish(Outcome& o) {
  Json checks = Json::array();
  for (const auto& c : o.checks) {
    Json j;
    j["name"] = c.name;
    j["status"] = c.passed ? "pass" : (c.enforced ? "fail" : "warn");
    j["enforced"] = c.enforced;
    j["detail"] = c.detail;
    checks.push_back(std::move(j));
  }
  o.report["checks"] = std::move(checks);
  o.report["status"] = o.enforced_checks_pass() ? "pass" : "fail";
}

class CsvWriter {
public:
  explicit CsvWriter(std::initializer_list<std::string_view> header) {
    bool first = true;
    for (auto h : header) {
      if (!first) s_ << ',';
      s_ << h;
      first = false;
    }
    s_ << "\r\n";
  }
  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((emit(cells, first)), ...);
    s_ << "\r\n";
  }
  std::string str() const { return s_.str(); }

private:
  void emit(double x, bool& first) { sep(first) << format_double(x); }
  void emit(int x, bool& first) { sep(first) << x; }
  void emit(const std::string& x, bool& first) {
    auto& s = sep(first);
    if (x.find_first_of(",\"\r\n") == std::string::npos) {
      s << x;
      return;
    }
    s << '"';
    for (char c : x) s << (c == '"' ? "\"\"" : std::string(1, c));
    s << '"';
  }
  std::ostream& sep(bool& first) {
    if (!first) s_ << ',';
    first = false;
    return s_;
  }
  std::ostringstream s_;
};

// ---- one-sided derivative estimates at 0 ----------------------------------

// Richardson-extrapolated forward differences; both base stencils have
// leading error O(h^2), followed by O(h^3).
double extrapolate(double (*stencil)(const std::function<double(double)>&, double),
                   const std::function<double(double)>& f) {
  constexpr double h = 1e-2;
  const double d1 = stencil(f, h), d2 = stencil(f, h / 2), d3 = stencil(f, h / 4);
  const double r1 = (4.0 * d2 - d1) / 3.0;
  const double r2 = (4.0 * d3 - d2) / 3.0;
  return (8.0 * r2 - r1) / 7.0;
}

double first_stencil(const std::function<double(double)>& f, double h) {
  return (-3.0 * f(0.0) + 4.0 * f(h) - f(2.0 * h)) / (2.0 * h);
}

double second_stencil(const std::function<double(double)>& f, double h) {
  return (2.0 * f(0.0) - 5.0 * f(h) + 4.0 * f(2.0 * h) - f(3.0 * h)) / (h * h);
}

}  // namespace

bool Outcome::enforced_checks_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed || !c.enforced; });
}

std::string format_double(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"table1", "m3-profile", "criterion", "tc0", "dt-growth", "vmu-spectrum"};
  return names;
}

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

RadialPotential parse_potential(const Json& spec) {
  if (!spec.is_object()) throw ConfigError("potential must be a JSON object");
  const std::string type = string_or(spec, "type", "", "potential");
  const double dim_raw = number_or(spec, "dim", 3.0, "potential");
  if (dim_raw != std::floor(dim_raw) || dim_raw < 1 || dim_raw > 3) throw ConfigError("potential.dim must be 1, 2 or 3");
  const Dimension dim(static_cast<int>(dim_raw));
  try {
    if (type == "gaussian" || type == "exponential") {
      check_keys(spec, {"type", "dim", "a", "ell"}, "potential");
      const double a = number(spec, "a", "potential");
      const double ell = number(spec, "ell", "potential");
      if (type == "gaussian") return {Gaussian{a, ell}, dim};
      return {Exponential{a, ell}, dim};
    }
    if (type == "step") {
      check_keys(spec, {"type", "dim", "a", "R"}, "potential");
      return {StepWell{number(spec, "a", "potential"), number(spec, "R", "potential")}, dim};
    }
    if (type == "tabulated") {
      check_keys(spec, {"type", "dim", "r", "v"}, "potential");
      return {Tabulated(number_list(spec, "r", "potential"), number_list(spec, "v", "potential")), dim};
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid potential: ") + e.what());
  }
  throw ConfigError("potential.type must be one of gaussian, exponential, step, tabulated");
}

// ---- table1 ---------------------------------------------------------------

Outcome run_table1(const Json& cfg, const Options& opt, const TjFunction& tj) {
  static const Json empty = Json::object();
  check_keys(cfg, {"command", "tolerances", "outputs"}, "table1 config");
  check_outputs(cfg);
  const Json& tol_cfg = section(cfg, "tolerances", empty);
  check_keys(tol_cfg, {"value", "first_derivative", "second_derivative"}, "tolerances");
  double tv = 1e-6, t1 = 1e-5, t2 = 1e-4;
  if (opt.tol) {
    tv = positive(*opt.tol, "--tol");
    t1 = 10.0 * tv;
    t2 = 100.0 * tv;
  }
  tv = positive(number_or(tol_cfg, "value", tv, "tolerances"), "tolerances.value");
  t1 = positive(number_or(tol_cfg, "first_derivative", t1, "tolerances"), "tolerances.first_derivative");
  t2 = positive(number_or(tol_cfg, "second_derivative", t2, "tolerances"), "tolerances.second_derivative");

  struct Column {
    std::string name;
    std::function<double(double)> f;
  };
  auto t = [&](int j) { return [&tj, j](double x) { return tj(x, j); }; };
  auto m3 = [&](double sign) {
    return [&tj, sign](double x) { return tj(x, 1) + tj(x, 2) + sign * (tj(x, 3) + tj(x, 4)); };
  };
  const std::vector<Column> cols{{"t1", t(1)}, {"t2", t(2)},           {"t3", t(3)},
                                 {"t4", t(4)}, {"m3_dirichlet", m3(1.0)}, {"m3_neumann", m3(-1.0)}};
  struct Cell {
    std::size_t col;
    int order;
    double reference;
  };
  const double p = 1.0 / kPi;
  const std::vector<Cell> cells{
      {0, 0, 2.0},      {1, 0, 0.0},       {2, 0, -2.0},     {3, 0, 0.0},       {4, 0, 0.0},     {5, 0, 4.0},
      {0, 1, -2.0 * p}, {1, 1, -2.0 * p},  {2, 1, 0.0},      {3, 1, 4.0 * p},   {4, 1, 0.0},     {0, 2, -8.0 / 9.0},
      {1, 2, 0.0},      {2, 2, 4.0 / 3.0}, {3, 2, 0.0},      {4, 2, 4.0 / 9.0},
  };

  Outcome o;
  Json inputs;
  inputs["tolerances"] = {{"value", tv}, {"first_derivative", t1}, {"second_derivative", t2}};
  inputs["derivative_steps"] = Json::array({1e-2, 5e-3, 2.5e-3});
  o.report = make_report("table1", std::move(inputs));

  std::vector<double> computed(cells.size());
  parallel_for(cells.size(), opt.threads, [&](std::size_t i) {
    const auto& c = cells[i];
    const auto& f = cols[c.col].f;
    computed[i] = c.order == 0 ? f(0.0) : extrapolate(c.order == 1 ? first_stencil : second_stencil, f);
  });

  CsvWriter csv({"function", "order", "computed", "reference", "abs_error", "tolerance", "status"});
  Json table = Json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    const double tol = c.order == 0 ? tv : (c.order == 1 ? t1 : t2);
    const double err = std::abs(computed[i] - c.reference);
    const bool ok = err <= tol;
    const std::string status = ok ? "pass" : "fail";
    csv.row(cols[c.col].name, c.order, computed[i], c.reference, err, tol, status);
    Json row;
    row["function"] = cols[c.col].name;
    row["order"] = c.order;
    row["computed"] = num(computed[i]);
    row["reference"] = c.reference;
    row["abs_error"] = num(err);
    row["tolerance"] = tol;
    row["status"] = status;
    table.push_back(std::move(row));
    const char* suffix = c.order == 0 ? "(0)" : (c.order == 1 ? "'(0)" : "''(0)");
    o.checks.push_back({cols[c.col].name + suffix, ok, true, "abs error " + format_double(err)});
  }
  o.report["results"] = {{"cells", std::move(table)}};
  o.csv = csv.str();
  finish(o);
  return o;
}

// ---- m3-profile -----------------------------------------------------------

Outcome run_m3_profile(const Json& cfg, const Options& opt) {
  static const Json empty = Json::object();
  check_keys(cfg, {"command", "bc", "x_max", "step", "tolerances", "outputs"}, "m3-profile config");
  check_outputs(cfg);
  const BoundaryCondition bc = bc_of(cfg);
  const double x_max = number_or(cfg, "x_max", 20.0, "config");
  const double step = number_or(cfg, "step", 0.05, "config");
  if (!(step > 0.0)) throw ConfigError("step must be positive");
  if (!(x_max >= 0.0)) throw ConfigError("x_max must be nonnegative");
  const Json& tol_cfg = section(cfg, "tolerances", empty);
  check_keys(tol_cfg, {"floor"}, "tolerances");
  double floor = opt.tol ? positive(*opt.tol, "--tol") : 1e-6;
  floor = positive(number_or(tol_cfg, "floor", floor, "tolerances"), "tolerances.floor");

  Outcome o;
  Json inputs;
  inputs["bc"] = boundary::to_string(bc);
  inputs["x_max"] = x_max;
  inputs["step"] = step;
  inputs["mu"] = 1.0;
  inputs["tolerances"] = {{"floor", floor}};
  o.report = make_report("m3-profile", std::move(inputs));

  const auto rows = boundary::m3_profile(x_max, step, bc, opt.threads);
  CsvWriter csv({"x", "m3"});
  double min_v = rows.front().m3, min_x = 0.0;
  bool negative = false;
  for (const auto& r : rows) {
    csv.row(r.x, r.m3);
    if (r.m3 < min_v) {
      min_v = r.m3;
      min_x = r.x;
    }
    if (r.x > 0.0 && r.m3 < 0.0) negative = true;
  }
  o.report["results"] = {{"rows", rows.size()}, {"m3_at_zero", rows.front().m3}, {"min", min_v}, {"argmin", min_x}};
  if (bc == BoundaryCondition::Dirichlet) {
    o.checks.push_back({"dirichlet_nonnegative", min_v >= -floor, false,
                        "min " + format_double(min_v) + " at x = " + format_double(min_x)});
  } else {
    o.checks.push_back({"neumann_value_at_zero", std::abs(rows.front().m3 - 4.0) <= floor, true,
                        "m3(0) = " + format_double(rows.front().m3)});
    o.checks.push_back({"neumann_sign_change", negative, true,
                        "min " + format_double(min_v) + " at x = " + format_double(min_x)});
  }
  o.csv = csv.str();
  finish(o);
  return o;
}

// ---- criterion ------------------------------------------------------------

Outcome run_criterion(const Json& cfg, const Options& opt) {
  check_keys(cfg, {"command", "potential", "mu", "mu_sweep", "bc", "outputs"}, "criterion config");
  check_outputs(cfg);
  if (!cfg.contains("potential")) throw ConfigError("criterion requires a potential");
  const RadialPotential V = parse_potential(cfg["potential"]);
  if (V.dim().value() != 3) throw ConfigError("criterion requires a d = 3 potential");
  const BoundaryCondition bc = bc_of(cfg);
  std::vector<double> mus;
  if (cfg.contains("mu_sweep")) {
    if (cfg.contains("mu")) throw ConfigError("give either mu or mu_sweep, not both");
    mus = number_list(cfg, "mu_sweep", "config");
    if (mus.empty()) throw ConfigError("mu_sweep must not be empty");
  } else {
    mus.push_back(number_or(cfg, "mu", 1.0, "config"));
  }
  for (double m : mus) positive(m, "mu");

  Outcome o;
  Json inputs;
  inputs["potential"] = potential_echo(cfg["potential"]);
  inputs["bc"] = boundary::to_string(bc);
  inputs["mu"] = mus;
  o.report = make_report("criterion", std::move(inputs));

  std::vector<boundary::CriterionReport> reps(mus.size());
  parallel_for(mus.size(), opt.threads, [&](std::size_t i) { reps[i] = boundary::criterion(V, mus[i], bc); });

  CsvWriter csv({"mu", "value", "sign"});
  Json list = Json::array();
  std::size_t inconclusive = 0;
  for (const auto& r : reps) {
    csv.row(r.mu, r.value, boundary::to_string(r.sign));
    Json j;
    j["mu"] = r.mu;
    j["value"] = num(r.value);
    j["sign"] = boundary::to_string(r.sign);
    j["error_estimate"] = num(r.error_estimate);
    j["per_term"] = {{"t1", num(r.per_term[0])}, {"t2", num(r.per_term[1])}, {"t3", num(r.per_term[2])},
                     {"t4", num(r.per_term[3])}};
    list.push_back(std::move(j));
    if (r.sign == boundary::Sign::Inconclusive) ++inconclusive;
  }
  o.report["results"] = {{"criterion", std::move(list)}};
  o.checks.push_back({"sign_conclusive", inconclusive == 0, false,
                      std::to_string(inconclusive) + " of " + std::to_string(reps.size()) + " inconclusive"});
  o.csv = csv.str();
  finish(o);
  return o;
}

// ---- tc0 ------------------------------------------------------------------

Outcome run_tc0(const Json& cfg, const Options& opt) {
  static const Json empty = Json::object();
  check_keys(cfg, {"command", "potential", "mu", "lambda", "tolerances", "outputs"}, "tc0 config");
  check_outputs(cfg);
  if (!cfg.contains("potential")) throw ConfigError("tc0 requires a potential");
  const RadialPotential V = parse_potential(cfg["potential"]);
  if (!V.nonnegative()) throw ConfigError("tc0 requires V >= 0");
  const double mu = positive(number_or(cfg, "mu", 1.0, "config"), "mu");
  const std::vector<double> lambdas = number_list(cfg, "lambda", "config");
  if (lambdas.empty()) throw ConfigError("lambda list must not be empty");
  for (double l : lambdas) positive(l, "lambda");
  const Json& tol_cfg = section(cfg, "tolerances", empty);
  check_keys(tol_cfg, {"accuracy", "root"}, "tolerances");
  bs::Tc0Options topts;
  if (opt.tol) topts.accuracy = positive(*opt.tol, "--tol");
  topts.accuracy = positive(number_or(tol_cfg, "accuracy", topts.accuracy, "tolerances"), "tolerances.accuracy");
  topts.root_tol = positive(number_or(tol_cfg, "root", topts.root_tol, "tolerances"), "tolerances.root");

  Outcome o;
  Json inputs;
  inputs["potential"] = potential_echo(cfg["potential"]);
  inputs["mu"] = mu;
  inputs["lambda"] = lambdas;
  inputs["tolerances"] = {{"accuracy", topts.accuracy},
                          {"root", topts.root_tol},
                          {"floor_ratio", topts.floor_ratio},
                          {"ceiling_ratio", topts.ceiling_ratio}};
  o.report = make_report("tc0", std::move(inputs));

  struct Row {
    bs::Tc0Result r;
    std::string error;
  };
  std::vector<Row> rows(lambdas.size());
  parallel_for(lambdas.size(), opt.threads, [&](std::size_t i) {
    try {
      rows[i].r = bs::tc0(V, mu, lambdas[i], topts);
    } catch (const std::exception& e) {
      rows[i].r.lambda = lambdas[i];
      rows[i].r.Tc = std::nan("");
      rows[i].error = e.what();
    }
  });
  const double e = e_mu(V, mu);

  CsvWriter csv({"lambda", "Tc", "residual", "e_mu_m_mu_lambda"});
  Json list = Json::array();
  std::size_t failures = 0;
  double worst_residual = 0.0, worst_grid = 0.0;
  std::vector<double> deviations;
  for (const auto& row : rows) {
    const auto& r = row.r;
    Json j;
    j["lambda"] = r.lambda;
    if (!row.error.empty()) {
      ++failures;
      csv.row(r.lambda, std::nan(""), std::nan(""), std::nan(""));
      j["error"] = row.error;
      list.push_back(std::move(j));
      continue;
    }
    csv.row(r.lambda, r.Tc, r.residual, r.e_m_lambda);
    const double deviation = std::abs(r.e_m_lambda - 1.0) / r.lambda;
    deviations.push_back(deviation);
    worst_residual = std::max(worst_residual, r.residual);
    worst_grid = std::max(worst_grid, r.grid_change);
    j["Tc"] = num(r.Tc);
    j["residual"] = num(r.residual);
    j["e_mu_m_mu_lambda"] = num(r.e_m_lambda);
    j["asymptotic_deviation"] = num(deviation);
    j["a"] = num(r.a);
    j["grid"] = {{"level", r.level},
                 {"size", r.grid_size},
                 {"refinement_scale", num(r.refinement_scale)},
                 {"relative_change_on_doubling", num(r.grid_change)}};
    list.push_back(std::move(j));
  }
  o.report["results"] = {{"e_mu", num(e)}, {"rows", std::move(list)}};

  o.checks.push_back({"all_rows_solved", failures == 0, true, std::to_string(failures) + " failed rows"});
  std::vector<std::pair<double, double>> ok;
  for (const auto& row : rows)
    if (row.error.empty()) ok.emplace_back(row.r.lambda, row.r.Tc);
  std::sort(ok.begin(), ok.end());
  bool mono = true;
  for (std::size_t i = 1; i < ok.size(); ++i)
    if (ok[i].first > ok[i - 1].first && !(ok[i].second > ok[i - 1].second)) mono = false;
  o.checks.push_back({"tc_increasing_in_lambda", mono, true, "T_c ordered as lambda"});
  o.checks.push_back({"root_closed", worst_residual <= 1e-8, true,
                      "max |lambda a - 1| = " + format_double(worst_residual)});
  o.checks.push_back({"grid_converged", worst_grid <= 10.0 * topts.accuracy, true,
                      "max relative change on doubling = " + format_double(worst_grid)});
  if (deviations.size() >= 2) {
    const auto [lo, hi] = std::minmax_element(deviations.begin(), deviations.end());
    const double spread = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
    o.checks.push_back({"asymptotic_deviation_bounded", spread <= 2.0, false,
                        "max/min of |e_mu m_mu(Tc) - 1/lambda| = " + format_double(spread)});
  }
  o.csv = csv.str();
  finish(o);
  return o;
}

// ---- dt-growth ------------------------------------------------------------

Outcome run_dt_growth(const Json& cfg, const Options& opt) {
  static const Json empty = Json::object();
  check_keys(cfg, {"command", "potential", "mu", "T", "model", "tolerances", "outputs"}, "dt-growth config");
  check_outputs(cfg);
  if (!cfg.contains("potential")) throw ConfigError("dt-growth requires a potential");
  const RadialPotential V = parse_potential(cfg["potential"]);
  const int d = V.dim().value();
  if (d == 3) throw ConfigError("dt-growth supports d = 1 and d = 2 only");
  const double mu = positive(number_or(cfg, "mu", 1.0, "config"), "mu");
  std::vector<double> Ts;
  if (cfg.contains("T")) {
    Ts = number_list(cfg, "T", "config");
  } else {
    Ts = {1e-2 * mu, 1e-3 * mu, 1e-4 * mu};
  }
  if (Ts.size() < 3) throw ConfigError("dt-growth needs at least 3 temperatures");
  for (double T : Ts) positive(T, "T");
  diag::GrowthModel model = d == 1 ? diag::GrowthModel::InverseT : diag::GrowthModel::LogCubed;
  if (cfg.contains("model")) {
    try {
      model = diag::parse_growth_model(string_or(cfg, "model", "", "config"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  const Json& tol_cfg = section(cfg, "tolerances", empty);
  check_keys(tol_cfg, {"max_deviation"}, "tolerances");
  double limit = model == diag::GrowthModel::InverseT ? 0.20 : 0.15;
  if (opt.tol) limit = positive(*opt.tol, "--tol");
  limit = positive(number_or(tol_cfg, "max_deviation", limit, "tolerances"), "tolerances.max_deviation");

  Outcome o;
  Json inputs;
  inputs["potential"] = potential_echo(cfg["potential"]);
  inputs["mu"] = mu;
  inputs["T"] = Ts;
  inputs["model"] = diag::to_string(model);
  inputs["tolerances"] = {{"max_deviation", limit}};
  o.report = make_report("dt-growth", std::move(inputs));

  std::vector<diag::GrowthSample> samples(Ts.size());
  parallel_for(Ts.size(), opt.threads, [&](std::size_t i) {
    samples[i] = {Ts[i], d == 1 ? diag::dt_form_d1(V, Ts[i], mu) : diag::dt_form_d2(V, Ts[i], mu)};
  });
  const auto fit = diag::fit_growth(samples, model, mu);

  auto basis = [&](double T) {
    if (model == diag::GrowthModel::InverseT) return 1.0 / T;
    const double L = std::log(mu / T);
    return L * L * L;
  };
  CsvWriter csv({"T", "value", "normalized"});
  Json rows = Json::array();
  double vmax = 0.0;
  for (const auto& s : fit.samples) vmax = std::max(vmax, std::abs(s.value));
  bool nonneg = true, increasing = true;
  for (std::size_t i = 0; i < fit.samples.size(); ++i) {
    const auto& s = fit.samples[i];
    csv.row(s.T, s.value, s.value / basis(s.T));
    rows.push_back({{"T", s.T}, {"value", num(s.value)}, {"normalized", num(s.value / basis(s.T))}});
    if (s.value < -1e-10 * vmax) nonneg = false;
    if (i > 0 && !(s.value > fit.samples[i - 1].value)) increasing = false;
  }
  o.report["results"] = {{"samples", std::move(rows)},
                         {"fitted_constant", num(fit.fitted_constant)},
                         {"max_relative_deviation", num(fit.max_relative_deviation)},
                         {"successive_ratios", fit.successive_ratios}};
  o.checks.push_back({"nonnegative", nonneg, true, "values >= -1e-10 max|value|"});
  o.checks.push_back({"decreasing_in_T", increasing, true, "value grows as T decreases"});
  if (model == diag::GrowthModel::InverseT) {
    o.checks.push_back({"growth_inverse_T", fit.max_relative_deviation <= limit, true,
                        "max relative deviation of T*value " + format_double(fit.max_relative_deviation)});
  } else {
    double worst = 0.0;
    for (double r : fit.successive_ratios) worst = std::max(worst, std::abs(r - 1.0));
    o.checks.push_back({"growth_log_cubed", worst <= limit, true,
                        "max |ratio - 1| of value/ln^3(mu/T) " + format_double(worst)});
  }
  o.csv = csv.str();
  finish(o);
  return o;
}

// ---- vmu-spectrum ---------------------------------------------------------

Outcome run_vmu_spectrum(const Json& cfg, const Options& opt) {
  check_keys(cfg, {"command", "potential", "mu", "l_max", "outputs"}, "vmu-spectrum config");
  check_outputs(cfg);
  if (!cfg.contains("potential")) throw ConfigError("vmu-spectrum requires a potential");
  const RadialPotential V = parse_potential(cfg["potential"]);
  if (V.dim().value() == 1) throw ConfigError("vmu-spectrum supports d = 2 and d = 3 only");
  const double mu = positive(number_or(cfg, "mu", 1.0, "config"), "mu");
  const double lraw = number_or(cfg, "l_max", 4.0, "config");
  if (lraw != std::floor(lraw) || lraw < 0 || lraw > 200) throw ConfigError("l_max must be an integer in [0, 200]");
  const int l_max = static_cast<int>(lraw);
  if (l_max < 1) throw ConfigError("insufficient data: l_max must be at least 1 to compare v_0 with higher channels");
  (void)opt;

  Outcome o;
  Json inputs;
  inputs["potential"] = potential_echo(cfg["potential"]);
  inputs["mu"] = mu;
  inputs["l_max"] = l_max;
  o.report = make_report("vmu-spectrum", std::move(inputs));

  const auto v = vmu_spectrum(V, mu, l_max);
  CsvWriter csv({"l", "v"});
  for (int l = 0; l <= l_max; ++l) csv.row(l, v[static_cast<std::size_t>(l)]);
  const double rest = *std::max_element(v.begin() + 1, v.end());
  const bool nondegenerate = v[0] > rest;
  Json vals = Json::array();
  for (double x : v) vals.push_back(num(x));
  o.report["results"] = {{"eigenvalues", std::move(vals)},
                         {"verdict", nondegenerate ? "nondegenerate" : "degenerate_or_not_top"}};
  o.checks.push_back({"v0_nondegenerate_top", nondegenerate, false,
                      "v0 = " + format_double(v[0]) + ", max_{l>=1} v_l = " + format_double(rest)});
  o.csv = csv.str();
  finish(o);
  return o;
}

Outcome run_command(const std::string& command, const Json& cfg, const Options& opt) {
  if (cfg.contains("command")) {
    if (!cfg["command"].is_string() || cfg["command"].get<std::string>() != command)
      throw ConfigError("config command does not match the subcommand '" + command + "'");
  }
  if (command == "table1") return run_table1(cfg, opt);
  if (command == "m3-profile") return run_m3_profile(cfg, opt);
  if (command == "criterion") return run_criterion(cfg, opt);
  if (command == "tc0") return run_tc0(cfg, opt);
  if (command == "dt-growth") return run_dt_growth(cfg, opt);
  if (command == "vmu-spectrum") return run_vmu_spectrum(cfg, opt);
  throw ConfigError("unknown command '" + command + "'");
}

int execute(const std::string& command, const Options& opt, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  Json cfg = Json::object();
  try {
    if (opt.threads < 1) throw ConfigError("--threads must be at least 1");
    if (opt.config_path) cfg = load_config(*opt.config_path);
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    o = run_command(command, cfg, opt);
  } catch (const ConfigError& e) {
    err << "bcs: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "bcs: " << command << " failed: " << e.what() << '\n';
    return kExitRuntime;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (opt.timing) o.report["wall_time_s"] = wall;

  std::optional<std::string> csv_path = opt.out;
  std::optional<std::string> json_path;
  if (cfg.contains("outputs")) {
    const auto& outs = cfg["outputs"];
    if (!csv_path && outs.contains("csv")) csv_path = outs["csv"].get<std::string>();
    if (outs.contains("json")) json_path = outs["json"].get<std::string>();
  }
  if (csv_path && !o.csv.empty()) {
    std::ofstream f(*csv_path, std::ios::binary);
    if (!(f << o.csv)) {
      err << "bcs: cannot write '" << *csv_path << "'\n";
      return kExitRuntime;
    }
  }
  const std::string text = o.report.dump(2) + "\n";
  if (json_path) {
    std::ofstream f(*json_path, std::ios::binary);
    if (!(f << text)) {
      err << "bcs: cannot write '" << *json_path << "'\n";
      return kExitRuntime;
    }
  } else {
    out << text;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", wall);
  err << "bcs: " << command << " finished in " << buf << " s\n";
  for (const auto& c : o.checks)
    if (!c.passed) err << "bcs: " << (c.enforced ? "FAILED" : "warning") << ": " << c.name << " (" << c.detail << ")\n";
  return o.enforced_checks_pass() ? kExitOk : kExitCheckFailed;
}

}  // namespace bcs::cli
