// fgig: batch front end producing JSON reports and CSV tables.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "fgig.hpp"
#include "fgig/report.hpp"

namespace {

using fgig::report::CsvTable;
using fgig::report::Json;

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Grid {
  double lo = 0.0, hi = 0.0;
  std::size_t count = 0;
};

Grid parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw fgig::DomainError("grid must look like lo:hi:count, got '" + text + "'");
  Grid g;
  try {
    std::size_t used = 0;
    g.lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("lo");
    g.hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("hi");
    const long long n = std::stoll(parts[2], &used);
    if (used != parts[2].size() || n < 1) throw std::invalid_argument("count");
    g.count = static_cast<std::size_t>(n);
  } catch (const std::invalid_argument&) {
    throw fgig::DomainError("grid must look like lo:hi:count, got '" + text + "'");
  } catch (const std::out_of_range&) {
    throw fgig::DomainError("grid value out of range in '" + text + "'");
  }
  if (!(g.hi >= g.lo)) throw fgig::DomainError("grid needs lo <= hi");
  return g;
}

std::vector<double> grid_points(const Grid& g) {
  if (g.count == 1) return {g.lo};
  return fgig::linspace(g.lo, g.hi, g.count);
}

struct Request {
  std::optional<double> alpha, beta, lambda, a, b, A, B;
  std::optional<std::string> grid;
  std::string format = "json";
  std::string output = "-";
  unsigned threads = 0;
  // subcommand specific
  double imag = 0.5;
  std::size_t order = 8;
  std::size_t points = 2001;
  std::size_t nodes = 512;
  double beta_max = 1e-1, beta_min = 1e-4;
  int per_decade = 2;
};

struct Output {
  Json json;
  CsvTable csv;
};

double need(const std::optional<double>& v, const char* name) {
  if (!v) throw fgig::DomainError(std::string("missing --") + name);
  if (!std::isfinite(*v)) throw fgig::DomainError(std::string("--") + name + " must be finite");
  return *v;
}

fgig::NaturalParams natural(const Request& r) {
  fgig::NaturalParams p{need(r.alpha, "alpha"), need(r.beta, "beta"), need(r.lambda, "lambda")};
  const auto v = fgig::validate(p);
  if (!v.valid()) {
    for (const auto& c : v.checks)
      if (!c.pass) throw fgig::DomainError("invalid parameters: " + c.name + " fails");
  }
  return p;
}

unsigned thread_count(const Request& r) {
  if (r.threads > 0) return r.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

Json tolerance_block(std::initializer_list<std::pair<const char*, double>> items) {
  Json t = Json::object();
  for (const auto& [k, v] : items) t[k] = v;
  return t;
}

// ---- params

Output run_params(const Request& r) {
  const int given = (r.alpha || r.beta ? 1 : 0) + (r.a || r.b ? 1 : 0) + (r.A || r.B ? 1 : 0);
  if (given != 1) throw fgig::DomainError("give exactly one of (--alpha,--beta), (--a,--b), (--A,--B)");
  const double lambda = need(r.lambda, "lambda");
  Output out;
  out.json = fgig::report::envelope("params");
  fgig::NaturalParams p;
  Json input;
  if (r.alpha || r.beta) {
    p = natural(r);
    input = fgig::report::to_json(p);
  } else if (r.a || r.b) {
    const fgig::SupportForm s{need(r.a, "a"), need(r.b, "b"), lambda};
    const auto v = fgig::validate(s);
    if (!v.valid()) throw fgig::DomainError("invalid support form: need 0 < a < b");
    p = fgig::from_support(s);
    input = fgig::report::to_json(s);
  } else {
    const fgig::SpreadForm s{need(r.A, "A"), need(r.B, "B"), lambda};
    const auto v = fgig::validate(s);
    if (!v.valid()) throw fgig::DomainError("invalid spread form: need 0 < A < B and B > |lambda| A");
    p = fgig::from_spread(s);
    input = fgig::report::to_json(s);
  }
  const fgig::FgigLaw law(p);
  const auto res = fgig::support_residuals(p, law.support);
  const auto& rt = law.roots;
  const double id1 = fgig::relative_difference(4.0 * p.beta * rt.eta * rt.delta * rt.delta, p.alpha * p.alpha);
  const double f0 = fgig::relative_difference(fgig::f_polynomial(p, law.support, 0.0), p.alpha * p.alpha);
  const double fa = fgig::relative_difference(fgig::f_polynomial(p, law.support, p.alpha),
                                              (p.lambda * p.alpha) * (p.lambda * p.alpha));
  const double tol = 1e-12;
  out.json["input"] = input;
  out.json["law"] = fgig::report::to_json(law);
  out.json["inverse"] = fgig::report::to_json(fgig::invert_params(p));
  out.json["residuals"] = Json{{"support_eq1", res[0]}, {"support_eq2", res[1]}};
  out.json["identities"] = Json{{"four_beta_eta_delta_sq_vs_alpha_sq", id1}, {"f0_vs_alpha_sq", f0}, {"f_alpha_vs_lambda_alpha_sq", fa}};
  out.json["tolerances"] = tolerance_block({{"residual", tol}, {"identity", tol}});
  const bool roots_ok = rt.gamma < 0.0 && rt.delta < 0.0 && rt.eta >= p.alpha;
  out.json["verdicts"] = Json{{"residuals", std::max(res[0], res[1]) <= tol},
                              {"identities", std::max({id1, f0, fa}) <= tol},
                              {"root_signs", roots_ok},
                              {"pass", std::max(res[0], res[1]) <= tol && std::max({id1, f0, fa}) <= tol && roots_ok}};
  out.csv.header = {"alpha", "beta", "lambda", "a", "b", "A", "B", "gamma", "delta", "eta"};
  out.csv.add({p.alpha, p.beta, p.lambda, law.a(), law.b(), law.spread.A, law.spread.B, rt.gamma, rt.delta, rt.eta});
  return out;
}

// ---- density

Output run_density(const Request& r) {
  const auto p = natural(r);
  const fgig::FgigLaw law(p);
  Grid g{law.a(), law.b(), 401};
  if (r.grid) g = parse_grid(*r.grid);
  const auto m = fgig::build_fgig(law, fgig::default_node_count(law.a(), law.b()));
  const auto xs = grid_points(g);
  Output out;
  out.csv.header = {"x", "density", "cdf"};
  std::vector<double> dens, cdf;
  for (double x : xs) {
    dens.push_back(fgig::fgig_density(law, x));
    cdf.push_back(m.cdf(x));
    out.csv.add({x, dens.back(), cdf.back()});
  }
  const double mass = m.mass();
  const double md = fgig::mode(law);
  const double mode_res = std::abs(fgig::mode_quadratic(law)(md));
  out.json = fgig::report::envelope("density");
  out.json["input"] = fgig::report::to_json(p);
  out.json["support"] = fgig::report::to_json(law.support);
  out.json["mass"] = mass;
  out.json["mean"] = fgig::moment(m, 1);
  out.json["mode"] = md;
  out.json["mode_residual"] = mode_res;
  out.json["tolerances"] = tolerance_block({{"mass", 1e-10}, {"mode_residual", 1e-10}});
  out.json["verdicts"] = Json{{"mass", std::abs(mass - 1.0) <= 1e-10},
                              {"mode", mode_res <= 1e-10},
                              {"pass", std::abs(mass - 1.0) <= 1e-10 && mode_res <= 1e-10}};
  out.json["grid"] = Json{{"x", xs}, {"density", dens}, {"cdf", cdf}};
  return out;
}

// ---- transform

Output run_transform(const Request& r) {
  const auto p = natural(r);
  const fgig::FgigLaw law(p);
  if (!(r.imag > 0.0)) throw fgig::DomainError("--imag must be positive");
  if (r.order < 1 || r.order > 64) throw fgig::DomainError("--order must lie in [1, 64]");
  Grid g{-2.0 * law.b(), 2.0 * law.b(), 201};
  if (r.grid) g = parse_grid(*r.grid);
  const fgig::FgigR rt(law);
  Output out;
  out.csv.header = {"x", "y", "G_re", "G_im", "r_re", "r_im"};
  for (double x : grid_points(g)) {
    const fgig::cplx G = fgig::fgig_cauchy(law, fgig::cplx(x, r.imag));
    const fgig::cplx R = rt(fgig::cplx(x, -r.imag));
    out.csv.add({x, r.imag, G.real(), G.imag(), R.real(), R.imag()});
  }
  fgig::FidGrid fg;
  fg.threads = thread_count(r);
  const auto cert = fgig::fid_certificate(law, fg);
  const auto kappa = fgig::free_cumulants(law, r.order);
  out.json = fgig::report::envelope("transform");
  out.json["input"] = fgig::report::to_json(p);
  out.json["roots"] = fgig::report::to_json(law.roots);
  out.json["r_at_zero"] = rt(fgig::cplx(0.0, 0.0)).real();
  out.json["free_cumulants"] = kappa;
  out.json["fid_certificate"] = fgig::report::to_json(cert);
  out.json["tolerances"] = tolerance_block({{"fid_max_imag", cert.tolerance}});
  out.json["verdicts"] = Json{{"freely_infinitely_divisible", cert.pass}, {"pass", cert.pass}};
  return out;
}

// ---- levy

Output run_levy(const Request& r) {
  const auto p = natural(r);
  const auto t = fgig::levy_triplet(p);
  double recon = 0.0;
  const fgig::FgigR rt(t.law);
  for (fgig::cplx z : fgig::lower_half_plane_probes(p.alpha))
    recon = std::max(recon, std::abs(z * rt(z) - fgig::reconstruct_cumulant(t, z)));
  const double tol = 1e-6;
  Output out;
  Grid g{0.0, t.upper(), 202};
  if (r.grid) g = parse_grid(*r.grid);
  out.csv.header = {"x", "levy_density"};
  for (double x : grid_points(g)) out.csv.add({x, fgig::levy_density(t.law, x)});
  out.json = fgig::report::envelope("levy");
  out.json["input"] = fgig::report::to_json(p);
  out.json["triplet"] = fgig::report::to_json(t);
  out.json["small_jump_integral"] = fgig::levy_small_jump_integral(t);
  out.json["reconstruction_residual"] = recon;
  out.json["tolerances"] = tolerance_block({{"reconstruction", tol}, {"drift", tol}, {"semicircular", tol}});
  const bool drift_ok = std::abs(t.drift) <= tol, semi_ok = std::abs(t.semicircular) <= tol;
  out.json["verdicts"] = Json{{"reconstruction", recon <= tol},
                              {"drift_vanishes", drift_ok},
                              {"semicircular_vanishes", semi_ok},
                              {"pass", recon <= tol && drift_ok && semi_ok}};
  return out;
}

// ---- fsd

Output run_fsd(const Request& r) {
  const auto p = natural(r);
  const auto rep = fgig::fsd_report(p);
  Output out;
  out.json = fgig::report::envelope("fsd");
  out.json["input"] = fgig::report::to_json(p);
  out.json["report"] = fgig::report::to_json(rep);
  out.json["tolerances"] = tolerance_block({{"k_increment", 1e-9}});
  out.json["verdicts"] = Json{{"freely_selfdecomposable", rep.verdict}, {"pass", rep.agree}};
  out.csv.header = {"alpha", "beta", "lambda", "A", "B", "discriminant", "threshold", "verdict", "k_nonincreasing"};
  out.csv.add({p.alpha, p.beta, p.lambda, rep.A, rep.B, rep.discriminant, rep.threshold, rep.verdict ? 1.0 : 0.0,
               rep.k_nonincreasing ? 1.0 : 0.0});
  return out;
}

// ---- convolve

Output run_convolve(const Request& r) {
  const auto p = natural(r);
  if (!(p.lambda > 0.0)) throw fgig::DomainError("convolve needs lambda > 0");
  const fgig::NaturalParams minus{p.alpha, p.beta, -p.lambda};
  const auto x = fgig::build_fgig(minus);
  const auto y = fgig::build_free_poisson({1.0 / p.alpha, p.lambda});
  fgig::ConvolveOptions opt;
  opt.points = r.points;
  opt.threads = thread_count(r);
  spdlog::info("convolving mu({}, {}, {}) with nu({}, {}) on {} points", minus.alpha, minus.beta, minus.lambda,
               1.0 / p.alpha, p.lambda, opt.points);
  const auto res = fgig::free_convolve(x, y, opt);
  const fgig::FgigLaw target(p);
  const auto exact = fgig::build_fgig(target, fgig::default_node_count(target.a(), target.b()));
  const double kd = fgig::kolmogorov_distance(res.measure, exact);
  const double radd = fgig::r_additivity_residual(p, fgig::lower_half_plane_probes(p.alpha));
  Output out;
  out.csv.header = {"x", "density", "exact_density"};
  for (std::size_t i = 0; i < res.grid.size(); ++i)
    out.csv.add({res.grid[i], res.density[i], fgig::fgig_density(target, res.grid[i])});
  out.json = fgig::report::envelope("convolve");
  out.json["input"] = fgig::report::to_json(p);
  out.json["free_poisson"] = Json{{"jump", 1.0 / p.alpha}, {"rate", p.lambda}};
  out.json["grid_points"] = opt.points;
  out.json["kolmogorov_distance"] = kd;
  out.json["mass_error"] = res.measure.mass() - 1.0;
  out.json["mean_error"] = fgig::moment(res.measure, 1) - fgig::moment(exact, 1);
  out.json["subordination_identity_residual"] = res.max_identity_residual;
  out.json["min_imag_excess"] = res.min_imag_excess;
  out.json["r_additivity_residual"] = radd;
  out.json["tolerances"] = tolerance_block({{"kolmogorov", 1e-4}, {"r_additivity", 1e-10}});
  out.json["verdicts"] = Json{{"kolmogorov", kd <= 1e-4}, {"r_additivity", radd <= 1e-10}, {"pass", kd <= 1e-4 && radd <= 1e-10}};
  return out;
}

// ---- fixpoint

Output run_fixpoint(const Request& r) {
  const double alpha = need(r.alpha, "alpha"), lambda = need(r.lambda, "lambda");
  if (!(alpha > 0.0) || !(lambda > 0.0)) throw fgig::DomainError("fixpoint needs alpha > 0 and lambda > 0");
  if (r.order < 2 || r.order > 32) throw fgig::DomainError("--order must lie in [2, 32]");
  fgig::ConvolveOptions opt;
  opt.threads = thread_count(r);
  const auto rep = fgig::verify_fixed_point(alpha, lambda, r.order, opt);
  const auto ic = fgig::initial_coefficients(alpha, lambda, rep.c);
  const auto ser = fgig::series_coefficients(alpha, lambda, r.order);
  const double q = 1.0 + rep.c * rep.c, c2 = rep.c * rep.c;
  double worst_residual = 0.0, worst_collinear = 0.0, min_linear_slack = HUGE_VAL;
  for (double v : ser.residuals) worst_residual = std::max(worst_residual, v);
  for (double v : ser.collinearity) worst_collinear = std::max(worst_collinear, v);
  for (double v : ser.linear_coefficients) min_linear_slack = std::min(min_linear_slack, v - ser.linear_bound);
  const bool alpha1_ok = ic.alpha1 >= 1.0 / (q * q) && ic.alpha1 <= 1.0 / q;
  const bool beta1_ok = ic.beta1_from_alpha1 >= -1.0 && ic.beta1_from_alpha1 <= -c2;
  const double beta1_gap = std::abs(ic.beta1_from_alpha1 - ic.beta1_from_derivative);
  Output out;
  out.json = fgig::report::envelope("fixpoint");
  out.json["input"] = Json{{"alpha", alpha}, {"lambda", lambda}, {"order", r.order}};
  out.json["report"] = fgig::report::to_json(rep);
  out.json["initial"] = Json{{"alpha0", ic.alpha0},
                             {"alpha1", ic.alpha1},
                             {"beta1_from_alpha1", ic.beta1_from_alpha1},
                             {"beta1_from_derivative", ic.beta1_from_derivative}};
  out.json["recursion"] = Json{{"p", ser.p},
                               {"linear_bound", ser.linear_bound},
                               {"linear_coefficients", ser.linear_coefficients},
                               {"max_order_residual", worst_residual},
                               {"max_collinearity", worst_collinear},
                               {"n_series", fgig::report::to_json(ser.n)}};
  const double tol_dist = 1e-3, tol_dev = 1e-6, tol_key = 1e-9;
  Json verdicts{{"fixed_point_distance", rep.fixed_point_distance <= tol_dist},
                {"series_vs_oracle", rep.max_rel_dev <= tol_dev},
                {"key_equation", rep.key_equation_residual <= tol_key},
                {"quartic", rep.quartic_residual <= 1e-12},
                {"alpha1_bounds", alpha1_ok},
                {"beta1_bounds", beta1_ok},
                {"beta1_two_routes", beta1_gap <= 1e-10},
                {"linear_coefficient_bound", min_linear_slack >= -1e-9}};
  if (r.beta) {
    const double beta = need(r.beta, "beta");
    if (!(beta > 0.0)) throw fgig::DomainError("--beta must be positive");
    const auto it = fgig::verify_iterated(alpha, beta, lambda, opt);
    out.json["iterated"] = fgig::report::to_json(it);
    verdicts["iterated"] = it.final_distance <= 2e-3;
  }
  bool pass = true;
  for (const auto& v : verdicts) pass = pass && v.get<bool>();
  verdicts["pass"] = pass;
  out.json["tolerances"] = tolerance_block({{"fixed_point_distance", tol_dist},
                                            {"series_vs_oracle", tol_dev},
                                            {"key_equation", tol_key},
                                            {"iterated_distance", 2e-3}});
  out.json["verdicts"] = verdicts;
  out.csv.header = {"k", "series", "oracle", "rel_dev"};
  for (std::size_t k = 0; k < rep.series.coeffs.size(); ++k)
    out.csv.add({static_cast<double>(k), rep.series.coeffs[k], rep.oracle.coeffs[k],
                 fgig::relative_difference(rep.series.coeffs[k], rep.oracle.coeffs[k])});
  return out;
}

// ---- limits

Output run_limits(const Request& r) {
  const double alpha = need(r.alpha, "alpha"), lambda = need(r.lambda, "lambda");
  if (!(alpha > 0.0)) throw fgig::DomainError("--alpha must be positive");
  if (!(r.beta_max > r.beta_min) || !(r.beta_min > 0.0)) throw fgig::DomainError("need beta-max > beta-min > 0");
  if (r.per_decade < 1) throw fgig::DomainError("--per-decade must be >= 1");
  // below this the support endpoints lose all significant digits of b - a
  if (r.beta_min < 1e-12) throw fgig::DomainError("--beta-min must be >= 1e-12");
  const auto betas = fgig::beta_ladder(r.beta_max, r.beta_min, r.per_decade);
  if (betas.size() > 200) throw fgig::DomainError("curve limited to 200 points; lower --per-decade");
  const auto curve = fgig::convergence_curve(alpha, lambda, betas);
  const auto fit = fgig::scaling_exponents(alpha, lambda, fgig::beta_ladder(1e-2, 1e-9, 1));
  const auto roots = fgig::root_limits(alpha, lambda);
  const auto lim = fgig::limit_measure(alpha, lambda);
  Output out;
  out.csv.header = {"beta", "a", "b", "delta", "eta", "distance"};
  Json rows = Json::array();
  for (const auto& c : curve) {
    out.csv.add({c.beta, c.a, c.b, c.delta, c.eta, c.distance});
    rows.push_back(Json{{"beta", c.beta}, {"a", c.a}, {"b", c.b}, {"delta", c.delta}, {"eta", c.eta}, {"distance", c.distance}});
  }
  out.json = fgig::report::envelope("limits");
  out.json["input"] = Json{{"alpha", alpha}, {"lambda", lambda}};
  out.json["regime"] = fgig::regime_name(lim.regime);
  out.json["distance_metric"] = "levy";
  out.json["curve"] = rows;
  out.json["scaling"] = fgig::report::to_json(fit);
  out.json["root_limits"] = fgig::report::to_json(roots);
  const bool roots_ok = (roots.delta_unbounded || roots.delta_rel_error <= 0.01) &&
                        (roots.eta_unbounded || roots.eta_rel_error <= 0.01);
  const bool reached = !curve.empty() && curve.back().distance <= 0.05;
  out.json["tolerances"] = tolerance_block({{"final_distance", 0.05}, {"exponent", 0.05}, {"root_limit_relative", 0.01}});
  out.json["verdicts"] = Json{{"final_distance", reached},
                              {"exponents", fit.match},
                              {"root_limits", roots_ok},
                              {"pass", reached && fit.match && roots_ok}};
  return out;
}

// ---- entropy

Output run_entropy(const Request& r) {
  const auto p = natural(r);
  if (r.nodes < 16) throw fgig::DomainError("--nodes must be >= 16");
  const fgig::Potential V = fgig::potential(p);
  auto q = [&](double x) { return fgig::classical_gig_density(p.alpha, p.beta, p.lambda, x); };
  const double bound = fgig::gibbs_bound(p.alpha, p.beta, p.lambda);
  const double H = fgig::classical_entropy(q, V);
  const auto m = fgig::build_fgig(p);
  const double I = fgig::free_entropy(m, V, r.nodes);
  const double I_half = fgig::free_entropy(m, V, r.nodes / 2);
  const auto scan = fgig::maximality_scan(p, fgig::default_perturbations(p), r.nodes);
  Output out;
  out.json = fgig::report::envelope("entropy");
  out.json["input"] = fgig::report::to_json(p);
  out.json["gibbs_bound"] = bound;
  out.json["classical_entropy"] = H;
  out.json["gibbs_gap"] = bound - H;
  out.json["free_entropy"] = I;
  out.json["free_entropy_half_nodes"] = I_half;
  out.json["refinement_difference"] = std::abs(I - I_half);
  out.json["maximality"] = fgig::report::to_json(scan);
  out.json["tolerances"] = tolerance_block({{"gibbs_gap", 1e-6}, {"refinement", 1e-5}});
  const bool gap_ok = std::abs(bound - H) <= 1e-6, ref_ok = std::abs(I - I_half) <= 1e-5;
  out.json["verdicts"] = Json{{"gibbs_equality", gap_ok},
                              {"refinement", ref_ok},
                              {"maximality", scan.all_positive},
                              {"pass", gap_ok && ref_ok && scan.all_positive}};
  out.csv.header = {"label", "scale", "alpha", "beta", "lambda", "free_entropy", "margin"};
  for (const auto& e : scan.entries) {
    const auto& pp = e.perturbation;
    std::vector<std::string> row{pp.label};
    for (double v : {pp.scale, pp.params.alpha, pp.params.beta, pp.params.lambda, e.value, e.margin})
      row.push_back(fgig::report::format_number(v));
    out.csv.add(std::move(row));
  }
  return out;
}

void configure_logging() {
  auto logger = spdlog::stderr_logger_mt("fgig");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("FGIG_LOG");
  const std::string level = env ? env : "info";
  if (level == "quiet") {
    spdlog::set_level(spdlog::level::off);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    throw fgig::DomainError("FGIG_LOG must be quiet, info or debug");
  }
}

void emit(const Output& out, const Request& r) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (r.output != "-") {
    file.open(r.output, std::ios::binary);
    if (!file) throw fgig::DomainError("cannot open output file " + r.output);
    os = &file;
  }
  os->imbue(std::locale::classic());
  if (r.format == "csv") {
    out.csv.write(*os);
  } else {
    *os << fgig::report::dump(out.json);
  }
  os->flush();
}

}  // namespace

int main(int argc, char** argv) {
  try {
    configure_logging();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  CLI::App app{"Numerical laboratory for free generalized inverse Gaussian laws"};
  app.require_subcommand(1);
  Request req;

  using Handler = std::function<Output(const Request&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", req.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output,-o", req.output, "output path, - for stdout");
    sub->add_option("--threads", req.threads, "worker threads (0: all cores)");
  };
  auto triple = [&](CLI::App* sub) {
    sub->add_option("--alpha", req.alpha, "alpha > 0");
    sub->add_option("--beta", req.beta, "beta > 0");
    sub->add_option("--lambda", req.lambda, "lambda");
  };
  auto add = [&](const char* name, const char* help, Handler h) {
    auto* sub = app.add_subcommand(name, help);
    common(sub);
    commands.emplace_back(sub, std::move(h));
    return sub;
  };

  auto* params = add("params", "convert among parameterizations and report derived roots", run_params);
  triple(params);
  params->add_option("--a", req.a, "left support endpoint");
  params->add_option("--b", req.b, "right support endpoint");
  params->add_option("--A", req.A, "(sqrt b - sqrt a)^2");
  params->add_option("--B", req.B, "(sqrt a + sqrt b)^2");

  auto* density = add("density", "density and distribution function on a grid", run_density);
  triple(density);
  density->add_option("--grid", req.grid, "lo:hi:count");

  auto* transform = add("transform", "Cauchy and R-transforms, free cumulants, FID certificate", run_transform);
  triple(transform);
  transform->add_option("--grid", req.grid, "real parts lo:hi:count");
  transform->add_option("--imag", req.imag, "distance from the real axis");
  transform->add_option("--order", req.order, "number of free cumulants");

  auto* levy = add("levy", "free Levy-Khintchine triplet", run_levy);
  triple(levy);
  levy->add_option("--grid", req.grid, "lo:hi:count for the Levy density");

  auto* fsd = add("fsd", "free selfdecomposability verdict", run_fsd);
  triple(fsd);

  auto* convolve = add("convolve", "mu(alpha,beta,-lambda) boxplus nu(1/alpha,lambda) by subordination", run_convolve);
  triple(convolve);
  convolve->add_option("--points", req.points, "grid points per pass")->check(CLI::Range(3, 1000000));

  auto* fixpoint = add("fixpoint", "X = (X+Y)^-1 characterization checks", run_fixpoint);
  triple(fixpoint);
  fixpoint->add_option("--order", req.order, "series order");

  auto* limits = add("limits", "beta -> 0 limits, scaling exponents, root limits", run_limits);
  triple(limits);
  limits->add_option("--beta-max", req.beta_max, "largest beta on the curve");
  limits->add_option("--beta-min", req.beta_min, "smallest beta on the curve");
  limits->add_option("--per-decade", req.per_decade, "curve points per decade");

  auto* entropy = add("entropy", "classical and free entropy functionals", run_entropy);
  triple(entropy);
  entropy->add_option("--nodes", req.nodes, "angular nodes for the free entropy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  for (const auto& [sub, handler] : commands) {
    if (!sub->parsed()) continue;
    try {
      spdlog::debug("running {}", sub->get_name());
      const Output out = handler(req);
      emit(out, req);
      spdlog::info("{} done", sub->get_name());
      return 0;
    } catch (const fgig::DomainError& e) {
      spdlog::error("{}", e.what());
      if (spdlog::get_level() == spdlog::level::off) std::cerr << "error: " << e.what() << '\n';
      return kExitValidation;
    } catch (const std::exception& e) {
      spdlog::error("{}", e.what());
      if (spdlog::get_level() == spdlog::level::off) std::cerr << "error: " << e.what() << '\n';
      return kExitNumeric;
    }
  }
  return kExitValidation;
}
