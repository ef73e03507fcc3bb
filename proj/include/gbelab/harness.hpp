#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "gbelab/densities.hpp"
#include "gbelab/exact_moments.hpp"
#include "gbelab/martingale.hpp"
#include "gbelab/model.hpp"
#include "gbelab/stats.hpp"
#include "gbelab/test_functions.hpp"
#include "gbelab/tridiag_eig.hpp"

namespace gbelab {

inline constexpr const char* kVersion = "gbe-lab 0.1.0";

enum class ExperimentKind {
  semicircle_law,
  clt_fixed_beta,
  clt_growing_nbeta,
  alpha_regime,
  variance_scan,
  martingale_check
};

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::semicircle_law: return "semicircle-law";
    case ExperimentKind::clt_fixed_beta: return "clt-fixed-beta";
    case ExperimentKind::clt_growing_nbeta: return "clt-growing-nbeta";
    case ExperimentKind::alpha_regime: return "alpha-regime";
    case ExperimentKind::variance_scan: return "variance-scan";
    case ExperimentKind::martingale_check: return "martingale-check";
  }
  return "?";
}

inline ExperimentKind parse_experiment_kind(const std::string& s) {
  for (auto k : {ExperimentKind::semicircle_law, ExperimentKind::clt_fixed_beta,
                 ExperimentKind::clt_growing_nbeta, ExperimentKind::alpha_regime,
                 ExperimentKind::variance_scan, ExperimentKind::martingale_check}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown experiment kind: " + s);
}

// How beta is chosen for each matrix size.
struct BetaRule {
  enum class Type { fixed, nbeta_fixed, nbeta_growth };
  Type type = Type::fixed;
  // fixed: beta; nbeta_fixed: the product n beta; nbeta_growth: g with beta = n^(g-1)
  double value = 1.0;

  static BetaRule fixed(double beta) { return {Type::fixed, beta}; }
  static BetaRule nbeta_fixed(double nbeta) { return {Type::nbeta_fixed, nbeta}; }
  static BetaRule nbeta_growth(double g) { return {Type::nbeta_growth, g}; }

  double beta_for(std::size_t n) const {
    const auto nd = static_cast<double>(n);
    switch (type) {
      case Type::fixed: return value;
      case Type::nbeta_fixed: return value / nd;
      case Type::nbeta_growth: return std::pow(nd, value - 1.0);
    }
    return value;
  }

  std::string type_name() const {
    switch (type) {
      case Type::fixed: return "fixed";
      case Type::nbeta_fixed: return "nbeta_fixed";
      case Type::nbeta_growth: return "nbeta_growth";
    }
    return "?";
  }
};

struct TestFunctionSpec {
  enum class Type { monomial, polynomial, named };
  Type type = Type::monomial;
  unsigned degree = 2;
  std::string coefficients;  // comma list for polynomials
  std::string name;          // for named functions

  static TestFunctionSpec monomial(unsigned r) { return {Type::monomial, r, {}, {}}; }
  static TestFunctionSpec polynomial(std::string coeffs) {
    return {Type::polynomial, 0, std::move(coeffs), {}};
  }
  static TestFunctionSpec named(std::string n) { return {Type::named, 0, {}, std::move(n)}; }

  TestFunction resolve() const {
    switch (type) {
      case Type::monomial: return monomial_test_function(degree);
      case Type::polynomial: return polynomial_test_function(Polynomial::parse_coefficients(coefficients));
      case Type::named: return named_test_function(name);
    }
    throw std::logic_error("unreachable");
  }

  std::string describe() const {
    switch (type) {
      case Type::monomial: return "monomial:" + std::to_string(degree);
      case Type::polynomial: return "poly:" + coefficients;
      case Type::named: return "named:" + name;
    }
    return "?";
  }

  // "monomial:2", "poly:0,0,1", "named:exp"
  static TestFunctionSpec parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("test function needs kind:value");
    const std::string kind = text.substr(0, colon), value = text.substr(colon + 1);
    if (kind == "monomial") return monomial(static_cast<unsigned>(std::stoul(value)));
    if (kind == "poly") return polynomial(value);
    if (kind == "named") return named(value);
    throw std::invalid_argument("unknown test function kind: " + kind);
  }
};

// Eigenvalue route: eigenvalues then sum f(lambda_j). Trace route: Tr p(T) by
// banded matrix powers (polynomials only), algebraically the same statistic.
enum class StatisticRoute { automatic, eigenvalues, trace };

inline std::string to_string(StatisticRoute r) {
  switch (r) {
    case StatisticRoute::automatic: return "auto";
    case StatisticRoute::eigenvalues: return "eigen";
    case StatisticRoute::trace: return "trace";
  }
  return "?";
}

inline StatisticRoute parse_statistic_route(const std::string& s) {
  if (s == "auto") return StatisticRoute::automatic;
  if (s == "eigen") return StatisticRoute::eigenvalues;
  if (s == "trace") return StatisticRoute::trace;
  throw std::invalid_argument("unknown statistic route: " + s);
}

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::clt_fixed_beta;
  std::vector<std::size_t> n_list{200};
  BetaRule beta_rule;
  TestFunctionSpec test_function;
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
  std::optional<double> alpha;
  StatisticRoute route = StatisticRoute::automatic;

  void validate() const {
    if (replicates < 2) throw std::invalid_argument("replicates must be >= 2");
    if (n_list.empty()) throw std::invalid_argument("n_list must not be empty");
    for (auto n : n_list) {
      if (n == 0) throw std::invalid_argument("matrix sizes must be >= 1");
      const double b = beta_rule.beta_for(n);
      if (!(b > 0.0) || !std::isfinite(b)) {
        throw std::invalid_argument("beta rule yields a non-positive beta for n = " +
                                    std::to_string(n));
      }
    }
    if (alpha && !(*alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  }
};

// Elementary-operation budget for one experiment.
inline constexpr double kExperimentOpsBudget = 1e10;

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SizeResult {
  std::size_t n = 0;
  double beta = 0.0;
  std::size_t reps = 0;
  std::size_t failures = 0;
  double mean = 0.0;  // sample mean of <L_n, f>
  // Moments of the standardized statistic sqrt(beta) (S_n - center).
  double var = 0.0;
  double skew = 0.0;
  double ex_kurt = 0.0;
  double ks_normal = 0.0;
  double var_standard_error = 0.0;
  bool self_centered = false;
  std::optional<double> exact_mean;       // E<L_n, p>
  std::optional<double> exact_variance;   // n^2 beta Var<L_n, p> at this (n, beta)
  std::optional<double> exact_sigma;      // sigma_p^2
  std::optional<double> exact_sigma_alpha;
  std::optional<double> semicircle_ks;    // first replicate, eigenvalue route only
  std::vector<double> spectral_moments;   // mean <L_n, x^r>, r = 1..6, semicircle-law only
  std::vector<double> standardized;       // sqrt(beta) (S_n - center), in replicate order
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::string route;
  std::vector<SizeResult> per_size;
  double wall_time_s = 0.0;
};

namespace detail {

inline std::size_t worker_count(std::size_t jobs) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(hw, jobs));
}

// Runs body(i) for i in [0, count) on a pool of threads, contiguous blocks per
// worker. Results must be written to per-index slots by the caller.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers = worker_count(count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = w * chunk, hi = std::min(count, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::uint64_t replicate_stream(std::size_t size_index, std::size_t replicate) {
  return (static_cast<std::uint64_t>(size_index) << 32) | static_cast<std::uint64_t>(replicate);
}

inline double estimated_ops(std::size_t n, std::size_t reps, bool eigen, unsigned degree) {
  const double nd = static_cast<double>(n), rd = static_cast<double>(reps);
  if (eigen) return nd * nd * rd;
  const double d = degree + 1.0;
  return nd * rd * d * d;
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const auto started = std::chrono::steady_clock::now();
  const TestFunction tf = spec.test_function.resolve();
  const bool is_poly = tf.poly.has_value();

  bool use_eigen = true;
  switch (spec.route) {
    case StatisticRoute::eigenvalues: use_eigen = true; break;
    case StatisticRoute::trace:
      if (!is_poly) throw std::invalid_argument("trace route needs a polynomial test function");
      use_eigen = false;
      break;
    case StatisticRoute::automatic:
      use_eigen = !is_poly || spec.kind == ExperimentKind::semicircle_law;
      break;
  }
  const unsigned degree = is_poly ? tf.poly->degree() : 0;
  for (auto n : spec.n_list) {
    if (detail::estimated_ops(n, spec.replicates, use_eigen, degree) > kExperimentOpsBudget) {
      throw BudgetError("experiment exceeds the desk-scale budget at n = " + std::to_string(n));
    }
  }
  const bool want_moments = spec.kind == ExperimentKind::semicircle_law;

  std::optional<BivarPoly> exact_mean_poly, exact_var_poly;
  std::optional<double> sigma, sigma_alpha;
  if (is_poly && tf.poly->degree() <= kMaxPathLength / 2) {
    exact_mean_poly = expected_pairing(*tf.poly);
    exact_var_poly = variance_linear_stat(*tf.poly);
    sigma = sigma_p_sq(*tf.poly).get_d();
    std::optional<double> alpha = spec.alpha;
    if (!alpha && spec.beta_rule.type == BetaRule::Type::nbeta_fixed) {
      alpha = spec.beta_rule.value / 2.0;
    }
    if (alpha) sigma_alpha = sigma_p_alpha_sq(*tf.poly, from_double(*alpha)).get_d();
  }

  ExperimentResult result{spec, use_eigen ? "eigen" : "trace", {}, 0.0};
  for (std::size_t si = 0; si < spec.n_list.size(); ++si) {
    const std::size_t n = spec.n_list[si];
    const double beta = spec.beta_rule.beta_for(n);
    const std::size_t reps = spec.replicates;

    std::vector<double> stat(reps, 0.0);
    std::vector<char> failed(reps, 0);
    std::vector<std::vector<double>> moments(want_moments ? reps : 0);
    std::optional<double> first_ks;

    detail::parallel_for(reps, [&](std::size_t rep) {
      RngStream stream(spec.seed, detail::replicate_stream(si, rep));
      const TridiagonalMatrix t = build_gbe(n, beta, stream);
      if (!use_eigen) {
        stat[rep] = trace_polynomial(t, *tf.poly);
        return;
      }
      EigenResult e;
      try {
        e = eigenvalues(t);
      } catch (const ConvergenceError&) {
        failed[rep] = 1;
        return;
      }
      stat[rep] = linear_statistic(e, tf.f);
      if (want_moments) {
        auto& m = moments[rep];
        m.assign(6, 0.0);
        for (double x : e.values) {
          double xp = 1.0;
          for (int r = 0; r < 6; ++r) {
            xp *= x;
            m[r] += xp;
          }
        }
        for (auto& v : m) v /= static_cast<double>(n);
        if (rep == 0 && n >= 10) first_ks = semicircle_ks(e.values);
      }
    });

    SizeResult sr;
    sr.n = n;
    sr.beta = beta;
    sr.failures = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
    if (static_cast<double>(sr.failures) > 1e-3 * static_cast<double>(reps)) {
      throw std::runtime_error("more than 0.1% of replicates failed to converge at n = " +
                               std::to_string(n));
    }
    std::vector<double> kept;
    std::vector<std::vector<double>> kept_moments;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      if (failed[rep]) continue;
      kept.push_back(stat[rep]);
      if (want_moments) kept_moments.push_back(moments[rep]);
    }
    sr.reps = kept.size();

    const auto nd = static_cast<double>(n);
    double mean_s = 0.0;
    for (double v : kept) mean_s += v;
    mean_s /= static_cast<double>(kept.size());
    sr.mean = mean_s / nd;

    double center = mean_s;
    if (exact_mean_poly && n >= min_valid_size(2 * degree)) {
      const double u = 1.0 / (nd * beta);
      sr.exact_mean = exact_mean_poly->evaluate(u, beta);
      sr.exact_variance = nd * nd * beta * exact_var_poly->evaluate(u, beta);
      center = nd * *sr.exact_mean;
    } else {
      sr.self_centered = true;
    }
    sr.exact_sigma = sigma;
    sr.exact_sigma_alpha = sigma_alpha;

    const double scale = std::sqrt(beta);
    sr.standardized.reserve(kept.size());
    for (double v : kept) sr.standardized.push_back(scale * (v - center));
    const SampleSummary summary = summarize(sr.standardized);
    sr.var = summary.variance;
    sr.var_standard_error = summary.variance_standard_error();
    sr.skew = summary.skewness;
    sr.ex_kurt = summary.excess_kurtosis;
    if (sr.standardized.size() >= kMinKsSamples) {
      sr.ks_normal = ks_distance_to_normal(standardize(sr.standardized));
    }
    if (want_moments && !kept_moments.empty()) {
      sr.spectral_moments.assign(6, 0.0);
      for (const auto& m : kept_moments)
        for (int r = 0; r < 6; ++r) sr.spectral_moments[r] += m[r];
      for (auto& v : sr.spectral_moments) v /= static_cast<double>(kept_moments.size());
    }
    sr.semicircle_ks = first_ks;
    result.per_size.push_back(std::move(sr));
  }
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

// ---------------------------------------------------------------------------
// Martingale condition scan

struct FourthMomentEntry {
  std::string path;  // U/F/D letters
  int offset = 0;    // site k relative to the path start
  std::vector<double> ratio;  // (n beta)^2 E[Delta_k^4], one per n
  bool bounded = false;       // no growth beyond a factor 2 over the first size
};

struct MartingaleSizeReport {
  std::size_t n = 0;
  double beta = 0.0;
  double exact_scaled_variance = 0.0;  // n^2 beta Var<L_n, p> = beta Var[S_n]
  double distance_to_sigma = 0.0;
  double mc_scaled_second_moment = 0.0;  // beta sum_k E[Y_k^2], Monte Carlo
  double mc_standard_error = 0.0;
};

struct MartingaleScanReport {
  Polynomial p;
  double sigma_p_sq = 0.0;
  std::size_t replicates = 0;
  std::vector<MartingaleSizeReport> sizes;
  std::vector<FourthMomentEntry> fourth_moments;
  bool trend_bounded() const {
    for (const auto& e : fourth_moments)
      if (!e.bounded) return false;
    return true;
  }
};

inline constexpr double kFourthMomentGrowthFactor = 2.0;

// Checks the two sufficient conditions of the martingale CLT for S_n = Tr p(T)
// with v_n = sqrt(beta): (i) beta Var[S_n] -> sigma_p^2, exactly and by Monte
// Carlo of sum_k E[Y_k^2]; (ii) (n beta)^2 E[Delta_k(xi_w)^4] at k = n/2 stays
// bounded along n for every path shape of length <= deg p. The second-moment
// estimate uses the first second_moment_reps replicates (0: all of them).
inline MartingaleScanReport martingale_condition_scan(const Polynomial& p,
                                                      const std::vector<std::size_t>& n_list,
                                                      const BetaRule& rule, std::size_t reps,
                                                      std::uint64_t seed,
                                                      std::size_t second_moment_reps = 0) {
  if (p.degree() > 4) throw std::invalid_argument("martingale scan supports deg p <= 4");
  if (reps < 2) throw std::invalid_argument("martingale scan needs at least two replicates");
  if (n_list.empty()) throw std::invalid_argument("martingale scan needs at least one size");
  MartingaleScanReport report;
  report.p = p;
  report.replicates = reps;
  if (second_moment_reps == 0 || second_moment_reps > reps) second_moment_reps = reps;
  report.sigma_p_sq = sigma_p_sq(p).get_d();

  struct Shape {
    ClosedPath path;
    int offset;
  };
  std::vector<Shape> shapes;
  for (unsigned r = 1; r <= p.degree(); ++r) {
    for (const auto& w : enumerate_closed(r)) {
      const auto prof = exponent_profile(w);
      for (int rel = prof.first_site; rel <= prof.last_site(); ++rel) {
        if (prof.alpha_at(rel) || prof.gamma_at(rel)) shapes.push_back({w, rel});
      }
    }
  }
  report.fourth_moments.resize(shapes.size());
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    report.fourth_moments[s].path = shapes[s].path.to_string();
    report.fourth_moments[s].offset = shapes[s].offset;
  }

  for (std::size_t si = 0; si < n_list.size(); ++si) {
    const std::size_t n = n_list[si];
    const double beta = rule.beta_for(n);
    if (n < min_valid_size(2 * p.degree()) + 2 * p.degree()) {
      throw std::invalid_argument("martingale scan: n too small for deg p");
    }
    MartingaleSizeReport sr;
    sr.n = n;
    sr.beta = beta;
    sr.exact_scaled_variance = scaled_variance_at(p, n, from_double(beta)).get_d();
    sr.distance_to_sigma = std::abs(sr.exact_scaled_variance - report.sigma_p_sq);

    const std::size_t k = n / 2;
    std::vector<double> second(second_moment_reps, 0.0);
    std::vector<std::vector<double>> fourth(reps, std::vector<double>(shapes.size(), 0.0));
    detail::parallel_for(reps, [&](std::size_t rep) {
      RngStream stream(seed, detail::replicate_stream(si, rep));
      const TridiagonalMatrix t = build_gbe(n, beta, stream);
      if (rep < second_moment_reps) {
        double sum_sq = 0.0;
        for (std::size_t kk = 1; kk <= n; ++kk) {
          const double y = martingale_increment_Y(kk, p, t);
          sum_sq += y * y;
        }
        second[rep] = beta * sum_sq;
      }
      for (std::size_t s = 0; s < shapes.size(); ++s) {
        const long start = static_cast<long>(k) - shapes[s].offset;
        const double d = martingale_delta(shapes[s].path, start, k, t);
        fourth[rep][s] = d * d * d * d;
      }
    });
    const auto summary = summarize(second);
    sr.mc_scaled_second_moment = summary.mean;
    sr.mc_standard_error = summary.mean_standard_error();
    const double nb = static_cast<double>(n) * beta;
    for (std::size_t s = 0; s < shapes.size(); ++s) {
      double acc = 0.0;
      for (std::size_t rep = 0; rep < reps; ++rep) acc += fourth[rep][s];
      report.fourth_moments[s].ratio.push_back(nb * nb * acc / static_cast<double>(reps));
    }
    report.sizes.push_back(sr);
  }
  for (auto& e : report.fourth_moments) {
    const double first = e.ratio.front();
    const double top = *std::max_element(e.ratio.begin(), e.ratio.end());
    e.bounded = top <= kFourthMomentGrowthFactor * first;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Persistence

using Json = nlohmann::ordered_json;

inline Json spec_to_json(const ExperimentSpec& s) {
  Json j;
  j["kind"] = to_string(s.kind);
  j["n_list"] = s.n_list;
  j["beta_rule"] = {{"type", s.beta_rule.type_name()}, {"value", s.beta_rule.value}};
  j["test_function"] = s.test_function.describe();
  j["replicates"] = s.replicates;
  j["seed"] = s.seed;
  j["alpha"] = s.alpha ? Json(*s.alpha) : Json(nullptr);
  j["route"] = to_string(s.route);
  return j;
}

inline Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json result_to_json(const ExperimentResult& r, bool include_wall_time = true) {
  Json j;
  j["spec"] = spec_to_json(r.spec);
  j["route"] = r.route;
  Json sizes = Json::array();
  for (const auto& s : r.per_size) {
    Json e;
    e["n"] = s.n;
    e["beta"] = s.beta;
    e["mean"] = s.mean;
    e["var"] = s.var;
    e["skew"] = s.skew;
    e["ex_kurt"] = s.ex_kurt;
    e["ks_normal"] = s.ks_normal;
    e["exact_sigma"] = optional_json(s.exact_sigma);
    e["reps"] = s.reps;
    e["failures"] = s.failures;
    e["var_standard_error"] = s.var_standard_error;
    e["exact_mean"] = optional_json(s.exact_mean);
    e["exact_variance"] = optional_json(s.exact_variance);
    e["exact_sigma_alpha"] = optional_json(s.exact_sigma_alpha);
    e["self_centered"] = s.self_centered;
    e["semicircle_ks"] = optional_json(s.semicircle_ks);
    if (!s.spectral_moments.empty()) e["spectral_moments"] = s.spectral_moments;
    sizes.push_back(std::move(e));
  }
  j["per_size"] = std::move(sizes);
  j["version"] = kVersion;
  j["seed"] = r.spec.seed;
  if (include_wall_time) j["wall_time_s"] = r.wall_time_s;
  return j;
}

inline Json scan_to_json(const MartingaleScanReport& r) {
  Json j;
  j["polynomial"] = r.p.to_string();
  j["sigma_p_sq"] = r.sigma_p_sq;
  j["replicates"] = r.replicates;
  Json sizes = Json::array();
  for (const auto& s : r.sizes) {
    sizes.push_back({{"n", s.n},
                     {"beta", s.beta},
                     {"exact_scaled_variance", s.exact_scaled_variance},
                     {"distance_to_sigma", s.distance_to_sigma},
                     {"mc_scaled_second_moment", s.mc_scaled_second_moment},
                     {"mc_standard_error", s.mc_standard_error}});
  }
  j["per_size"] = std::move(sizes);
  Json fm = Json::array();
  for (const auto& e : r.fourth_moments) {
    fm.push_back({{"path", e.path}, {"offset", e.offset}, {"ratio", e.ratio}, {"bounded", e.bounded}});
  }
  j["fourth_moment_trend"] = std::move(fm);
  j["trend_bounded"] = r.trend_bounded();
  j["version"] = kVersion;
  return j;
}

// Standardized samples as CSV: n,beta,replicate,value
inline void write_samples_csv(const ExperimentResult& r, std::ostream& out) {
  out << "n,beta,replicate,value\n";
  char buf[96];
  for (const auto& s : r.per_size) {
    for (std::size_t i = 0; i < s.standardized.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%zu,%.17g\n", s.n, s.beta, i, s.standardized[i]);
      out << buf;
    }
  }
}

// ---------------------------------------------------------------------------
// Flat key = value configuration, '#' starts a comment.
//
//   kind = clt-fixed-beta
//   n_list = 100, 200
//   beta = 1              (or nbeta = 2, or nbeta_growth = 0.5)
//   test_function = poly:0,0,1   (or monomial = 2, poly = 0,0,1, named = exp)
//   replicates = 10000
//   seed = 7
//   alpha = 1
//   route = auto

inline std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto lo = s.find_first_not_of(" \t\r");
    if (lo == std::string::npos) return std::string{};
    const auto hi = s.find_last_not_of(" \t\r");
    return s.substr(lo, hi - lo + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

inline std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto lo = item.find_first_not_of(" \t");
    if (lo == std::string::npos) continue;
    out.push_back(static_cast<std::size_t>(std::stoull(item.substr(lo))));
  }
  if (out.empty()) throw std::invalid_argument("empty size list");
  return out;
}

// Applies configuration keys onto an existing spec; unknown keys are rejected.
inline void apply_config(ExperimentSpec& spec, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "kind") {
      spec.kind = parse_experiment_kind(value);
    } else if (key == "n_list" || key == "n") {
      spec.n_list = parse_size_list(value);
    } else if (key == "beta") {
      spec.beta_rule = BetaRule::fixed(std::stod(value));
    } else if (key == "nbeta" || key == "nbeta_fixed") {
      spec.beta_rule = BetaRule::nbeta_fixed(std::stod(value));
    } else if (key == "nbeta_growth" || key == "growth") {
      spec.beta_rule = BetaRule::nbeta_growth(std::stod(value));
    } else if (key == "test_function") {
      spec.test_function = TestFunctionSpec::parse(value);
    } else if (key == "monomial") {
      spec.test_function = TestFunctionSpec::monomial(static_cast<unsigned>(std::stoul(value)));
    } else if (key == "poly") {
      spec.test_function = TestFunctionSpec::polynomial(value);
    } else if (key == "named") {
      spec.test_function = TestFunctionSpec::named(value);
    } else if (key == "replicates" || key == "reps") {
      spec.replicates = static_cast<std::size_t>(std::stoull(value));
    } else if (key == "seed") {
      spec.seed = std::stoull(value);
    } else if (key == "alpha") {
      spec.alpha = std::stod(value);
    } else if (key == "route") {
      spec.route = parse_statistic_route(value);
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
}

inline std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace gbelab
