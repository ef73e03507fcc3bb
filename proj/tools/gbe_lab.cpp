// gbe-lab: command-line front end for the Gaussian beta ensemble lab.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbelab/harness.hpp"

namespace {

using namespace gbelab;

// Writes text to --out when given, stdout otherwise.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot write " + out_path);
  f << text;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Common {
  std::uint64_t seed = 1;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "root seed");
  cmd->add_option("--out", c.out, "output file (default stdout)");
}

// Options shared by the experiment subcommands (clt, lln).
struct ExperimentOptions {
  Common common;
  std::string config;
  std::string kind;
  std::string n_list;
  double beta = 1.0;
  double nbeta = 0.0;
  double growth = 0.0;
  std::string poly;
  unsigned monomial = 0;
  std::string named;
  std::size_t reps = 0;
  double alpha = 0.0;
  std::string route;
  std::string dump_samples;

  CLI::Option* beta_opt = nullptr;
  CLI::Option* nbeta_opt = nullptr;
  CLI::Option* growth_opt = nullptr;
  CLI::Option* poly_opt = nullptr;
  CLI::Option* monomial_opt = nullptr;
  CLI::Option* named_opt = nullptr;
  CLI::Option* reps_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* kind_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* route_opt = nullptr;
};

void add_experiment_options(CLI::App* cmd, ExperimentOptions& o) {
  o.seed_opt = cmd->add_option("--seed", o.common.seed, "root seed");
  cmd->add_option("--out", o.common.out, "result JSON file (default stdout)");
  cmd->add_option("--config", o.config, "key = value config file; flags override it");
  o.kind_opt = cmd->add_option("--kind", o.kind, "experiment kind");
  o.n_opt = cmd->add_option("--n", o.n_list, "matrix size or comma list");
  o.beta_opt = cmd->add_option("--beta", o.beta, "fixed beta");
  o.nbeta_opt = cmd->add_option("--nbeta", o.nbeta, "fixed product n*beta");
  o.growth_opt = cmd->add_option("--growth", o.growth, "n*beta = n^g");
  o.poly_opt = cmd->add_option("--poly", o.poly, "polynomial coefficients c0,c1,...");
  o.monomial_opt = cmd->add_option("--monomial", o.monomial, "monomial degree");
  o.named_opt = cmd->add_option("--named", o.named, "named test function");
  o.reps_opt = cmd->add_option("--reps", o.reps, "replicates per size");
  o.alpha_opt = cmd->add_option("--alpha", o.alpha, "alpha for the limiting variance");
  o.route_opt = cmd->add_option("--route", o.route, "auto, eigen or trace");
  cmd->add_option("--dump-samples", o.dump_samples, "CSV of standardized samples");
}

ExperimentSpec build_spec(const ExperimentOptions& o, ExperimentKind default_kind) {
  ExperimentSpec spec;
  spec.kind = default_kind;
  if (!o.config.empty()) apply_config(spec, read_config_file(o.config));
  if (o.kind_opt->count()) spec.kind = parse_experiment_kind(o.kind);
  if (o.n_opt->count()) spec.n_list = parse_size_list(o.n_list);
  if (o.beta_opt->count()) spec.beta_rule = BetaRule::fixed(o.beta);
  if (o.nbeta_opt->count()) {
    spec.beta_rule = BetaRule::nbeta_fixed(o.nbeta);
    if (!o.kind_opt->count() && default_kind == ExperimentKind::clt_fixed_beta) {
      spec.kind = ExperimentKind::alpha_regime;
    }
  }
  if (o.growth_opt->count()) {
    spec.beta_rule = BetaRule::nbeta_growth(o.growth);
    if (!o.kind_opt->count() && default_kind == ExperimentKind::clt_fixed_beta) {
      spec.kind = ExperimentKind::clt_growing_nbeta;
    }
  }
  if (o.poly_opt->count()) spec.test_function = TestFunctionSpec::polynomial(o.poly);
  if (o.monomial_opt->count()) spec.test_function = TestFunctionSpec::monomial(o.monomial);
  if (o.named_opt->count()) spec.test_function = TestFunctionSpec::named(o.named);
  if (o.reps_opt->count()) spec.replicates = o.reps;
  if (o.seed_opt->count()) spec.seed = o.common.seed;
  if (o.alpha_opt->count()) spec.alpha = o.alpha;
  if (o.route_opt->count()) spec.route = parse_statistic_route(o.route);
  return spec;
}

int run_experiment_command(const ExperimentOptions& o, ExperimentKind default_kind) {
  const ExperimentSpec spec = build_spec(o, default_kind);
  const ExperimentResult result = run_experiment(spec);
  emit(o.common.out, result_to_json(result).dump(2) + "\n");
  if (!o.dump_samples.empty()) {
    std::ofstream f(o.dump_samples);
    if (!f) throw std::runtime_error("cannot write " + o.dump_samples);
    write_samples_csv(result, f);
  }
  return 0;
}

std::optional<Polynomial> polynomial_from(const std::string& poly, const CLI::Option* monomial_opt,
                                          unsigned monomial) {
  if (!poly.empty()) return Polynomial::parse_coefficients(poly);
  if (monomial_opt && monomial_opt->count()) return Polynomial::monomial(monomial);
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian beta ensemble simulation and verification lab", "gbe-lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // sample
  Common sample_common;
  std::size_t sample_n = 10;
  double sample_beta = 1.0;
  double sample_alpha = 0.0;
  std::uint64_t sample_stream = 0;
  bool sample_eigen = false, sample_weights = false, sample_free = false;
  auto* sample = app.add_subcommand("sample", "draw one matrix and dump it or its eigenvalues");
  add_common(sample, sample_common);
  sample->add_option("--n", sample_n, "matrix size")->check(CLI::PositiveNumber);
  auto* sample_beta_opt = sample->add_option("--beta", sample_beta, "beta");
  auto* sample_alpha_opt =
      sample->add_option("--alpha", sample_alpha, "draw the alpha truncation J_alpha instead");
  sample->add_option("--stream", sample_stream, "stream id");
  sample->add_flag("--free", sample_free, "free Jacobi matrix");
  sample->add_flag("--eigen", sample_eigen, "dump ascending eigenvalues instead of entries");
  sample->add_flag("--weights", sample_weights, "with --eigen, add Dirichlet spectral weights");
  sample_alpha_opt->excludes(sample_beta_opt);

  // moments
  Common moments_common;
  unsigned moments_r = 0;
  std::vector<unsigned> moments_product;
  std::string moments_variance;
  bool moments_coefficients = false;
  auto* moments = app.add_subcommand("moments", "exact moment polynomials in u = 1/(n beta) and b = beta");
  add_common(moments, moments_common);
  auto* r_opt = moments->add_option("--r", moments_r, "E<mu_n, x^r>");
  auto* product_opt =
      moments->add_option("--product", moments_product, "E[<mu_n, x^r><mu_n, x^s>]")->expected(2);
  auto* variance_opt =
      moments->add_option("--variance", moments_variance, "Var<L_n, p> for p = c0,c1,...");
  moments->add_flag("--coefficients", moments_coefficients,
                    "with --variance, also print the coefficients of u^k");
  r_opt->excludes(product_opt)->excludes(variance_opt);
  product_opt->excludes(variance_opt);

  // sigma
  Common sigma_common;
  std::string sigma_poly, sigma_named;
  unsigned sigma_monomial = 0;
  double sigma_alpha = 0.0;
  bool sigma_quadrature = false;
  auto* sigma = app.add_subcommand("sigma", "limit variance of a linear statistic");
  add_common(sigma, sigma_common);
  auto* sigma_poly_opt = sigma->add_option("--poly", sigma_poly, "polynomial c0,c1,...");
  auto* sigma_mono_opt = sigma->add_option("--monomial", sigma_monomial, "monomial degree");
  auto* sigma_named_opt = sigma->add_option("--named", sigma_named, "named test function");
  auto* sigma_alpha_opt = sigma->add_option("--alpha", sigma_alpha, "n beta -> 2 alpha limit");
  sigma->add_flag("--quadrature", sigma_quadrature, "also evaluate the double integral");
  sigma_poly_opt->excludes(sigma_mono_opt)->excludes(sigma_named_opt);
  sigma_mono_opt->excludes(sigma_named_opt);
  sigma_alpha_opt->excludes(sigma_named_opt);

  // density
  Common density_common;
  bool density_sc = false;
  double density_alpha = 0.0;
  std::size_t density_points = kDefaultGridPoints;
  double density_half_width = 0.0;
  auto* density = app.add_subcommand("density", "limit density on a grid as CSV");
  add_common(density, density_common);
  auto* sc_opt = density->add_flag("--sc", density_sc, "semicircle");
  auto* nu_opt = density->add_option("--nu-alpha", density_alpha, "nu_alpha for alpha > 0");
  density->add_option("--points", density_points, "grid points")->check(CLI::Range(2, 10000000));
  density->add_option("--half-width", density_half_width, "grid covers [-w, w]");
  sc_opt->excludes(nu_opt);

  // clt, lln
  ExperimentOptions clt_opts, lln_opts;
  auto* clt = app.add_subcommand("clt", "CLT experiment for a linear statistic");
  add_experiment_options(clt, clt_opts);
  auto* lln = app.add_subcommand("lln", "semicircle-law experiment");
  add_experiment_options(lln, lln_opts);

  // martingale
  Common mart_common;
  std::string mart_poly = "0,0,1";
  std::string mart_n = "50,100,200,400";
  double mart_beta = 1.0, mart_nbeta = 0.0, mart_growth = 0.0;
  std::size_t mart_reps = 1000, mart_second_reps = 0;
  auto* mart = app.add_subcommand("martingale", "martingale CLT condition scan");
  add_common(mart, mart_common);
  mart->add_option("--poly", mart_poly, "polynomial c0,c1,... of degree <= 4");
  mart->add_option("--n", mart_n, "comma list of sizes");
  auto* mb = mart->add_option("--beta", mart_beta, "fixed beta");
  auto* mnb = mart->add_option("--nbeta", mart_nbeta, "fixed product n*beta");
  auto* mg = mart->add_option("--growth", mart_growth, "n*beta = n^g");
  mart->add_option("--reps", mart_reps, "replicates per size");
  mart->add_option("--second-moment-reps", mart_second_reps,
                   "replicates used for sum_k E[Y_k^2] (default all)");
  mb->excludes(mnb)->excludes(mg);
  mnb->excludes(mg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "gbe-lab: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*sample) {
      RngStream stream(sample_common.seed, sample_stream);
      TridiagonalMatrix t;
      if (sample_free) {
        t = free_jacobi(sample_n);
      } else if (sample_alpha_opt->count()) {
        t = build_j_alpha_truncation(sample_n, sample_alpha, stream);
      } else {
        t = build_gbe(sample_n, sample_beta, stream);
      }
      if (!sample_eigen) {
        emit(sample_common.out, dump_matrix(t));
        return 0;
      }
      const SpectralSample s = spectral_sample(t, sample_weights, stream);
      std::ostringstream os;
      for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        os << format_double(s.eigenvalues[i]);
        if (s.weights) os << ' ' << format_double((*s.weights)[i]);
        os << '\n';
      }
      emit(sample_common.out, os.str());
      return 0;
    }

    if (*moments) {
      std::string text;
      if (r_opt->count()) {
        text = spectral_moment_expected(moments_r).to_string();
      } else if (product_opt->count()) {
        text = spectral_moment_product_expected(moments_product[0], moments_product[1]).to_string();
      } else if (variance_opt->count()) {
        const Polynomial p = Polynomial::parse_coefficients(moments_variance);
        text = variance_linear_stat(p).to_string();
        if (moments_coefficients) {
          const auto ell = variance_coefficients(p);
          for (std::size_t k = 0; k < ell.size(); ++k) {
            text += "\nl_" + std::to_string(k) + " = " + ell[k].to_string("b");
          }
        }
      } else {
        std::cerr << "gbe-lab moments: one of --r, --product, --variance is required\n\n"
                  << moments->help();
        return 2;
      }
      emit(moments_common.out, text + "\n");
      return 0;
    }

    if (*sigma) {
      std::ostringstream os;
      const auto p = polynomial_from(sigma_poly, sigma_mono_opt, sigma_monomial);
      TestFunction tf;
      if (p) {
        tf = polynomial_test_function(*p);
        os << "sigma_p_sq = " << to_string(sigma_p_sq(*p)) << "\n";
        if (sigma_alpha_opt->count()) {
          os << "sigma_p_alpha_sq = "
             << to_string(sigma_p_alpha_sq(*p, from_double(sigma_alpha))) << "\n";
        }
      } else if (sigma_named_opt->count()) {
        tf = named_test_function(sigma_named);
        sigma_quadrature = true;
      } else {
        std::cerr << "gbe-lab sigma: one of --poly, --monomial, --named is required\n\n"
                  << sigma->help();
        return 2;
      }
      if (sigma_quadrature) {
        os << "sigma_f_sq_quadrature = " << format_double(sigma_f_sq_quadrature(tf.f, tf.f_prime))
           << "\n";
      }
      emit(sigma_common.out, os.str());
      return 0;
    }

    if (*density) {
      DensityGrid g;
      if (density_sc) {
        g = semicircle_grid(density_points, density_half_width > 0.0 ? density_half_width : 2.5);
      } else if (nu_opt->count()) {
        g = nu_alpha_grid(density_alpha, density_points, density_half_width);
      } else {
        std::cerr << "gbe-lab density: one of --sc, --nu-alpha is required\n\n" << density->help();
        return 2;
      }
      std::ostringstream os;
      g.write_csv(os);
      emit(density_common.out, os.str());
      return 0;
    }

    if (*clt) return run_experiment_command(clt_opts, ExperimentKind::clt_fixed_beta);

    if (*lln) return run_experiment_command(lln_opts, ExperimentKind::semicircle_law);

    if (*mart) {
      BetaRule rule = BetaRule::fixed(mart_beta);
      if (mnb->count()) rule = BetaRule::nbeta_fixed(mart_nbeta);
      if (mg->count()) rule = BetaRule::nbeta_growth(mart_growth);
      const auto report =
          martingale_condition_scan(Polynomial::parse_coefficients(mart_poly),
                                    parse_size_list(mart_n), rule, mart_reps, mart_common.seed,
                                    mart_second_reps);
      emit(mart_common.out, scan_to_json(report).dump(2) + "\n");
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "gbe-lab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gbe-lab: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
