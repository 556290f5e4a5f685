#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "edpp/biortho.hpp"
#include "edpp/bridges.hpp"
#include "edpp/dpp_kernels.hpp"
#include "edpp/errors.hpp"
#include "edpp/macdonald.hpp"
#include "edpp/numerics.hpp"
#include "edpp/theta.hpp"

namespace {

using namespace edpp;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string type = "A";
  int N = 2;
  double r = 1.0;
  double t = 0.5;
  double t_star = 1.0;
  double rho = 1.0;
  int workers = 0;
  std::string out;

  // theta
  int index = 3;
  double v_re = 0.0, v_im = 0.0, tau_re = 0.0, tau_im = 1.0;
  // kernel
  int grid = 50;
  // density
  std::string xs;
  // limits
  std::string family = "A";
  double x = 0.5, y = 1.0;
  int nodes = 128;
  // verify
  std::string suite = "all";
  // sample
  long steps = 200000;
  long burn_in = 10000;
  int thin = 20;
  double proposal_sd = 0.0;
  int chains = 1;
  std::uint64_t seed = 1;
  int bins = 40;
  // selberg
  std::string method = "grid";
  long budget = 1L << 20;
  double target = 1e-10;
};

RootSystemSpec spec_of(const RunConfig& c) {
  RootSystemSpec s{parse_type(c.type), c.N, c.r};
  validate(s);
  return s;
}

KernelSpec kernel_spec_of(const RunConfig& c) {
  KernelSpec ks{spec_of(c), c.t, c.t_star};
  validate(ks);
  return ks;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("cannot parse number '" + item + "'");
    }
  }
  return out;
}

std::ostream& fmt(std::ostream& os) { return os << std::setprecision(17); }

// Opens --out or falls back to stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
    }
    fmt(stream());
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

int run_theta(const RunConfig& c) {
  const theta::Modular tau(cplx{c.tau_re, c.tau_im});
  const cplx v = theta::theta(theta::index_from_int(c.index), cplx{c.v_re, c.v_im}, tau);
  Sink out(c.out);
  out.stream() << "index,v_re,v_im,tau_re,tau_im,re,im\n"
               << c.index << ',' << c.v_re << ',' << c.v_im << ',' << c.tau_re << ',' << c.tau_im << ','
               << v.real() << ',' << v.imag() << '\n';
  return 0;
}

int run_kernel(const RunConfig& c) {
  if (c.grid < 1) throw UsageError("--grid must be positive");
  const DppModel model(kernel_spec_of(c));
  const int G = c.grid;
  const double L = model.L();
  std::vector<double> pts(G);
  for (int i = 0; i < G; ++i) pts[i] = L * (i + 0.5) / G;
  std::vector<std::vector<Scaled>> u(G), w(G);
  num::parallel_for(G, num::resolve_workers(c.workers), [&](std::size_t i) {
    u[i] = model.left(pts[i]);
    w[i] = model.right(pts[i]);
  });
  Sink out(c.out);
  out.stream() << "x,y,re,im\n";
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j) {
      const cplx k = DppModel::kernel_from(u[i], w[j]);
      out.stream() << pts[i] << ',' << pts[j] << ',' << k.real() << ',' << k.imag() << '\n';
    }
  return 0;
}

int run_density(const RunConfig& c) {
  const KernelSpec ks = kernel_spec_of(c);
  const Configuration xs = parse_list(c.xs);
  check_alcove(ks.spec, xs);
  const double p = density(ks, xs);
  const double pb = bridge_density(ks.spec, ks.t, ks.t_star, xs);
  Sink out(c.out);
  out.stream() << "density,bridge_density\n" << p << ',' << pb << '\n';
  return 0;
}

int run_limits(const RunConfig& c) {
  const InfiniteKernelSpec iks{parse_family(c.family), c.rho, c.t, c.t_star};
  const cplx k = infinite_kernel(iks, c.x, c.y, c.nodes);
  const double s = sine_kernel(iks.family, c.x, c.y, c.rho);
  Sink out(c.out);
  out.stream() << "family,x,y,infinite_re,infinite_im,sine\n"
               << c.family << ',' << c.x << ',' << c.y << ',' << k.real() << ',' << k.imag() << ',' << s << '\n';
  return 0;
}

struct CheckLine {
  std::string name;
  double residual;
  double tolerance;
};

int run_verify(const RunConfig& c) {
  const RootSystemSpec spec = spec_of(c);
  const std::string& s = c.suite;
  const bool all = s == "all";
  if (!all && s != "biortho" && s != "denominator" && s != "lemma" && s != "bridge" && s != "kernel") {
    throw UsageError("unknown suite '" + s + "'");
  }
  std::vector<CheckLine> lines;
  std::mt19937_64 rng(c.seed);
  const double L = domain_length(spec);
  auto random_config = [&]() {
    std::uniform_real_distribution<double> u(0.0, L);
    Configuration xs(spec.N);
    do {
      for (auto& x : xs) x = u(rng);
      std::sort(xs.begin(), xs.end());
    } while (std::adjacent_find(xs.begin(), xs.end()) != xs.end());
    return xs;
  };

  if (all || s == "biortho") {
    const BiorthoFamily fam(spec, c.t_star);
    const GramResult g = gram_converged(fam, c.t);
    lines.push_back({"biorthogonality", biortho_defect(fam, g.G), 1e-9});
  }
  if (all || s == "denominator") {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) worst = std::max(worst, denominator_residual(spec, random_config(), c.t));
    lines.push_back({"macdonald_denominator", worst, 1e-10});
  }
  if (all || s == "lemma") {
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) worst = std::max(worst, matrix_identity_residual(spec, c.t, random_config()));
    lines.push_back({"matrix_identity", worst, 1e-10});
    worst = 0.0;
    for (int k = 0; k < 10; ++k) worst = std::max(worst, macdonald_kmlgv_residual(spec, c.t, random_config()));
    lines.push_back({"kmlgv_determinant", worst, 1e-9});
    if (spec.type == RootType::A) lines.push_back({"eta_form", eta_check_residual(spec, c.t), 1e-10});
  }
  if (all || s == "bridge") {
    const KernelSpec ks{spec, c.t, c.t_star};
    validate(ks);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const Configuration xs = random_config();
      const double p = density(ks, xs);
      const double q = bridge_density(spec, c.t, c.t_star, xs);
      worst = std::max(worst, std::abs(p - q) / std::max(std::abs(p), std::abs(q)));
    }
    lines.push_back({"bridge_density", worst, 1e-8});
  }
  if (all || s == "kernel") {
    const DppModel model(KernelSpec{spec, c.t, c.t_star});
    const num::GaussRule rule = num::trapezoid(256, L, spec.type == RootType::A);
    double trace = 0.0;
    for (std::size_t k = 0; k < rule.x.size(); ++k) trace += rule.w[k] * model.kernel(rule.x[k], rule.x[k]).real();
    lines.push_back({"kernel_trace", std::abs(trace - spec.N), 1e-9});
  }

  bool ok = true;
  std::cout << std::left << std::setw(24) << "check" << std::setw(14) << "residual" << std::setw(12) << "tolerance"
            << "result\n";
  for (const auto& l : lines) {
    const bool pass = l.residual <= l.tolerance;
    ok = ok && pass;
    std::ostringstream res, tol;
    res << std::scientific << std::setprecision(3) << l.residual;
    tol << std::scientific << std::setprecision(1) << l.tolerance;
    std::cout << std::setw(24) << l.name << std::setw(14) << res.str() << std::setw(12) << tol.str()
              << (pass ? "PASS" : "FAIL") << '\n';
  }
  return ok ? 0 : kExitFail;
}

int run_sample(const RunConfig& c) {
  const KernelSpec ks = kernel_spec_of(c);
  ChainConfig cfg;
  cfg.steps = c.steps;
  cfg.burn_in = c.burn_in;
  cfg.thin = c.thin;
  cfg.proposal_sd = c.proposal_sd;
  cfg.chains = c.chains;
  cfg.seed = c.seed;
  cfg.workers = c.workers;
  const SampleSet set = mcmc_sample(ks, cfg);
  for (const auto& w : set.warnings) std::cerr << "warning: " << w << '\n';
  const std::string prefix = c.out.empty() ? "samples" : c.out;
  {
    std::ofstream f(prefix + "_samples.csv");
    if (!f) throw UsageError("cannot write " + prefix + "_samples.csv");
    fmt(f) << "chain,index";
    for (int k = 1; k <= c.N; ++k) f << ",x" << k;
    f << '\n';
    std::vector<long> counter(cfg.chains, 0);
    for (std::size_t s = 0; s < set.samples.size(); ++s) {
      const int ch = set.chain_of[s];
      f << ch << ',' << counter[ch]++;
      for (double x : set.samples[s]) f << ',' << x;
      f << '\n';
    }
  }
  if (set.samples.empty()) return 0;
  const Histogram h = empirical_density(set.samples, c.bins, domain_length(ks.spec));
  std::ofstream f(prefix + "_histogram.csv");
  if (!f) throw UsageError("cannot write " + prefix + "_histogram.csv");
  fmt(f) << "bin_left,bin_right,count,density,stderr\n";
  for (std::size_t k = 0; k < h.count.size(); ++k) {
    f << h.left[k] << ',' << h.right[k] << ',' << h.count[k] << ',' << h.density[k] << ',' << h.stderr_[k] << '\n';
  }
  return 0;
}

int run_selberg(const RunConfig& c) {
  const RootSystemSpec spec = spec_of(c);
  SelbergOptions opt;
  if (c.method == "grid") {
    opt.method = SelbergMethod::Grid;
  } else if (c.method == "mc") {
    opt.method = SelbergMethod::MonteCarlo;
  } else {
    throw UsageError("unknown method '" + c.method + "'");
  }
  opt.budget = c.budget;
  opt.target = c.target;
  opt.seed = c.seed;
  opt.workers = c.workers;
  const SelbergResult res = selberg_check(spec, c.t, c.t_star, opt);
  Sink out(c.out);
  out.stream() << "lhs,rhs,rel_err,evaluations,estimate_error\n"
               << res.lhs << ',' << res.rhs << ',' << res.rel_err << ',' << res.evaluations << ','
               << res.estimate_error << '\n';
  return 0;
}

// Flags from a JSON object, skipping any flag already given on the command line.
std::vector<std::string> json_flags(const std::string& path, const std::vector<std::string>& given) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  std::vector<std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string key = it.key();
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    const bool seen = std::any_of(given.begin(), given.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (seen) continue;
    out.push_back(flag);
    const auto& v = it.value();
    if (v.is_string()) {
      out.push_back(v.get<std::string>());
    } else if (v.is_array()) {
      std::string joined;
      for (const auto& e : v) joined += (joined.empty() ? "" : ",") + e.dump();
      out.push_back(joined);
    } else {
      out.push_back(v.dump());
    }
  }
  return out;
}

void add_spec_options(CLI::App* app, RunConfig& c) {
  app->add_option("--type", c.type, "root system type (A, B, Bv, C, Cv, BC, D)");
  app->add_option("--N", c.N, "number of particles");
  app->add_option("-r,--r", c.r, "radius; the domain is [0, 2 pi r) for A and [0, pi r] otherwise");
}

void add_time_options(CLI::App* app, RunConfig& c) {
  app->add_option("--t", c.t, "observation time");
  app->add_option("--t-star", c.t_star, "final time");
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  // --config is handled before parsing so that explicit flags take precedence.
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
    } else {
      continue;
    }
    const std::vector<std::string> extra = json_flags(path, args);
    args.insert(args.end(), extra.begin(), extra.end());
    break;
  }

  RunConfig c;
  CLI::App app{"Elliptic determinantal point processes: evaluation and verification"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--workers", c.workers, "thread cap (default: ELLIPTIC_DPP_WORKERS or 1)");
  app.add_option("--config", "JSON file with flag values; explicit flags win");

  auto* th = app.add_subcommand("theta", "evaluate theta_index(v; tau)");
  th->add_option("--index", c.index, "0..3")->check(CLI::Range(0, 3));
  th->add_option("--v-re", c.v_re);
  th->add_option("--v-im", c.v_im);
  th->add_option("--tau-re", c.tau_re);
  th->add_option("--tau-im", c.tau_im);
  th->add_option("-o,--out", c.out, "CSV output path");

  auto* ke = app.add_subcommand("kernel", "correlation kernel on a grid x grid mesh (CSV x,y,re,im)");
  add_spec_options(ke, c);
  add_time_options(ke, c);
  ke->add_option("--grid", c.grid, "points per axis");
  ke->add_option("-o,--out", c.out, "CSV output path");

  auto* de = app.add_subcommand("density", "density and its bridge form at one configuration");
  add_spec_options(de, c);
  add_time_options(de, c);
  de->add_option("--xs", c.xs, "comma-separated ordered points")->required();
  de->add_option("-o,--out", c.out, "CSV output path");

  auto* li = app.add_subcommand("limits", "scaling-limit kernel against the sine kernel");
  li->add_option("--family", c.family, "A, B, C or D");
  li->add_option("--rho", c.rho, "density");
  add_time_options(li, c);
  li->add_option("--x", c.x);
  li->add_option("--y", c.y);
  li->add_option("--nodes", c.nodes, "initial Gauss-Legendre node count");
  li->add_option("-o,--out", c.out, "CSV output path");

  auto* ve = app.add_subcommand("verify", "identity checks with residuals and tolerances");
  add_spec_options(ve, c);
  add_time_options(ve, c);
  ve->add_option("--suite", c.suite, "all, biortho, denominator, lemma, bridge or kernel");
  ve->add_option("--seed", c.seed, "seed for the random configurations");

  auto* sa = app.add_subcommand("sample", "Metropolis sampling of configurations");
  add_spec_options(sa, c);
  add_time_options(sa, c);
  sa->add_option("--steps", c.steps, "iterations per chain after burn-in");
  sa->add_option("--burn-in", c.burn_in);
  sa->add_option("--thin", c.thin);
  sa->add_option("--proposal-sd", c.proposal_sd, "0 selects L / (8 N)");
  sa->add_option("--chains", c.chains);
  sa->add_option("--seed", c.seed);
  sa->add_option("--bins", c.bins, "histogram bins");
  sa->add_option("-o,--out", c.out, "output prefix for <prefix>_samples.csv and <prefix>_histogram.csv");

  auto* se = app.add_subcommand("selberg", "Selberg-type integral against its closed form");
  add_spec_options(se, c);
  add_time_options(se, c);
  se->add_option("--method", c.method, "grid or mc");
  se->add_option("--budget", c.budget, "integrand evaluation budget");
  se->add_option("--target", c.target, "grid: refinement agreement; mc: relative standard error");
  se->add_option("--seed", c.seed);
  se->add_option("-o,--out", c.out, "CSV output path");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (ve->parsed()) return run_verify(c);
  if (th->parsed()) return run_theta(c);
  if (ke->parsed()) return run_kernel(c);
  if (de->parsed()) return run_density(c);
  if (li->parsed()) return run_limits(c);
  if (sa->parsed()) return run_sample(c);
  if (se->parsed()) return run_selberg(c);
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const edpp::InvalidSpecError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const edpp::DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}
