// Command-line front door: evaluates kernels and densities, runs the
// hard-edge ladder and CLT experiments, exports Monte Carlo batches, and
// exposes the exact-identity verification suite. Emits CSV ('#' header lines
// carry the resolved configuration) or JSON with stable key order.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric
// failure.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "muprod/biorth_check.hpp"
#include "muprod/biorthogonal.hpp"
#include "muprod/clt.hpp"
#include "muprod/contour.hpp"
#include "muprod/errors.hpp"
#include "muprod/hard_edge.hpp"
#include "muprod/identities.hpp"
#include "muprod/kernel.hpp"
#include "muprod/quadrature.hpp"
#include "muprod/sampler.hpp"

using json = nlohmann::json;
using namespace muprod;

namespace {

struct GridAxis {
  double lo = 0.0, hi = 1.0;
  int steps = 1;
};

struct RunConfig {
  double mu = 0.5;
  int n_small = 4;
  int m_large = -1;  // default: N
  std::uint64_t seed = 1;
  int trials = 1000;
  int bins = 40;
  std::string grid;
  std::string method = "direct";
  std::string out;
  std::string format = "csv";
  std::string f_poly = "0,1";  // ascending coefficients, default f(x) = x
  int nu = 0;
  std::string ns_list = "20,40,80";
  double tol_override = -1.0;
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

GridAxis parse_axis(const std::string& s) {
  GridAxis a;
  int n = std::sscanf(s.c_str(), "%lf:%lf:%d", &a.lo, &a.hi, &a.steps);
  if (n != 3 || a.steps < 1 || !(a.hi >= a.lo))
    throw CLI::ValidationError("grid", "expected x0:x1:steps with steps >= 1");
  return a;
}

std::pair<GridAxis, GridAxis> parse_grid(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) {
    GridAxis a = parse_axis(s);
    return {a, a};
  }
  return {parse_axis(s.substr(0, comma)), parse_axis(s.substr(comma + 1))};
}

std::vector<double> axis_points(const GridAxis& a) {
  std::vector<double> pts(a.steps);
  for (int i = 0; i < a.steps; ++i)
    pts[i] = a.steps == 1 ? a.lo : a.lo + (a.hi - a.lo) * i / (a.steps - 1.0);
  return pts;
}

// Resolved config echoed into every artifact, '#'-prefixed for CSV.
std::map<std::string, std::string> config_echo(const RunConfig& c, const std::string& cmd) {
  std::ostringstream mu;
  mu.precision(17);
  mu << c.mu;
  return {{"command", cmd},
          {"mu", mu.str()},
          {"N", std::to_string(c.n_small)},
          {"M", std::to_string(c.m_large)},
          {"seed", std::to_string(c.seed)},
          {"trials", std::to_string(c.trials)},
          {"bins", std::to_string(c.bins)},
          {"grid", c.grid},
          {"method", c.method},
          {"format", c.format}};
}

void write_csv_header(std::ostream& os, const RunConfig& c, const std::string& cmd) {
  os << "# muprod csv v1\n";
  for (const auto& [k, v] : config_echo(c, cmd)) os << "# " << k << "=" << v << "\n";
}

struct OutputSink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit OutputSink(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw CLI::ValidationError("out", "cannot open output path " + path);
      os = &file;
    }
    os->precision(17);
  }
};

void finalize_config(RunConfig& c) {
  if (c.m_large < 0) c.m_large = c.n_small;
  if (c.m_large < c.n_small)
    throw CLI::ValidationError("M", "M must be >= N");
}

int cmd_kernel(const RunConfig& cfg) {
  auto [ax, ay] = parse_grid(cfg.grid.empty() ? "0.5:2.0:4" : cfg.grid);
  auto p = make_parameters(cfg.mu, cfg.n_small, cfg.m_large);
  BiorthogonalSystem sys(p, cfg.n_small + 1);
  auto xs = axis_points(ax), ys = axis_points(ay);
  OutputSink sink(cfg.out);
  std::ostream& os = *sink.os;

  auto eval = [&](double x, double y, KernelMethod m) {
    if (m == KernelMethod::christoffel_darboux) {
      try {
        return kernel(x, y, sys, m).value;
      } catch (const ProximityError&) {
        return kernel(x, y, sys, KernelMethod::direct_sum).value;  // documented fallback
      }
    }
    return kernel(x, y, sys, m).value;
  };

  if (cfg.format == "json") {
    json rows = json::array();
    for (double x : xs)
      for (double y : ys) {
        json r = {{"x", x}, {"y", y}};
        if (cfg.method == "all") {
          double vd = eval(x, y, KernelMethod::direct_sum);
          double v2 = eval(x, y, KernelMethod::double_sum);
          double vc = eval(x, y, KernelMethod::christoffel_darboux);
          double vq = eval(x, y, KernelMethod::double_contour);
          double mx = std::max({std::fabs(vd - v2), std::fabs(vd - vc), std::fabs(vd - vq),
                                std::fabs(v2 - vc), std::fabs(v2 - vq), std::fabs(vc - vq)});
          r["direct"] = vd;
          r["double"] = v2;
          r["cd"] = vc;
          r["contour"] = vq;
          r["max_dev"] = mx;
        } else {
          r["value"] = eval(x, y, kernel_method_from_string(cfg.method));
          r["method"] = cfg.method;
        }
        rows.push_back(r);
      }
    json doc = {{"config", config_echo(cfg, "kernel")}, {"rows", rows}};
    os << doc.dump() << "\n";
    return 0;
  }
  write_csv_header(os, cfg, "kernel");
  if (cfg.method == "all") {
    os << "x,y,direct,double,cd,contour,max_dev\n";
    for (double x : xs)
      for (double y : ys) {
        double vd = eval(x, y, KernelMethod::direct_sum);
        double v2 = eval(x, y, KernelMethod::double_sum);
        double vc = eval(x, y, KernelMethod::christoffel_darboux);
        double vq = eval(x, y, KernelMethod::double_contour);
        double mx = std::max({std::fabs(vd - v2), std::fabs(vd - vc), std::fabs(vd - vq),
                              std::fabs(v2 - vc), std::fabs(v2 - vq), std::fabs(vc - vq)});
        os << x << "," << y << "," << vd << "," << v2 << "," << vc << "," << vq << "," << mx
           << "\n";
      }
  } else {
    os << "x,y,value,method\n";
    KernelMethod m = kernel_method_from_string(cfg.method);
    for (double x : xs)
      for (double y : ys)
        os << x << "," << y << "," << eval(x, y, m) << "," << to_string(m) << "\n";
  }
  return 0;
}

int cmd_density(const RunConfig& cfg) {
  if (cfg.trials < 100) throw CLI::ValidationError("trials", "density needs at least 100 trials");
  auto p = make_parameters(cfg.mu, cfg.n_small, cfg.m_large);
  BiorthogonalSystem sys(p, cfg.n_small);
  double hi;
  if (!cfg.grid.empty()) {
    hi = parse_grid(cfg.grid).first.hi;
  } else {
    // extend until the one-point density is negligible
    hi = 8.0 * cfg.n_small / cfg.mu;
    while (kernel(hi, hi, sys, KernelMethod::direct_sum).value > 1e-10) hi *= 1.3;
  }
  auto batch = sample_batch(p, cfg.trials, cfg.seed);
  auto h = empirical_density(batch, cfg.bins, 0.0, hi);
  OutputSink sink(cfg.out);
  std::ostream& os = *sink.os;
  std::vector<double> analytic(cfg.bins);
  for (int b = 0; b < cfg.bins; ++b) {
    double a = h.lo + b * h.width;
    auto r = quad::integrate(
        [&](double t) {
          return t <= 0 ? 0.0 : kernel(t, t, sys, KernelMethod::direct_sum).value;
        },
        std::max(a, 1e-12), a + h.width, 1e-9);
    analytic[b] = r.value / h.width;
  }
  if (cfg.format == "json") {
    json rows = json::array();
    for (int b = 0; b < cfg.bins; ++b)
      rows.push_back({{"center", h.center[b]},
                      {"empirical", h.density[b]},
                      {"stderr", h.stderr_[b]},
                      {"analytic", analytic[b]}});
    json doc = {{"config", config_echo(cfg, "density")},
                {"failed_trials", batch.failed_trials},
                {"rows", rows}};
    os << doc.dump() << "\n";
    return 0;
  }
  write_csv_header(os, cfg, "density");
  os << "# failed_trials=" << batch.failed_trials << "\n";
  os << "bin_center,empirical,stderr,analytic\n";
  for (int b = 0; b < cfg.bins; ++b)
    os << h.center[b] << "," << h.density[b] << "," << h.stderr_[b] << "," << analytic[b] << "\n";
  return 0;
}

int cmd_hardedge(const RunConfig& cfg) {
  HardEdgeContext ctx;
  ctx.nu = cfg.nu;
  auto axes = cfg.grid.empty() ? parse_grid("0.2:3.0:5") : parse_grid(cfg.grid);
  auto xs = axis_points(axes.first), ys = axis_points(axes.second);
  auto lim = limiting_kernel_grid(xs, ys, ctx);
  OutputSink sink(cfg.out);
  std::ostream& os = *sink.os;
  write_csv_header(os, cfg, "hardedge");
  os << "# nu=" << cfg.nu << " Ns=" << cfg.ns_list << "\n";
  os << "N,x,y,rescaled,limit,abs_dev,sup_dev\n";
  for (double nd : parse_list(cfg.ns_list)) {
    int N = static_cast<int>(nd);
    auto p = make_parameters(cfg.mu, N, N + cfg.nu);
    BiorthogonalSystem sys(p, N);
    std::vector<std::vector<double>> vals(xs.size(), std::vector<double>(ys.size()));
    double sup = 0.0;
    for (size_t i = 0; i < xs.size(); ++i)
      for (size_t j = 0; j < ys.size(); ++j) {
        vals[i][j] = rescaled_finite_kernel(xs[i], ys[j], sys);
        sup = std::max(sup, std::fabs(vals[i][j] - lim[i][j]));
      }
    for (size_t i = 0; i < xs.size(); ++i)
      for (size_t j = 0; j < ys.size(); ++j)
        os << N << "," << xs[i] << "," << ys[j] << "," << vals[i][j] << "," << lim[i][j] << ","
           << std::fabs(vals[i][j] - lim[i][j]) << "," << sup << "\n";
  }
  return 0;
}

int cmd_clt(const RunConfig& cfg) {
  auto p = make_parameters(cfg.mu, cfg.n_small, cfg.m_large);
  auto rep = clt_experiment(p, parse_list(cfg.f_poly), cfg.trials, cfg.seed);
  OutputSink sink(cfg.out);
  *sink.os << clt_report_to_json(rep) << "\n";
  return 0;
}

int cmd_sample(const RunConfig& cfg, bool rescaled) {
  auto p = make_parameters(cfg.mu, cfg.n_small, cfg.m_large);
  auto batch = sample_batch(p, cfg.trials, cfg.seed, rescaled);
  OutputSink sink(cfg.out);
  if (cfg.format == "json")
    batch_to_json(batch, *sink.os);
  else
    batch_to_csv(batch, *sink.os);
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  auto verdicts = identities::run_all_identity_checks();
  long failures = 0;
  for (const auto& v : verdicts) failures += v.failures;
  OutputSink sink(cfg.out);
  json doc = {{"config", config_echo(cfg, "verify")},
              {"families", json::parse(identities::verdicts_to_json(verdicts))},
              {"total_failures", failures}};
  *sink.os << doc.dump() << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"singular-value statistics of products of two mu-coupled Gaussian matrices"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--mu", cfg.mu, "coupling in (0,1)");
    sub->add_option("--N", cfg.n_small, "matrix size N");
    sub->add_option("--M", cfg.m_large, "matrix size M >= N (default N)");
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--trials", cfg.trials, "Monte Carlo trials");
    sub->add_option("--bins", cfg.bins, "histogram bins");
    sub->add_option("--grid", cfg.grid, "grid spec x0:x1:steps[,y0:y1:steps]");
    sub->add_option("--method", cfg.method, "direct|double|cd|contour|all");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--config", config_path, "JSON config file (flags override it)");
    sub->add_option("--nu", cfg.nu, "hard-edge nu");
    sub->add_option("--Ns", cfg.ns_list, "comma list of N values for the ladder");
    sub->add_option("--f", cfg.f_poly, "polynomial coefficients, ascending");
    sub->add_option("--tol", cfg.tol_override, "tolerance override where applicable");
  };

  auto* sk = app.add_subcommand("kernel", "evaluate K_N on a grid");
  auto* sd = app.add_subcommand("density", "Monte Carlo vs analytic one-point density");
  auto* sh = app.add_subcommand("hardedge", "rescaled kernel vs limiting Meijer G-kernel");
  auto* sc = app.add_subcommand("clt", "linear-statistics CLT experiment (JSON report)");
  auto* sv = app.add_subcommand("verify", "exact identity suite; exit 1 on any failure");
  auto* ss = app.add_subcommand("sample", "draw a batch and serialize the spectra");
  bool rescaled = false;
  ss->add_flag("--rescaled", rescaled, "scale entries by 1/sqrt(N)");
  for (auto* sub : {sk, sd, sh, sc, sv, ss}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    // config file fills any value not explicitly set on the command line
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw CLI::ValidationError("config", "cannot read config file");
      json j = json::parse(in);
      auto* sub = app.get_subcommands().front();
      auto take = [&](const char* key, auto& slot) {
        if (j.contains(key) && sub->count(std::string("--") + key) == 0)
          slot = j[key].get<std::decay_t<decltype(slot)>>();
      };
      take("mu", cfg.mu);
      take("N", cfg.n_small);
      take("M", cfg.m_large);
      take("seed", cfg.seed);
      take("trials", cfg.trials);
      take("bins", cfg.bins);
      take("grid", cfg.grid);
      take("method", cfg.method);
      take("out", cfg.out);
      take("format", cfg.format);
      take("nu", cfg.nu);
      take("Ns", cfg.ns_list);
      take("f", cfg.f_poly);
    }
    finalize_config(cfg);
    if (sk->parsed()) return cmd_kernel(cfg);
    if (sd->parsed()) return cmd_density(cfg);
    if (sh->parsed()) return cmd_hardedge(cfg);
    if (sc->parsed()) return cmd_clt(cfg);
    if (sv->parsed()) return cmd_verify(cfg);
    if (ss->parsed()) return cmd_sample(cfg, rescaled);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
