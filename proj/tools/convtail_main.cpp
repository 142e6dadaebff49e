// convtail: analyze convolution tails of distributions on [0, inf).
//
// Exit codes: 0 all checks pass, 2 some check inconclusive, 3 a check failed
// or a precondition/budget was hit, 1 usage or I/O error. Results are always
// also written to the JSON/CSV artifacts, never conveyed by exit code alone.

#include <cmath>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "convtail/analysis.hpp"
#include "convtail/convolve.hpp"
#include "convtail/errors.hpp"
#include "convtail/spec_io.hpp"
#include "convtail/subadditive.hpp"
#include "convtail/transforms.hpp"

namespace {

using namespace convtail;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitFail = 3;

struct CommonOpts {
  double horizon = 1000.0;
  int points = 256;
  double tol = 0.05;
  double window = 0.5;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts* o) {
  cmd->add_option("--horizon", o->horizon, "evaluation horizon")->check(CLI::PositiveNumber);
  cmd->add_option("--points", o->points, "curve points")->check(CLI::Range(16, 1 << 20));
  cmd->add_option("--tol", o->tol, "verdict tolerance")
      ->check(CLI::Range(1e-9, 0.5 - 1e-12));
  cmd->add_option("--window", o->window, "lim-inf window fraction")
      ->check(CLI::Range(1e-6, 1.0 - 1e-12));
  cmd->add_option("--out", o->out, "output path (or path stem)");
  cmd->add_option("--format", o->format, "curve format: csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
}

AnalysisOptions analysis_opts(const CommonOpts& o) {
  AnalysisOptions a;
  a.tol = o.tol;
  a.window_fraction = o.window;
  a.n_points = o.points;
  return a;
}

std::string stem_of(const std::string& path) {
  const size_t dot = path.rfind('.');
  const size_t slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

void write_curve(const RatioCurve& curve, const std::string& path, const std::string& format) {
  if (format == "json")
    write_text_file(path, curve_to_json_text(curve));
  else
    write_curve_csv(curve, path);
}

int run_analyze(const std::string& spec, const CommonOpts& o) {
  const Distribution f = load_distribution(spec);
  const ConsistencyReport r = theorem_consistency(f, o.horizon, analysis_opts(o));
  int code = kExitOk;
  for (const auto& c : r.checks)
    if (c.applicable && c.status == Status::Inconclusive) code = kExitInconclusive;
  if (r.contradiction) code = kExitFail;
  const std::string stem = o.out.empty() ? "analysis" : stem_of(o.out);
  write_text_file(stem + ".report.json", report_to_json_text(r, code));
  write_curve(r.curve, stem + ".curve." + o.format, o.format);
  std::cout << "report: " << stem << ".report.json\ncurve:  " << stem << ".curve." << o.format
            << "\ncondition2: " << to_string(r.cond2.status)
            << "\nliminf proxy: " << r.proxy.value
            << (r.proxy.converged ? " (converged)" : " (not converged)")
            << "\ncontradiction: " << (r.contradiction ? "yes" : "no") << "\n";
  return code;
}

int run_convolve(const std::string& spec, const std::string& spec2, bool pair, long n,
                 const std::string& tau_spec, const CommonOpts& o) {
  const Distribution f = load_distribution(spec);
  const AnalysisOptions a = analysis_opts(o);
  RatioCurve curve;
  if (pair) {
    if (spec2.empty()) throw std::invalid_argument("--pair needs two spec files");
    curve = ratio_curve_pair(f, load_distribution(spec2), o.horizon, o.points, a);
  } else if (!tau_spec.empty()) {
    StoppingTimePmf tau = [&] {
      const size_t colon = tau_spec.find(':');
      const std::string head = tau_spec.substr(0, colon);
      const std::string arg = colon == std::string::npos ? "" : tau_spec.substr(colon + 1);
      if (head == "geometric") return StoppingTimePmf::geometric(std::stod(arg));
      if (head == "fixed") return StoppingTimePmf::deterministic(std::stol(arg));
      throw std::invalid_argument("tau spec must be geometric:<q> or fixed:<n>");
    }();
    curve = ratio_curve_stopped(f, tau, o.horizon, o.points, a);
  } else if (n <= 2) {
    if (n == 1) {
      // identity passthrough: ratio column is identically 1
      curve = ratio_curve_stopped(f, StoppingTimePmf::deterministic(1), o.horizon, o.points, a);
    } else {
      curve = ratio_curve(f, o.horizon, o.points, a);
    }
  } else {
    curve = ratio_curve_stopped(f, StoppingTimePmf::deterministic(n), o.horizon, o.points, a);
  }
  const std::string path = o.out.empty() ? ("convolve." + o.format) : o.out;
  write_curve(curve, path, o.format);
  std::cout << "curve: " << path << "\n";
  return kExitOk;
}

int run_tilt(const std::string& spec, double gamma, const CommonOpts& o) {
  const Distribution f = load_distribution(spec);
  TiltOptions t;
  t.range = o.horizon;
  t.dx = o.horizon / (16.0 * o.points);
  const Distribution g = exp_tilt(f, gamma, t);
  const std::string path = o.out.empty() ? "tilted.json" : o.out;
  save_distribution(g, path);
  std::cout << "tilted distribution: " << path << "\n";
  return kExitOk;
}

int run_itail(const std::string& spec, const CommonOpts& o) {
  const Distribution f = load_distribution(spec);
  ItailOptions it;
  it.range = o.horizon;
  it.dx = o.horizon / (16.0 * o.points);
  const Distribution g = integrated_tail(f, it);
  const std::string path = o.out.empty() ? "itail.json" : o.out;
  save_distribution(g, path);
  std::cout << "integrated-tail distribution: " << path << "\n";
  return kExitOk;
}

int run_hfunc(const std::string& spec, double delta, int levels, const CommonOpts& o) {
  const Distribution f = load_distribution(spec);
  const SubadditiveFunction h = construct_subadditive(f, delta, levels);
  const SubadditiveDiagnostics d = verify_subadditive(h, f, 10000, 12345);
  const std::string path = o.out.empty() ? "hfunc.json" : o.out;
  write_text_file(path, subadditive_to_json_text(h));
  write_text_file(stem_of(path) + ".diagnostics.json", diagnostics_to_json_text(d));
  std::cout << "h function: " << path << "\ndiagnostics: " << stem_of(path)
            << ".diagnostics.json\nsubadd_violations: " << d.subadd_violations
            << "\nexp_moment: " << d.exp_moment << "\n";
  return d.pass() ? kExitOk : kExitFail;
}

int run_counterexample(int variant, double gamma_hat, int n_atoms, const CommonOpts& o) {
  const Distribution f = Distribution::counterexample(variant, gamma_hat, n_atoms);
  const std::string path = o.out.empty() ? "counterexample.json" : o.out;
  save_distribution(f, path);
  std::cout << "distribution: " << path << "\n";
  return kExitOk;
}

int run_classify(const std::string& spec, double gamma_opt, const CommonOpts& o) {
  const Distribution f = load_distribution(spec);
  const AnalysisOptions a = analysis_opts(o);
  std::vector<ClassVerdict> verdicts;
  verdicts.push_back(test_heavy(f));
  verdicts.push_back(is_long_tailed(f, o.horizon, a));
  verdicts.push_back(test_class_S(f, o.horizon, a));
  if (f.mean().is_finite()) verdicts.push_back(test_class_S_star(f, o.horizon, a));
  const LaplaceSummary gh = gamma_hat(f);
  double gamma = gamma_opt;
  if (std::isnan(gamma) && gh.method != EvalMethod::NumericFit && gh.gamma_hat.is_finite())
    gamma = gh.gamma_hat.value();
  if (!std::isnan(gamma) && gamma > 0.0)
    verdicts.push_back(test_class_S_gamma(f, gamma, o.horizon, a));
  if (f.kind() == Kind::Atomic && f.lattice() && std::abs(f.lattice_span() - 1.0) < 1e-9 &&
      !std::isnan(gamma))
    verdicts.push_back(test_class_S_lattice(f, std::max(gamma, 0.0), a));

  std::string out = "[\n";
  int code = kExitOk;
  for (size_t i = 0; i < verdicts.size(); ++i) {
    std::string one = verdict_to_json_text(verdicts[i]);
    if (!one.empty() && one.back() == '\n') one.pop_back();
    out += one;
    out += (i + 1 < verdicts.size()) ? ",\n" : "\n";
    if (verdicts[i].status == Status::Inconclusive) code = kExitInconclusive;
    std::cout << verdicts[i].class_tag << ": " << to_string(verdicts[i].status) << "\n";
  }
  out += "]\n";
  write_text_file(o.out.empty() ? "classify.json" : o.out, out);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convolution-tail analysis of distributions on the half-line"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string spec, spec2, tau_spec;
  bool pair = false;
  long n = 2;
  double gamma = std::nan("");
  double delta = 0.5;
  int levels = 8;
  int variant = 1;
  int n_atoms = 8;

  CLI::App* analyze = app.add_subcommand("analyze", "theorem consistency report + ratio curve");
  analyze->add_option("spec", spec, "distribution spec (JSON)")->required();
  add_common(analyze, &o);

  CLI::App* convolve = app.add_subcommand("convolve", "convolved tail curves");
  convolve->add_option("spec", spec, "distribution spec (JSON)")->required();
  convolve->add_option("spec2", spec2, "second spec (pair mode)");
  convolve->add_flag("--pair", pair, "pair mode: F1*F2 over F̄1+F̄2");
  convolve->add_option("--n", n, "n-fold self-convolution");
  convolve->add_option("--tau", tau_spec, "stopping time: geometric:<q> | fixed:<n>");
  add_common(convolve, &o);

  CLI::App* tilt = app.add_subcommand("tilt", "exponential change of measure");
  tilt->add_option("spec", spec, "distribution spec (JSON)")->required();
  tilt->add_option("--gamma", gamma, "tilt parameter")->required();
  add_common(tilt, &o);

  CLI::App* itail = app.add_subcommand("itail", "integrated tail distribution");
  itail->add_option("spec", spec, "distribution spec (JSON)")->required();
  add_common(itail, &o);

  CLI::App* hfunc = app.add_subcommand("hfunc", "subadditive function construction + checks");
  hfunc->add_option("spec", spec, "distribution spec (JSON)")->required();
  hfunc->add_option("--delta", delta, "moment budget delta in (0,1]");
  hfunc->add_option("--levels", levels, "number of segments");
  add_common(hfunc, &o);

  CLI::App* ce = app.add_subcommand("counterexample", "sparse atomic family generator");
  ce->add_option("--variant", variant, "1, 2 or 3")->required();
  ce->add_option("--gamma", gamma, "gamma_hat parameter (variants 1 and 2)");
  ce->add_option("--n", n_atoms, "number of atoms");
  add_common(ce, &o);

  CLI::App* classify = app.add_subcommand("classify", "class membership verdicts");
  classify->add_option("spec", spec, "distribution spec (JSON)")->required();
  classify->add_option("--gamma", gamma, "gamma for the S(gamma) tests");
  add_common(classify, &o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints the message; 0 for --help
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze) return run_analyze(spec, o);
    if (*convolve) return run_convolve(spec, spec2, pair, n, tau_spec, o);
    if (*tilt) return run_tilt(spec, gamma, o);
    if (*itail) return run_itail(spec, o);
    if (*hfunc) return run_hfunc(spec, delta, levels, o);
    if (*ce) return run_counterexample(variant, std::isnan(gamma) ? 1e-3 : gamma, n_atoms, o);
    if (*classify) return run_classify(spec, gamma, o);
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitFail;
  } catch (const ToleranceError& e) {
    std::cerr << "tolerance not met: " << e.what() << "\n";
    return kExitFail;
  } catch (const LightTailError& e) {
    std::cerr << "light-tail evidence: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::domain_error& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
