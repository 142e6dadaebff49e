#include "convtail/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "convtail/errors.hpp"
#include "convtail/logspace.hpp"
#include "convtail/parallel.hpp"

namespace convtail {

std::string to_string(Status s) {
  switch (s) {
    case Status::Satisfied: return "satisfied";
    case Status::Violated: return "violated";
    default: return "inconclusive";
  }
}

std::string to_string(CurveMode m) {
  switch (m) {
    case CurveMode::SelfConv: return "self_conv";
    case CurveMode::Pair: return "pair";
    default: return "stopped";
  }
}

namespace {

constexpr double kConvergeDrift = 0.02;  // dyadic-horizon drift for "converged"

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> xs;
  if (!(hi > lo) || n < 2) return {hi};
  xs.reserve(static_cast<size_t>(n));
  const double r = std::log(hi / lo) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) xs.push_back(lo * std::exp(r * i));
  xs.back() = hi;
  return xs;
}

// midpoints between consecutive support points of an atomic distribution
std::vector<double> support_midpoints(const Distribution& d, double horizon) {
  const auto& pts = d.points();
  std::vector<double> xs;
  for (size_t i = 0; i + 1 < pts.size() && pts[i] < horizon; ++i)
    xs.push_back(std::min(0.5 * (pts[i] + pts[i + 1]), horizon));
  if (xs.empty()) xs.push_back(horizon);
  // keep curves bounded for dense lattices
  const size_t cap = 1 << 14;
  if (xs.size() > cap) {
    std::vector<double> sub;
    sub.reserve(cap);
    for (size_t i = 0; i < cap; ++i) sub.push_back(xs[i * xs.size() / cap]);
    xs = std::move(sub);
  }
  return xs;
}

void check_horizon(const Distribution& f, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  if (horizon > f.max_x() * (1.0 + 1e-12))
    throw OutOfRangeError("horizon " + std::to_string(horizon) +
                          " beyond the distribution's evaluable range");
}

RatioCurve assemble_curve(std::vector<double> xs, std::vector<double> base,
                          std::vector<double> conv, std::vector<double> bracket,
                          double horizon, CurveMode mode) {
  RatioCurve c;
  c.xs = std::move(xs);
  c.log_tail_base = std::move(base);
  c.log_tail_conv = std::move(conv);
  c.bracket = std::move(bracket);
  c.horizon = horizon;
  c.mode = mode;
  c.ratio.resize(c.xs.size());
  c.running_min.resize(c.xs.size());
  double rmin = kInf;
  for (size_t i = 0; i < c.xs.size(); ++i) {
    c.ratio[i] = std::exp(std::min(c.log_tail_conv[i] - c.log_tail_base[i], 700.0));
    rmin = std::min(rmin, c.ratio[i]);
    c.running_min[i] = rmin;
  }
  return c;
}

}  // namespace

RatioCurve ratio_curve(const Distribution& f, double horizon, int n_points,
                       const AnalysisOptions& opts) {
  check_horizon(f, horizon);
  if (f.kind() == Kind::Atomic) {
    ConvOptions c = opts.conv;
    const Distribution ff = conv_atomic(f, f, c);
    std::vector<double> xs = support_midpoints(ff, horizon);
    std::vector<double> base(xs.size()), conv(xs.size()), bracket(xs.size(), 0.0);
    for (size_t i = 0; i < xs.size(); ++i) {
      base[i] = f.log_tail(xs[i]);
      conv[i] = ff.log_tail(xs[i]);
    }
    return assemble_curve(std::move(xs), std::move(base), std::move(conv), std::move(bracket),
                          horizon, CurveMode::SelfConv);
  }
  std::vector<double> xs =
      geometric_grid(horizon / std::max(n_points, 2), horizon, std::max(n_points, 2));
  std::vector<double> base(xs.size()), conv(xs.size()), bracket(xs.size());
  parallel_for(xs.size(), [&](size_t i) {
    base[i] = f.log_tail(xs[i]);
    const LogBracket b = conv_tail_at(f, f, xs[i], opts.conv);
    conv[i] = b.est;
    bracket[i] = b.width();
  });
  return assemble_curve(std::move(xs), std::move(base), std::move(conv), std::move(bracket),
                        horizon, CurveMode::SelfConv);
}

RatioCurve ratio_curve_pair(const Distribution& f1, const Distribution& f2, double horizon,
                            int n_points, const AnalysisOptions& opts) {
  check_horizon(f1, horizon);
  check_horizon(f2, horizon);
  std::vector<double> xs;
  const bool both_atomic = f1.kind() == Kind::Atomic && f2.kind() == Kind::Atomic;
  if (both_atomic) {
    const Distribution conv12 = conv_atomic(f1, f2, opts.conv);
    xs = support_midpoints(conv12, horizon);
  } else {
    xs = geometric_grid(horizon / std::max(n_points, 2), horizon, std::max(n_points, 2));
  }
  std::vector<double> base(xs.size()), conv(xs.size()), bracket(xs.size());
  parallel_for(xs.size(), [&](size_t i) {
    base[i] = log_add_exp(f1.log_tail(xs[i]), f2.log_tail(xs[i]));
    const LogBracket b = conv_tail_at(f1, f2, xs[i], opts.conv);
    conv[i] = b.est;
    bracket[i] = b.width();
  });
  return assemble_curve(std::move(xs), std::move(base), std::move(conv), std::move(bracket),
                        horizon, CurveMode::Pair);
}

RatioCurve ratio_curve_stopped(const Distribution& f, const StoppingTimePmf& tau,
                               double horizon, int n_points, const AnalysisOptions& opts) {
  check_horizon(f, horizon);
  SelfConvOptions g = opts.conv_grid;
  if (g.range <= 0.0) g.range = horizon;
  const Distribution s = stopped_sum(f, tau, g);
  std::vector<double> xs = (s.kind() == Kind::Atomic)
                               ? support_midpoints(s, horizon)
                               : geometric_grid(horizon / std::max(n_points, 2), horizon,
                                                std::max(n_points, 2));
  std::vector<double> base(xs.size()), conv(xs.size());
  std::vector<double> bracket(xs.size(), s.kind() == Kind::Grid ? s.grid_err_bound() : 0.0);
  for (size_t i = 0; i < xs.size(); ++i) {
    base[i] = f.log_tail(xs[i]);
    conv[i] = s.log_tail(xs[i]);
  }
  return assemble_curve(std::move(xs), std::move(base), std::move(conv), std::move(bracket),
                        horizon, CurveMode::Stopped);
}

LiminfEstimate liminf_estimate(const RatioCurve& curve, double window_fraction) {
  if (curve.xs.empty()) throw std::invalid_argument("liminf_estimate: empty curve");
  if (!(window_fraction > 0.0 && window_fraction < 1.0))
    throw std::invalid_argument("liminf_estimate: window_fraction must be in (0,1)");
  auto window_min = [&](double lo, double hi) {
    double m = kInf;
    for (size_t i = 0; i < curve.xs.size(); ++i)
      if (curve.xs[i] >= lo && curve.xs[i] <= hi) m = std::min(m, curve.ratio[i]);
    return m;
  };
  LiminfEstimate e;
  e.value = window_min(window_fraction * curve.horizon, curve.horizon);
  e.at_half = window_min(0.5 * window_fraction * curve.horizon, 0.5 * curve.horizon);
  if (e.value == kInf) e.value = curve.ratio.back();
  e.converged = std::isfinite(e.at_half) && e.at_half > 0.0 &&
                std::abs(e.value - e.at_half) < kConvergeDrift * e.at_half;
  return e;
}

namespace {

Status banded_status(double deviation, double tol, bool evidence) {
  if (deviation <= tol) return evidence ? Status::Satisfied : Status::Inconclusive;
  if (deviation >= 2.0 * tol) return evidence ? Status::Violated : Status::Inconclusive;
  return Status::Inconclusive;
}

void require_classifiable(const Distribution& f) {
  if (f.kind() == Kind::Atomic && !f.truncated())
    throw std::invalid_argument(
        "classification requires unbounded support; atomic inputs must carry a truncation "
        "flag standing in for their infinite ideal");
}

}  // namespace

ClassVerdict check_condition2(const Distribution& f, double gamma,
                              const std::vector<double>& ys, double horizon,
                              const AnalysisOptions& opts) {
  check_horizon(f, horizon);
  if (ys.empty()) throw std::invalid_argument("check_condition2: ys must be nonempty");
  for (double y : ys)
    if (!(y > 0.0)) throw std::invalid_argument("check_condition2: ys must be positive");

  ClassVerdict v;
  v.class_tag = "condition2";
  v.diagnostics.emplace_back("gamma", gamma);
  bool any_inconclusive = false, any_violated = false;
  for (double y : ys) {
    const double lo = std::max(opts.window_fraction * horizon, y);
    std::vector<double> xs = geometric_grid(lo, horizon, std::max(opts.n_points / 2, 16));
    if (f.kind() == Kind::Atomic) {
      for (double a : f.points()) {
        const double cand = a + 1.25 * y;
        if (cand >= lo && cand <= horizon) xs.push_back(cand);
      }
    }
    double min_ratio = kInf;
    for (double x : xs)
      min_ratio = std::min(min_ratio, std::exp(f.log_tail(x - y) - f.log_tail(x)));
    const double target = std::exp(gamma * y);
    v.diagnostics.emplace_back("min_ratio_y_" + std::to_string(y), min_ratio);
    v.diagnostics.emplace_back("target_y_" + std::to_string(y), target);
    if (min_ratio >= target * (1.0 - opts.tol)) continue;  // this y satisfied
    if (min_ratio <= target * (1.0 - 2.0 * opts.tol))
      any_violated = true;
    else
      any_inconclusive = true;
  }
  v.status = any_violated ? Status::Violated
                          : (any_inconclusive ? Status::Inconclusive : Status::Satisfied);
  return v;
}

ClassVerdict is_long_tailed(const Distribution& f, double horizon, const AnalysisOptions& opts) {
  require_classifiable(f);
  check_horizon(f, std::min(horizon, f.max_x() == kInf ? horizon : f.max_x() - 2.0));
  ClassVerdict v;
  v.class_tag = "L";
  double min_ratio = kInf;
  const double upper_support =
      f.kind() == Kind::Atomic ? f.points().back() : f.max_x();
  for (double y : {1.0, 2.0}) {
    const double hi = std::min(horizon, upper_support - y);
    const double lo = opts.window_fraction * hi;
    std::vector<double> xs = geometric_grid(lo, hi, std::max(opts.n_points / 2, 16));
    if (f.kind() == Kind::Atomic) {
      for (double a : f.points()) {
        const double cand = a - 0.5 * y;
        if (cand >= lo && cand <= hi) xs.push_back(cand);
      }
    }
    for (double x : xs)
      min_ratio = std::min(min_ratio, std::exp(f.log_tail(x + y) - f.log_tail(x)));
  }
  v.diagnostics.emplace_back("min_ratio", min_ratio);
  v.status = banded_status(1.0 - min_ratio, opts.tol, true);
  return v;
}

ClassVerdict test_class_S(const Distribution& f, double horizon, const AnalysisOptions& opts) {
  require_classifiable(f);
  ClassVerdict v;
  v.class_tag = "S";
  const RatioCurve c = ratio_curve(f, horizon, opts.n_points, opts);
  const LiminfEstimate li = liminf_estimate(c, opts.window_fraction);
  double ls = 0.0;
  for (size_t i = 0; i < c.xs.size(); ++i)
    if (c.xs[i] >= opts.window_fraction * horizon) ls = std::max(ls, c.ratio[i]);
  const double dev = std::max(std::abs(li.value / 2.0 - 1.0), std::abs(ls / 2.0 - 1.0));
  const bool diverging = li.value > li.at_half * (1.0 + kConvergeDrift);
  v.diagnostics.emplace_back("liminf_proxy", li.value);
  v.diagnostics.emplace_back("limsup_proxy", ls);
  v.diagnostics.emplace_back("converged", li.converged ? 1.0 : 0.0);
  v.status = banded_status(dev, opts.tol, li.converged || diverging);
  return v;
}

ClassVerdict test_class_S_star(const Distribution& f, double horizon,
                               const AnalysisOptions& opts) {
  require_classifiable(f);
  if (!f.mean().is_finite())
    throw std::domain_error("test_class_S_star: requires a finite mean");
  ClassVerdict v;
  v.class_tag = "S_star";
  const double two_a = 2.0 * f.mean().value();
  auto ratio_at = [&](double x) {
    return std::exp(tail_product_integral(f, x, opts.conv).est - f.log_tail(x)) / two_a;
  };
  double dev = 0.0;
  for (double x : geometric_grid(opts.window_fraction * horizon, horizon, 8))
    dev = std::max(dev, std::abs(ratio_at(x) - 1.0));
  const double r_h = ratio_at(horizon), r_half = ratio_at(0.5 * horizon);
  const bool converged = std::abs(r_h - r_half) < kConvergeDrift * std::abs(r_half);
  const bool diverging = r_h > r_half * (1.0 + kConvergeDrift);
  v.diagnostics.emplace_back("ratio_to_2a_at_horizon", r_h);
  v.diagnostics.emplace_back("max_window_deviation", dev);
  v.diagnostics.emplace_back("converged", converged ? 1.0 : 0.0);
  v.status = banded_status(dev, opts.tol, converged || diverging);
  return v;
}

ClassVerdict test_class_S_gamma(const Distribution& f, double gamma, double horizon,
                                const AnalysisOptions& opts) {
  require_classifiable(f);
  if (gamma < 0.0) throw std::invalid_argument("test_class_S_gamma: gamma must be >= 0");
  ClassVerdict v;
  v.class_tag = "S_gamma";
  v.diagnostics.emplace_back("gamma", gamma);

  // (i) phi(gamma) finite — cheap, short-circuits
  const LaplaceEval phi = laplace_eval(f, gamma);
  if (!phi.finite) {
    v.status = Status::Violated;
    v.diagnostics.emplace_back("phi_finite", 0.0);
    return v;
  }
  v.diagnostics.emplace_back("phi", std::exp(phi.log_value));
  if (phi.method != EvalMethod::ClosedForm && phi.method != EvalMethod::AtomSum &&
      f.kind() == Kind::Grid && gamma > 0.0) {
    // finiteness rests on a numeric fit; never escalate beyond inconclusive
    v.status = Status::Inconclusive;
    v.diagnostics.emplace_back("phi_numeric_fit", 1.0);
    return v;
  }

  // (ii) F̄(x+y)/F̄(x) -> e^{-gamma y} for y in {1, 2}
  double dev2 = 0.0;
  const double upper_support = f.kind() == Kind::Atomic ? f.points().back() : f.max_x();
  for (double y : {1.0, 2.0}) {
    const double hi = std::min(horizon, upper_support - y);
    for (double x : geometric_grid(opts.window_fraction * hi, hi, std::max(opts.n_points / 4, 16)))
      dev2 = std::max(dev2,
                      std::abs(std::exp(f.log_tail(x + y) - f.log_tail(x) + gamma * y) - 1.0));
  }
  v.diagnostics.emplace_back("tail_ratio_deviation", dev2);

  // (iii) convolution ratio -> 2 phi(gamma)
  const RatioCurve c = ratio_curve(f, horizon, opts.n_points, opts);
  const LiminfEstimate li = liminf_estimate(c, opts.window_fraction);
  double ls = 0.0;
  for (size_t i = 0; i < c.xs.size(); ++i)
    if (c.xs[i] >= opts.window_fraction * horizon) ls = std::max(ls, c.ratio[i]);
  const double target = 2.0 * std::exp(phi.log_value);
  const double dev3 = std::max(std::abs(li.value / target - 1.0), std::abs(ls / target - 1.0));
  v.diagnostics.emplace_back("conv_ratio_deviation", dev3);
  v.diagnostics.emplace_back("liminf_proxy", li.value);
  v.diagnostics.emplace_back("converged", li.converged ? 1.0 : 0.0);
  const bool diverging = li.value > li.at_half * (1.0 + kConvergeDrift);
  v.status = banded_status(std::max(dev2, dev3), opts.tol, li.converged || diverging);
  return v;
}

ClassVerdict test_class_S_lattice(const Distribution& f, double gamma,
                                  const AnalysisOptions& opts) {
  if (f.kind() != Kind::Atomic || !f.lattice() ||
      std::abs(f.lattice_span() - 1.0) > 1e-9)
    throw std::invalid_argument("test_class_S_lattice: requires integer-lattice atomic support");
  require_classifiable(f);
  ClassVerdict v;
  v.class_tag = "S_lattice";
  v.diagnostics.emplace_back("gamma", gamma);

  const LaplaceEval phi = laplace_eval(f, gamma);
  if (!phi.finite) {
    v.status = Status::Violated;
    v.diagnostics.emplace_back("phi_finite", 0.0);
    return v;
  }
  v.diagnostics.emplace_back("phi", std::exp(phi.log_value));

  const auto& pts = f.points();
  const size_t n_max = static_cast<size_t>(std::llround(pts.back()));
  std::vector<double> dense(n_max + 1, kNegInf);
  for (size_t i = 0; i < pts.size(); ++i)
    dense[static_cast<size_t>(std::llround(pts[i]))] = f.log_masses()[i];

  const size_t w_lo = n_max / 2;
  for (size_t n = w_lo; n < n_max; ++n)
    if (dense[n] == kNegInf) {
      v.status = Status::Violated;
      v.diagnostics.emplace_back("mass_gap_at", static_cast<double>(n));
      return v;
    }

  double dev2 = 0.0;
  for (size_t n = w_lo; n < n_max; ++n)
    dev2 = std::max(dev2, std::abs(std::exp(dense[n + 1] - dense[n] + gamma) - 1.0));
  v.diagnostics.emplace_back("mass_ratio_deviation", dev2);

  const Distribution ff = conv_atomic(f, f, opts.conv);
  std::vector<double> conv_dense(n_max + 1, kNegInf);
  for (size_t i = 0; i < ff.points().size(); ++i) {
    const double p = ff.points()[i];
    if (p <= static_cast<double>(n_max))
      conv_dense[static_cast<size_t>(std::llround(p))] = ff.log_masses()[i];
  }
  const double log_target = 0.6931471805599453 + phi.log_value;
  double dev3 = 0.0, dev3_half = 0.0;
  for (size_t n = w_lo; n <= n_max; ++n)
    dev3 = std::max(dev3, std::abs(std::exp(conv_dense[n] - dense[n] - log_target) - 1.0));
  for (size_t n = w_lo / 2; n <= n_max / 2; ++n)
    dev3_half =
        std::max(dev3_half, std::abs(std::exp(conv_dense[n] - dense[n] - log_target) - 1.0));
  v.diagnostics.emplace_back("conv_mass_ratio_deviation", dev3);
  const bool evidence = dev3 <= dev3_half + kConvergeDrift;
  v.status = banded_status(std::max(dev2, dev3), opts.tol, evidence);
  return v;
}

ClassVerdict test_heavy(const Distribution& f) {
  ClassVerdict v;
  v.class_tag = "heavy";
  const LaplaceSummary s = gamma_hat(f);
  const double gh = s.gamma_hat.is_finite() ? s.gamma_hat.value() : kInf;
  v.diagnostics.emplace_back("gamma_hat", gh);
  if (s.method != EvalMethod::NumericFit) {
    v.status = gh == 0.0 ? Status::Satisfied : Status::Violated;
    return v;
  }
  v.diagnostics.emplace_back("fit_stderr", s.fit_stderr);
  if (!std::isfinite(gh) || !std::isfinite(s.fit_stderr)) {
    v.status = Status::Inconclusive;
    return v;
  }
  // significance-style call on the fitted slope
  if (gh <= 2.0 * s.fit_stderr)
    v.status = Status::Satisfied;
  else if (gh > 4.0 * s.fit_stderr)
    v.status = Status::Violated;
  else
    v.status = Status::Inconclusive;
  return v;
}

ClassVerdict test_class(const Distribution& f, const std::string& tag, double gamma,
                        double horizon, const AnalysisOptions& opts) {
  if (tag == "heavy") return test_heavy(f);
  if (tag == "L") return is_long_tailed(f, horizon, opts);
  if (tag == "S") return test_class_S(f, horizon, opts);
  if (tag == "S_star") return test_class_S_star(f, horizon, opts);
  if (tag == "S_gamma") return test_class_S_gamma(f, gamma, horizon, opts);
  if (tag == "S_lattice") return test_class_S_lattice(f, gamma, opts);
  if (tag == "condition2") return check_condition2(f, gamma, {1.0, 2.0}, horizon, opts);
  throw std::invalid_argument("test_class: unknown class tag \"" + tag + "\"");
}

// -- theorem consistency --------------------------------------------------------

ConsistencyReport theorem_consistency(const Distribution& f, double horizon,
                                      const AnalysisOptions& opts) {
  check_horizon(f, horizon);
  ConsistencyReport r;
  r.horizon = horizon;
  r.tol = opts.tol;
  r.window_fraction = opts.window_fraction;
  r.n_points = opts.n_points;

  r.summary = gamma_hat(f);
  const bool exact_gh = r.summary.method != EvalMethod::NumericFit;
  const double gh = r.summary.gamma_hat.is_finite() ? r.summary.gamma_hat.value() : kInf;
  r.heavy = exact_gh && gh == 0.0;

  r.curve = ratio_curve(f, horizon, opts.n_points, opts);
  r.proxy = liminf_estimate(r.curve, opts.window_fraction);

  // condition (2) tested at gamma_hat (a proxy level when gamma_hat = inf);
  // small gamma_hat needs y of order 1/gamma_hat before a violation can show
  const double g2 = std::isfinite(gh) ? gh : 1.0;
  std::vector<double> ys{1.0, 2.0};
  if (g2 > 0.0) ys.push_back(std::clamp(0.5 / g2, 1.0, horizon / 4.0));
  r.cond2 = check_condition2(f, g2, ys, horizon, opts);

  const double window_lo = opts.window_fraction * horizon;
  double ls = 0.0;
  for (size_t i = 0; i < r.curve.xs.size(); ++i)
    if (r.curve.xs[i] >= window_lo) ls = std::max(ls, r.curve.ratio[i]);
  const bool converged_ratio =
      r.proxy.converged && ls <= r.proxy.value * (1.0 + 2.0 * opts.tol);
  const bool diverging = r.proxy.value > r.proxy.at_half * (1.0 + kConvergeDrift);

  // pointwise lower bound: F*F̄(x) >= 2 F(x) F̄(x)
  {
    CheckResult c;
    c.name = "lower_bound_pointwise";
    c.applicable = true;
    double worst = kInf;
    for (size_t i = 0; i < r.curve.xs.size(); ++i) {
      const double fx = -std::expm1(r.curve.log_tail_base[i]);  // F(x)
      if (fx <= 0.0) continue;
      const double bound = 0.6931471805599453 + std::log(fx) + r.curve.log_tail_base[i];
      const double slack = r.curve.log_tail_conv[i] + r.curve.bracket[i] - bound;
      worst = std::min(worst, slack);
    }
    c.data.emplace_back("min_log_slack", worst);
    c.status = worst >= -1e-9 ? Status::Satisfied : Status::Violated;
    c.note = "convolution tail must dominate 2 F(x) F̄(x) pointwise";
    r.checks.push_back(std::move(c));
  }

  // Heavy tails: lim-inf proxy of the self-convolution ratio is 2.
  {
    CheckResult c;
    c.name = "heavy_liminf_two";
    c.applicable = r.heavy;
    if (c.applicable) {
      const double dev = std::abs(r.proxy.value / 2.0 - 1.0);
      c.status = banded_status(dev, opts.tol, r.proxy.converged);
      c.data.emplace_back("liminf_proxy", r.proxy.value);
      c.data.emplace_back("deviation", dev);
    } else {
      c.note = exact_gh ? "not heavy-tailed" : "gamma_hat is a numeric fit";
    }
    r.checks.push_back(std::move(c));
  }

  // Light tails with the shift condition: proxy -> 2 phi(gamma_hat), or
  // divergence when phi(gamma_hat) = inf.
  {
    CheckResult c;
    c.name = "cond2_liminf_2phi";
    c.applicable = exact_gh && gh > 0.0 && r.cond2.status == Status::Satisfied;
    if (c.applicable) {
      if (r.summary.phi_at_gamma_hat.is_finite()) {
        const double target = 2.0 * std::exp(r.summary.log_phi);
        const double dev = std::abs(r.proxy.value / target - 1.0);
        c.status = banded_status(dev, opts.tol, r.proxy.converged);
        c.data.emplace_back("target", target);
        c.data.emplace_back("liminf_proxy", r.proxy.value);
      } else {
        c.status = (!r.proxy.converged && diverging) ? Status::Satisfied : Status::Inconclusive;
        c.note = "phi(gamma_hat) infinite: ratio must diverge";
        c.data.emplace_back("liminf_proxy", r.proxy.value);
        c.data.emplace_back("proxy_at_half_horizon", r.proxy.at_half);
      }
    } else if (r.cond2.status != Status::Satisfied) {
      c.note = "hypothesis (tail-shift condition) not satisfied; theorem silent";
    } else {
      c.note = exact_gh ? "heavy-tailed case handled separately" : "gamma_hat is a numeric fit";
    }
    r.checks.push_back(std::move(c));
  }

  // A convergent ratio forces c = 2 phi(gamma_hat).
  {
    CheckResult c;
    c.name = "converged_c_equals_2phi";
    c.applicable = converged_ratio && exact_gh;
    if (c.applicable) {
      if (r.summary.phi_at_gamma_hat.is_finite()) {
        const double target = 2.0 * std::exp(r.summary.log_phi);
        const double dev = std::abs(r.proxy.value / target - 1.0);
        c.status = banded_status(dev, opts.tol, true);
        c.data.emplace_back("c_observed", r.proxy.value);
        c.data.emplace_back("target", target);
      } else {
        // a convergent finite ratio with infinite phi(gamma_hat) would be a
        // genuine contradiction
        c.status = Status::Violated;
        c.note = "ratio converged but phi(gamma_hat) is infinite";
      }
    } else {
      c.note = converged_ratio ? "gamma_hat is a numeric fit" : "ratio not convergent at horizon";
    }
    r.checks.push_back(std::move(c));
  }

  for (const CheckResult& c : r.checks)
    if (c.applicable && c.status == Status::Violated) r.contradiction = true;
  return r;
}

}  // namespace convtail
