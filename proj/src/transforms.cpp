#include "convtail/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "convtail/errors.hpp"
#include "convtail/logspace.hpp"
#include "convtail/quadrature.hpp"

namespace convtail {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// log of ∫_0^w e^{s u} du = (e^{s w} - 1)/s, stable near s = 0.
double log_exp_cell(double s, double w) {
  const double sw = s * w;
  if (std::abs(sw) < 1e-12) return std::log(w);
  if (sw > 0.0) return sw + std::log(-std::expm1(-sw)) - std::log(s);
  return std::log(std::expm1(sw) / s);
}

// ∫_x^∞ F̄(u) du with an error bound; requires finite mean.
struct TailIntegral {
  double value;
  double bound;
};

TailIntegral upper_tail_integral(const Distribution& f, double x) {
  switch (f.kind()) {
    case Kind::Parametric: {
      const auto& a = f.params();
      switch (f.family()) {
        case Family::Pareto: {
          if (a[0] <= 1.0) throw std::invalid_argument("upper_tail_integral: infinite mean");
          return {std::exp((1.0 - a[0]) * std::log1p(x)) / (a[0] - 1.0), 0.0};
        }
        case Family::Exponential:
          return {std::exp(-a[0] * x) / a[0], 0.0};
        case Family::WeibullSquare: {
          const double s = std::sqrt(a[1]);
          return {a[0] * std::sqrt(std::numbers::pi / a[1]) / 2.0 * std::erfc(s * x), 0.0};
        }
        case Family::SlowVaryExp: {
          const double alpha = a[0], rho = a[1];
          const double cut = x + 45.0 / alpha;
          const double head = adaptive_simpson(
              [&](double u) { return std::exp(-rho * std::log1p(u) - alpha * u); }, x, cut);
          const double rem = std::exp(-rho * std::log1p(cut) - alpha * cut) / alpha;
          return {head + rem, rem + 1e-13 * head};
        }
        case Family::Weibull: {
          const double c = a[0], beta = a[1];
          const double cut = std::max(x * 1.5 + 1.0, std::pow(50.0 / c, 1.0 / beta));
          const double head = adaptive_simpson(
              [&](double u) { return std::exp(-c * std::pow(u, beta)); }, x, cut);
          // beyond cut the hazard c*beta*u^(beta-1) is at least its value at cut
          const double haz = c * beta * std::pow(cut, beta - 1.0);
          const double rem = std::exp(-c * std::pow(cut, beta)) / haz;
          return {head + rem, rem + 1e-13 * head};
        }
      }
      break;
    }
    case Kind::Atomic: {
      const auto& pts = f.points();
      const auto& lm = f.log_masses();
      double s = 0.0;
      for (size_t i = 0; i < pts.size(); ++i)
        if (pts[i] > x) s += std::exp(lm[i]) * (pts[i] - x);
      return {s, 0.0};
    }
    case Kind::Grid: {
      const auto& lt = f.grid_log_tail();
      const double dx = f.grid_dx();
      const size_t K = lt.size() - 1;
      double s = 0.0;
      for (size_t k = 0; k < K; ++k) {
        const double a = k * dx, b = (k + 1) * dx;
        if (b <= x) continue;
        const double lam = (lt[k] - lt[k + 1]) / dx;
        const double c = std::max(a, x);
        if (lam > 1e-300)
          s += std::exp(lt[k] - lam * (c - a)) * -std::expm1(-lam * (b - c)) / lam;
        else
          s += std::exp(lt[k]) * (b - c);
      }
      const size_t k0 = K - std::max<size_t>(1, K / 4);
      const double rate = (lt[k0] - lt[K]) / (dx * static_cast<double>(K - k0));
      if (!(rate > 0.0)) throw std::invalid_argument("upper_tail_integral: grid tail does not decay");
      const double rem = std::exp(lt[K]) / rate;
      return {s + rem, rem};
    }
    case Kind::Mixture: {
      const auto& base = f.mixture_base();
      const TailIntegral ub = upper_tail_integral(base, x);
      TailIntegral us{};
      if (x >= 1.0) {
        us = upper_tail_integral(base, x - 1.0);
      } else {
        const TailIntegral u0 = upper_tail_integral(base, 0.0);
        us = {(1.0 - x) + u0.value, u0.bound};
      }
      return {(ub.value + us.value) / 2.0, (ub.bound + us.bound) / 2.0};
    }
  }
  throw std::logic_error("upper_tail_integral: unreachable");
}

// Fitted-geometric analysis of a sequence of log contributions: decides
// divergence (non-decreasing over the last quarter) vs a remainder majorant.
struct GeomTail {
  bool diverges;
  double log_remainder;  // valid when !diverges
};

GeomTail geometric_majorant(const std::vector<double>& log_terms) {
  const size_t n = log_terms.size();
  if (n < 2) return {false, kNegInf};
  const size_t k0 = n - std::max<size_t>(2, n / 4);
  double max_ratio = kNegInf;
  for (size_t i = k0; i + 1 < n; ++i) {
    if (log_terms[i] == kNegInf && log_terms[i + 1] == kNegInf) continue;
    max_ratio = std::max(max_ratio, log_terms[i + 1] - log_terms[i]);
  }
  // flat-to-rounding contributions carry no decay evidence: treat as divergent
  if (max_ratio >= -1e-9) return {true, 0.0};
  if (max_ratio == kNegInf) return {false, kNegInf};
  const double r = std::exp(max_ratio);
  return {false, log_terms.back() + max_ratio - std::log1p(-r)};
}

}  // namespace

// -- Laplace transform -----------------------------------------------------------

LaplaceEval laplace_eval(const Distribution& f, double gamma) {
  if (!std::isfinite(gamma)) throw std::invalid_argument("laplace: gamma must be finite");
  if (gamma == 0.0) return {true, 0.0, kNegInf, EvalMethod::ClosedForm};

  switch (f.kind()) {
    case Kind::Parametric: {
      const auto& a = f.params();
      switch (f.family()) {
        case Family::Exponential: {
          if (gamma >= a[0]) return {false, 0.0, kNegInf, EvalMethod::ClosedForm};
          return {true, std::log(a[0]) - std::log(a[0] - gamma), kNegInf,
                  EvalMethod::ClosedForm};
        }
        case Family::Pareto:
        case Family::Weibull: {
          if (gamma > 0.0) return {false, 0.0, kNegInf, EvalMethod::ClosedForm};
          break;  // gamma < 0: quadrature below
        }
        case Family::WeibullSquare:
          break;  // finite for every gamma
        case Family::SlowVaryExp: {
          const double alpha = a[0], rho = a[1];
          if (gamma > alpha) return {false, 0.0, kNegInf, EvalMethod::ClosedForm};
          if (gamma == alpha)
            return {true, std::log1p(alpha / (rho - 1.0)), kNegInf, EvalMethod::ClosedForm};
          break;
        }
      }
      // phi(gamma) = 1 + gamma * ∫_0^∞ e^{gamma u} F̄(u) du, truncated where the
      // integrand has provably decayed.
      double cut, end_slope;  // |d/du log integrand| at the cut
      if (f.family() == Family::WeibullSquare) {
        const double c2 = a[1];
        const double peak = std::max(0.0, gamma / (2.0 * c2));
        cut = peak + std::sqrt(50.0 / c2);
        end_slope = 2.0 * c2 * cut - gamma;
      } else if (f.family() == Family::SlowVaryExp) {
        cut = 45.0 / (a[0] - gamma);
        end_slope = a[0] - gamma;
      } else {
        cut = 45.0 / -gamma;
        end_slope = -gamma;
      }
      const double integral = adaptive_simpson(
          [&](double u) { return std::exp(gamma * u + f.log_tail(u)); }, 0.0, cut);
      const double tail_part = std::exp(gamma * cut + f.log_tail(cut)) / end_slope;
      const double gi = std::max(gamma * (integral + tail_part), -1.0 + 1e-300);
      const double rem = std::abs(gamma) * tail_part;
      return {true, std::log1p(gi), std::log(rem), EvalMethod::Quadrature};
    }

    case Kind::Atomic: {
      const auto& pts = f.points();
      const auto& lm = f.log_masses();
      std::vector<double> terms(pts.size());
      for (size_t i = 0; i < pts.size(); ++i) terms[i] = lm[i] + gamma * pts[i];
      const double lv = log_sum_exp(terms);
      if (!f.truncated()) return {true, lv, kNegInf, EvalMethod::AtomSum};
      if (gamma < 0.0)
        return {true, lv, f.log_neglected_mass() + gamma * pts.back(), EvalMethod::AtomSum};
      const GeomTail g = geometric_majorant(terms);
      if (g.diverges) return {false, 0.0, kNegInf, EvalMethod::AtomSum};
      return {true, lv, g.log_remainder, EvalMethod::AtomSum};
    }

    case Kind::Grid: {
      const auto& lt = f.grid_log_tail();
      const double dx = f.grid_dx();
      const size_t K = lt.size() - 1;
      std::vector<double> terms;
      terms.reserve(K + 2);
      const double atom0 = f.log_mass_at_zero();
      if (atom0 > kNegInf) terms.push_back(atom0);
      std::vector<double> cell_terms(K, kNegInf);
      for (size_t k = 0; k < K; ++k) {
        const double lam = (lt[k] - lt[k + 1]) / dx;
        if (lam <= 0.0) continue;
        cell_terms[k] =
            std::log(lam) + lt[k] + gamma * (k * dx) + log_exp_cell(gamma - lam, dx);
      }
      // beyond-grid model: exponential continuation at the fitted end rate
      const size_t k0 = K - std::max<size_t>(1, K / 4);
      const double rate = (lt[k0] - lt[K]) / (dx * static_cast<double>(K - k0));
      double log_ext = kNegInf, log_rem = kNegInf;
      if (gamma > 0.0) {
        const GeomTail g = geometric_majorant(cell_terms);
        if (g.diverges || gamma >= rate) return {false, 0.0, kNegInf, EvalMethod::StieltjesSum};
        log_ext = lt[K] + gamma * (K * dx) + std::log(rate / (rate - gamma));
        log_rem = log_ext;
      } else {
        log_ext = (rate > 0.0) ? lt[K] + gamma * (K * dx) + std::log(rate / (rate - gamma))
                               : kNegInf;
        log_rem = lt[K] + gamma * (K * dx);
      }
      for (double c : cell_terms)
        if (c > kNegInf) terms.push_back(c);
      if (log_ext > kNegInf) terms.push_back(log_ext);
      return {true, log_sum_exp(terms), log_rem, EvalMethod::StieltjesSum};
    }

    case Kind::Mixture: {
      const LaplaceEval base = laplace_eval(f.mixture_base(), gamma);
      if (!base.finite) return base;
      const double factor = log_add_exp(0.0, gamma) - kLn2;  // (1 + e^gamma)/2
      return {true, base.log_value + factor,
              base.log_remainder == kNegInf ? kNegInf : base.log_remainder + factor,
              base.method};
    }
  }
  throw std::logic_error("laplace_eval: unreachable");
}

ExtendedReal laplace(const Distribution& f, double gamma) {
  const LaplaceEval e = laplace_eval(f, gamma);
  if (!e.finite) return ExtendedReal::infinity();
  const double v = std::exp(e.log_value);
  return std::isfinite(v) ? ExtendedReal(v) : ExtendedReal::infinity();
}

// -- gamma_hat -------------------------------------------------------------------

LaplaceSummary gamma_hat(const Distribution& f) {
  LaplaceSummary s;
  switch (f.kind()) {
    case Kind::Parametric: {
      const auto& a = f.params();
      switch (f.family()) {
        case Family::Pareto:
        case Family::Weibull:
          s.gamma_hat = ExtendedReal(0.0);
          s.phi_at_gamma_hat = ExtendedReal(1.0);
          s.log_phi = 0.0;
          return s;
        case Family::Exponential:
          s.gamma_hat = ExtendedReal(a[0]);
          s.phi_at_gamma_hat = ExtendedReal::infinity();
          return s;
        case Family::WeibullSquare:
          s.gamma_hat = ExtendedReal::infinity();
          s.phi_at_gamma_hat = ExtendedReal::infinity();
          return s;
        case Family::SlowVaryExp:
          s.gamma_hat = ExtendedReal(a[0]);
          s.log_phi = std::log1p(a[0] / (a[1] - 1.0));
          s.phi_at_gamma_hat = ExtendedReal(std::exp(s.log_phi));
          return s;
      }
      break;
    }
    case Kind::Mixture: {
      s = gamma_hat(f.mixture_base());
      if (s.gamma_hat.is_finite() && s.phi_at_gamma_hat.is_finite()) {
        s.log_phi += log_add_exp(0.0, s.gamma_hat.value()) - kLn2;
        s.phi_at_gamma_hat = ExtendedReal(std::exp(s.log_phi));
      }
      return s;
    }
    case Kind::Atomic:
    case Kind::Grid: {
      // least-squares slope of -log F̄(x) against x over the last decade
      std::vector<double> xs, ys;
      const double x_hi = (f.kind() == Kind::Atomic) ? f.points().back() : f.max_x();
      for (double lo : {x_hi / 10.0, x_hi / 100.0, 0.0}) {
        xs.clear();
        ys.clear();
        if (f.kind() == Kind::Atomic) {
          const auto& pts = f.points();
          for (size_t i = 0; i + 1 < pts.size(); ++i)
            if (pts[i] >= lo) {
              xs.push_back(pts[i]);
              ys.push_back(-f.log_tail(pts[i]));
            }
        } else {
          const auto& lt = f.grid_log_tail();
          const double dx = f.grid_dx();
          const size_t stride = std::max<size_t>(1, lt.size() / 1024);
          for (size_t k = 0; k < lt.size(); k += stride)
            if (k * dx >= lo) {
              xs.push_back(k * dx);
              ys.push_back(-lt[k]);
            }
        }
        if (xs.size() >= 3) {
          s.fit_lo = lo;
          break;
        }
      }
      s.method = EvalMethod::NumericFit;
      s.fit_hi = x_hi;
      if (xs.size() < 2) {
        s.gamma_hat = ExtendedReal::infinity();
        s.phi_at_gamma_hat = ExtendedReal::infinity();
        s.fit_stderr = kInf;
        return s;
      }
      const size_t n = xs.size();
      double mx = 0.0, my = 0.0;
      for (size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
      }
      mx /= n;
      my /= n;
      double sxx = 0.0, sxy = 0.0;
      for (size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
      }
      const double slope = std::max(0.0, sxy / sxx);
      double ss_res = 0.0;
      for (size_t i = 0; i < n; ++i) {
        const double r = ys[i] - my - slope * (xs[i] - mx);
        ss_res += r * r;
      }
      s.fit_stderr = (n > 2) ? std::sqrt(ss_res / ((n - 2) * sxx)) : kInf;
      s.gamma_hat = ExtendedReal(slope);
      const LaplaceEval pe = laplace_eval(f, slope);
      if (pe.finite) {
        s.log_phi = pe.log_value;
        const double v = std::exp(pe.log_value);
        s.phi_at_gamma_hat = std::isfinite(v) ? ExtendedReal(v) : ExtendedReal::infinity();
      } else {
        s.phi_at_gamma_hat = ExtendedReal::infinity();
      }
      return s;
    }
  }
  throw std::logic_error("gamma_hat: unreachable");
}

// -- exponential tilt ------------------------------------------------------------

Distribution exp_tilt(const Distribution& f, double gamma, const TiltOptions& opts) {
  if (gamma == 0.0) return f;
  const LaplaceEval ev = laplace_eval(f, gamma);
  if (!ev.finite)
    throw std::domain_error("exp_tilt: phi(gamma) is infinite at gamma = " +
                            std::to_string(gamma));

  if (f.kind() == Kind::Parametric && f.family() == Family::Exponential)
    return Distribution::parametric(Family::Exponential, {f.params()[0] - gamma});

  if (f.kind() == Kind::Atomic) {
    const auto& pts = f.points();
    const auto& lm = f.log_masses();
    std::vector<double> tilted(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) tilted[i] = lm[i] + gamma * pts[i];
    const double norm = log_sum_exp(tilted);
    for (double& t : tilted) t -= norm;
    if (!f.truncated()) return Distribution::atomic(pts, std::move(tilted));
    return Distribution::atomic_truncated(pts, std::move(tilted), ev.log_remainder - norm);
  }

  // materialize onto a grid: reweight measure increments, rebuild the tail
  // by suffix log-sum-exp against phi(gamma)
  const double range = std::min(opts.range, f.max_x());
  std::size_t cells = static_cast<std::size_t>(std::ceil(range / opts.dx));
  cells = std::min(std::max<std::size_t>(cells, 16), opts.max_cells);
  const double dx = range / static_cast<double>(cells);

  std::vector<double> lt(cells + 1);
  for (size_t k = 0; k <= cells; ++k) lt[k] = f.log_tail(k * dx);

  std::vector<double> w(cells);
  LogSumAccumulator rep;
  const double atom0 = f.log_mass_at_zero();
  if (atom0 > kNegInf) rep.add(atom0);
  for (size_t k = 0; k < cells; ++k) {
    w[k] = log_sub_exp(lt[k], lt[k + 1]) + gamma * (k + 0.5) * dx;
    rep.add(w[k]);
  }
  double excess = log_sub_exp(ev.log_value, rep.log_total());
  excess = std::max(excess, ev.log_value - 740.0);

  std::vector<double> out(cells + 1);
  out[cells] = excess - ev.log_value;
  for (size_t k = cells; k-- > 0;) out[k] = log_add_exp(out[k + 1], w[k] - ev.log_value);
  // suffix sums can drift a hair above 0 (cell-rule bias, rounding): renormalize
  if (out[0] > 0.0)
    for (double& v : out) v -= out[0];
  out[0] = std::min(out[0], 0.0);
  // drop the underflow shelf at the far end (a flat stored tail would bias
  // slope fits and decay-rate estimates downstream)
  size_t last = cells;
  while (last > 1 && out[last - 1] <= -700.0) --last;
  out.resize(last + 1);

  double err = gamma * gamma * dx * dx / 24.0;
  if (ev.log_remainder > kNegInf) err += std::exp(ev.log_remainder - ev.log_value);
  if (f.kind() == Kind::Grid) err += f.grid_err_bound();
  return Distribution::grid(dx, std::move(out), err);
}

// -- integrated tail -------------------------------------------------------------

Distribution integrated_tail(const Distribution& f, const ItailOptions& opts) {
  if (!f.mean().is_finite())
    throw std::invalid_argument("integrated_tail: input must have a finite mean");

  const double range = std::min(opts.range, f.max_x());
  std::size_t cells = static_cast<std::size_t>(std::ceil(range / opts.dx));
  cells = std::max<std::size_t>(cells, 16);
  const double dx = range / static_cast<double>(cells);

  std::vector<double> integral(cells + 1);
  double bound = 0.0;
  if (f.kind() == Kind::Atomic || f.kind() == Kind::Mixture) {
    for (size_t k = 0; k <= cells; ++k) {
      const TailIntegral ti = upper_tail_integral(f, k * dx);
      integral[k] = ti.value;
      bound = std::max(bound, ti.bound);
    }
  } else {
    const TailIntegral end = upper_tail_integral(f, range);
    integral[cells] = end.value;
    bound = end.bound;
    for (size_t k = cells; k-- > 0;) {
      const double a = k * dx, b = (k + 1) * dx;
      double cell;
      if (f.kind() == Kind::Grid) {
        const double la = f.log_tail(a), lb = f.log_tail(b);
        const double lam = (la - lb) / dx;
        cell = (lam > 1e-300) ? std::exp(la) * -std::expm1(-lam * dx) / lam
                              : std::exp(la) * dx;
      } else {
        cell = adaptive_simpson([&](double u) { return std::exp(f.log_tail(u)); }, a, b);
      }
      integral[k] = integral[k + 1] + cell;
    }
  }

  std::vector<double> out(cells + 1);
  const double log_a = std::log(integral[0]);
  for (size_t k = 0; k <= cells; ++k) out[k] = std::log(integral[k]) - log_a;
  out[0] = 0.0;
  return Distribution::grid(dx, std::move(out), bound / integral[0] + 1e-12);
}

// -- partial exponential moments ---------------------------------------------------

double partial_exp_moment(const Distribution& f, double eps, double a, double b) {
  if (!(a >= 0.0) || !(b >= a)) throw std::invalid_argument("partial_exp_moment: need 0 <= a <= b");
  if (b == a) return 0.0;
  switch (f.kind()) {
    case Kind::Parametric: {
      const double ta = std::exp(eps * a + f.log_tail(a));
      const double tb = std::exp(eps * b + f.log_tail(b));
      const double integral = adaptive_simpson(
          [&](double u) { return std::exp(eps * u + f.log_tail(u)); }, a, b);
      return std::max(0.0, ta - tb + eps * integral);
    }
    case Kind::Atomic: {
      const auto& pts = f.points();
      const auto& lm = f.log_masses();
      LogSumAccumulator acc;
      const auto lo = std::upper_bound(pts.begin(), pts.end(), a);
      for (auto it = lo; it != pts.end() && *it <= b; ++it)
        acc.add(lm[it - pts.begin()] + eps * *it);
      return std::exp(acc.log_total());
    }
    case Kind::Grid: {
      const auto& lt = f.grid_log_tail();
      const double dx = f.grid_dx();
      const size_t K = lt.size() - 1;
      LogSumAccumulator acc;
      for (size_t k = 0; k < K; ++k) {
        const double ca = k * dx, cb = (k + 1) * dx;
        const double c = std::max(ca, a), d = std::min(cb, b);
        if (d <= c) continue;
        const double lam = (lt[k] - lt[k + 1]) / dx;
        if (lam <= 0.0) continue;
        acc.add(std::log(lam) + lt[k] - lam * (c - ca) + eps * c +
                log_exp_cell(eps - lam, d - c));
      }
      return std::exp(acc.log_total());
    }
    case Kind::Mixture: {
      const auto& base = f.mixture_base();
      double shifted = 0.0;
      if (b >= 1.0) {
        if (a < 1.0) shifted += std::exp(base.log_mass_at_zero());
        const double sa = std::max(a - 1.0, 0.0), sb = b - 1.0;
        if (sb > sa) shifted += partial_exp_moment(base, eps, sa, sb);
      }
      return (partial_exp_moment(base, eps, a, b) + std::exp(eps) * shifted) / 2.0;
    }
  }
  throw std::logic_error("partial_exp_moment: unreachable");
}

double exp_moment_upto(const Distribution& f, double eps, double b) {
  const double atom0 = f.log_mass_at_zero();
  return (atom0 > kNegInf ? std::exp(atom0) : 0.0) + partial_exp_moment(f, eps, 0.0, b);
}

double partial_exp_x_moment(const Distribution& f, double eps, double a, double b) {
  if (!(a >= 0.0) || !(b >= a)) throw std::invalid_argument("partial_exp_x_moment: need 0 <= a <= b");
  if (b == a) return 0.0;
  switch (f.kind()) {
    case Kind::Parametric: {
      const double ta = a * std::exp(eps * a + f.log_tail(a));
      const double tb = b * std::exp(eps * b + f.log_tail(b));
      const double integral = adaptive_simpson(
          [&](double u) { return (1.0 + eps * u) * std::exp(eps * u + f.log_tail(u)); }, a, b);
      return std::max(0.0, ta - tb + integral);
    }
    case Kind::Atomic: {
      const auto& pts = f.points();
      const auto& lm = f.log_masses();
      double s = 0.0;
      const auto lo = std::upper_bound(pts.begin(), pts.end(), a);
      for (auto it = lo; it != pts.end() && *it <= b; ++it)
        s += *it * std::exp(lm[it - pts.begin()] + eps * *it);
      return s;
    }
    case Kind::Grid: {
      const auto& lt = f.grid_log_tail();
      const double dx = f.grid_dx();
      const size_t K = lt.size() - 1;
      double s = 0.0;
      for (size_t k = 0; k < K; ++k) {
        const double ca = k * dx, cb = (k + 1) * dx;
        const double c = std::max(ca, a), d = std::min(cb, b);
        if (d <= c) continue;
        const double lam = (lt[k] - lt[k + 1]) / dx;
        if (lam <= 0.0) continue;
        s += adaptive_simpson(
            [&](double u) {
              return u * std::exp(std::log(lam) + lt[k] - lam * (u - ca) + eps * u);
            },
            c, d);
      }
      return s;
    }
    case Kind::Mixture: {
      const auto& base = f.mixture_base();
      double shifted = 0.0;
      if (b >= 1.0) {
        if (a < 1.0) shifted += std::exp(base.log_mass_at_zero());
        const double sa = std::max(a - 1.0, 0.0), sb = b - 1.0;
        if (sb > sa)
          shifted += partial_exp_x_moment(base, eps, sa, sb) +
                     partial_exp_moment(base, eps, sa, sb);
      }
      return (partial_exp_x_moment(base, eps, a, b) + std::exp(eps) * shifted) / 2.0;
    }
  }
  throw std::logic_error("partial_exp_x_moment: unreachable");
}

}  // namespace convtail
