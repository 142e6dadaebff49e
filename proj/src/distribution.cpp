#include "convtail/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "convtail/errors.hpp"
#include "convtail/logspace.hpp"
#include "convtail/quadrature.hpp"

namespace convtail {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kLn3 = 1.0986122886681098;
constexpr double kNormTol = 1e-12;

double float_gcd(double a, double b) {
  // Euclid with an absolute cutoff; good enough to recognize the lattices
  // we construct (integer points, halves, ...).
  const double cutoff = 1e-9 * std::max(a, b);
  while (b > cutoff) {
    const double r = std::fmod(a, b);
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

Family family_from_string(const std::string& name) {
  if (name == "pareto") return Family::Pareto;
  if (name == "exponential") return Family::Exponential;
  if (name == "weibull_sq") return Family::WeibullSquare;
  if (name == "slowvary_exp") return Family::SlowVaryExp;
  if (name == "weibull") return Family::Weibull;
  throw std::invalid_argument("unknown family tag: \"" + name + "\"");
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Pareto: return "pareto";
    case Family::Exponential: return "exponential";
    case Family::WeibullSquare: return "weibull_sq";
    case Family::SlowVaryExp: return "slowvary_exp";
    case Family::Weibull: return "weibull";
  }
  return "?";
}

// -- construction --------------------------------------------------------------

Distribution Distribution::parametric(Family family, std::vector<double> params) {
  auto need = [&](size_t n) {
    if (params.size() != n)
      throw std::invalid_argument("family " + family_name(family) + ": expected " +
                                  std::to_string(n) + " parameter(s)");
    for (double p : params)
      if (!std::isfinite(p)) throw std::invalid_argument("params: non-finite value");
  };
  switch (family) {
    case Family::Pareto:
      need(1);
      if (params[0] <= 0.0) throw std::invalid_argument("pareto: beta must be > 0");
      break;
    case Family::Exponential:
      need(1);
      if (params[0] <= 0.0) throw std::invalid_argument("exponential: alpha must be > 0");
      break;
    case Family::WeibullSquare:
      need(2);
      if (params[0] <= 0.0 || params[0] > 1.0)
        throw std::invalid_argument("weibull_sq: c1 must be in (0, 1]");
      if (params[1] <= 0.0) throw std::invalid_argument("weibull_sq: c2 must be > 0");
      break;
    case Family::SlowVaryExp:
      need(2);
      if (params[0] <= 0.0) throw std::invalid_argument("slowvary_exp: alpha must be > 0");
      if (params[1] <= 1.0) throw std::invalid_argument("slowvary_exp: rho must be > 1");
      break;
    case Family::Weibull:
      need(2);
      if (params[0] <= 0.0) throw std::invalid_argument("weibull: c must be > 0");
      if (params[1] <= 0.0 || params[1] >= 1.0)
        throw std::invalid_argument("weibull: beta must be in (0, 1)");
      break;
  }
  return Distribution(ParametricData{family, std::move(params)});
}

Distribution Distribution::atomic(std::vector<double> points, std::vector<double> log_masses) {
  return atomic_truncated(std::move(points), std::move(log_masses), kNegInf);
}

Distribution Distribution::atomic_truncated(std::vector<double> points,
                                            std::vector<double> log_masses,
                                            double log_neglected) {
  if (points.empty() || points.size() != log_masses.size())
    throw std::invalid_argument("atomic: points and log_masses must be equal-length, nonempty");
  for (size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i]) || points[i] < 0.0)
      throw std::invalid_argument("atomic: points must be finite and >= 0");
    if (i > 0 && !(points[i] > points[i - 1]))
      throw std::invalid_argument("atomic: points must be strictly increasing");
    if (std::isnan(log_masses[i]) || log_masses[i] > kNormTol || log_masses[i] == kNegInf)
      throw std::invalid_argument("atomic: log_masses must be finite and <= 0");
  }
  if (points.back() == 0.0)
    throw std::invalid_argument("atomic: all mass at 0 (tail identically zero)");

  const double lse = log_sum_exp(log_masses);
  if (std::abs(lse) > kNormTol)
    throw std::invalid_argument("atomic: log_masses do not sum to 1 (log-sum-exp = " +
                                std::to_string(lse) + ")");
  for (double& lm : log_masses) lm -= lse;  // exact normalization

  AtomicData d;
  d.points = std::move(points);
  d.log_masses = std::move(log_masses);
  d.log_suffix.resize(d.points.size());
  double acc = kNegInf;
  for (size_t i = d.points.size(); i-- > 0;) {
    acc = log_add_exp(acc, d.log_masses[i]);
    d.log_suffix[i] = std::min(acc, 0.0);
  }
  d.truncated = log_neglected > kNegInf;
  d.log_neglected = log_neglected;

  double g = 0.0;
  for (double p : d.points)
    if (p > 0.0) g = (g == 0.0) ? p : float_gcd(std::max(g, p), std::min(g, p));
  if (g > 0.0) {
    bool ok = true;
    for (double p : d.points) {
      const double k = std::round(p / g);
      if (std::abs(p - k * g) > 1e-9 * std::max(1.0, p)) {
        ok = false;
        break;
      }
    }
    d.lattice = ok;
    d.lattice_span = ok ? g : 0.0;
  }
  return Distribution(std::move(d));
}

Distribution Distribution::grid(double dx, std::vector<double> log_tail, double err_bound) {
  if (!(dx > 0.0) || !std::isfinite(dx)) throw std::invalid_argument("grid: dx must be > 0");
  if (log_tail.size() < 2) throw std::invalid_argument("grid: log_tail needs >= 2 entries");
  if (log_tail.front() > kNormTol)
    throw std::invalid_argument("grid: log_tail[0] must be <= 0");
  for (size_t i = 0; i < log_tail.size(); ++i) {
    if (std::isnan(log_tail[i]) || log_tail[i] == kInf)
      throw std::invalid_argument("grid: log_tail entries must be real");
    if (log_tail[i] == kNegInf)
      throw std::invalid_argument("grid: zero tail inside declared range");
    if (i > 0 && log_tail[i] > log_tail[i - 1] + 1e-13)
      throw std::invalid_argument("grid: log_tail increases at index " + std::to_string(i));
    if (i > 0) log_tail[i] = std::min(log_tail[i], log_tail[i - 1]);
  }
  log_tail.front() = std::min(log_tail.front(), 0.0);
  return Distribution(GridData{dx, std::move(log_tail), err_bound});
}

Distribution Distribution::counterexample(int variant, double gamma_hat, int n_atoms) {
  if (variant < 1 || variant > 3) throw std::invalid_argument("counterexample: variant must be 1, 2 or 3");
  if (n_atoms < 3) throw std::invalid_argument("counterexample: n_atoms must be >= 3");
  if (n_atoms > 33) throw std::invalid_argument("counterexample: n_atoms too large for exact 3^n support");
  if (variant != 3 && !(gamma_hat > 0.0))
    throw std::invalid_argument("counterexample: gamma_hat must be > 0 for variants 1 and 2");

  auto log_unnorm = [&](int n) -> double {
    const double xn = std::pow(3.0, n);
    switch (variant) {
      case 1: return -gamma_hat * xn - n * kLn3;
      case 2: return -gamma_hat * xn;
      default: return -xn * xn;
    }
  };

  std::vector<double> pts(n_atoms), lm(n_atoms);
  for (int n = 0; n < n_atoms; ++n) {
    pts[n] = std::pow(3.0, n);
    lm[n] = log_unnorm(n);
  }
  const double log_norm = log_sum_exp(lm);
  for (double& v : lm) v -= log_norm;

  // Neglected mass beyond the last atom: term ratios keep shrinking, so a
  // geometric majorant from the first omitted term is an upper bound.
  const double t_first = log_unnorm(n_atoms);
  const double r = std::exp(log_unnorm(n_atoms + 1) - t_first);
  const double log_neglected = t_first - std::log1p(-r) - log_norm;

  return atomic_truncated(std::move(pts), std::move(lm), log_neglected);
}

// -- queries -------------------------------------------------------------------

Kind Distribution::kind() const {
  switch (data_.index()) {
    case 0: return Kind::Parametric;
    case 1: return Kind::Atomic;
    case 2: return Kind::Grid;
    default: return Kind::Mixture;
  }
}

double Distribution::log_tail(double x) const {
  if (std::isnan(x) || x < 0.0) throw std::domain_error("log_tail: x must be >= 0");
  if (const auto* p = std::get_if<ParametricData>(&data_)) {
    const auto& a = p->params;
    switch (p->family) {
      case Family::Pareto: return -a[0] * std::log1p(x);
      case Family::Exponential: return -a[0] * x;
      case Family::WeibullSquare: return std::log(a[0]) - a[1] * x * x;
      case Family::SlowVaryExp: return -a[1] * std::log1p(x) - a[0] * x;
      case Family::Weibull: return -a[0] * std::pow(x, a[1]);
    }
  }
  if (const auto* a = std::get_if<AtomicData>(&data_)) {
    const auto it = std::upper_bound(a->points.begin(), a->points.end(), x);
    const size_t idx = static_cast<size_t>(it - a->points.begin());
    return idx == a->points.size() ? kNegInf : a->log_suffix[idx];
  }
  if (const auto* g = std::get_if<GridData>(&data_)) {
    const double kmax = static_cast<double>(g->log_tail.size() - 1);
    const double u = x / g->dx;
    if (u > kmax * (1.0 + 1e-12))
      throw OutOfRangeError("log_tail: x beyond grid range (x = " + std::to_string(x) +
                            ", max = " + std::to_string(kmax * g->dx) + ")");
    if (u >= kmax) return g->log_tail.back();
    const size_t k = static_cast<size_t>(u);
    const double t = u - static_cast<double>(k);
    return g->log_tail[k] * (1.0 - t) + g->log_tail[k + 1] * t;
  }
  const auto& m = std::get<MixtureData>(data_);
  const double la = (x >= 1.0) ? m.base->log_tail(x - 1.0) : 0.0;
  const double lb = m.base->log_tail(x);
  return log_add_exp(la, lb) - kLn2;
}

double Distribution::max_x() const {
  if (const auto* g = std::get_if<GridData>(&data_))
    return g->dx * static_cast<double>(g->log_tail.size() - 1);
  if (const auto* m = std::get_if<MixtureData>(&data_)) return m->base->max_x();
  return kInf;
}

ExtendedReal Distribution::mean() const {
  std::call_once(mean_cache_->once, [this] {
    if (const auto* p = std::get_if<ParametricData>(&data_)) {
      const auto& a = p->params;
      switch (p->family) {
        case Family::Pareto:
          mean_cache_->value = a[0] > 1.0 ? ExtendedReal(1.0 / (a[0] - 1.0)) : ExtendedReal::infinity();
          return;
        case Family::Exponential:
          mean_cache_->value = ExtendedReal(1.0 / a[0]);
          return;
        case Family::WeibullSquare:
          mean_cache_->value = ExtendedReal(a[0] * std::sqrt(std::numbers::pi / a[1]) / 2.0);
          return;
        case Family::SlowVaryExp: {
          const double alpha = a[0], rho = a[1];
          const double cut = 40.0 / alpha;
          const double head = adaptive_simpson(
              [&](double x) { return std::exp(-rho * std::log1p(x) - alpha * x); }, 0.0, cut);
          const double rem = std::exp(-rho * std::log1p(cut) - alpha * cut) / alpha;
          mean_cache_->value = ExtendedReal(head + rem);
          mean_cache_->err = rem + 1e-13 * head;
          return;
        }
        case Family::Weibull:
          mean_cache_->value = ExtendedReal(std::tgamma(1.0 + 1.0 / a[1]) *
                                            std::pow(a[0], -1.0 / a[1]));
          return;
      }
    }
    if (const auto* a = std::get_if<AtomicData>(&data_)) {
      double s = 0.0, c = 0.0;
      for (size_t i = 0; i < a->points.size(); ++i) {
        const double term = std::exp(a->log_masses[i]) * a->points[i];
        const double y = term - c;
        const double u = s + y;
        c = (u - s) - y;
        s = u;
      }
      mean_cache_->value = ExtendedReal(s);
      return;
    }
    if (const auto* g = std::get_if<GridData>(&data_)) {
      // exact integral of the piecewise-exponential tail over the grid
      double s = 0.0;
      for (size_t k = 0; k + 1 < g->log_tail.size(); ++k) {
        const double la = g->log_tail[k], lb = g->log_tail[k + 1];
        const double lam = (la - lb) / g->dx;
        s += (lam > 1e-300) ? std::exp(la) * -std::expm1(-lam * g->dx) / lam
                            : std::exp(la) * g->dx;
      }
      // remainder: fit the decay rate over the last quarter of the grid
      const size_t n = g->log_tail.size();
      const size_t k0 = n - std::max<size_t>(2, n / 4);
      const double rate =
          (g->log_tail[k0] - g->log_tail[n - 1]) / (g->dx * static_cast<double>(n - 1 - k0));
      if (!(rate > 0.0)) {
        mean_cache_->value = ExtendedReal::infinity();
        mean_cache_->err = kInf;
        return;
      }
      const double rem = std::exp(g->log_tail.back()) / rate;
      mean_cache_->value = ExtendedReal(s + rem);
      mean_cache_->err = rem;
      return;
    }
    const auto& m = std::get<MixtureData>(data_);
    const ExtendedReal base = m.base->mean();
    mean_cache_->value = base.is_finite() ? ExtendedReal(base.value() + 0.5)
                                          : ExtendedReal::infinity();
    mean_cache_->err = m.base->mean_error_bound();
  });
  return mean_cache_->value;
}

double Distribution::mean_error_bound() const {
  mean();
  return mean_cache_->err;
}

bool Distribution::lattice() const {
  if (const auto* a = std::get_if<AtomicData>(&data_)) return a->lattice;
  return false;
}

double Distribution::lattice_span() const {
  if (const auto* a = std::get_if<AtomicData>(&data_)) return a->lattice_span;
  return 0.0;
}

bool Distribution::truncated() const {
  if (const auto* a = std::get_if<AtomicData>(&data_)) return a->truncated;
  if (const auto* m = std::get_if<MixtureData>(&data_)) return m->base->truncated();
  return false;
}

double Distribution::log_neglected_mass() const {
  if (const auto* a = std::get_if<AtomicData>(&data_)) return a->log_neglected;
  if (const auto* m = std::get_if<MixtureData>(&data_)) return m->base->log_neglected_mass();
  return kNegInf;
}

double Distribution::log_mass_at_zero() const {
  switch (kind()) {
    case Kind::Parametric: {
      const auto& p = std::get<ParametricData>(data_);
      if (p.family == Family::WeibullSquare && p.params[0] < 1.0)
        return std::log1p(-p.params[0]);
      return kNegInf;
    }
    case Kind::Atomic: {
      const auto& a = std::get<AtomicData>(data_);
      return a.points.front() == 0.0 ? a.log_masses.front() : kNegInf;
    }
    case Kind::Grid: {
      const auto& g = std::get<GridData>(data_);
      return g.log_tail.front() < 0.0 ? log1m_exp(g.log_tail.front()) : kNegInf;
    }
    case Kind::Mixture:
      return std::get<MixtureData>(data_).base->log_mass_at_zero() - kLn2;
  }
  return kNegInf;
}

// -- payload access --------------------------------------------------------------

namespace {
[[noreturn]] void kind_mismatch(const char* what) {
  throw std::logic_error(std::string("Distribution: ") + what + " on wrong kind");
}
}  // namespace

Family Distribution::family() const {
  if (const auto* p = std::get_if<ParametricData>(&data_)) return p->family;
  kind_mismatch("family()");
}
const std::vector<double>& Distribution::params() const {
  if (const auto* p = std::get_if<ParametricData>(&data_)) return p->params;
  kind_mismatch("params()");
}
const std::vector<double>& Distribution::points() const {
  if (const auto* a = std::get_if<AtomicData>(&data_)) return a->points;
  kind_mismatch("points()");
}
const std::vector<double>& Distribution::log_masses() const {
  if (const auto* a = std::get_if<AtomicData>(&data_)) return a->log_masses;
  kind_mismatch("log_masses()");
}
double Distribution::grid_dx() const {
  if (const auto* g = std::get_if<GridData>(&data_)) return g->dx;
  kind_mismatch("grid_dx()");
}
const std::vector<double>& Distribution::grid_log_tail() const {
  if (const auto* g = std::get_if<GridData>(&data_)) return g->log_tail;
  kind_mismatch("grid_log_tail()");
}
double Distribution::grid_err_bound() const {
  if (const auto* g = std::get_if<GridData>(&data_)) return g->err_bound;
  kind_mismatch("grid_err_bound()");
}
const Distribution& Distribution::mixture_base() const {
  if (const auto* m = std::get_if<MixtureData>(&data_)) return *m->base;
  kind_mismatch("mixture_base()");
}

// -- free functions ---------------------------------------------------------------

Distribution make_parametric(const std::string& family, const std::vector<double>& params) {
  return Distribution::parametric(family_from_string(family), params);
}
Distribution make_atomic(std::vector<double> points, std::vector<double> log_masses) {
  return Distribution::atomic(std::move(points), std::move(log_masses));
}
Distribution make_grid(double dx, std::vector<double> log_tail) {
  return Distribution::grid(dx, std::move(log_tail));
}
double tail(const Distribution& f, double x) { return f.log_tail(x); }
ExtendedReal mean(const Distribution& f) { return f.mean(); }

Distribution shift_mixture(const Distribution& f) {
  if (!f.mean().is_finite())
    throw std::invalid_argument("shift_mixture: input must have a finite mean");
  if (f.kind() == Kind::Atomic) {
    // exact: atoms at x and x+1 with half the mass each, equal sums merged
    const auto& pts = f.points();
    const auto& lm = f.log_masses();
    std::vector<std::pair<double, double>> all;
    all.reserve(2 * pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
      all.emplace_back(pts[i], lm[i] - 0.6931471805599453);
      all.emplace_back(pts[i] + 1.0, lm[i] - 0.6931471805599453);
    }
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> mp, mm;
    for (const auto& [x, l] : all) {
      if (!mp.empty() && mp.back() == x)
        mm.back() = log_add_exp(mm.back(), l);
      else {
        mp.push_back(x);
        mm.push_back(l);
      }
    }
    return f.truncated()
               ? Distribution::atomic_truncated(std::move(mp), std::move(mm),
                                                f.log_neglected_mass())
               : Distribution::atomic(std::move(mp), std::move(mm));
  }
  return Distribution(Distribution::MixtureData{std::make_shared<const Distribution>(f)});
}

}  // namespace convtail
