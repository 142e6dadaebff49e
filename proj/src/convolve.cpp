#include "convtail/convolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "convtail/errors.hpp"

namespace convtail {

namespace {

double err_of(const Distribution& d) {
  return d.kind() == Kind::Grid ? d.grid_err_bound() : 0.0;
}

// Exact path: integrate over the atomic side's atoms.
LogBracket conv_tail_atomic_side(const Distribution& atom_side, const Distribution& other,
                                 double x) {
  const auto& pts = atom_side.points();
  const auto& lm = atom_side.log_masses();
  LogSumAccumulator acc;
  acc.add(atom_side.log_tail(x));
  for (size_t i = 0; i < pts.size() && pts[i] <= x; ++i)
    acc.add(lm[i] + other.log_tail(x - pts[i]));
  const double v = acc.log_total();
  return {v, v, v};
}

}  // namespace

LogBracket conv_tail_at(const Distribution& f, const Distribution& g, double x,
                        const ConvOptions& opts) {
  if (!(x >= 0.0)) throw std::domain_error("conv_tail_at: x must be >= 0");
  if (f.kind() == Kind::Atomic) return conv_tail_atomic_side(f, g, x);
  if (g.kind() == Kind::Atomic) return conv_tail_atomic_side(g, f, x);

  if (x == 0.0) {
    // F*G(0, inf) = 1 - F{0}G{0}
    LogSumAccumulator acc;
    acc.add(f.log_tail(0.0));
    const double f0 = f.log_mass_at_zero();
    if (f0 > kNegInf) acc.add(f0 + g.log_tail(0.0));
    const double v = acc.log_total();
    return {v, v, v};
  }

  std::size_t m = static_cast<std::size_t>(std::ceil(1.0 / opts.step_scale * x / (1.0 + x)));
  m = std::max<std::size_t>(m, 8);
  const double logf0 = f.log_mass_at_zero();
  std::vector<double> tf, tg;
  for (int pass = 0;; ++pass) {
    const double dy = x / static_cast<double>(m);
    tf.assign(m + 1, 0.0);
    tg.assign(m + 1, 0.0);
    for (std::size_t j = 0; j <= m; ++j) {
      const double y = (j == m) ? x : dy * static_cast<double>(j);
      tf[j] = f.log_tail(y);
      tg[j] = g.log_tail(x - y);
    }
    LogSumAccumulator lo, hi, est;
    lo.add(tf[m]);
    hi.add(tf[m]);
    est.add(tf[m]);
    if (logf0 > kNegInf) {
      lo.add(logf0 + tg[0]);
      hi.add(logf0 + tg[0]);
      est.add(logf0 + tg[0]);
    }
    for (std::size_t j = 0; j < m; ++j) {
      const double logm = log_sub_exp(tf[j], tf[j + 1]);
      if (logm == kNegInf) continue;
      lo.add(logm + tg[j]);
      hi.add(logm + tg[j + 1]);
      est.add(logm + 0.5 * (tg[j] + tg[j + 1]));
    }
    LogBracket b{lo.log_total(), hi.log_total(), est.log_total()};
    if (b.width() <= opts.tol) return b;
    if (pass >= opts.max_refine || 2 * m > (1u << 23))
      throw ToleranceError("conv_tail_at: bracket width " + std::to_string(b.width()) +
                           " above tol " + std::to_string(opts.tol) + " after " +
                           std::to_string(pass) + " refinements at x = " + std::to_string(x));
    m *= 2;
  }
}

Distribution conv_atomic(const Distribution& f, const Distribution& g,
                         const ConvOptions& opts) {
  if (f.kind() != Kind::Atomic || g.kind() != Kind::Atomic)
    throw std::invalid_argument("conv_atomic: both inputs must be atomic");
  const auto& pf = f.points();
  const auto& pg = g.points();
  const double pairs = static_cast<double>(pf.size()) * static_cast<double>(pg.size());
  if (pairs > opts.pair_budget)
    throw BudgetError("conv_atomic: atom-pair product " + std::to_string(pairs) +
                      " exceeds budget " + std::to_string(opts.pair_budget));

  std::vector<std::pair<double, double>> sums;
  sums.reserve(pf.size() * pg.size());
  for (size_t i = 0; i < pf.size(); ++i)
    for (size_t j = 0; j < pg.size(); ++j)
      sums.emplace_back(pf[i] + pg[j], f.log_masses()[i] + g.log_masses()[j]);
  std::stable_sort(sums.begin(), sums.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<double> pts, lm;
  for (const auto& [xsum, l] : sums) {
    // merge exactly-equal floating-point sums only
    if (!pts.empty() && pts.back() == xsum)
      lm.back() = log_add_exp(lm.back(), l);
    else {
      pts.push_back(xsum);
      lm.push_back(l);
    }
  }
  const double neg = log_add_exp(f.log_neglected_mass(), g.log_neglected_mass());
  return neg > kNegInf ? Distribution::atomic_truncated(std::move(pts), std::move(lm), neg)
                       : Distribution::atomic(std::move(pts), std::move(lm));
}

// -- lattice materialization -----------------------------------------------------

namespace {

struct Lattice {
  double d = 0.0;
  std::vector<double> tails;  // log tails at k*d, k = 0..K
};

struct LatticeBase {
  double log_atom0 = kNegInf;
  std::vector<double> log_incr;  // log of cell masses
};

LatticeBase prepare_base(const std::vector<double>& t) {
  LatticeBase b;
  b.log_atom0 = log1m_exp(t[0]);
  const size_t K = t.size() - 1;
  b.log_incr.resize(K);
  for (size_t j = 0; j < K; ++j) b.log_incr[j] = log_sub_exp(t[j], t[j + 1]);
  return b;
}

// One convolution step C = A * B on a shared lattice, integrating over B's
// increments. Returns tails of C; *err accumulates a per-step heuristic
// bound on the geometric-mean rule error (second order in the largest
// straddled tail drop of A).
std::vector<double> conv_lattice(const std::vector<double>& ta, const std::vector<double>& tb,
                                 const LatticeBase& b, double* err) {
  const size_t K = ta.size() - 1;
  std::vector<double> out(K + 1);
  for (size_t k = 0; k <= K; ++k) {
    LogSumAccumulator est;
    est.add(tb[k]);
    if (b.log_atom0 > kNegInf) est.add(b.log_atom0 + ta[k]);
    for (size_t j = 0; j < k; ++j) {
      const double lm = b.log_incr[j];
      if (lm == kNegInf) continue;
      est.add(lm + 0.5 * (ta[k - j] + ta[k - j - 1]));
    }
    out[k] = std::min(est.log_total(), 0.0);
    if (k > 0) out[k] = std::min(out[k], out[k - 1]);
  }
  double drop = 0.0;
  for (size_t i = 1; i <= K; ++i) drop = std::max(drop, ta[i - 1] - ta[i]);
  *err += drop * drop / 8.0;
  return out;
}

Lattice make_lattice(const Distribution& f, double range, std::size_t points) {
  Lattice l;
  l.d = range / static_cast<double>(points);
  l.tails.resize(points + 1);
  for (size_t k = 0; k <= points; ++k) l.tails[k] = f.log_tail(k * l.d);
  return l;
}

std::vector<double> lattice_power(const Lattice& base, long n, double* err) {
  const LatticeBase prep = prepare_base(base.tails);
  if (n == 1) return base.tails;
  if (n <= 16) {
    std::vector<double> t = base.tails;
    for (long i = 1; i < n; ++i) t = conv_lattice(t, base.tails, prep, err);
    return t;
  }
  // binary exponentiation; squares integrate over the running power itself
  std::vector<double> result;
  std::vector<double> p = base.tails;
  LatticeBase prep_p = prep;
  long bits = n;
  while (bits > 0) {
    if (bits & 1) {
      if (result.empty())
        result = p;
      else
        result = conv_lattice(result, p, prep_p, err);
    }
    bits >>= 1;
    if (bits > 0) {
      p = conv_lattice(p, p, prep_p, err);
      prep_p = prepare_base(p);
    }
  }
  return result;
}

double resolve_range(const Distribution& f, const SelfConvOptions& opts) {
  double range = opts.range;
  if (range <= 0.0) {
    if (f.max_x() == kInf)
      throw std::invalid_argument("self_conv: a positive range is required for unbounded kinds");
    range = f.max_x();
  }
  return std::min(range, f.max_x());
}

Distribution finish_grid(std::vector<double> coarse, const std::vector<double>& fine,
                         double d, bool richardson, double err) {
  if (richardson) {
    for (size_t k = 0; k < coarse.size(); ++k)
      coarse[k] = (4.0 * fine[2 * k] - coarse[k]) / 3.0;
  }
  coarse[0] = std::min(coarse[0], 0.0);
  for (size_t k = 1; k < coarse.size(); ++k) coarse[k] = std::min(coarse[k], coarse[k - 1]);
  return Distribution::grid(d, std::move(coarse), err);
}

}  // namespace

Distribution self_conv_n(const Distribution& f, long n, const SelfConvOptions& opts) {
  if (n < 1) throw std::invalid_argument("self_conv_n: n must be >= 1");
  if (n > opts.max_n)
    throw BudgetError("self_conv_n: n = " + std::to_string(n) + " exceeds budget " +
                      std::to_string(opts.max_n));
  if (n == 1) return f;

  if (f.kind() == Kind::Atomic) {
    ConvOptions c;
    c.pair_budget = opts.pair_budget;
    Distribution acc = f;
    for (long i = 1; i < n; ++i) acc = conv_atomic(acc, f, c);
    return acc;
  }

  const double range = resolve_range(f, opts);
  const Lattice coarse = make_lattice(f, range, opts.points);
  double err = err_of(f) * static_cast<double>(n);
  std::vector<double> tc = lattice_power(coarse, n, &err);
  if (!opts.richardson) return finish_grid(std::move(tc), {}, coarse.d, false, err);

  const Lattice fine = make_lattice(f, range, 2 * opts.points);
  double err_fine = err_of(f) * static_cast<double>(n);
  std::vector<double> tf = lattice_power(fine, n, &err_fine);
  return finish_grid(std::move(tc), tf, coarse.d, true, err_fine);
}

// -- stopping times ----------------------------------------------------------------

StoppingTimePmf StoppingTimePmf::deterministic(long n) {
  if (n < 1) throw std::invalid_argument("StoppingTimePmf: n must be >= 1");
  StoppingTimePmf t;
  t.log_pmf_.assign(static_cast<size_t>(n), kNegInf);
  t.log_pmf_.back() = 0.0;
  t.mean_ = static_cast<double>(n);
  return t;
}

StoppingTimePmf StoppingTimePmf::geometric(double q, double tail_tol) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("StoppingTimePmf: q must be in (0,1)");
  const long n_max = static_cast<long>(std::ceil(std::log(tail_tol) / std::log(q)));
  StoppingTimePmf t;
  t.log_pmf_.resize(static_cast<size_t>(std::max(n_max, 2L)));
  const double l1q = std::log1p(-q), lq = std::log(q);
  for (size_t i = 0; i < t.log_pmf_.size(); ++i)
    t.log_pmf_[i] = l1q + lq * static_cast<double>(i);
  t.log_neglected_ = lq * static_cast<double>(t.log_pmf_.size());  // P(tau > N) = q^N
  t.mean_ = 1.0 / (1.0 - q);
  t.light_tail_margin_ = -0.5 * lq;
  return t;
}

StoppingTimePmf StoppingTimePmf::from_log_pmf(std::vector<double> log_pmf_from_1,
                                              double log_neglected,
                                              std::optional<double> light_tail_margin) {
  if (log_pmf_from_1.empty()) throw std::invalid_argument("StoppingTimePmf: empty pmf");
  const double total = log_add_exp(log_sum_exp(log_pmf_from_1), log_neglected);
  if (std::abs(total) > 1e-12)
    throw std::invalid_argument("StoppingTimePmf: pmf plus declared truncation must sum to 1");
  StoppingTimePmf t;
  t.log_pmf_ = std::move(log_pmf_from_1);
  t.log_neglected_ = log_neglected;
  double m = 0.0;
  for (size_t i = 0; i < t.log_pmf_.size(); ++i)
    m += static_cast<double>(i + 1) * std::exp(t.log_pmf_[i]);
  t.mean_ = m;
  t.light_tail_margin_ = light_tail_margin;
  return t;
}

Distribution stopped_sum(const Distribution& f, const StoppingTimePmf& tau,
                         const SelfConvOptions& opts) {
  // degenerate pmf: plain n-fold convolution
  size_t support = 0, last = 0;
  for (size_t n = 1; n <= tau.max_n(); ++n)
    if (tau.log_pmf(n) > kNegInf) {
      ++support;
      last = n;
    }
  if (support == 1 && tau.log_neglected() == kNegInf)
    return self_conv_n(f, static_cast<long>(last), opts);

  if (static_cast<long>(tau.max_n()) > opts.max_n)
    throw BudgetError("stopped_sum: pmf support " + std::to_string(tau.max_n()) +
                      " exceeds budget " + std::to_string(opts.max_n));

  if (f.kind() == Kind::Atomic) {
    ConvOptions c;
    c.pair_budget = opts.pair_budget;
    std::vector<std::pair<double, double>> mix;  // (point, log weighted mass)
    Distribution power = f;
    for (size_t n = 1; n <= tau.max_n(); ++n) {
      if (n > 1) power = conv_atomic(power, f, c);
      const double w = tau.log_pmf(n);
      if (w == kNegInf) continue;
      for (size_t i = 0; i < power.points().size(); ++i)
        mix.emplace_back(power.points()[i], power.log_masses()[i] + w);
    }
    std::stable_sort(mix.begin(), mix.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> pts, lm;
    for (const auto& [x, l] : mix) {
      if (!pts.empty() && pts.back() == x)
        lm.back() = log_add_exp(lm.back(), l);
      else {
        pts.push_back(x);
        lm.push_back(l);
      }
    }
    // condition on tau <= N: the mixture weights sum to 1 minus the declared
    // pmf truncation, which moves into the result's truncation bound
    const double lse = log_sum_exp(lm);
    for (double& l : lm) l -= lse;
    const double neg = log_add_exp(tau.log_neglected(), f.log_neglected_mass());
    return neg > kNegInf
               ? Distribution::atomic_truncated(std::move(pts), std::move(lm), neg)
               : Distribution::atomic(std::move(pts), std::move(lm));
  }

  const double range = resolve_range(f, opts);
  auto run = [&](std::size_t points, double* err) {
    const Lattice base = make_lattice(f, range, points);
    const LatticeBase prep = prepare_base(base.tails);
    std::vector<double> power = base.tails;
    std::vector<LogSumAccumulator> mix(points + 1);
    for (size_t n = 1; n <= tau.max_n(); ++n) {
      if (n > 1) power = conv_lattice(power, base.tails, prep, err);
      const double w = tau.log_pmf(n);
      if (w == kNegInf) continue;
      for (size_t k = 0; k <= points; ++k) mix[k].add(w + power[k]);
    }
    std::vector<double> out(points + 1);
    for (size_t k = 0; k <= points; ++k) out[k] = mix[k].log_total();
    return out;
  };

  double err = err_of(f) * static_cast<double>(tau.max_n());
  std::vector<double> tc = run(opts.points, &err);
  std::vector<double> tf;
  double err_fine = err;
  if (opts.richardson) {
    err_fine = err_of(f) * static_cast<double>(tau.max_n());
    tf = run(2 * opts.points, &err_fine);
  }
  // worst-case relative effect of the neglected pmf mass shows up at the far end
  if (tau.log_neglected() > kNegInf) {
    const double far = opts.richardson ? tf.back() : tc.back();
    err_fine += std::exp(tau.log_neglected() - far);
  }
  return finish_grid(std::move(tc), tf, range / static_cast<double>(opts.points),
                     opts.richardson, err_fine);
}

// -- tail product integral -----------------------------------------------------------

LogBracket tail_product_integral(const Distribution& f, double x, const ConvOptions& opts) {
  if (!(x >= 0.0)) throw std::domain_error("tail_product_integral: x must be >= 0");
  if (x == 0.0) return {kNegInf, kNegInf, kNegInf};

  if (f.kind() == Kind::Atomic) {
    // the integrand F̄(y) F̄(x-y) is piecewise constant; integrate exactly
    std::vector<double> cuts{0.0, 0.5 * x};
    for (double p : f.points()) {
      if (p < 0.5 * x) cuts.push_back(p);
      const double q = x - p;
      if (q > 0.0 && q < 0.5 * x) cuts.push_back(q);
    }
    std::sort(cuts.begin(), cuts.end());
    LogSumAccumulator acc;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], b = cuts[i + 1];
      if (!(b > a)) continue;
      const double mid = 0.5 * (a + b);
      acc.add(f.log_tail(mid) + f.log_tail(x - mid) + std::log(b - a));
    }
    const double v = acc.log_total() + 0.6931471805599453;  // symmetric half doubled
    return {v, v, v};
  }

  std::size_t m = static_cast<std::size_t>(std::ceil(0.5 / opts.step_scale * x / (1.0 + x)));
  m = std::max<std::size_t>(m, 8);
  for (int pass = 0;; ++pass) {
    const double half = 0.5 * x;
    const double dy = half / static_cast<double>(m);
    std::vector<double> ty(m + 1), tx(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
      const double y = (j == m) ? half : dy * static_cast<double>(j);
      ty[j] = f.log_tail(y);
      tx[j] = f.log_tail(x - y);
    }
    LogSumAccumulator lo, hi, est;
    const double logw = std::log(dy);
    for (std::size_t j = 0; j < m; ++j) {
      lo.add(ty[j + 1] + tx[j] + logw);
      hi.add(ty[j] + tx[j + 1] + logw);
      est.add(0.5 * (ty[j] + ty[j + 1] + tx[j] + tx[j + 1]) + logw);
    }
    const double two = 0.6931471805599453;
    LogBracket b{lo.log_total() + two, hi.log_total() + two, est.log_total() + two};
    if (b.width() <= opts.tol) return b;
    if (pass >= opts.max_refine)
      throw ToleranceError("tail_product_integral: bracket width " +
                           std::to_string(b.width()) + " above tol " +
                           std::to_string(opts.tol) + " at x = " + std::to_string(x));
    m *= 2;
  }
}

}  // namespace convtail
