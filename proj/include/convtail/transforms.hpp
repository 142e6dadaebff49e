#pragma once

// Laplace transforms phi(gamma) = ∫ e^{gamma x} F(dx), the abscissa of
// convergence gamma_hat, exponential tilting, the integrated-tail transform,
// and partial exponential moments over F.
//
// phi values are computed and reported in log space. Finiteness on truncated
// or grid-backed inputs is decided by a documented heuristic: if the per-atom
// (or per-cell) contributions e^{gamma x} F(dx) are non-decreasing over the
// last quarter of the support the transform is declared infinite; otherwise
// the unrepresented remainder is bounded by a fitted geometric majorant and
// carried alongside the value.

#include <cstddef>

#include "convtail/distribution.hpp"
#include "convtail/extended_real.hpp"

namespace convtail {

enum class EvalMethod { ClosedForm, Quadrature, AtomSum, StieltjesSum, NumericFit };

struct LaplaceEval {
  bool finite = false;
  double log_value = 0.0;      // log phi(gamma), when finite
  double log_remainder;        // log of a linear-space bound on the part the
                               // representation cannot see; -inf when exact
  EvalMethod method = EvalMethod::ClosedForm;
};

LaplaceEval laplace_eval(const Distribution& f, double gamma);

// Saturates: mathematically finite values beyond double range come back as
// the infinity marker. Use laplace_eval for log-space access.
ExtendedReal laplace(const Distribution& f, double gamma);

struct LaplaceSummary {
  ExtendedReal gamma_hat;
  ExtendedReal phi_at_gamma_hat;
  double log_phi = 0.0;  // log phi(gamma_hat) when finite
  EvalMethod method = EvalMethod::ClosedForm;
  // numeric_fit diagnostics (method == NumericFit only)
  double fit_lo = 0.0, fit_hi = 0.0;
  double fit_stderr = 0.0;
};

// Closed form for parametric families; least-squares tail-slope fit over the
// last decade of the support for atomic/grid kinds (never presented as exact).
LaplaceSummary gamma_hat(const Distribution& f);

struct TiltOptions {
  double range = 2000.0;          // grid range of a materialized tilt
  double dx = 0.01;
  std::size_t max_cells = 1u << 22;
};

// G(du) = e^{gamma u} F(du) / phi(gamma). Exact reweighting for atomic
// inputs, closed form for the exponential family, grid materialization
// otherwise. Throws std::domain_error when phi(gamma) is infinite.
// Negative gamma is permitted (always well defined on [0, inf)).
Distribution exp_tilt(const Distribution& f, double gamma, const TiltOptions& opts = {});

struct ItailOptions {
  double range = 2000.0;
  double dx = 0.25;
};

// Integrated tail distribution: density F̄(x)/a, realized as a grid whose
// log-tails are log(∫_x^∞ F̄ / a). Requires a finite mean.
Distribution integrated_tail(const Distribution& f, const ItailOptions& opts = {});

// ∫_(a,b] e^{eps x} F(dx) for 0 <= a <= b (half-open, excludes any atom at a).
double partial_exp_moment(const Distribution& f, double eps, double a, double b);

// E{e^{eps xi}; xi <= b} -- includes the atom at 0.
double exp_moment_upto(const Distribution& f, double eps, double b);

// ∫_(a,b] x e^{eps x} F(dx).
double partial_exp_x_moment(const Distribution& f, double eps, double a, double b);

}  // namespace convtail
