#pragma once

// Finite-horizon analysis of convolution tail ratios: ratio curves with
// running minima, windowed lim-inf proxies with dyadic convergence flags,
// the tail-shift condition check, class membership tests (L, S, S*, S(gamma),
// lattice S(gamma)), and a consistency report that cross-checks everything
// the transforms and convolutions say about one distribution.
//
// Every verdict is tri-state. A hysteresis band keeps decisions stable:
// deviations within tol are "satisfied", beyond 2*tol "violated", and the
// band in between (or missing convergence evidence) is "inconclusive".

#include <string>
#include <utility>
#include <vector>

#include "convtail/convolve.hpp"
#include "convtail/distribution.hpp"
#include "convtail/transforms.hpp"

namespace convtail {

enum class CurveMode { SelfConv, Pair, Stopped };
enum class Status { Satisfied, Violated, Inconclusive };

std::string to_string(Status s);
std::string to_string(CurveMode m);

struct AnalysisOptions {
  double tol = 0.05;             // class verdict tolerance
  double window_fraction = 0.5;  // lim-inf proxy window [wf*horizon, horizon]
  int n_points = 256;
  ConvOptions conv{};
  SelfConvOptions conv_grid{};
};

struct RatioCurve {
  std::vector<double> xs;
  std::vector<double> log_tail_base;  // log F̄ (pair mode: log(F̄1 + F̄2))
  std::vector<double> log_tail_conv;
  std::vector<double> bracket;        // log-space bracket width of the numerator
  std::vector<double> ratio;          // linear space
  std::vector<double> running_min;
  double horizon = 0.0;
  CurveMode mode = CurveMode::SelfConv;
};

// Self-convolution ratio F*F̄(x)/F̄(x) on a geometric grid up to horizon.
// Atomic inputs are convolved exactly and evaluated at the midpoints between
// consecutive convolution support points (capturing step structure).
RatioCurve ratio_curve(const Distribution& f, double horizon, int n_points,
                       const AnalysisOptions& opts = {});

// Pair mode: F1*F2 tail over F̄1(x) + F̄2(x).
RatioCurve ratio_curve_pair(const Distribution& f1, const Distribution& f2, double horizon,
                            int n_points, const AnalysisOptions& opts = {});

// Stopped mode: tail of S_tau over F̄(x).
RatioCurve ratio_curve_stopped(const Distribution& f, const StoppingTimePmf& tau,
                               double horizon, int n_points, const AnalysisOptions& opts = {});

struct LiminfEstimate {
  double value = 0.0;     // min ratio over [window_fraction*horizon, horizon]
  double at_half = 0.0;   // same proxy at horizon/2
  bool converged = false; // the two differ by < 2%
};

LiminfEstimate liminf_estimate(const RatioCurve& curve, double window_fraction);

struct ClassVerdict {
  std::string class_tag;
  Status status = Status::Inconclusive;
  std::vector<std::pair<std::string, double>> diagnostics;
};

// Windowed proxy of liminf F̄(x-y)/F̄(x) >= e^{gamma y} for each y. For atomic
// inputs the evaluation points are enriched with atom-adjacent offsets so
// gap structure cannot hide violations.
ClassVerdict check_condition2(const Distribution& f, double gamma,
                              const std::vector<double>& ys, double horizon,
                              const AnalysisOptions& opts = {});

// F̄(x+y)/F̄(x) -> 1 for y in {1, 2}.
ClassVerdict is_long_tailed(const Distribution& f, double horizon,
                            const AnalysisOptions& opts = {});

ClassVerdict test_class_S(const Distribution& f, double horizon,
                          const AnalysisOptions& opts = {});
ClassVerdict test_class_S_star(const Distribution& f, double horizon,
                               const AnalysisOptions& opts = {});
ClassVerdict test_class_S_gamma(const Distribution& f, double gamma, double horizon,
                                const AnalysisOptions& opts = {});
// Definition on the integer lattice: mass ratios F{n+1}/F{n} -> e^{-gamma}
// and F*F{n}/F{n} -> 2 phi(gamma).
ClassVerdict test_class_S_lattice(const Distribution& f, double gamma,
                                  const AnalysisOptions& opts = {});
// Heavy-tail verdict from gamma_hat (closed form exact; numeric fits give a
// significance-style verdict and are inconclusive-prone by design).
ClassVerdict test_heavy(const Distribution& f);

// Dispatch by tag: heavy | L | S | S_star | S_gamma | S_lattice | condition2.
ClassVerdict test_class(const Distribution& f, const std::string& tag, double gamma,
                        double horizon, const AnalysisOptions& opts = {});

struct CheckResult {
  std::string name;
  bool applicable = false;
  Status status = Status::Inconclusive;
  std::string note;
  std::vector<std::pair<std::string, double>> data;
};

struct ConsistencyReport {
  LaplaceSummary summary;
  bool heavy = false;  // asserted only for closed-form gamma_hat = 0
  RatioCurve curve;
  LiminfEstimate proxy;
  ClassVerdict cond2;
  std::vector<CheckResult> checks;
  bool contradiction = false;  // an applicable check came back violated
  // echoed configuration
  double horizon = 0.0;
  double tol = 0.0;
  double window_fraction = 0.0;
  int n_points = 0;
};

// Runs gamma_hat, the self-convolution ratio curve, the lim-inf proxy and the
// tail-shift condition, then asserts every implication that applies:
// heavy tails force the lim-inf proxy to 2; a satisfied shift condition with
// finite phi(gamma_hat) forces it to 2 phi(gamma_hat) (divergence when phi is
// infinite); a convergent ratio forces c = 2 phi(gamma_hat). Numeric-fit
// gamma_hat downgrades exact checks to inconclusive.
ConsistencyReport theorem_consistency(const Distribution& f, double horizon,
                                      const AnalysisOptions& opts = {});

}  // namespace convtail
