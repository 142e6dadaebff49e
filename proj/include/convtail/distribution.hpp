#pragma once

// Canonical representation of probability distributions on [0, inf) with
// (typically) unbounded support. Three user-facing kinds:
//
//   parametric — closed-form log-tail for a small family set,
//   atomic     — support points plus log-masses (counting measure),
//   grid       — uniform grid of log-tails, log-linear in between
//                (equivalently: piecewise-exponential density).
//
// A fourth internal kind (mixture) represents the half-shift mixture
// Ḡ(x) = (F̄(x-1) + F̄(x))/2 exactly instead of forcing it onto a grid.
//
// Values are immutable after construction and cheap to copy; the mean is
// computed once on demand behind a shared cache. All tails are stored and
// combined in log space.

#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "convtail/extended_real.hpp"

namespace convtail {

enum class Family { Pareto, Exponential, WeibullSquare, SlowVaryExp, Weibull };
enum class Kind { Parametric, Atomic, Grid, Mixture };

Family family_from_string(const std::string& name);
std::string family_name(Family f);

class Distribution {
 public:
  // -- named constructors ---------------------------------------------------
  static Distribution parametric(Family family, std::vector<double> params);
  static Distribution atomic(std::vector<double> points, std::vector<double> log_masses);
  // Atomic with a declared truncation: log_neglected bounds the log of the
  // total mass the finite atom list leaves out of the ideal object.
  static Distribution atomic_truncated(std::vector<double> points,
                                       std::vector<double> log_masses, double log_neglected);
  static Distribution grid(double dx, std::vector<double> log_tail, double err_bound = 0.0);
  // Sparse atomic families at x_n = 3^n that separate the lim-inf constant
  // from 2*phi(gamma_hat):
  //   variant 1: p_n ∝ exp(-gamma_hat*3^n) * 3^-n
  //   variant 2: p_n ∝ exp(-gamma_hat*3^n)
  //   variant 3: p_n ∝ exp(-(3^n)^2)          (gamma_hat ignored)
  static Distribution counterexample(int variant, double gamma_hat, int n_atoms);

  // -- queries ---------------------------------------------------------------
  Kind kind() const;

  // log F̄(x) = log P(xi > x). Exact for parametric/atomic; log-linear
  // interpolation for grid. Throws for x < 0 and, for grid-backed kinds,
  // for x beyond the grid (never extrapolates).
  double log_tail(double x) const;

  // Largest x at which log_tail may be evaluated (+inf unless grid-backed).
  double max_x() const;

  // Mean a = ∫ F̄. Closed form where available, else quadrature with a
  // remainder bound; returns infinity when finiteness cannot be certified.
  ExtendedReal mean() const;
  double mean_error_bound() const;  // 0 for closed forms

  bool lattice() const;
  double lattice_span() const;  // 0 when not a lattice
  bool truncated() const;
  double log_neglected_mass() const;  // -inf when the representation is complete

  // log of the mass at 0 (-inf if none). Parametric families place an atom
  // at 0 only for weibull_sq with c1 < 1.
  double log_mass_at_zero() const;

  // -- payload access (throws std::logic_error on kind mismatch) -------------
  Family family() const;
  const std::vector<double>& params() const;
  const std::vector<double>& points() const;
  const std::vector<double>& log_masses() const;
  double grid_dx() const;
  const std::vector<double>& grid_log_tail() const;
  double grid_err_bound() const;
  const Distribution& mixture_base() const;

 private:
  friend Distribution shift_mixture(const Distribution&);

  struct ParametricData {
    Family family;
    std::vector<double> params;
  };
  struct AtomicData {
    std::vector<double> points;
    std::vector<double> log_masses;
    std::vector<double> log_suffix;  // log_suffix[i] = log sum of masses at points[i..]
    bool truncated = false;
    double log_neglected;
    bool lattice = false;
    double lattice_span = 0.0;
  };
  struct GridData {
    double dx;
    std::vector<double> log_tail;
    double err_bound = 0.0;  // accumulated |log| error bound carried by conv results
  };
  struct MixtureData {
    std::shared_ptr<const Distribution> base;
  };

  struct MeanCache {
    std::once_flag once;
    ExtendedReal value;
    double err = 0.0;
  };

  template <class Data>
  explicit Distribution(Data&& d)
      : data_(std::forward<Data>(d)), mean_cache_(std::make_shared<MeanCache>()) {}

  std::variant<ParametricData, AtomicData, GridData, MixtureData> data_;
  std::shared_ptr<MeanCache> mean_cache_;
};

// -- spec-level operation names ----------------------------------------------
Distribution make_parametric(const std::string& family, const std::vector<double>& params);
Distribution make_atomic(std::vector<double> points, std::vector<double> log_masses);
Distribution make_grid(double dx, std::vector<double> log_tail);

// log F̄(x); see Distribution::log_tail.
double tail(const Distribution& f, double x);
ExtendedReal mean(const Distribution& f);

// Ḡ(x) = (F̄(x-1) + F̄(x))/2, with F̄(x-1) = 1 for x < 1. Requires a finite
// mean; the result's mean is mean(f) + 1/2.
Distribution shift_mixture(const Distribution& f);

}  // namespace convtail
