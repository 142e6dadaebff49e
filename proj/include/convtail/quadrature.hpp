#pragma once

// Scalar numeric utilities: adaptive Simpson quadrature and a monotone
// root bracketer/bisector. Integrands are plain double -> double callables;
// callers keep exponents stable themselves (evaluate exp(eps*x + log_tail)
// rather than exp(eps*x) * tail).

#include <cmath>
#include <stdexcept>
#include <utility>

namespace convtail {

struct QuadTol {
  double abs = 1e-14;
  double rel = 1e-12;
  int max_depth = 50;
};

namespace detail {

inline double simpson_step(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b, double fb, double m,
                            double fm, double whole, double eps, int depth, int max_depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_step(a, fa, m, fm, flm);
  const double right = simpson_step(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth >= max_depth || std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth + 1, max_depth) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth + 1, max_depth);
}

}  // namespace detail

template <class F>
double adaptive_simpson(const F& f, double a, double b, QuadTol tol = {}) {
  if (!(b > a)) return 0.0;
  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  const double whole = detail::simpson_step(a, fa, b, fb, fm);
  const double eps = std::max(tol.abs, tol.rel * std::abs(whole));
  return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, eps, 0, tol.max_depth);
}

// Solve g(x) = target for nondecreasing g on [lo, hi]. Requires
// g(lo) <= target <= g(hi); returns the bisection midpoint at tolerance
// rel_tol * max(|x|, 1).
template <class G>
double solve_monotone(const G& g, double target, double lo, double hi, double rel_tol = 1e-12,
                      int max_iter = 200) {
  double glo = g(lo), ghi = g(hi);
  if (glo > target || ghi < target)
    throw std::invalid_argument("solve_monotone: target not bracketed");
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= rel_tol * std::max(std::abs(mid), 1.0)) return mid;
    const double gm = g(mid);
    if (gm < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace convtail
