#ifndef ORDRANK_MINIMIZE_HPP
#define ORDRANK_MINIMIZE_HPP

#include <cmath>
#include <limits>
#include <utility>

namespace ordrank {

struct MinimizeOptions {
  double x_tolerance = 1e-10;
  int max_iterations = 200;
  int max_expansions = 64;
};

struct MinimizeResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes a convex function of one variable.
///
/// The initial interval [lo, hi] is widened (doubling its width on the offending
/// side) until the one-sided slopes at the ends point inward, then Brent's
/// golden-section search with parabolic interpolation runs on the bracket. The
/// iteration count reported includes the expansion steps.
template <typename F>
MinimizeResult minimize_convex(F&& f, double lo, double hi, const MinimizeOptions& opt = {}) {
  if (lo > hi) std::swap(lo, hi);
  int iterations = 0;
  const auto slope_at = [&](double x, double h) { return (f(x + h) - f(x)) / h; };
  for (int e = 0; e < opt.max_expansions; ++e) {
    const double width = hi - lo;
    const double h = std::max(1e-7, 1e-7 * width);
    bool moved = false;
    if (slope_at(lo, h) >= 0.0) {
      lo -= width;
      moved = true;
    }
    if (slope_at(hi - h, h) <= 0.0) {
      hi += width;
      moved = true;
    }
    ++iterations;
    if (!moved) break;
  }

  constexpr double golden = 0.3819660112501051;  // (3 - sqrt 5) / 2
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double a = lo;
  double b = hi;
  double x = a + golden * (b - a);
  double w = x;
  double v = x;
  double fx = f(x);
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;
  bool converged = false;

  for (int it = 0; it < opt.max_iterations; ++it) {
    ++iterations;
    const double m = 0.5 * (a + b);
    const double tol = opt.x_tolerance + 4.0 * eps * std::fabs(x);
    const double t2 = 2.0 * tol;
    if (std::fabs(x - m) <= t2 - 0.5 * (b - a)) {
      converged = true;
      break;
    }
    bool golden_step = true;
    if (std::fabs(e) > tol) {
      // Fit a parabola through (v, fv), (w, fw), (x, fx).
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      r = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * r) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < t2 || b - u < t2) d = x < m ? tol : -tol;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x < m ? b : a) - x;
      d = golden * e;
    }
    const double u = std::fabs(d) >= tol ? x + d : x + (d > 0.0 ? tol : -tol);
    const double fu = f(u);
    if (fu <= fx) {
      (u < x ? b : a) = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return {x, fx, iterations, converged};
}

}  // namespace ordrank

#endif  // ORDRANK_MINIMIZE_HPP
