#pragma once

// Adaptive one-dimensional quadrature used by every evaluator in the
// library.  Gauss-Kronrod nodes come from Boost.Math; the adaptive
// drivers are global (largest-error-first) with absolute/relative
// tolerances, which Boost's recursive integrator does not offer.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fraccert::quad {

struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-10;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  bool converged = true;
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool roundoff = false;  // error estimate sits at the rounding floor
};

// One 21-point Gauss-Kronrod panel with the QUADPACK error heuristic.
template <class F>
Panel gk21(F& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  using G = boost::math::quadrature::gauss<double, 10>;
  const auto& xk = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  double fv[21];
  fv[0] = f(c);
  double k = fv[0] * wk[0];
  double g = 0.0;
  double resabs = std::abs(k);
  for (unsigned i = 1; i < xk.size(); ++i) {
    const double fp = f(c + h * xk[i]);
    const double fm = f(c - h * xk[i]);
    fv[2 * i - 1] = fp;
    fv[2 * i] = fm;
    k += (fp + fm) * wk[i];
    resabs += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i & 1u) g += (fp + fm) * wg[i / 2];
  }
  const double mean = 0.5 * k;
  double resasc = wk[0] * std::abs(fv[0] - mean);
  for (unsigned i = 1; i < xk.size(); ++i)
    resasc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));

  Panel p{a, b, k * h, std::abs((k - g) * h)};
  resasc *= std::abs(h);
  resabs *= std::abs(h);
  if (resasc != 0.0 && p.error != 0.0)
    p.error = resasc * std::min(1.0, std::pow(200.0 * p.error / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps) && 50.0 * eps * resabs >= p.error) {
    p.error = 50.0 * eps * resabs;
    p.roundoff = true;
  }
  if (!std::isfinite(p.value)) p.error = std::numeric_limits<double>::infinity();
  return p;
}

// Globally adaptive integration on a finite interval.
template <class F>
Result adaptive(F&& f, double a, double b, Tolerance tol = {}, int max_intervals = 4000) {
  Result r;
  if (a == b) return r;
  auto cmp = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);
  Panel first = gk21(f, a, b);
  r.evaluations = 21;
  heap.push(first);
  double value = first.value;
  double error = first.error;
  int count = 1;
  while (error > std::max(tol.abs, tol.rel * std::abs(value))) {
    if (count >= max_intervals || !std::isfinite(value)) {
      r.converged = false;
      break;
    }
    Panel worst = heap.top();
    if (worst.roundoff) break;  // bisection cannot improve on rounding
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      r.converged = false;
      break;
    }
    Panel left = gk21(f, worst.a, mid);
    Panel right = gk21(f, mid, worst.b);
    r.evaluations += 42;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to remove drift from incremental updates.
  value = 0.0;
  error = 0.0;
  std::vector<Panel> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const auto& p : all) {
    value += p.value;
    error += p.error;
  }
  r.value = value;
  r.error = error;
  return r;
}

// Adaptive integration over consecutive breakpoints; tolerances are shared
// evenly across pieces.
template <class F>
Result adaptive_pieces(F&& f, std::vector<double> cuts, Tolerance tol = {}, int max_intervals = 4000) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Result total;
  if (cuts.size() < 2) return total;
  const double n = static_cast<double>(cuts.size() - 1);
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    Result p = adaptive(f, cuts[i], cuts[i + 1], {tol.abs / n, tol.rel}, max_intervals);
    total.value += p.value;
    total.error += p.error;
    total.evaluations += p.evaluations;
    total.converged = total.converged && p.converged;
  }
  return total;
}

// Integral over [a, inf) by geometrically growing panels a + h0 (2^k - 1).
// Stops when the geometric extrapolation of the remaining panels is below
// tolerance, or adds that extrapolation when it has stabilised.
template <class F>
Result semi_infinite(F&& f, double a, double h0, Tolerance tol = {}, int max_panels = 400) {
  Result r;
  double lo = a;
  double width = h0;
  double prev = 0.0;
  double prev_tail = std::numeric_limits<double>::quiet_NaN();
  int small_run = 0;
  for (int k = 0; k < max_panels; ++k) {
    const double hi = lo + width;
    Result p = adaptive(f, lo, hi, {tol.abs * 1e-2, tol.rel * 1e-1});
    r.value += p.value;
    r.error += p.error;
    r.evaluations += p.evaluations;
    const double budget = std::max(tol.abs, tol.rel * std::abs(r.value));
    if (k >= 2 && prev != 0.0) {
      const double q = p.value / prev;
      if (q > 0.0 && q < 1.0) {
        const double tail = p.value * q / (1.0 - q);
        if (std::abs(tail) < 0.1 * budget) {
          r.error += std::abs(tail);
          return r;
        }
        if (k >= 6 && std::isfinite(prev_tail) && std::abs(tail - prev_tail) < 0.1 * budget &&
            std::abs(tail) < 1e3 * budget) {
          r.value += tail;
          r.error += std::abs(tail - prev_tail);
          return r;
        }
        prev_tail = tail;
      }
    }
    if (std::abs(p.value) < 1e-3 * budget)
      ++small_run;
    else
      small_run = 0;
    if (small_run >= 3) return r;
    prev = p.value;
    lo = hi;
    width *= 2.0;
    if (!std::isfinite(lo)) break;
  }
  r.converged = false;
  return r;
}

// Wynn epsilon extrapolation of a sequence of partial sums.  Returns the
// latest even-column estimate.
inline double wynn_epsilon(const std::vector<double>& s) {
  const size_t n = s.size();
  if (n < 3) return n ? s.back() : 0.0;
  double best = s.back();
  // e0 holds column k-1 of the epsilon table, em1 column k-2.
  std::vector<double> em1(n + 1, 0.0);
  std::vector<double> e0(s.begin(), s.end());
  for (size_t k = 1; k < n; ++k) {
    std::vector<double> e1(n - k);
    bool ok = true;
    for (size_t j = 0; j + k < n; ++j) {
      const double d = e0[j + 1] - e0[j];
      if (d == 0.0 || !std::isfinite(d)) {
        ok = false;
        break;
      }
      e1[j] = (k == 1 ? 0.0 : em1[j + 1]) + 1.0 / d;
    }
    if (!ok) break;
    if (k % 2 == 0 && std::isfinite(e1.back())) best = e1.back();
    em1 = e0;
    e0 = e1;
    if (e0.size() < 2) break;
  }
  return best;
}

// Integral of an oscillatory function over [a, inf) using panels of the
// given width (typically a half period) and Wynn acceleration of the panel
// partial sums.  When `negligible_after` is finite the integrand is assumed
// to vanish beyond it.
template <class F>
Result oscillatory(F&& f, double a, double width, Tolerance tol = {},
                   double negligible_after = std::numeric_limits<double>::infinity(),
                   int max_panels = 4000) {
  Result r;
  std::vector<double> partial;
  double sum = 0.0;
  double last_est = std::numeric_limits<double>::quiet_NaN();
  int stable = 0;
  int tiny = 0;
  for (int k = 0; k < max_panels; ++k) {
    const double lo = a + k * width;
    if (lo >= negligible_after) {
      r.value = sum;
      return r;
    }
    Result p = adaptive(f, lo, lo + width, {tol.abs * 1e-2, tol.rel * 1e-2});
    sum += p.value;
    r.error += p.error;
    r.evaluations += p.evaluations;
    partial.push_back(sum);
    if (partial.size() > 40) partial.erase(partial.begin());
    const double budget = std::max(tol.abs, tol.rel * std::abs(sum));
    if (std::abs(p.value) < 1e-3 * budget) {
      if (++tiny >= 3) {
        r.value = sum;
        return r;
      }
    } else {
      tiny = 0;
    }
    if (partial.size() >= 6) {
      const double est = wynn_epsilon(partial);
      if (std::isfinite(last_est) && std::abs(est - last_est) < 0.5 * budget) {
        if (++stable >= 2) {
          r.value = est;
          r.error += std::abs(est - last_est);
          return r;
        }
      } else {
        stable = 0;
      }
      last_est = est;
    }
  }
  r.value = std::isfinite(last_est) ? last_est : sum;
  r.converged = false;
  return r;
}

}  // namespace fraccert::quad
