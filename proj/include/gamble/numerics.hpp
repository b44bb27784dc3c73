#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "gamble/errors.hpp"

namespace gamble::numerics {

/// Shape-preserving piecewise cubic interpolant (Fritsch-Carlson slopes).
///
/// Abscissae must be strictly increasing. When the ordinates are monotone
/// the interpolant is monotone in the same direction, which makes
/// inverse() well defined.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double derivative(double x) const;

  /// Solves interp(x) = y by bisection on the interpolant itself. Requires
  /// monotone ordinates; values outside the range are clamped to the ends.
  [[nodiscard]] double inverse(double y) const;

  [[nodiscard]] std::span<const double> xs() const { return x_; }
  [[nodiscard]] std::span<const double> ys() const { return y_; }
  [[nodiscard]] bool empty() const { return x_.empty(); }
  [[nodiscard]] double front_x() const { return x_.front(); }
  [[nodiscard]] double back_x() const { return x_.back(); }

 private:
  std::size_t cell(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
  bool increasing_ = true;
};

/// Globally adaptive Gauss-Kronrod (7/15 point rule from Boost). The
/// interval with the largest error estimate is split until the summed
/// estimate falls below max(abs_tol, rel_tol * |result|).
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-13,
                 double abs_tol = 0.0, std::size_t max_intervals = 4000) {
  if (!(b > a)) return 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  struct Piece {
    double lo, hi, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  auto rule = [&f](double lo, double hi) {
    double err = 0.0;
    const double v = GK::integrate(f, lo, hi, 0, 0.0, &err);
    // Boost reports the error of the rule on [-1, 1]
    return Piece{lo, hi, v, err * 0.5 * (hi - lo)};
  };
  std::vector<Piece> heap{rule(a, b)};
  double total = heap.front().value;
  double error = heap.front().error;
  while (heap.size() < max_intervals &&
         error > std::max(abs_tol, rel_tol * std::abs(total))) {
    std::pop_heap(heap.begin(), heap.end());
    const Piece worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    const Piece left = rule(worst.lo, mid);
    const Piece right = rule(mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
    if (error < 0.0) error = 0.0;
  }
  // re-sum to shed the rounding from the running updates
  double sum = 0.0;
  for (const auto& p : heap) sum += p.value;
  return sum;
}

/// Root of a function with a sign change on [lo, hi] (TOMS 748).
template <class F>
double find_root(F&& f, double lo, double hi, double x_tol = 1e-15,
                 std::uintmax_t max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw SolverError("find_root: no sign change on the bracket");
  }
  auto tol = [x_tol](double a, double b) {
    return std::abs(b - a) <= x_tol * std::max(1.0, std::abs(a));
  };
  auto res = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol,
                                               max_iter);
  return 0.5 * (res.first + res.second);
}

/// Plain bisection for a nondecreasing predicate target; returns x with
/// f(x) = target, at most max_iter halvings.
template <class F>
double bisect_increasing(F&& f, double target, double lo, double hi,
                         int max_iter = 64) {
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Ridders' extrapolation of central differences. `order` is 1 or 2.
/// Returns the derivative estimate and writes the error estimate.
template <class F>
double ridders_derivative(F&& f, double x, double h, int order,
                          double* error = nullptr) {
  constexpr int kTableau = 10;
  constexpr double kShrink = 1.4;
  constexpr double kShrink2 = kShrink * kShrink;
  double a[kTableau][kTableau];
  auto central = [&](double step) {
    if (order == 1) return (f(x + step) - f(x - step)) / (2.0 * step);
    return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
  };
  double best = central(h);
  double err = std::numeric_limits<double>::max();
  a[0][0] = best;
  for (int i = 1; i < kTableau; ++i) {
    h /= kShrink;
    a[0][i] = central(h);
    double fac = kShrink2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= kShrink2;
      const double errt = std::max(std::abs(a[j][i] - a[j - 1][i]),
                                   std::abs(a[j][i] - a[j - 1][i - 1]));
      if (errt <= err) {
        err = errt;
        best = a[j][i];
      }
    }
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * err) break;
  }
  if (error) *error = err;
  return best;
}

/// Evenly spaced points on [a, b], both ends included.
std::vector<double> linspace(double a, double b, std::size_t count);

}  // namespace gamble::numerics
