#include "gamble/numerics.hpp"

namespace gamble::numerics {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw ValidationError("MonotoneCubic needs at least two (x, y) pairs");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw ValidationError("MonotoneCubic abscissae must be increasing");
    }
  }
  increasing_ = y_.back() >= y_.front();

  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  }
  slope_.assign(n, 0.0);
  slope_[0] = delta[0];
  slope_[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      slope_[i] = 0.0;
    } else {
      // weighted harmonic mean (Fritsch-Butland), keeps the cell monotone
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      const double w0 = 2.0 * h1 + h0;
      const double w1 = h1 + 2.0 * h0;
      slope_[i] = (w0 + w1) / (w0 / delta[i - 1] + w1 / delta[i]);
    }
  }
  // one-sided end slopes limited to three times the secant
  for (std::size_t e : {std::size_t{0}, n - 1}) {
    const double d = e == 0 ? delta[0] : delta[n - 2];
    if (slope_[e] * d <= 0.0) slope_[e] = 0.0;
    if (std::abs(slope_[e]) > 3.0 * std::abs(d)) slope_[e] = 3.0 * d;
  }
}

std::size_t MonotoneCubic::cell(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  if (it == x_.begin()) return 0;
  std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const std::size_t i = cell(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y_[i] + (s3 - 2 * s2 + s) * h * slope_[i] +
         (-2 * s3 + 3 * s2) * y_[i + 1] + (s3 - s2) * h * slope_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
  if (x < x_.front() || x > x_.back()) return 0.0;
  const std::size_t i = cell(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * y_[i] + (-6 * s2 + 6 * s) * y_[i + 1]) / h +
         (3 * s2 - 4 * s + 1) * slope_[i] + (3 * s2 - 2 * s) * slope_[i + 1];
}

double MonotoneCubic::inverse(double y) const {
  const double sign = increasing_ ? 1.0 : -1.0;
  const double target = sign * y;
  if (target <= sign * y_.front()) return x_.front();
  if (target >= sign * y_.back()) return x_.back();
  // locate the cell on the ordinates, then bisect inside it
  std::size_t lo = 0;
  std::size_t hi = y_.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (sign * y_[mid] < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return bisect_increasing([&](double x) { return sign * (*this)(x); },
                           target, x_[lo], x_[hi], 80);
}

std::vector<double> linspace(double a, double b, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = a + (b - a) * static_cast<double>(i) /
                     static_cast<double>(count - 1);
  }
  out.back() = b;
  return out;
}

}  // namespace gamble::numerics
