// Test-side reference implementations, kept independent of src/special.cpp.
// Values frozen in the tests were produced by these oracles.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

// Plain ascending series for J_m; adequate for the small arguments where the
// zero-bracketing oracles operate.
inline double j_series(int m, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= m; ++i) term *= half / i;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -(half * half) / (static_cast<double>(k) * (m + k));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-30)) break;
  }
  return sum;
}

// J_m(x) = (1/pi) * integral_0^pi cos(m t - x sin t) dt, composite Simpson.
// A different route entirely from both the series and the recurrences.
inline double j_quadrature(int m, double x) {
  const double pi = 3.14159265358979323846;
  int n = 4000 + 1000 * static_cast<int>(std::ceil(x + m));
  if (n % 2 != 0) ++n;
  const double h = pi / n;
  auto f = [&](double t) { return std::cos(m * t - x * std::sin(t)); };
  double sum = f(0.0) + f(pi);
  for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(i * h);
  return sum * h / (3.0 * pi);
}

// Ascending series for Y_0 (A&S 9.1.13 rearranged with harmonic numbers).
inline double y0_series(double x) {
  const double pi = 3.14159265358979323846;
  const double gamma = 0.57721566490153286061;
  const double q = 0.25 * x * x;
  double sum = 0.0, term = 1.0, hk = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<double>(k) * k);
    hk += 1.0 / k;
    sum -= hk * term;
    if (std::abs(term) < 1e-18) break;
  }
  return (2.0 / pi) * ((std::log(0.5 * x) + gamma) * j_series(0, x) + sum);
}

// Bisection to ~1e-13; the bracket endpoints must straddle a sign change.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo), fhi = f(hi);
  if ((flo < 0.0) == (fhi < 0.0)) throw std::runtime_error("oracle::bisect: bad bracket");
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo < 0.0) != (fm < 0.0)) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
