#include "dtnflow/special.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace dtnflow::special {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEulerGamma = 0.57721566490153286061;

void check_args(int m, double x, bool require_positive) {
  if (m < 0 || m > kMaxOrder)
    throw std::domain_error("bessel: order " + std::to_string(m) + " outside [0, " +
                            std::to_string(kMaxOrder) + "]");
  if (!std::isfinite(x))
    throw std::domain_error("bessel: non-finite argument");
  if (x < 0.0 || (require_positive && x == 0.0))
    throw std::domain_error("bessel: argument " + std::to_string(x) + " out of domain");
  if (x > kMaxArgument)
    throw std::domain_error("bessel: argument " + std::to_string(x) + " exceeds cap " +
                            std::to_string(kMaxArgument));
}

bool series_safe(int m, double x) {
  // x <= 12: cancellation loss stays below ~4e-13 absolute even at order 0.
  // x^2/4 <= m+1: the terms decrease from the first one, no cancellation.
  return x <= 12.0 || x * x <= 4.0 * (m + 1.0);
}

double j_series(int m, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= m; ++i) term *= half / i;  // (x/2)^m / m!, may underflow
  if (term == 0.0) return 0.0;
  double sum = term;
  const double q = -half * half;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<double>(k) * (m + k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) + 1e-305) break;
  }
  return sum;
}

int miller_start_order(int m, double x) {
  // Enough extra orders that the contamination from the unwanted solution
  // decays below machine precision before order max(m, x) is reached.
  const int base = std::max(m, static_cast<int>(std::ceil(x)));
  const int delta = 26 + static_cast<int>(std::ceil(8.0 * std::cbrt(std::max(1.0, x))));
  return base + delta;
}

struct JPair {
  double jm;
  double jm1;  // J_{m+1}
};

JPair j_miller_pair(int m, double x) {
  const int start = miller_start_order(m, x);
  double jp = 0.0;       // J_{k+1}
  double jc = 1e-250;    // J_k (arbitrary seed, rescaled by normalization)
  double sum = 0.0;      // J_0 + 2 * sum of even orders >= 2
  double save_m = 0.0, save_m1 = (m + 1 >= start) ? jc : 0.0;
  for (int k = start; k >= 1; --k) {
    const double jn = (2.0 * k / x) * jc - jp;  // J_{k-1}
    jp = jc;
    jc = jn;
    const int order = k - 1;
    if (order == m) save_m = jc;
    if (order == m + 1) save_m1 = jc;
    if (order >= 2 && (order & 1) == 0) sum += 2.0 * jc;
    if (std::abs(jc) > 1e250) {
      jp *= 1e-250;
      jc *= 1e-250;
      sum *= 1e-250;
      save_m *= 1e-250;
      save_m1 *= 1e-250;
    }
  }
  sum += jc;  // + J_0
  const double scale = 1.0 / sum;
  return {save_m * scale, save_m1 * scale};
}

JPair j_pair(int m, double x) {
  if (x == 0.0) return {m == 0 ? 1.0 : 0.0, 0.0};
  if (series_safe(m + 1, x)) return {j_series(m, x), j_series(m + 1, x)};
  return j_miller_pair(m, x);
}

struct Y01 {
  double y0;
  double y1;
};

Y01 y01_series(double x) {
  const double j0 = bessel_j(0, x);
  const double j1 = bessel_j(1, x);
  const double lg = std::log(0.5 * x) + kEulerGamma;
  const double q = 0.25 * x * x;

  // Y0 = (2/pi) [ (ln(x/2)+gamma) J0 + sum_{k>=1} (-1)^{k+1} H_k q^k/(k!)^2 ]
  double sum0 = 0.0;
  double term = 1.0;  // (-1)^k q^k/(k!)^2, built incrementally
  double hk = 0.0;
  for (int k = 1; k < 300; ++k) {
    term *= -q / (static_cast<double>(k) * k);
    hk += 1.0 / k;
    const double add = -hk * term;
    sum0 += add;
    if (std::abs(add) < 1e-18 * (std::abs(sum0) + 1.0)) break;
  }
  const double y0 = (2.0 / kPi) * (lg * j0 + sum0);

  // Y1 = (2/pi) [ (ln(x/2)+gamma) J1 - 1/x
  //               - (x/4) sum_{k>=0} (-1)^k (H_k + H_{k+1}) q^k/(k!(k+1)!) ]
  double sum1 = 1.0;  // k = 0 term: (H_0 + H_1) * 1 = 1
  term = 1.0;
  hk = 0.0;
  double hk1 = 1.0;
  for (int k = 1; k < 300; ++k) {
    term *= -q / (static_cast<double>(k) * (k + 1));
    hk += 1.0 / k;
    hk1 += 1.0 / (k + 1);
    const double add = (hk + hk1) * term;
    sum1 += add;
    if (std::abs(add) < 1e-18 * (std::abs(sum1) + 1.0)) break;
  }
  const double y1 = (2.0 / kPi) * (lg * j1 - 1.0 / x - 0.25 * x * sum1);
  return {y0, y1};
}

// (J'_nu + i Y'_nu)/(J_nu + i Y_nu) by a complex continued fraction
// (Steed's CF2); converges for x above a few.
std::complex<double> cf2_hankel_ratio(double nu, double x) {
  using C = std::complex<double>;
  const C I(0.0, 1.0);
  const double fpmin = 1e-300;
  C f(fpmin, 0.0), c(fpmin, 0.0), d(0.0, 0.0);
  for (int k = 1; k <= 100000; ++k) {
    const double ak = (k - 0.5) * (k - 0.5) - nu * nu;
    const C bk = 2.0 * (x + static_cast<double>(k) * I);
    d = bk + ak * d;
    if (std::abs(d) < fpmin) d = C(fpmin, 0.0);
    c = bk + ak / c;
    if (std::abs(c) < fpmin) c = C(fpmin, 0.0);
    d = 1.0 / d;
    const C delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16)
      return -0.5 / x + I + (I / x) * f;
  }
  throw std::runtime_error("bessel: CF2 failed to converge at x = " + std::to_string(x));
}

// J'_0/J_0 by the real continued fraction (CF1), tracking the sign of J_0.
double cf1_logderiv0(double x, int* sign_j0) {
  const double fpmin = 1e-300;
  double f = fpmin, c = f, d = 0.0, b = 0.0;
  int isign = 1;
  for (int k = 1; k <= 200000; ++k) {
    b += 2.0 / x;
    d = b - d;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b - 1.0 / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (d < 0.0) isign = -isign;
    if (std::abs(delta - 1.0) < 1e-16) {
      *sign_j0 = isign;
      return f;
    }
  }
  throw std::runtime_error("bessel: CF1 failed to converge at x = " + std::to_string(x));
}

Y01 y01_steed(double x) {
  int sign_j0 = 1;
  const double f = cf1_logderiv0(x, &sign_j0);
  const auto pq = cf2_hankel_ratio(0.0, x);
  const double p = pq.real(), q = pq.imag();
  const double w = 2.0 / (kPi * x);
  const double gam = (p - f) / q;
  double j0 = std::sqrt(w / ((p - f) * gam + q));
  if (sign_j0 < 0) j0 = -j0;
  const double y0 = gam * j0;
  const double y0p = y0 * (p + q / gam);
  return {y0, -y0p};  // Y_1 = -Y'_0
}

Y01 y01(double x) { return x <= 12.0 ? y01_series(x) : y01_steed(x); }

struct YPair {
  double ym;
  double ym1;  // Y_{m+1}
};

YPair y_pair(int m, double x) {
  const Y01 base = y01(x);
  if (m == 0) return {base.y0, base.y1};
  double prev = base.y0, cur = base.y1;
  for (int k = 1; k < m; ++k) {
    const double next = (2.0 * k / x) * cur - prev;  // forward: stable for Y
    prev = cur;
    cur = next;
  }
  const double next = (2.0 * m / x) * cur - prev;
  return {cur, next};
}

struct Bracket {
  double lo;
  double hi;
};

// Bisect to width `width_tol`, then polish with up to 5 Newton steps.
double refine_zero(int m, Bracket b, double width_tol) {
  double flo = bessel_j(m, b.lo);
  if (flo == 0.0) return b.lo;
  while (b.hi - b.lo > width_tol) {
    const double mid = 0.5 * (b.lo + b.hi);
    const double fmid = bessel_j(m, mid);
    if (fmid == 0.0) return mid;
    if ((flo < 0.0) != (fmid < 0.0)) {
      b.hi = mid;
    } else {
      b.lo = mid;
      flo = fmid;
    }
  }
  double z = 0.5 * (b.lo + b.hi);
  for (int it = 0; it < 5; ++it) {
    double j, jp;
    bessel_j_pair(m, z, &j, &jp);
    if (jp == 0.0) break;
    const double step = j / jp;
    const double znext = z - step;
    if (znext <= b.lo - 1.0 || znext >= b.hi + 1.0) break;  // runaway guard
    z = znext;
    if (std::abs(step) < 1e-15 * z) break;
  }
  return z;
}

double mcmahon_seed_j0(int s) {
  const double beta = (s - 0.25) * kPi;
  return beta + 1.0 / (8.0 * beta) - 124.0 / (3.0 * std::pow(8.0 * beta, 3));
}

std::vector<double> zeros_row0(int count) {
  std::vector<double> row(count);
  for (int s = 1; s <= count; ++s) {
    const double seed = mcmahon_seed_j0(s);
    Bracket b{seed - 0.5, seed + 0.5};
    double flo = bessel_j(0, b.lo), fhi = bessel_j(0, b.hi);
    int widen = 0;
    while ((flo < 0.0) == (fhi < 0.0)) {
      b.lo -= 0.25;
      b.hi += 0.25;
      flo = bessel_j(0, b.lo);
      fhi = bessel_j(0, b.hi);
      if (++widen > 4)
        throw std::runtime_error("bessel_zeros: no bracket for (m=0, s=" + std::to_string(s) + ")");
    }
    row[s - 1] = refine_zero(0, b, 1e-8);
  }
  return row;
}

}  // namespace

double bessel_j(int m, double x) {
  check_args(m, x, false);
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  if (series_safe(m, x)) return j_series(m, x);
  return j_miller_pair(m, x).jm;
}

double bessel_y(int m, double x) {
  check_args(m, x, true);
  return y_pair(m, x).ym;
}

void bessel_j_pair(int m, double x, double* j, double* jp) {
  check_args(m, x, false);
  if (x == 0.0) {
    *j = (m == 0) ? 1.0 : 0.0;
    *jp = (m == 1) ? 0.5 : 0.0;
    return;
  }
  if (m == 0) {
    const JPair p = j_pair(0, x);
    *j = p.jm;
    *jp = -p.jm1;
    return;
  }
  const JPair p = j_pair(m - 1, x);  // (J_{m-1}, J_m)
  *j = p.jm1;
  *jp = p.jm - (m / x) * p.jm1;
}

double bessel_j_prime(int m, double x) {
  double j, jp;
  bessel_j_pair(m, x, &j, &jp);
  return jp;
}

void bessel_y_pair(int m, double x, double* y, double* yp) {
  check_args(m, x, true);
  if (m == 0) {
    const Y01 base = y01(x);
    *y = base.y0;
    *yp = -base.y1;
    return;
  }
  const YPair p = y_pair(m - 1, x);  // (Y_{m-1}, Y_m)
  *y = p.ym1;
  *yp = p.ym - (m / x) * p.ym1;
}

double bessel_y_prime(int m, double x) {
  double y, yp;
  bessel_y_pair(m, x, &y, &yp);
  return yp;
}

std::vector<double> bessel_zeros(int m, int count) {
  check_args(m, 1.0, false);
  if (count < 1) throw std::invalid_argument("bessel_zeros: count must be >= 1");

  // Row r needs count + (m - r) zeros so that row r+1 has brackets
  // (j_{r,s}, j_{r,s+1}) for all of its zeros.
  std::vector<double> row = zeros_row0(count + m);
  for (int r = 1; r <= m; ++r) {
    const int need = count + (m - r);
    std::vector<double> next(need);
    for (int s = 0; s < need; ++s)
      next[s] = refine_zero(r, Bracket{row[s], row[s + 1]}, 1e-8);
    row = std::move(next);
  }

  for (int s = 0; s < count; ++s) {
    if (std::abs(bessel_j(m, row[s])) > 1e-11)
      throw std::runtime_error("bessel_zeros: residual too large at (m=" + std::to_string(m) +
                               ", s=" + std::to_string(s + 1) + ")");
    if (s > 0 && row[s] <= row[s - 1])
      throw std::runtime_error("bessel_zeros: ordering failure at (m=" + std::to_string(m) +
                               ", s=" + std::to_string(s + 1) + ")");
  }
  return row;
}

double cross_product(int m, double ratio, double x) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::domain_error("cross_product: ratio must lie in (0,1)");
  const double inner = ratio * x;
  const double ji = bessel_j(m, inner), yi = bessel_y(m, inner);
  const double jo = bessel_j(m, x), yo = bessel_y(m, x);
  const double value = ji * yo - yi * jo;
  if (!std::isfinite(value))
    throw std::runtime_error("cross_product: overflow at (m=" + std::to_string(m) +
                             ", x=" + std::to_string(x) + ")");
  return value;
}

double cross_product_prime(int m, double ratio, double x) {
  const double inner = ratio * x;
  double ji, jip, yi, yip, jo, jop, yo, yop;
  bessel_j_pair(m, inner, &ji, &jip);
  bessel_y_pair(m, inner, &yi, &yip);
  bessel_j_pair(m, x, &jo, &jop);
  bessel_y_pair(m, x, &yo, &yop);
  return ratio * (jip * yo - yip * jo) + (ji * yop - yi * jop);
}

std::vector<double> cross_product_zeros(int m, double ratio, int count) {
  check_args(m, 1.0, false);
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::domain_error("cross_product_zeros: ratio must lie in (0,1)");
  if (count < 1) throw std::invalid_argument("cross_product_zeros: count must be >= 1");

  const double period = kPi / (1.0 - ratio);
  const double step = period / 32.0;
  // First zero exceeds the disk zero j_{m,1} > m (domain monotonicity), so the
  // scan can start just below that.
  double k = std::max(0.5, 0.95 * m + 1.0);
  double fk = cross_product(m, ratio, k);

  std::vector<double> zeros;
  zeros.reserve(count);
  const double k_cap = kMaxArgument;
  while (static_cast<int>(zeros.size()) < count) {
    const double k2 = k + step;
    if (k2 > k_cap)
      throw std::runtime_error("cross_product_zeros: scan exceeded argument cap at (m=" +
                               std::to_string(m) + ")");
    const double fk2 = cross_product(m, ratio, k2);
    if (fk == 0.0) {
      zeros.push_back(k);
    } else if ((fk < 0.0) != (fk2 < 0.0)) {
      double lo = k, hi = k2, flo = fk;
      while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = cross_product(m, ratio, mid);
        if (fmid == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((flo < 0.0) != (fmid < 0.0)) {
          hi = mid;
        } else {
          lo = mid;
          flo = fmid;
        }
      }
      double z = 0.5 * (lo + hi);
      for (int it = 0; it < 5; ++it) {
        const double g = cross_product(m, ratio, z);
        const double gp = cross_product_prime(m, ratio, z);
        if (gp == 0.0) break;
        const double stepn = g / gp;
        z -= stepn;
        if (std::abs(stepn) < 1e-15 * z) break;
      }
      zeros.push_back(z);
    }
    k = k2;
    fk = fk2;
  }
  return zeros;
}

}  // namespace dtnflow::special
