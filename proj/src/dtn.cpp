#include "dtnflow/dtn.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "dtnflow/special.hpp"

namespace dtnflow {

namespace {

// Below this value of k*R the Bessel ratio is replaced by its harmonic-limit
// expansion; keeps very high orders away from underflow territory.
constexpr double kTinyArgument = 1e-3;

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("dtn: lambda must be finite and non-negative");
}

double ratio_pow(double base, int exponent) { return std::pow(base, exponent); }

// Harmonic (lambda -> 0) value of fa_mode with an obstacle.
double fa_harmonic_obstacle(int m, const Media& media, const RadialDomain& domain) {
  if (m == 0) return media.a / (domain.R * std::log(domain.R / domain.r0));
  const double rho2m = ratio_pow(domain.r0 / domain.R, 2 * m);
  return media.a * (m / domain.R) * (1.0 + rho2m) / (1.0 - rho2m);
}

DtnValue ratio_value(double k, double w, double wp, double prefactor, double pole_tol) {
  const double scale = std::hypot(w, wp);
  if (std::abs(w) < pole_tol * scale) return {0.0, true};
  return {prefactor * k * wp / w, false};
}

}  // namespace

DtnValue f_mode(int m, double lambda, const RadialDomain& domain, double pole_tol) {
  check_lambda(lambda);
  const double k = std::sqrt(lambda);
  const double t = k * domain.R;
  if (t < kTinyArgument)
    return {m / domain.R - lambda * domain.R / (2.0 * (m + 1.0)), false};
  double j, jp;
  special::bessel_j_pair(m, t, &j, &jp);
  return ratio_value(k, j, jp, 1.0, pole_tol);
}

DtnValue fa_mode(int m, double lambda, const Media& media, const RadialDomain& domain,
                 double pole_tol) {
  check_lambda(lambda);
  const double ka = std::sqrt(lambda * media.n / media.a);
  const double ta = ka * domain.R;

  if (!domain.has_obstacle()) {
    if (ta < kTinyArgument)
      return {media.a * m / domain.R - media.n * lambda * domain.R / (2.0 * (m + 1.0)), false};
    double j, jp;
    special::bessel_j_pair(m, ta, &j, &jp);
    return ratio_value(ka, j, jp, media.a, pole_tol);
  }

  if (ta < kTinyArgument) return {fa_harmonic_obstacle(m, media, domain), false};

  const double x0 = ka * domain.r0;
  double ji, jip, yi, yip, jo, jop, yo, yop;
  special::bessel_j_pair(m, x0, &ji, &jip);
  special::bessel_y_pair(m, x0, &yi, &yip);
  if (!std::isfinite(yi) || !std::isfinite(yip))
    return {fa_harmonic_obstacle(m, media, domain), false};  // deep sub-turning-point
  special::bessel_j_pair(m, ta, &jo, &jop);
  special::bessel_y_pair(m, ta, &yo, &yop);

  // Radial solution vanishing at r0 is J_m(ka r) Y_m(ka r0) - Y_m(ka r) J_m(ka r0),
  // evaluated here scaled by whichever inner factor is larger.
  double w, wp;
  if (std::abs(yi) >= std::abs(ji)) {
    const double rho = ji / yi;
    w = rho * yo - jo;
    wp = rho * yop - jop;
  } else {
    const double rho = yi / ji;
    w = yo - rho * jo;
    wp = yop - rho * jop;
  }
  return ratio_value(ka, w, wp, media.a, pole_tol);
}

int SpectrumTable::counting(double lambda) const {
  if (lambda < 0.0 || lambda > lambda_max * (1.0 + 1e-12))
    throw std::out_of_range("counting: lambda outside the tabulated range");
  int count = 0;
  for (const auto& e : entries) {
    if (e.lambda > lambda) break;
    count += e.multiplicity;
  }
  return count;
}

int SpectrumTable::multiplicity_near(double lambda0, double tol) const {
  int count = 0;
  for (const auto& e : entries)
    if (std::abs(e.lambda - lambda0) <= tol) count += e.multiplicity;
  return count;
}

namespace {

std::vector<double> zeros_up_to(int m, double arg_cap,
                                const std::function<std::vector<double>(int, int)>& producer) {
  std::vector<double> out;
  int chunk = std::max(4, static_cast<int>(std::ceil((arg_cap - m) / 3.0)));
  for (;;) {
    const std::vector<double> zs = producer(m, chunk);
    if (zs.back() > arg_cap) {
      for (double z : zs)
        if (z <= arg_cap) out.push_back(z);
      return out;
    }
    chunk *= 2;
    if (chunk > 4096) throw std::runtime_error("dtn: zero scan exceeded sane bounds");
  }
}

}  // namespace

std::vector<double> mode_poles_f(int m, const RadialDomain& domain, double lambda_max) {
  const double t_cap = std::sqrt(lambda_max) * domain.R;
  std::vector<double> poles;
  if (special::bessel_zeros(m, 1)[0] > t_cap) return poles;
  const auto zs = zeros_up_to(m, t_cap, [](int mm, int c) { return special::bessel_zeros(mm, c); });
  poles.reserve(zs.size());
  for (double z : zs) poles.push_back((z / domain.R) * (z / domain.R));
  return poles;
}

std::vector<double> mode_poles_fa(int m, const Media& media, const RadialDomain& domain,
                                  double lambda_max) {
  // lambda = (a/n) (z/R)^2 over the mode's radial zeros z (disk or annulus).
  const double t_cap = std::sqrt(lambda_max * media.n / media.a) * domain.R;
  std::vector<double> poles;
  if (t_cap <= 0.0) return poles;
  std::vector<double> zs;
  if (!domain.has_obstacle()) {
    if (special::bessel_zeros(m, 1)[0] > t_cap) return poles;
    zs = zeros_up_to(m, t_cap, [](int mm, int c) { return special::bessel_zeros(mm, c); });
  } else {
    const double ratio = domain.r0 / domain.R;
    if (special::cross_product_zeros(m, ratio, 1)[0] > t_cap) return poles;
    zs = zeros_up_to(m, t_cap, [ratio](int mm, int c) {
      return special::cross_product_zeros(mm, ratio, c);
    });
  }
  poles.reserve(zs.size());
  for (double z : zs) {
    const double k = z / domain.R;
    poles.push_back((media.a / media.n) * k * k);
  }
  return poles;
}

namespace {

SpectrumTable assemble(double lambda_max,
                       const std::function<std::vector<double>(int)>& poles_of_mode) {
  SpectrumTable table;
  table.lambda_max = lambda_max;
  for (int m = 0; m <= special::kMaxOrder; ++m) {
    const std::vector<double> poles = poles_of_mode(m);
    if (poles.empty()) break;  // first zero grows with m, nothing further contributes
    for (double p : poles) table.entries.push_back({p, m, m == 0 ? 1 : 2});
  }
  std::sort(table.entries.begin(), table.entries.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) {
              return a.lambda != b.lambda ? a.lambda < b.lambda : a.mode < b.mode;
            });
  return table;
}

}  // namespace

SpectrumTable dirichlet_spectrum(const RadialDomain& domain, double lambda_max) {
  if (!(lambda_max > 0.0)) throw std::invalid_argument("dirichlet_spectrum: lambda_max must be positive");
  return assemble(lambda_max, [&](int m) { return mode_poles_f(m, domain, lambda_max); });
}

SpectrumTable dirichlet_a_spectrum(const Media& media, const RadialDomain& domain,
                                   double lambda_max) {
  if (!(lambda_max > 0.0))
    throw std::invalid_argument("dirichlet_a_spectrum: lambda_max must be positive");
  return assemble(lambda_max,
                  [&](int m) { return mode_poles_fa(m, media, domain, lambda_max); });
}

}  // namespace dtnflow
