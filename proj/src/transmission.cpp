#include "dtnflow/transmission.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dtnflow/errors.hpp"
#include "dtnflow/special.hpp"

namespace dtnflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

int mode_multiplicity(int m) { return m == 0 ? 1 : 2; }

double scaled(double tol, double lambda) { return tol * std::max(1.0, std::abs(lambda)); }

// Radial factor of the second equation at the outer boundary, scaled by a
// positive, lambda-smooth magnitude. The scale must never change sign with
// lambda or the determinant scan would see spurious roots.
struct RadialFactor {
  double v;   // value at R (scaled)
  double vp;  // derivative in the argument at R (same scale)
};

RadialFactor second_factor(int m, double ka, const Media&, const RadialDomain& domain) {
  const double ta = ka * domain.R;
  if (!domain.has_obstacle()) {
    RadialFactor f;
    special::bessel_j_pair(m, ta, &f.v, &f.vp);
    return f;
  }
  const double x0 = ka * domain.r0;
  double ji, jip, yi, yip, jo, jop, yo, yop;
  special::bessel_j_pair(m, x0, &ji, &jip);
  special::bessel_y_pair(m, x0, &yi, &yip);
  special::bessel_j_pair(m, ta, &jo, &jop);
  special::bessel_y_pair(m, ta, &yo, &yop);
  RadialFactor f;
  if (std::isinf(yi)) {
    // The obstacle term dominates beyond representable range; the inner J
    // coefficient is then zero to machine accuracy.
    const double s = yi > 0.0 ? -1.0 : 1.0;
    f.v = s * jo;
    f.vp = s * jop;
    return f;
  }
  const double denom = std::max(std::abs(ji), std::abs(yi));
  if (denom == 0.0) {
    f.v = 0.0;
    f.vp = 0.0;
    return f;
  }
  const double cj = ji / denom, cy = yi / denom;
  f.v = cj * yo - cy * jo;
  f.vp = cj * yop - cy * jop;
  return f;
}

// Sign of the determinant in the lambda -> 0 limit, used when both terms have
// underflowed: sign(fa(0) - f(0)) since det = -(f - fa) * (positive factors).
double small_lambda_sign(int m, const Media& media, const RadialDomain& domain) {
  const double fa0 = fa_mode(m, 0.0, media, domain).value;
  const double f0 = f_mode(m, 0.0, domain).value;
  return fa0 - f0 >= 0.0 ? 0.5 : -0.5;
}

}  // namespace

const char* to_string(RootSource source) {
  switch (source) {
    case RootSource::Determinant: return "determinant";
    case RootSource::FlowCrossing: return "flow";
    case RootSource::Both: return "both";
  }
  return "unknown";
}

double transmission_det(int m, double lambda, const Media& media, const RadialDomain& domain) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("transmission_det: lambda must be >= 0");
  if (lambda == 0.0) {
    if (!domain.has_obstacle()) return m == 0 ? 0.0 : (media.a - 1.0) / (media.a + 1.0);
    lambda = 1e-12;  // analytic just above the origin; no roots hide here
  }
  const double k = std::sqrt(lambda);
  const double ka = std::sqrt(lambda * media.n / media.a);
  const double t = k * domain.R;

  double u, up;
  special::bessel_j_pair(m, t, &u, &up);
  const RadialFactor f = second_factor(m, ka, media, domain);

  const double t1 = u * media.a * ka * f.vp;
  const double t2 = k * up * f.v;
  const double norm = std::abs(t1) + std::abs(t2);
  if (norm < 1e-280) return small_lambda_sign(m, media, domain);
  return (t1 - t2) / norm;
}

std::vector<double> determinant_roots(int m, const Media& media, const RadialDomain& domain,
                                      double lambda_max, const ScanOptions& options) {
  if (!(lambda_max > 0.0))
    throw std::invalid_argument("determinant_roots: lambda_max must be positive");

  const auto det = [&](double lambda) { return transmission_det(m, lambda, media, domain); };

  const double k_hi = std::sqrt(lambda_max);
  const double dk = kPi / (16.0 * domain.R * std::max(1.0, std::sqrt(media.n / media.a)));
  const double k_lo = dk / 64.0;
  const int n = std::max(32, static_cast<int>(std::ceil((k_hi - k_lo) / dk)));

  std::vector<double> ls(n + 1), ds(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double k = k_lo + (k_hi - k_lo) * i / n;
    ls[i] = k * k;
    ds[i] = det(ls[i]);
  }

  std::vector<double> roots;
  for (int i = 0; i < n; ++i) {
    if (ds[i] == 0.0) {
      roots.push_back(ls[i]);
      continue;
    }
    if ((ds[i] < 0.0) == (ds[i + 1] < 0.0)) continue;
    double lo = ls[i], hi = ls[i + 1], flo = ds[i];
    const double tol = scaled(options.root_tol, hi);
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      const double fm = det(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((flo < 0.0) != (fm < 0.0)) {
        hi = mid;
      } else {
        lo = mid;
        flo = fm;
      }
    }
    roots.push_back(0.5 * (lo + hi));
  }

  // Even-order touches: normalized-dip minima without a sign change.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 1; i < n; ++i) {
    const double am = std::abs(ds[i]);
    if (am >= 1e-3 || am > std::abs(ds[i - 1]) || am > std::abs(ds[i + 1])) continue;
    if ((ds[i - 1] < 0.0) != (ds[i + 1] < 0.0)) continue;
    double a = ls[i - 1], b = ls[i + 1];
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = std::abs(det(x1)), f2 = std::abs(det(x2));
    const double tol = scaled(options.root_tol, b);
    while (b - a > tol) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phi * (b - a);
        f1 = std::abs(det(x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phi * (b - a);
        f2 = std::abs(det(x2));
      }
    }
    const double at = 0.5 * (a + b);
    if (std::abs(det(at)) <= 1e-7) roots.push_back(at);
  }

  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<TransmissionRoot> ite_spectrum(const FlowLedger& ledger, const Media& media,
                                           const RadialDomain& domain,
                                           const ScanOptions& options) {
  std::vector<TransmissionRoot> table;

  for (int m = 0; m <= ledger.mode_cap; ++m) {
    const std::vector<double> det_roots =
        determinant_roots(m, media, domain, ledger.lambda_max, options);

    std::vector<double> flow_roots;
    for (const auto& ev : ledger.events) {
      if (ev.mode != m || ev.lambda <= 0.0) continue;
      if (ev.kind == EventKind::ZeroCrossUp || ev.kind == EventKind::ZeroCrossDown ||
          ev.kind == EventKind::ZeroTouch)
        flow_roots.push_back(ev.lambda);
    }

    if (det_roots.size() != flow_roots.size()) {
      std::ostringstream msg;
      msg << "ite_spectrum: mode " << m << " has " << det_roots.size()
          << " determinant roots but " << flow_roots.size() << " flow crossings";
      throw ConsistencyError(msg.str());
    }
    for (size_t i = 0; i < det_roots.size(); ++i) {
      if (std::abs(det_roots[i] - flow_roots[i]) > scaled(options.match_tol, det_roots[i])) {
        std::ostringstream msg;
        msg << "ite_spectrum: disputed root at mode " << m << ": determinant "
            << det_roots[i] << " vs flow " << flow_roots[i];
        throw ConsistencyError(msg.str());
      }
      table.push_back({0.5 * (det_roots[i] + flow_roots[i]), m, mode_multiplicity(m),
                       RootSource::Both});
    }
  }

  if (!domain.has_obstacle()) table.push_back({0.0, 0, 1, RootSource::Both});

  std::sort(table.begin(), table.end(), [](const TransmissionRoot& a, const TransmissionRoot& b) {
    return a.lambda != b.lambda ? a.lambda < b.lambda : a.mode < b.mode;
  });
  return table;
}

std::vector<TransmissionRoot> ite_spectrum(const Media& media, const RadialDomain& domain,
                                           double lambda_max, int mode_cap,
                                           const ScanOptions& options) {
  FlowOptions fopt;
  fopt.threads = options.threads;
  fopt.mode_cap_override = mode_cap;
  const int sigma = media.a < 1.0 ? 1 : -1;
  const FlowLedger ledger = sweep(media, domain, sigma, lambda_max, fopt);
  return ite_spectrum(ledger, media, domain, options);
}

int counting_ite(const std::vector<TransmissionRoot>& roots, double lambda, bool include_zero) {
  int count = 0;
  for (const auto& r : roots) {
    if (r.lambda > lambda) break;
    if (r.lambda == 0.0 && !include_zero) continue;
    count += r.multiplicity;
  }
  return count;
}

}  // namespace dtnflow
