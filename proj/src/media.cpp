#include "dtnflow/media.hpp"

#include <cmath>
#include <stdexcept>

namespace dtnflow {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kCoefficientMargin = 1e-9;  // relative guard for the != gates
}  // namespace

double unit_ball_volume(int d) {
  if (d == 2) return kPi;
  if (d == 3) return 4.0 * kPi / 3.0;
  throw std::invalid_argument("unit_ball_volume: d must be 2 or 3");
}

Volumes volume(const RadialDomain& domain, int d) {
  const double wd = unit_ball_volume(d);
  const double rd = std::pow(domain.R, d);
  const double r0d = std::pow(domain.r0, d);
  return {wd * rd, wd * (rd - r0d)};
}

std::string validate_media(const Media& media) {
  if (!(media.a > 0.0)) return "media: a must be positive";
  if (!(media.n > 0.0)) return "media: n must be positive";
  if (media.d != 2 && media.d != 3) return "media: d must be 2 or 3";
  if (std::abs(media.a - 1.0) < kCoefficientMargin * std::max(1.0, media.a))
    return "media: a = 1 collapses the two principal symbols (ellipticity gate)";
  const double an = media.a * media.n;
  if (std::abs(an - 1.0) < kCoefficientMargin * std::max(1.0, an))
    return "media: a*n = 1 violates the boundary discreteness condition";
  return {};
}

std::string validate_domain(const RadialDomain& domain) {
  if (!(domain.R > 0.0)) return "domain: R must be positive";
  if (domain.r0 < 0.0) return "domain: r0 must be non-negative";
  if (domain.r0 >= domain.R) return "domain: r0 must be smaller than R";
  return {};
}

}  // namespace dtnflow
