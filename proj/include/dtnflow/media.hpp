#pragma once

#include <string>
#include <utility>

namespace dtnflow {

/// Constant scatterer parameters: anisotropy A = a*I, refraction index n,
/// ambient dimension d. The solver path requires d = 2; d = 3 enters only
/// through the boundary-symbol analysis and the Weyl-gap formula.
struct Media {
  double a = 0.5;
  double n = 0.25;
  int d = 2;
};

/// Disk of radius R with an optional concentric obstacle of radius r0
/// (r0 = 0 means no obstacle).
struct RadialDomain {
  double R = 1.0;
  double r0 = 0.0;

  bool has_obstacle() const { return r0 > 0.0; }
};

/// Volume of the unit ball in dimension d (pi for d=2, 4pi/3 for d=3).
double unit_ball_volume(int d);

struct Volumes {
  double vol_domain;         // |O|
  double vol_domain_minus_v; // |O \ V|
};

/// Exact volumes of the domain and of the medium region outside the obstacle.
Volumes volume(const RadialDomain& domain, int d);

/// Checks the coefficient guards a > 0, n > 0, a != 1, a*n != 1 (relative
/// margin 1e-9) and d in {2,3}. Returns an empty string when valid, otherwise
/// a diagnostic.
std::string validate_media(const Media& media);

/// Checks 0 <= r0 < R, R > 0. Empty string when valid.
std::string validate_domain(const RadialDomain& domain);

}  // namespace dtnflow
