#pragma once

#include <vector>

#include "dtnflow/media.hpp"

namespace dtnflow {

inline constexpr double kDefaultPoleTol = 1e-8;

/// Per-mode DtN value: finite, or a marked pole (a Dirichlet eigenvalue of the
/// mode). A pole is a valid outcome, not an error.
struct DtnValue {
  double value = 0.0;
  bool is_pole = false;
};

/// Mode-m value of the Dirichlet-to-Neumann map of -Laplace on the disk:
/// sqrt(lambda) J'_m(kR)/J_m(kR), with the harmonic value m/R at lambda = 0.
DtnValue f_mode(int m, double lambda, const RadialDomain& domain,
                double pole_tol = kDefaultPoleTol);

/// Mode-m value of the Dirichlet-to-co-normal map of -div(aI grad) - lambda n,
/// built on the radial solution that vanishes at the obstacle when present.
DtnValue fa_mode(int m, double lambda, const Media& media, const RadialDomain& domain,
                 double pole_tol = kDefaultPoleTol);

struct SpectrumEntry {
  double lambda;
  int mode;
  int multiplicity;  // 1 for mode 0, 2 (cos/sin pair) otherwise
};

/// Sorted eigenvalue list with multiplicities and its counting function.
struct SpectrumTable {
  std::vector<SpectrumEntry> entries;
  double lambda_max = 0.0;

  /// N(lambda): right-continuous count of entries <= lambda with multiplicity.
  int counting(double lambda) const;

  /// Total multiplicity of entries within `tol` of lambda0.
  int multiplicity_near(double lambda0, double tol) const;
};

/// Pole positions of f_mode / fa_mode for one mode, ascending, <= lambda_max.
std::vector<double> mode_poles_f(int m, const RadialDomain& domain, double lambda_max);
std::vector<double> mode_poles_fa(int m, const Media& media, const RadialDomain& domain,
                                  double lambda_max);

/// Dirichlet spectrum of -Laplace on the disk (the poles of F).
SpectrumTable dirichlet_spectrum(const RadialDomain& domain, double lambda_max);

/// Dirichlet spectrum of the anisotropic equation on disk or annulus
/// (the poles of F_A).
SpectrumTable dirichlet_a_spectrum(const Media& media, const RadialDomain& domain,
                                   double lambda_max);

}  // namespace dtnflow
