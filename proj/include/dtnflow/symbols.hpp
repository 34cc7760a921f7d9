#pragma once

#include <Eigen/Dense>
#include <string>

#include "dtnflow/media.hpp"

namespace dtnflow {

/// One boundary point of a general anisotropic problem: the matrix A(x0), the
/// outward unit normal, and the refraction index n(x0).
struct BoundarySample {
  Eigen::MatrixXd A0;  // d x d, symmetric positive definite
  Eigen::VectorXd nu;  // unit outward normal, length d
  double n0 = 1.0;
};

/// Orthonormal frame with the last axis along the normal, and A rotated into it.
struct LocalFrame {
  Eigen::MatrixXd C;        // rows e_1..e_d, e_d = nu
  Eigen::MatrixXd A_tilde;  // C * A0 * C^T
};

struct EllipticityVerdict {
  bool elliptic = false;
  int sigma = 0;  // sgn(p - p_A); meaningful only when elliptic
  bool discrete_ok = false;
};

struct PrincipalSymbols {
  double p;
  double p_a;
};

enum class DiscretenessRoute { Auto, BoundaryA2, VolumeA4 };

/// Empty string when the sample satisfies its invariants, else a diagnostic.
std::string validate_sample(const BoundarySample& sample);

/// Deterministic orthonormal completion of nu (Gram-Schmidt over the standard
/// basis, skipping the axis most parallel to nu).
LocalFrame build_frame(const BoundarySample& sample);

/// First-order principal symbols of the two boundary maps at a tangent
/// covector tau (length d-1). Throws on a non-positive radicand.
PrincipalSymbols principal_symbols(const LocalFrame& frame, const Eigen::VectorXd& tau);

/// Boundary ellipticity / sign / pointwise discreteness verdict. The closed
/// form (determinant conditions) is cross-checked against the sampled sign of
/// p - p_A over 64 tangent directions; any disagreement forces non-elliptic.
EllipticityVerdict check_ellipticity(const BoundarySample& sample);

/// Same verdict from an explicit frame (exposed for frame-invariance checks).
EllipticityVerdict check_ellipticity_frame(const LocalFrame& frame, double n0);

/// Global discreteness condition. BoundaryA2 tests a_{d,d} n - 1 != 0 at the
/// boundary (constant media: one check). VolumeA4 requires no obstacle and
/// sign-definite A - I and tests n*Vol(O) != 1. Auto accepts either.
bool check_discreteness_global(const Media& media, const RadialDomain& domain,
                               DiscretenessRoute route = DiscretenessRoute::Auto);

/// The boundary sample of the constant isotropic configuration A = a*I.
BoundarySample isotropic_sample(const Media& media);

/// sgn(1 - a) via the verdict machinery; throws GateError when not elliptic.
int sigma_of(const Media& media);

}  // namespace dtnflow
