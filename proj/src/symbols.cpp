#include "dtnflow/symbols.hpp"

#include <cmath>
#include <stdexcept>

#include "dtnflow/errors.hpp"

namespace dtnflow {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGateTol = 1e-9;  // relative margin for the != conditions

int dim_of(const BoundarySample& sample) { return static_cast<int>(sample.nu.size()); }

}  // namespace

std::string validate_sample(const BoundarySample& sample) {
  const int d = dim_of(sample);
  if (d != 2 && d != 3) return "sample: dimension must be 2 or 3";
  if (sample.A0.rows() != d || sample.A0.cols() != d) return "sample: A must be d x d";
  if (!(sample.n0 > 0.0)) return "sample: n must be positive";
  const double scale = sample.A0.cwiseAbs().maxCoeff();
  if ((sample.A0 - sample.A0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))
    return "sample: A must be symmetric";
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sample.A0);
  if (es.eigenvalues().minCoeff() <= 0.0) return "sample: A must be positive definite";
  if (std::abs(sample.nu.norm() - 1.0) > 1e-9) return "sample: normal must be a unit vector";
  return {};
}

LocalFrame build_frame(const BoundarySample& sample) {
  const std::string err = validate_sample(sample);
  if (!err.empty()) throw std::invalid_argument(err);

  const int d = dim_of(sample);
  int skip = 0;
  sample.nu.cwiseAbs().maxCoeff(&skip);

  Eigen::MatrixXd C(d, d);
  int row = 0;
  for (int axis = 0; axis < d; ++axis) {
    if (axis == skip) continue;
    Eigen::VectorXd v = Eigen::VectorXd::Unit(d, axis);
    v -= v.dot(sample.nu) * sample.nu;
    for (int r = 0; r < row; ++r) v -= v.dot(C.row(r)) * C.row(r).transpose();
    C.row(row++) = v.normalized();
  }
  C.row(d - 1) = sample.nu;

  LocalFrame frame;
  frame.C = C;
  frame.A_tilde = C * sample.A0 * C.transpose();
  return frame;
}

PrincipalSymbols principal_symbols(const LocalFrame& frame, const Eigen::VectorXd& tau) {
  const int d = static_cast<int>(frame.C.rows());
  if (tau.size() != d - 1) throw std::invalid_argument("principal_symbols: tau must have length d-1");
  if (tau.norm() == 0.0) throw std::invalid_argument("principal_symbols: tau must be nonzero");

  const Eigen::MatrixXd& at = frame.A_tilde;
  const double p = tau.norm();
  double radicand = 0.0;
  if (d == 3) {
    const double quad = at(0, 0) * tau(0) * tau(0) + 2.0 * at(0, 1) * tau(0) * tau(1) +
                        at(1, 1) * tau(1) * tau(1);
    const double mixed = at(0, 2) * tau(0) + at(1, 2) * tau(1);
    radicand = at(2, 2) * quad - mixed * mixed;
  } else {
    // 1-tangent-variable specialization, normalized so p_A/p = sqrt(det A~).
    radicand = (at(0, 0) * at(1, 1) - at(0, 1) * at(0, 1)) * tau(0) * tau(0);
  }
  if (!(radicand > 0.0))
    throw std::runtime_error("principal_symbols: degenerate symbol (A not positive?)");
  return {p, std::sqrt(radicand)};
}

EllipticityVerdict check_ellipticity_frame(const LocalFrame& frame, double n0) {
  const int d = static_cast<int>(frame.C.rows());
  const Eigen::MatrixXd& at = frame.A_tilde;

  EllipticityVerdict verdict;
  if (d == 2) {
    const double det = at.determinant();
    verdict.elliptic = std::abs(det - 1.0) > kGateTol * std::max(1.0, std::abs(det));
    verdict.sigma = det < 1.0 ? 1 : -1;
  } else {
    Eigen::Matrix2d m;
    m(0, 0) = at(2, 2) * at(0, 0) - at(0, 2) * at(0, 2) - 1.0;
    m(0, 1) = at(2, 2) * at(0, 1) - at(0, 2) * at(1, 2);
    m(1, 0) = m(0, 1);
    m(1, 1) = at(2, 2) * at(1, 1) - at(1, 2) * at(1, 2) - 1.0;
    const double det = m.determinant();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    verdict.elliptic = det > kGateTol * scale * scale;
    if (verdict.elliptic) {
      const double tr = m.trace();
      // det > 0 forbids an indefinite symmetric 2x2; tr picks the sign.
      if (tr == 0.0) throw std::logic_error("check_ellipticity: indefinite matrix with det > 0");
      verdict.sigma = tr < 0.0 ? 1 : -1;
    }
  }

  if (verdict.elliptic) {
    // Sampled sign of p - p_A over tangent directions must match the closed form.
    const int samples = d == 3 ? 64 : 2;
    for (int i = 0; i < samples && verdict.elliptic; ++i) {
      Eigen::VectorXd tau(d - 1);
      if (d == 3) {
        const double theta = 2.0 * kPi * i / samples;
        tau << std::cos(theta), std::sin(theta);
      } else {
        tau << (i == 0 ? 1.0 : -1.0);
      }
      const PrincipalSymbols ps = principal_symbols(frame, tau);
      const int sampled = ps.p > ps.p_a ? 1 : -1;
      if (sampled != verdict.sigma) verdict.elliptic = false;
    }
    if (!verdict.elliptic) verdict.sigma = 0;
  } else {
    verdict.sigma = 0;
  }

  const double add = at(d - 1, d - 1);
  const double cond = add * n0;
  verdict.discrete_ok = std::abs(cond - 1.0) > kGateTol * std::max(1.0, std::abs(cond));
  return verdict;
}

EllipticityVerdict check_ellipticity(const BoundarySample& sample) {
  return check_ellipticity_frame(build_frame(sample), sample.n0);
}

bool check_discreteness_global(const Media& media, const RadialDomain& domain,
                               DiscretenessRoute route) {
  const auto a2 = [&]() {
    const EllipticityVerdict v = check_ellipticity(isotropic_sample(media));
    return v.elliptic && v.discrete_ok;
  };
  const auto a4 = [&]() {
    if (domain.has_obstacle()) return false;  // Theorem requires V empty
    if (std::abs(media.a - 1.0) <= kGateTol * std::max(1.0, media.a)) return false;
    const double integral = media.n * volume(domain, media.d).vol_domain;
    return std::abs(integral - 1.0) > kGateTol * std::max(1.0, integral);
  };
  switch (route) {
    case DiscretenessRoute::BoundaryA2:
      return a2();
    case DiscretenessRoute::VolumeA4:
      return a4();
    case DiscretenessRoute::Auto:
      return a2() || a4();
  }
  return false;
}

BoundarySample isotropic_sample(const Media& media) {
  BoundarySample sample;
  sample.A0 = media.a * Eigen::MatrixXd::Identity(media.d, media.d);
  sample.nu = Eigen::VectorXd::Unit(media.d, media.d - 1);
  sample.n0 = media.n;
  return sample;
}

int sigma_of(const Media& media) {
  const EllipticityVerdict v = check_ellipticity(isotropic_sample(media));
  if (!v.elliptic)
    throw GateError("ellipticity gate: A = a*I with a = " + std::to_string(media.a) +
                    " is not elliptic");
  return v.sigma;
}

}  // namespace dtnflow
