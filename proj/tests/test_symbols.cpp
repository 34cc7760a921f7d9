#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dtnflow/errors.hpp"
#include "dtnflow/symbols.hpp"

using namespace dtnflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

BoundarySample sample3(const Eigen::Matrix3d& a, const Eigen::Vector3d& nu, double n0 = 1.0) {
  BoundarySample s;
  s.A0 = a;
  s.nu = nu.normalized();
  s.n0 = n0;
  return s;
}

BoundarySample sample2(const Eigen::Matrix2d& a, const Eigen::Vector2d& nu, double n0 = 1.0) {
  BoundarySample s;
  s.A0 = a;
  s.nu = nu.normalized();
  s.n0 = n0;
  return s;
}

Eigen::Vector3d random_unit(std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector3d v(g(rng), g(rng), g(rng));
  while (v.norm() < 1e-3) v = Eigen::Vector3d(g(rng), g(rng), g(rng));
  return v.normalized();
}

}  // namespace

TEST_CASE("frame with aligned normal is the identity") {
  const auto s = sample3(Eigen::Vector3d(2, 3, 4).asDiagonal(), Eigen::Vector3d(0, 0, 1));
  const LocalFrame f = build_frame(s);
  CHECK((f.C - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((f.A_tilde - s.A0).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("isotropy is frame invariant") {
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto s = sample3(0.7 * Eigen::Matrix3d::Identity(), random_unit(rng));
    const LocalFrame f = build_frame(s);
    CHECK((f.A_tilde - 0.7 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("frames are orthonormal for random normals") {
  std::mt19937 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto s = sample3(Eigen::Vector3d(1, 2, 3).asDiagonal(), random_unit(rng));
    const LocalFrame f = build_frame(s);
    const Eigen::Matrix3d gram = f.C * f.C.transpose();
    CHECK((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((f.C.row(2).transpose() - s.nu).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("principal symbols, diagonal 3d example") {
  const auto s = sample3(Eigen::Vector3d(2, 3, 4).asDiagonal(), Eigen::Vector3d(0, 0, 1));
  const LocalFrame f = build_frame(s);

  Eigen::VectorXd tau(2);
  tau << 1.0, 0.0;
  auto ps = principal_symbols(f, tau);
  CHECK(ps.p == doctest::Approx(1.0));
  CHECK(ps.p_a == doctest::Approx(std::sqrt(8.0)));  // sqrt(4*2 - 0)

  tau << 0.0, 1.0;
  ps = principal_symbols(f, tau);
  CHECK(ps.p_a == doctest::Approx(std::sqrt(12.0)));  // sqrt(4*3 - 0)

  // Isotropic reduction: p = 1, p_A = a.
  const auto iso = sample3(0.25 * Eigen::Matrix3d::Identity(), Eigen::Vector3d(0, 0, 1));
  tau << 1.0, 0.0;
  ps = principal_symbols(build_frame(iso), tau);
  CHECK(ps.p == doctest::Approx(1.0));
  CHECK(ps.p_a == doctest::Approx(0.25));
}

TEST_CASE("ellipticity verdicts") {
  // det A = 1 in 2d: not elliptic.
  Eigen::Matrix2d unitDet;
  unitDet << 2.0, 0.0, 0.0, 0.5;
  CHECK(!check_ellipticity(sample2(unitDet, Eigen::Vector2d(0, 1))).elliptic);

  // diag(2,3,4): the condition matrix is diag(7,11), positive definite -> sigma = -1.
  const auto v3 =
      check_ellipticity(sample3(Eigen::Vector3d(2, 3, 4).asDiagonal(), Eigen::Vector3d(0, 0, 1)));
  CHECK(v3.elliptic);
  CHECK(v3.sigma == -1);

  // a*I reduces to a != 1 with sigma = sgn(1-a), in both dimensions.
  for (double a : {0.5, 2.0}) {
    const auto v2 = check_ellipticity(sample2(a * Eigen::Matrix2d::Identity(), Eigen::Vector2d(1, 0)));
    CHECK(v2.elliptic);
    CHECK(v2.sigma == (a < 1.0 ? 1 : -1));
    const auto v3i =
        check_ellipticity(sample3(a * Eigen::Matrix3d::Identity(), Eigen::Vector3d(0, 1, 0)));
    CHECK(v3i.elliptic);
    CHECK(v3i.sigma == (a < 1.0 ? 1 : -1));
  }
  const auto degenerate =
      check_ellipticity(sample3(Eigen::Matrix3d::Identity(), Eigen::Vector3d(0, 0, 1)));
  CHECK(!degenerate.elliptic);
}

TEST_CASE("sigma is invariant under in-plane rotations of the frame") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> angles(0.0, 2.0 * kPi);
  Eigen::Matrix3d a;
  a << 2.0, 0.3, 0.1, 0.3, 3.0, -0.2, 0.1, -0.2, 4.0;
  const auto s = sample3(a, Eigen::Vector3d(0.3, -0.5, 0.8));
  const LocalFrame f = build_frame(s);
  const auto base = check_ellipticity_frame(f, s.n0);
  REQUIRE(base.elliptic);

  for (int i = 0; i < 10; ++i) {
    const double t = angles(rng);
    Eigen::Matrix3d q = Eigen::Matrix3d::Identity();
    q(0, 0) = std::cos(t);
    q(0, 1) = -std::sin(t);
    q(1, 0) = std::sin(t);
    q(1, 1) = std::cos(t);
    LocalFrame rotated;
    rotated.C = q * f.C;
    rotated.A_tilde = rotated.C * s.A0 * rotated.C.transpose();
    const auto v = check_ellipticity_frame(rotated, s.n0);
    CHECK(v.elliptic == base.elliptic);
    CHECK(v.sigma == base.sigma);
  }
}

TEST_CASE("pointwise discreteness flag") {
  const auto ok = check_ellipticity(sample2(0.5 * Eigen::Matrix2d::Identity(),
                                            Eigen::Vector2d(0, 1), 0.25));
  CHECK(ok.discrete_ok);  // a*n = 0.125
  const auto bad = check_ellipticity(sample2(2.0 * Eigen::Matrix2d::Identity(),
                                             Eigen::Vector2d(0, 1), 0.5));
  CHECK(!bad.discrete_ok);  // a*n = 1
}

TEST_CASE("global discreteness routes") {
  const RadialDomain disk{1.0, 0.0};
  CHECK(check_discreteness_global(Media{0.5, 0.25, 2}, disk, DiscretenessRoute::BoundaryA2));
  CHECK(!check_discreteness_global(Media{2.0, 0.5, 2}, disk, DiscretenessRoute::BoundaryA2));
  // n = 1/pi on the unit disk: the volume route fails exactly.
  CHECK(!check_discreteness_global(Media{0.5, 1.0 / kPi, 2}, disk, DiscretenessRoute::VolumeA4));
  CHECK(check_discreteness_global(Media{0.5, 0.25, 2}, disk, DiscretenessRoute::VolumeA4));
  // The volume route needs V empty.
  CHECK(!check_discreteness_global(Media{0.5, 0.25, 2}, RadialDomain{1.0, 0.3},
                                   DiscretenessRoute::VolumeA4));
  // Auto accepts a*n = 1 through the volume route when A - I is sign definite.
  CHECK(check_discreteness_global(Media{2.0, 0.5, 2}, disk, DiscretenessRoute::Auto));
}

TEST_CASE("sigma_of gates on ellipticity") {
  CHECK(sigma_of(Media{0.5, 0.25, 2}) == 1);
  CHECK(sigma_of(Media{2.0, 3.0, 2}) == -1);
  CHECK_THROWS_AS(sigma_of(Media{1.0, 0.25, 2}), GateError);
}

TEST_CASE("sample validation") {
  Eigen::Matrix2d notSym;
  notSym << 1.0, 0.5, 0.2, 1.0;
  CHECK(!validate_sample(sample2(notSym, Eigen::Vector2d(0, 1))).empty());
  Eigen::Matrix2d indefinite;
  indefinite << 1.0, 0.0, 0.0, -1.0;
  CHECK(!validate_sample(sample2(indefinite, Eigen::Vector2d(0, 1))).empty());
  BoundarySample bad = sample2(Eigen::Matrix2d::Identity(), Eigen::Vector2d(0, 1));
  bad.nu *= 2.0;
  CHECK(!validate_sample(bad).empty());
}
