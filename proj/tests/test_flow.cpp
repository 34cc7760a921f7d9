#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dtnflow/errors.hpp"
#include "dtnflow/flow.hpp"
#include "dtnflow/special.hpp"
#include "dtnflow/symbols.hpp"

using namespace dtnflow;

namespace {
const RadialDomain kDisk{1.0, 0.0};
const RadialDomain kAnnulus{1.0, 0.3};
const Media kSoft{0.5, 0.25, 2};
const Media kObstacle{2.0, 3.0, 2};
}  // namespace

TEST_CASE("mu_mode harmonic values") {
  CHECK(mu_mode(1, 0.0, kSoft, kDisk, 1).value == doctest::Approx(0.5));
  CHECK(mu_mode(0, 0.0, kSoft, kDisk, 1).value == doctest::Approx(0.0));
  // Obstacle, a > 1, sigma = -1: positive at the origin for every mode.
  for (int m = 0; m <= 6; ++m) CHECK(mu_mode(m, 0.0, kObstacle, kAnnulus, -1).value > 0.0);
}

TEST_CASE("large-mode branches are positive") {
  const int cap = default_mode_cap(kSoft, kDisk, 1, 60.0);
  CHECK(cap >= 8);
  for (int m = cap; m <= cap + 10; ++m) {
    for (double lambda : {1.0, 17.0, 42.0, 59.5}) {
      const DtnValue mu = mu_mode(m, lambda, kSoft, kDisk, 1);
      REQUIRE(!mu.is_pole);
      CHECK(mu.value > 0.0);
    }
  }
}

TEST_CASE("n_minus at the origin vanishes for sign-definite configurations") {
  CHECK(n_minus_at(0.0, kSoft, kDisk, 1, 14) == 0);
  CHECK(n_minus_at(0.0, kObstacle, kAnnulus, -1, 14) == 0);
}

TEST_CASE("n_minus_at rejects poles and certifies the tail") {
  const double j01 = special::bessel_zeros(0, 1)[0];
  CHECK_THROWS_AS(n_minus_at(j01 * j01, kSoft, kDisk, 1, 14), std::invalid_argument);
  CHECK(n_minus_at(1.0, kSoft, kDisk, 1, 14) >= 0);
}

TEST_CASE("sweep: first pole jumps match the jump law") {
  const FlowLedger ledger = sweep(kSoft, kDisk, 1, 40.0);
  const double j01 = special::bessel_zeros(0, 1)[0];

  bool saw_f = false, saw_fa = false;
  for (const auto& ev : ledger.events) {
    if (ev.kind == EventKind::PoleOfF && std::abs(ev.lambda - j01 * j01) < 1e-8) {
      CHECK(ev.delta_n1 == -1);  // sigma (m_A - m_0) = 1 * (0 - 1)
      CHECK(ev.delta_n2 == 0);
      saw_f = true;
    }
    if (ev.kind == EventKind::PoleOfFA && std::abs(ev.lambda - 2.0 * j01 * j01) < 1e-8) {
      CHECK(ev.delta_n1 == 1);  // sigma (m_A - m_0) = 1 * (1 - 0)
      CHECK(ev.delta_n2 == 0);
      saw_fa = true;
    }
    if (ev.kind == EventKind::ZeroCrossUp || ev.kind == EventKind::ZeroCrossDown)
      CHECK(ev.delta_n1 == 0);
  }
  CHECK(saw_f);
  CHECK(saw_fa);
  CHECK(ledger.singular_points == 0);
}

TEST_CASE("sweep: the lambda = 0 departure is recorded without an obstacle") {
  const FlowLedger ledger = sweep(kSoft, kDisk, 1, 20.0);
  REQUIRE(!ledger.events.empty());
  CHECK(ledger.events.front().lambda == 0.0);
  CHECK(ledger.events.front().kind == EventKind::ZeroCrossUp);
  CHECK(ledger.events.front().delta_n2 == 1);
  CHECK(ledger.n_minus_zero == 0);

  // With an obstacle the mode-0 branch starts strictly positive.
  const FlowLedger obst = sweep(kObstacle, kAnnulus, -1, 20.0);
  for (const auto& ev : obst.events) CHECK(ev.lambda > 0.0);
}

TEST_CASE("ledger identity holds at off-event points") {
  const FlowLedger ledger = sweep(kSoft, kDisk, 1, 60.0);
  // The sweep verifies this internally; spot-check through the public API.
  for (double lambda : {0.7, 4.1, 9.9, 21.3, 37.7, 55.1}) {
    const int direct = n_minus_at(lambda, kSoft, kDisk, 1, ledger.mode_cap);
    CHECK(direct == ledger.n_minus(lambda));
    CHECK(direct >= 0);
  }
}

TEST_CASE("n2 reconciles with signed crossing counts") {
  const FlowLedger ledger = sweep(kObstacle, kAnnulus, -1, 60.0);
  for (double lambda : {5.0, 20.0, 40.0, 59.0}) {
    int up = 0, down = 0;
    for (const auto& ev : ledger.events) {
      if (ev.lambda > lambda) break;
      if (ev.kind == EventKind::ZeroCrossUp) up += ev.delta_n2;
      if (ev.kind == EventKind::ZeroCrossDown) down += -ev.delta_n2;
    }
    CHECK(ledger.n2(lambda) == up - down);
  }
}

TEST_CASE("branches are smooth between events") {
  // Mode 0 between its first two poles: second differences settle instead of
  // blowing up under refinement.
  const double j01 = special::bessel_zeros(0, 1)[0];
  const double lambda = j01 * j01 + 1.5;
  const auto mu = [&](double l) { return mu_mode(0, l, kSoft, kDisk, 1).value; };
  const double h1 = 1e-3, h2 = 5e-4;
  const double d1 = (mu(lambda + h1) - 2.0 * mu(lambda) + mu(lambda - h1)) / (h1 * h1);
  const double d2 = (mu(lambda + h2) - 2.0 * mu(lambda) + mu(lambda - h2)) / (h2 * h2);
  CHECK(std::isfinite(d1));
  CHECK(std::isfinite(d2));
  CHECK(std::abs(d2 - d1) < 0.05 * std::max(1.0, std::abs(d1)));
}

TEST_CASE("sweeps are deterministic across thread counts") {
  FlowOptions serial;
  serial.threads = 1;
  FlowOptions parallel;
  parallel.threads = 4;
  const FlowLedger a = sweep(kSoft, kDisk, 1, 45.0, serial);
  const FlowLedger b = sweep(kSoft, kDisk, 1, 45.0, parallel);
  REQUIRE(a.events.size() == b.events.size());
  for (size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].lambda == b.events[i].lambda);
    CHECK(a.events[i].mode == b.events[i].mode);
    CHECK(a.events[i].kind == b.events[i].kind);
  }
}

TEST_CASE("sigma comes from the symbols module") {
  CHECK(sigma_of(kSoft) == 1);
  CHECK(sigma_of(kObstacle) == -1);
}
