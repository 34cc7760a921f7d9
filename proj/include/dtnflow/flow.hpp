#pragma once

#include <string>
#include <vector>

#include "dtnflow/dtn.hpp"
#include "dtnflow/media.hpp"

namespace dtnflow {

/// Classification of a branch event along the lambda sweep.
///  - ZeroCrossUp:   the branch enters the negative semi-axis through 0
///                   (raises n2 by the mode multiplicity).
///  - ZeroCrossDown: the branch exits the negative semi-axis through 0.
///  - ZeroTouch:     even-order contact with 0; counts as a transmission
///                   eigenvalue but leaves the ledger unchanged.
///  - PoleOfF / PoleOfFA / DoublePole: the branch passes through infinity.
enum class EventKind { ZeroCrossUp, ZeroCrossDown, ZeroTouch, PoleOfF, PoleOfFA, DoublePole };

const char* to_string(EventKind kind);

/// One event of one angular mode. delta_n1/delta_n2 carry the mode
/// multiplicity; per scalar branch they are -1, 0 or +1.
struct BranchEvent {
  double lambda = 0.0;
  int mode = 0;
  EventKind kind = EventKind::ZeroCrossUp;
  int delta_n1 = 0;
  int delta_n2 = 0;
  double mu_left = 0.0;
  double mu_right = 0.0;
};

struct FlowOptions {
  double zero_tol = 1e-9;
  double pole_tol = 1e-8;
  double lambda_tol = 1e-10;   // event location tolerance (scaled by max(1, lambda))
  bool strict = false;         // ZeroTouch and singular points become errors
  int threads = 1;             // 0 = hardware concurrency
  int mode_cap_override = -1;  // -1 = automatic
};

/// Event record of one sweep plus the counters it implies. The identity
/// n_minus(lambda) = n_minus_zero + n1(lambda) + n2(lambda) is verified
/// against direct counting before the ledger is returned.
struct FlowLedger {
  int n_minus_zero = 0;
  int mode_cap = 0;
  double lambda_max = 0.0;
  int sigma = 0;
  std::vector<BranchEvent> events;  // ascending lambda, mode as tie-break
  int singular_points = 0;  // spectrum-table coincidences (R(lambda) contribution)

  int n1(double lambda) const;
  int n2(double lambda) const;
  int n_minus(double lambda) const;
};

/// sigma * (f_mode - fa_mode); pole marker if either factor is at a pole.
DtnValue mu_mode(int m, double lambda, const Media& media, const RadialDomain& domain, int sigma,
                 double pole_tol = kDefaultPoleTol);

/// Number of negative branch values at `lambda` (with multiplicity), counting
/// modes 0..mode_cap and certifying that the next 10 modes stay positive.
/// Throws std::invalid_argument when lambda sits on a pole.
int n_minus_at(double lambda, const Media& media, const RadialDomain& domain, int sigma,
               int mode_cap, double pole_tol = kDefaultPoleTol);

/// Smallest mode index whose branch is pole-free and uniformly positive on
/// (0, lambda_max], with the ten guard modes above it verified as well.
int default_mode_cap(const Media& media, const RadialDomain& domain, int sigma, double lambda_max,
                     const FlowOptions& options = {});

/// Full sweep over (0, lambda_max]: locates every branch event, measures the
/// pole jumps, checks them against sigma*(m_A - m_0) from the spectrum tables,
/// and verifies the ledger identity on an off-event grid.
FlowLedger sweep(const Media& media, const RadialDomain& domain, int sigma, double lambda_max,
                 const FlowOptions& options = {});

}  // namespace dtnflow
