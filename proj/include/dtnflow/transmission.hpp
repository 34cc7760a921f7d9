#pragma once

#include <vector>

#include "dtnflow/flow.hpp"
#include "dtnflow/media.hpp"

namespace dtnflow {

enum class RootSource { Determinant, FlowCrossing, Both };

const char* to_string(RootSource source);

struct TransmissionRoot {
  double lambda = 0.0;
  int mode = 0;
  int multiplicity = 1;
  RootSource source = RootSource::Both;
};

struct ScanOptions {
  double root_tol = 1e-10;  // root location tolerance (scaled by max(1, lambda))
  double match_tol = 1e-8;  // flow-vs-determinant pairing tolerance
  double zero_tol = 1e-9;
  int threads = 1;
};

/// Mode-m transmission determinant, normalized by the running magnitude of its
/// two Bessel products so the value stays O(1) at large lambda. Zero exactly
/// at the mode's interior transmission eigenvalues.
double transmission_det(int m, double lambda, const Media& media, const RadialDomain& domain);

/// All determinant roots of mode m on (0, lambda_max], sign-change scan plus
/// bisection, with even-order touches picked up from |det| dips.
std::vector<double> determinant_roots(int m, const Media& media, const RadialDomain& domain,
                                      double lambda_max, const ScanOptions& options = {});

/// Merged ITE table over modes 0..mode_cap: determinant roots paired with the
/// ledger's zero events within match_tol. Any unmatched root on either side
/// raises ConsistencyError. The lambda = 0 eigenvalue (no obstacle) is
/// reported with multiplicity 1.
std::vector<TransmissionRoot> ite_spectrum(const FlowLedger& ledger, const Media& media,
                                           const RadialDomain& domain,
                                           const ScanOptions& options = {});

/// Convenience overload that runs the sweep itself.
std::vector<TransmissionRoot> ite_spectrum(const Media& media, const RadialDomain& domain,
                                           double lambda_max, int mode_cap,
                                           const ScanOptions& options = {});

/// N_T(lambda): multiplicity count of roots in (0, lambda], optionally
/// including the lambda = 0 eigenvalue (the paper's non-negative convention).
int counting_ite(const std::vector<TransmissionRoot>& roots, double lambda, bool include_zero);

}  // namespace dtnflow
