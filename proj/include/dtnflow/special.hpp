#pragma once

#include <vector>

namespace dtnflow::special {

// Supported ranges. Calls outside them throw std::domain_error; nothing is
// silently clamped.
inline constexpr int kMaxOrder = 200;
inline constexpr double kMaxArgument = 1000.0;

/// Cylinder function of the first kind J_m(x), integer order m >= 0, x >= 0.
///
/// Ascending series where it is cancellation-safe (small x, or order large
/// compared to x so the terms decrease from the start), backward (Miller)
/// recurrence normalized with J_0 + 2*sum J_{2k} = 1 elsewhere.
double bessel_j(int m, double x);

/// Cylinder function of the second kind Y_m(x), x > 0. Y_0 and Y_1 come from
/// the ascending series for x <= 12 and from Steed's continued fractions
/// beyond; higher orders by forward recurrence (stable for Y).
double bessel_y(int m, double x);

/// dJ_m/dx via J'_m = J_{m-1} - (m/x) J_m, with J'_0 = -J_1.
double bessel_j_prime(int m, double x);

/// dY_m/dx via the same recurrence.
double bessel_y_prime(int m, double x);

/// Both J_m and J'_m from one pass (the DtN evaluations always need the pair).
void bessel_j_pair(int m, double x, double* j, double* jp);
void bessel_y_pair(int m, double x, double* y, double* yp);

/// First `count` positive zeros j_{m,s} of J_m, strictly increasing.
/// Brackets come from McMahon seeds (order 0) and the interlacing
/// j_{m,s} < j_{m+1,s} < j_{m,s+1} row by row; each zero is bisected to 1e-8
/// and polished with at most 5 Newton steps. Residuals |J_m| <= 1e-11.
std::vector<double> bessel_zeros(int m, int count);

/// Cross-product solution evaluated in the outer-radius scaling:
///   Z_m(x; ratio) = J_m(ratio*x) Y_m(x) - Y_m(ratio*x) J_m(x),
/// the radial mode that vanishes at the inner radius ratio = r0/R.
double cross_product(int m, double ratio, double x);

/// d/dx of cross_product.
double cross_product_prime(int m, double ratio, double x);

/// First `count` positive zeros of the cross product, scan-and-bisect with a
/// step tied to the annulus period pi/(1-ratio). Residuals are relative to
/// the magnitude of the two products (the raw terms can be astronomically
/// large at high order).
std::vector<double> cross_product_zeros(int m, double ratio, int count);

}  // namespace dtnflow::special
