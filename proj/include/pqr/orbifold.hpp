#pragma once
/**
 * Quaternionic counterpart of the para pipeline: closed-form Jacobi spectra,
 * global sectional-curvature bounds, the positivity region of the (p,q)
 * family, and pinching-constant bounds. All formulas are evaluated as
 * printed; gl_numeric_crosscheck reruns the generic reduction/curvature
 * pipeline with the quaternionic tag and checks the closed forms against it.
 */

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "pqr/reduction.hpp"

namespace pqr::orbifold {

/// Weights of the circle action on the quaternionic level set.
struct GLParams {
  int p = 1;
  int q = 1;
};

/// Throws invalid_params unless p,q >= 1 and gcd(p,q) = 1.
void validate(const GLParams& params);

/**
 * Closed-form Jacobi spectrum at squared Killing norm V2:
 * l1 = l2 = 2 p^4 q^2 / V2^3 - 4, l3 = -4 p^4 q^2 / V2^3 - 4.
 * The trace combination l3 + 2 l1 is -12 identically.
 */
reduction::Spectrum gl_spectrum(const GLParams& params, double V2);

/**
 * Global sectional bounds (lower, upper): for p <= q the pair
 * (4 - 2 q^2/p^2, 4 + 4 q^2/p^2); for p >= q the pair
 * (4 - 2 p^4/q^4, 4 + 4 p^4/q^4). Both branches agree at p = q.
 */
std::pair<double, double> gl_sectional_bounds(const GLParams& params);

/// Strictly positive sectional curvature iff p^2 < sqrt(2) q^2 and q^2 < 2 p^2.
bool positivity_predicate(const GLParams& params);

/**
 * Pinching-constant bounds (k_lower, k_upper), valid only on the positive
 * regime (invalid_params otherwise). p <= q branch:
 * (1/4 - 3/4 (q^2-p^2)/(p^2+q^2), 1/4 + 3/4 (q^4-p^4)/(p^4+q^4));
 * the p >= q branch swaps the roles. Both collapse to (1/4, 1/4) at p = q.
 */
std::pair<double, double> pinching_bounds(const GLParams& params);

/// Per-point record of one quaternionic pipeline crosscheck.
struct GLPointCheck {
  double n2 = 0.0;               // sampled |V_u|^2 (= |Lambda u|^2)
  double killing_norm = 0.0;     // <V,V> measured in the ambient metric
  bool norm_in_range = false;    // within [min(p,q)^2, max(p,q)^2] +- tol
  std::array<double, 3> closed{};  // sorted gl_spectrum(params, n2)
  std::array<double, 3> fd{};      // sorted FD Jacobi triple at e
  double fd_rel_err = 0.0;
  double sect_min = 0.0;  // over sampled closed-form and FD sectionals
  double sect_max = 0.0;
  bool sect_in_bounds = false;
};

/// Aggregate crosscheck result with the tolerances each entry was judged by.
struct GLCrosscheckReport {
  GLParams params;
  std::pair<double, double> bounds{};  // gl_sectional_bounds echo
  std::vector<GLPointCheck> points;
  double lambda3_spread = 0.0;  // max - min of the simple eigenvalue
  double norm_tol = 1e-9;
  double fd_tol = 1e-3;
  double sect_tol = 1e-3;
  bool pass = false;
};

/**
 * Runs the generic reduction with quaternionic tag (circle action through
 * generator i) at npoints seeded samples: checks the Killing-norm window,
 * the FD Jacobi spectrum against gl_spectrum, and sampled sectional
 * curvatures (closed-form planes plus FD coordinate planes) against
 * gl_sectional_bounds. Records the point-to-point spread of the simple
 * eigenvalue as the non-homogeneity witness.
 */
GLCrosscheckReport gl_numeric_crosscheck(const GLParams& params, int npoints,
                                         std::uint64_t seed);

}  // namespace pqr::orbifold
