#pragma once
/**
 * Weighted circle reduction of the projective plane.
 *
 * The one-parameter group phi_t left-multiplies components by exponentials
 * of a generator with weights (q, p, p); its moment-map level set K0 sits
 * inside the pseudo-sphere, and the quotient of K = {n^2 != 0} carries the
 * reduced metric whose curvature this module expresses in closed form:
 * Killing field V, operator Lambda, second fundamental form B, Gauss and
 * O'Neill sectional curvatures, the 3x3 Jacobi matrix and its spectrum.
 *
 * Conventions pinned by the finite-difference oracle (see curvlab):
 *  - <V,V> = -n^2 in the para tag (V is timelike), +n^2 in the quat tag.
 *  - s := -a^2 + b^2 + c^2 = p^4 q^2 / n^4 > 0 on K0 (para); the ambient
 *    square norm of h(Lambda X) is -s for unit spacelike X.
 *  - The Gauss/O'Neill correction enters with an overall minus sign, and
 *    jacobi_matrix is the negative of the classical printed layout with the
 *    signed constant kappa = cbar_sign_convention * cbar in the cbar slot;
 *    its eigenvalues then agree with closed_form_spectrum analytically.
 */

#include <array>
#include <cstdint>

#include "pqr/projplane.hpp"

namespace pqr::reduction {

using clifford::Generator;
using clifford::SignatureTag;
using projplane::AmbientVector;
using projplane::HorizontalVector;
using projplane::SpherePoint;

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Weights, tag and model-curvature convention for one reduction pipeline.
struct ReductionParams {
  int p = 1;
  int q = 1;
  SignatureTag tag = clifford::para_tag;
  double cbar = 4.0;             // model sectional curvature constant
  int cbar_sign_convention = -1; // +1: Remark convention; -1: printed (5.1)
  double singular_margin = 1e-6; // reject |n^2| below this (set S)
  double newton_tol = 1e-12;     // K0 projection tolerance
  int newton_max_iter = 50;
};

/// Throws invalid_params unless p,q >= 1, gcd(p,q) = 1, valid tag/convention.
void validate(const ReductionParams& params);

/// Action generator: j for the para pipeline, i for the quaternionic one.
Generator action_generator(const ReductionParams& params);

/// Signed model constant kappa = cbar_sign_convention * cbar.
inline double signed_cbar(const ReductionParams& params) {
  return params.cbar_sign_convention * params.cbar;
}

/// Point of K0 with its constraint residual and n^2 = |V_u|^2 attached.
struct PointOnK {
  SpherePoint u;
  double residual = 0.0;
  double n2 = 0.0;
};

/// Frame seed for the quotient: unit spacelike e in the h(.) subspace;
/// the pseudo-orthonormal frame (e, J1 e, J2 e, J3 e) is derived from it.
struct QuotientFrame {
  PointOnK base;
  HorizontalVector e;
};

/// phi_t(u) = (e^{gen q t} u0, e^{gen p t} u1, e^{gen p t} u2).
AmbientVector action_phi(const ReductionParams& params, double t,
                         const AmbientVector& u);

/// (i,j,k) components of q conj(u0) gen u0 + p conj(u1) gen u1 + p conj(u2) gen u2.
std::array<double, 3> constraint(const ReductionParams& params,
                                 const AmbientVector& u);

/// Directional derivative of `constraint` at u along T.
std::array<double, 3> constraint_derivative(const ReductionParams& params,
                                            const AmbientVector& u,
                                            const AmbientVector& T);

/// n^2 = q^2 |u0|^2 + p^2 |u1|^2 + p^2 |u2|^2 (clifford square norms).
double n2_of(const ReductionParams& params, const AmbientVector& u);

/**
 * Newton projection onto K0: corrections along the three normal directions
 * J_alpha V plus sphere renormalization. Fails with projection_failure after
 * newton_max_iter iterations, singular_set if |n^2| ends inside the margin.
 */
PointOnK project_to_K0(const ReductionParams& params, const AmbientVector& u);

/// Killing field V_u: pi-horizontal part of gen (q u0, p u1, p u2).
HorizontalVector killing_V(const ReductionParams& params, const PointOnK& pt);

/// Lambda X: pi-horizontal part of gen (q x0, p x1, p x2); skew-symmetric.
HorizontalVector lambda_op(const ReductionParams& params, const PointOnK& pt,
                           const HorizontalVector& X);

/// Projection onto the h(.) subspace: horizontal and g-orthogonal to
/// V, J1 V, J2 V, J3 V.
HorizontalVector project_to_h(const ReductionParams& params,
                              const PointOnK& pt, const AmbientVector& X);

/// B(X,Y) = -(1/n^2) sum_i eps_i <Y, J_i Lambda X> J_i V; normal-valued,
/// symmetric.
AmbientVector second_fundamental_form(const ReductionParams& params,
                                      const PointOnK& pt,
                                      const HorizontalVector& X,
                                      const HorizontalVector& Y);

/// Gauss-equation sectional curvature of K0 (submanifold of the model).
double sectional_K0(const ReductionParams& params, const PointOnK& pt,
                    const HorizontalVector& X, const HorizontalVector& Y);

/// O'Neill sectional curvature of the reduced quotient on the plane (X,Y).
double sectional_quotient(const ReductionParams& params, const PointOnK& pt,
                          const HorizontalVector& X, const HorizontalVector& Y);

/// (a,b,c) = (<X, J1 Lambda X>, <X, J2 Lambda X>, <X, J3 Lambda X>).
std::array<double, 3> abc_coeffs(const ReductionParams& params,
                                 const PointOnK& pt, const HorizontalVector& X);

/**
 * Matrix of the Jacobi operator K_X on span(J1 X, J2 X, J3 X) for unit
 * spacelike X in h(.). Self-adjoint w.r.t. the basis Gram diag(+1,-1,-1);
 * equals kappa*I when a=b=c=0.
 */
Mat3 jacobi_matrix(const ReductionParams& params, const PointOnK& pt,
                   const HorizontalVector& X);

/// Jacobi spectrum with the degenerate pair first and the trace combination.
struct Spectrum {
  double l1 = 0.0;  // = l2
  double l2 = 0.0;
  double l3 = 0.0;  // the simple eigenvalue
  double trace_combo = 0.0;  // l3 + 2 l1 = 3 kappa

  std::array<double, 3> sorted() const;
};

/**
 * Closed-form spectrum at a point with the given n^2:
 * l1 = l2 = -2A + kappa, l3 = 4A + kappa with A = p^4 q^2 / (n^2)^3.
 * Under the default convention (kappa = -cbar) this is the printed
 * eigenvalue family; cbar_sign_convention = +1 selects the Remark form.
 */
Spectrum closed_form_spectrum(const ReductionParams& params, double n2);

/// Eigenvalues of jacobi_matrix (generalized problem w.r.t. diag(1,-1,-1))
/// plus a diagonalizability witness.
struct MatrixSpectrum {
  std::array<double, 3> eigs{};       // sorted ascending
  double max_imag = 0.0;              // residual imaginary part
  double eigvec_condition = 0.0;      // condition number of the eigenbasis
};
MatrixSpectrum matrix_spectrum(const ReductionParams& params,
                               const PointOnK& pt, const HorizontalVector& X);

/**
 * sample_sphere_point composed with project_to_K0, rejecting points whose
 * |n^2| is inside the conditioning margin (default 1e-3; the FD stencil
 * inherits the curvature's n^-6 blow-up near the singular set).
 */
PointOnK sample_point_on_K(const ReductionParams& params, std::uint64_t seed);

/// Conditioning margin used by the sampler (stricter than singular_margin).
inline constexpr double sampler_n2_margin = 1e-3;

/// Largest Euclidean square norm the sampler accepts for a point of K.
/// On the indefinite unit sphere this bounds the boost of the representative,
/// and with it the cancellation error of quadratic expressions at the point.
inline constexpr double sampler_boost_cap = 40.0;

/**
 * Tame frame for charts: e spans the Euclid-balanced most-spacelike
 * direction of the g-orthocomplement h of the eight vertical directions
 * (u, ui, uj, uk, V, J1 V, J2 V, J3 V). (e, J1 e, J2 e, J3 e) is exactly
 * pseudo-orthonormal with signs (+,+,-,-) in the para tag.
 */
QuotientFrame make_quotient_frame(const ReductionParams& params,
                                  const PointOnK& pt);

/// Frame vectors (e, J1 e, J2 e, J3 e) of a quotient frame.
std::array<AmbientVector, 4> frame_vectors(const QuotientFrame& frame);

/// Unit spacelike direction in h(.) drawn from the frame with a seeded RNG.
HorizontalVector sample_h_direction(const ReductionParams& params,
                                    const QuotientFrame& frame,
                                    std::uint64_t seed);

/**
 * Free-action witness: smallest residual || phi_t(u) - u h || over unit h
 * solving the largest-|component| equation. Bounded away from zero when
 * phi_t(u) is not of the form u h (the action does not factor through right
 * translations).
 */
double free_action_residual(const ReductionParams& params, const PointOnK& pt,
                            double t);

}  // namespace pqr::reduction
