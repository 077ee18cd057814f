#pragma once
/**
 * The ambient module space and the projective-plane model.
 *
 * AmbientVector is a triple of generalized quaternions carrying the real
 * inner product g(u,v) = Re(conj(u0) v0 + conj(u1) v1 + conj(u2) v2)
 * (signature (6,6) in the para tag). The pseudo-sphere {g(u,u)=1} submerses
 * onto the projective plane; all computation stays upstairs on horizontal
 * lifts: vectors g-orthogonal to u, ui, uj, uk. The J_alpha structure acts
 * by right multiplication with the generators, and model_sectional evaluates
 * the model plane curvature scaled by cbar/4.
 */

#include <array>
#include <cstdint>
#include <span>

#include "pqr/clifford.hpp"

namespace pqr::projplane {

using clifford::GenQuaternion;
using clifford::Generator;
using clifford::SignatureTag;

/// Triple (u0, u1, u2) over one tag; a point of or tangent vector to H~^3.
struct AmbientVector {
  std::array<GenQuaternion, 3> c;

  SignatureTag tag() const { return c[0].tag; }

  AmbientVector& operator+=(const AmbientVector& o) {
    for (int a = 0; a < 3; ++a) c[a] += o.c[a];
    return *this;
  }
  AmbientVector& operator-=(const AmbientVector& o) {
    for (int a = 0; a < 3; ++a) c[a] -= o.c[a];
    return *this;
  }
  AmbientVector& operator*=(double s) {
    for (int a = 0; a < 3; ++a) c[a] *= s;
    return *this;
  }
};

inline AmbientVector operator+(AmbientVector a, const AmbientVector& b) {
  return a += b;
}
inline AmbientVector operator-(AmbientVector a, const AmbientVector& b) {
  return a -= b;
}
inline AmbientVector operator*(AmbientVector a, double s) { return a *= s; }
inline AmbientVector operator*(double s, AmbientVector a) { return a *= s; }
inline AmbientVector operator-(AmbientVector a) { return a *= -1.0; }

/// Zero vector with every component carrying `tag`.
AmbientVector zero_ambient(SignatureTag tag);

/// g(u,v) = Re(conj(u)·v) summed over components; symmetric and bilinear.
double ambient_inner(const AmbientVector& u, const AmbientVector& v);

/// Componentwise right multiplication (u0 q, u1 q, u2 q).
AmbientVector right_mul(const AmbientVector& u, const GenQuaternion& q);

/// Componentwise weighted left multiplication (w0 q u0, w1 q u1, w2 q u2).
AmbientVector left_mul_weighted(const GenQuaternion& q,
                                const std::array<double, 3>& w,
                                const AmbientVector& u);

/**
 * X minus its g-orthogonal projection onto span(basis), via the Gram solve.
 * Degenerate Gram matrices raise degenerate_plane (the span's inner product
 * must be nondegenerate for the projection to exist).
 */
AmbientVector project_off_span(const AmbientVector& X,
                               std::span<const AmbientVector> basis);

/// Point of the pseudo-sphere: |g(u,u) - 1| <= 1e-10.
struct SpherePoint {
  AmbientVector u;
};

/// Validating factory; normalizes offsets within 1e-6, else invalid_params.
SpherePoint make_sphere_point(const AmbientVector& u);

/// Vertical space basis at u: (u, ui, uj, uk) — fiber + sphere normal.
std::array<AmbientVector, 4> vertical_basis(const SpherePoint& p);

/**
 * Seeded random point with g(u,u) = 1. Rejection-samples Gaussian draws
 * whose ambient norm is too close to null to normalize stably; fails with
 * sampling_failure after 10^4 rejections.
 */
SpherePoint sample_sphere_point(std::uint64_t seed, SignatureTag tag);

/// Horizontal lift at a base point: g-orthogonal to u, ui, uj, uk.
struct HorizontalVector {
  SpherePoint base;
  AmbientVector X;
};

/// g-orthogonal projection of X onto the horizontal space at p.
HorizontalVector project_pi_horizontal(const SpherePoint& p,
                                       const AmbientVector& X);

/// Largest | <X, b> | over the vertical basis b — 0 iff X is horizontal.
double horizontality_residual(const SpherePoint& p, const AmbientVector& X);

/**
 * J_alpha X: right multiplication of the lift by the alpha-th generator
 * (alpha in 1..3). Right multiplication commutes with the left structure, so
 * the output is horizontal exactly (no re-projection is performed).
 */
HorizontalVector apply_J(const HorizontalVector& h, int alpha);

/**
 * Model sectional curvature of the plane (X, Y), scaled by cbar/4:
 * (cbar/4) * (1 + 3 <Pr X, Pr X> / <X, X>) where Pr is the g-orthogonal
 * projection onto span(Y, J1 Y, J2 Y, J3 Y). Requires a pseudo-orthonormal
 * pair (|<X,X>| = |<Y,Y>| = 1, <X,Y> = 0) spanning a nondegenerate plane.
 */
double model_sectional(const SpherePoint& p, const HorizontalVector& X,
                       const HorizontalVector& Y, double cbar);

}  // namespace pqr::projplane
