#pragma once
/**
 * Generalized quaternions C(eps1, eps2).
 *
 * Generators satisfy i^2 = -eps1, j^2 = -eps2, k^2 = -eps3 with
 * eps3 = eps1*eps2 and ij = k = -ji. The tag (1,1) gives the quaternions H,
 * (1,-1) the para-quaternions H~ (which have zero divisors and an indefinite
 * square norm of signature (2,2)). One generic implementation covers both so
 * the para and quaternionic pipelines share a single code path.
 */

#include <array>
#include <cmath>

#include "pqr/error.hpp"

namespace pqr::clifford {

/// Signature (eps1, eps2) with eps3 forced to eps1*eps2 by k = ij.
struct SignatureTag {
  int eps1 = 1;
  int eps2 = 1;

  constexpr int eps3() const { return eps1 * eps2; }
  constexpr bool operator==(const SignatureTag&) const = default;

  /// Signs (eps1, eps2, eps3) as an array, indexed 0..2 for (i, j, k).
  constexpr std::array<int, 3> signs() const { return {eps1, eps2, eps3()}; }
};

inline constexpr SignatureTag para_tag{1, -1};  // i^2=-1, j^2=+1, k^2=+1
inline constexpr SignatureTag quat_tag{1, 1};   // classical quaternions

inline void validate_tag(const SignatureTag& t) {
  if ((t.eps1 != 1 && t.eps1 != -1) || (t.eps2 != 1 && t.eps2 != -1))
    fail(errc::invalid_params, "signature tag entries must be +1 or -1");
}

enum class Generator { i = 1, j = 2, k = 3 };

/// Coefficients (x, y, z, w) of 1, i, j, k plus the signature tag.
struct GenQuaternion {
  double x = 0.0, y = 0.0, z = 0.0, w = 0.0;
  SignatureTag tag;

  constexpr GenQuaternion() = default;
  constexpr GenQuaternion(double x_, double y_, double z_, double w_,
                          SignatureTag t)
      : x(x_), y(y_), z(z_), w(w_), tag(t) {}

  GenQuaternion& operator+=(const GenQuaternion& o) {
    x += o.x; y += o.y; z += o.z; w += o.w;
    return *this;
  }
  GenQuaternion& operator-=(const GenQuaternion& o) {
    x -= o.x; y -= o.y; z -= o.z; w -= o.w;
    return *this;
  }
  GenQuaternion& operator*=(double s) {
    x *= s; y *= s; z *= s; w *= s;
    return *this;
  }
};

inline GenQuaternion one(SignatureTag t) { return {1.0, 0.0, 0.0, 0.0, t}; }

inline GenQuaternion unit(Generator g, SignatureTag t) {
  switch (g) {
    case Generator::i: return {0.0, 1.0, 0.0, 0.0, t};
    case Generator::j: return {0.0, 0.0, 1.0, 0.0, t};
    case Generator::k: return {0.0, 0.0, 0.0, 1.0, t};
  }
  fail(errc::invalid_params, "unknown generator");
}

inline GenQuaternion operator+(GenQuaternion a, const GenQuaternion& b) {
  return a += b;
}
inline GenQuaternion operator-(GenQuaternion a, const GenQuaternion& b) {
  return a -= b;
}
inline GenQuaternion operator*(GenQuaternion a, double s) { return a *= s; }
inline GenQuaternion operator*(double s, GenQuaternion a) { return a *= s; }
inline GenQuaternion operator-(GenQuaternion a) { return a *= -1.0; }

/// Product in C(eps1,eps2); both operands must carry the same tag.
GenQuaternion mul(const GenQuaternion& a, const GenQuaternion& b);

inline GenQuaternion operator*(const GenQuaternion& a, const GenQuaternion& b) {
  return mul(a, b);
}

/// Conjugation x + yi + zj + wk -> x - yi - zj - wk (anti-automorphism).
inline GenQuaternion conj(const GenQuaternion& a) {
  return {a.x, -a.y, -a.z, -a.w, a.tag};
}

inline double re(const GenQuaternion& a) { return a.x; }

inline GenQuaternion im(const GenQuaternion& a) {
  return {0.0, a.y, a.z, a.w, a.tag};
}

/// Square norm |a|^2 = x^2 + eps1 y^2 + eps2 z^2 + eps3 w^2 = Re(a conj(a)).
inline double sqnorm(const GenQuaternion& a) {
  return a.x * a.x + a.tag.eps1 * a.y * a.y + a.tag.eps2 * a.z * a.z +
         a.tag.eps3() * a.w * a.w;
}

/// Tolerance below which |sqnorm| counts as a genuine zero divisor.
inline constexpr double null_tolerance = 1e-9;

/// Multiplicative inverse; |sqnorm| <= null_tolerance is a singular element.
GenQuaternion inverse(const GenQuaternion& a);

/**
 * exp(gen * t): cos t + gen sin t when gen^2 = -1 under the tag,
 * cosh t + gen sinh t when gen^2 = +1. Always a unit element.
 */
GenQuaternion exp_generator(Generator g, double t, SignatureTag tag);

}  // namespace pqr::clifford
