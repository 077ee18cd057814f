#include "pqr/clifford.hpp"

#include <cmath>

namespace pqr::clifford {

GenQuaternion mul(const GenQuaternion& a, const GenQuaternion& b) {
  if (!(a.tag == b.tag))
    fail(errc::invalid_params, "generalized quaternion tag mismatch");
  const double e1 = a.tag.eps1, e2 = a.tag.eps2, e3 = a.tag.eps3();
  // Generator table: ii=-e1, jj=-e2, kk=-e3, ij=k=-ji, jk=e2*i, ki=e1*j.
  return {
      a.x * b.x - e1 * a.y * b.y - e2 * a.z * b.z - e3 * a.w * b.w,
      a.x * b.y + a.y * b.x + e2 * (a.z * b.w - a.w * b.z),
      a.x * b.z + a.z * b.x - e1 * (a.y * b.w - a.w * b.y),
      a.x * b.w + a.w * b.x + (a.y * b.z - a.z * b.y),
      a.tag};
}

GenQuaternion inverse(const GenQuaternion& a) {
  const double n = sqnorm(a);
  if (std::abs(n) <= null_tolerance)
    fail(errc::singular_element,
         "cannot invert a null generalized quaternion (|sqnorm| <= 1e-9)");
  return conj(a) * (1.0 / n);
}

GenQuaternion exp_generator(Generator g, double t, SignatureTag tag) {
  validate_tag(tag);
  // gen^2 = -eps for the matching sign; elliptic when eps=+1, hyperbolic
  // when eps=-1 (e.g. e^{jt} = cosh t + j sinh t in the para tag).
  const int eps = tag.signs()[static_cast<int>(g) - 1];
  GenQuaternion r = unit(g, tag);
  if (eps > 0) {
    r *= std::sin(t);
    r.x = std::cos(t);
  } else {
    r *= std::sinh(t);
    r.x = std::cosh(t);
  }
  return r;
}

}  // namespace pqr::clifford
