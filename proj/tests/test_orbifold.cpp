#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pqr/orbifold.hpp"

#include <cmath>
#include <numeric>

namespace {

using namespace pqr::orbifold;

GLParams gl(int p, int q) {
  GLParams params;
  params.p = p;
  params.q = q;
  return params;
}

pqr::errc code_of(const auto& fn) {
  try {
    fn();
  } catch (const pqr::error& e) {
    return e.code();
  }
  return pqr::errc::ok;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(validate(gl(1, 1)));
  CHECK_NOTHROW(validate(gl(3, 4)));
  CHECK(code_of([] { validate(gl(2, 4)); }) == pqr::errc::invalid_params);
  CHECK(code_of([] { validate(gl(0, 1)); }) == pqr::errc::invalid_params);
}

TEST_CASE("closed-form spectrum and its trace combination") {
  const auto s = gl_spectrum(gl(1, 1), 1.0);
  CHECK(s.l1 == -2.0);
  CHECK(s.l2 == -2.0);
  CHECK(s.l3 == -8.0);
  CHECK(s.trace_combo == -12.0);

  // l3 + 2 l1 = -12 identically; the degenerate pair stays above the
  // simple eigenvalue (their gap is 6 p^4 q^2 / V2^3 > 0).
  for (auto params : {gl(1, 1), gl(1, 2), gl(3, 4), gl(5, 2)}) {
    for (double V2 : {0.5, 1.0, 2.0, 4.0, 9.0}) {
      const auto sp = gl_spectrum(params, V2);
      CHECK(std::abs(sp.l3 + 2.0 * sp.l1 + 12.0) <= 1e-10);
      CHECK(sp.l1 == sp.l2);
      CHECK(sp.l1 > sp.l3);
    }
  }

  CHECK(code_of([] { gl_spectrum(gl(1, 1), 0.0); }) ==
        pqr::errc::invalid_params);
  CHECK(code_of([] { gl_spectrum(gl(1, 1), -1.0); }) ==
        pqr::errc::invalid_params);
}

TEST_CASE("sectional bounds per weight branch") {
  const auto b11 = gl_sectional_bounds(gl(1, 1));
  CHECK(b11.first == 2.0);
  CHECK(b11.second == 8.0);

  const auto b12 = gl_sectional_bounds(gl(1, 2));  // p <= q branch
  CHECK(b12.first == -4.0);
  CHECK(b12.second == 20.0);

  const auto b21 = gl_sectional_bounds(gl(2, 1));  // p >= q branch
  CHECK(b21.first == -28.0);
  CHECK(b21.second == 68.0);

  // Both printed branches evaluate to the same numbers when p = q.
  const double r = 1.0;  // q^2/p^2 = p^4/q^4 = 1
  CHECK(b11.first == 4.0 - 2.0 * r);
  CHECK(b11.second == 4.0 + 4.0 * r);
}

TEST_CASE("positivity region") {
  CHECK(positivity_predicate(gl(1, 1)));
  CHECK_FALSE(positivity_predicate(gl(2, 3)));  // q^2 = 9 >= 2 p^2 = 8
  CHECK(positivity_predicate(gl(3, 4)));

  // Agreement with the printed strict inequality p^2 < sqrt(2) q^2 < 2 sqrt(2) p^2
  // over every coprime pair up to 12.
  for (int p = 1; p <= 12; ++p) {
    for (int q = 1; q <= 12; ++q) {
      if (std::gcd(p, q) != 1) continue;
      const double p2 = double(p) * p, q2 = double(q) * q;
      const bool printed = p2 < std::sqrt(2.0) * q2 &&
                           std::sqrt(2.0) * q2 < 2.0 * std::sqrt(2.0) * p2;
      CHECK(positivity_predicate(gl(p, q)) == printed);
    }
  }
}

TEST_CASE("pinching bounds on the positive regime") {
  const auto k11 = pinching_bounds(gl(1, 1));
  CHECK(k11.first == 0.25);
  CHECK(k11.second == 0.25);

  const auto k34 = pinching_bounds(gl(3, 4));
  CHECK(std::abs(k34.first - 0.04) <= 1e-15);
  CHECK(std::abs(k34.second - (0.25 + 0.75 * 175.0 / 337.0)) <= 1e-15);

  // Outside the positivity region the constants are undefined.
  CHECK(code_of([] { pinching_bounds(gl(2, 3)); }) ==
        pqr::errc::invalid_params);

  // The window always brackets 1/4 and tightens as q/p -> 1.
  double prev_width = -1.0;
  for (auto params : {gl(2, 3), gl(3, 4), gl(4, 5), gl(5, 6)}) {
    if (!positivity_predicate(params)) continue;
    const auto [lo, hi] = pinching_bounds(params);
    CHECK(lo <= 0.25);
    CHECK(0.25 <= hi);
    if (prev_width >= 0.0) CHECK(hi - lo < prev_width);
    prev_width = hi - lo;
  }
  for (int p = 1; p <= 12; ++p)
    for (int q = 1; q <= 12; ++q) {
      if (std::gcd(p, q) != 1 || !positivity_predicate(gl(p, q))) continue;
      const auto [lo, hi] = pinching_bounds(gl(p, q));
      CHECK(lo <= 0.25);
      CHECK(0.25 <= hi);
      CHECK(lo > 0.0);  // positive regime: pinching constant is positive
    }
}

TEST_CASE("numeric crosscheck of the quaternionic pipeline") {
  const GLCrosscheckReport report = gl_numeric_crosscheck(gl(1, 2), 5, 1);
  CHECK(report.pass);
  CHECK(report.points.size() == 5);
  CHECK(report.bounds.first == -4.0);
  CHECK(report.bounds.second == 20.0);

  for (const auto& pc : report.points) {
    CHECK(pc.norm_in_range);
    // |Lambda u|^2 = <V,V> lands in [min(p,q)^2, max(p,q)^2].
    CHECK(pc.n2 >= 1.0 - 1e-9);
    CHECK(pc.n2 <= 4.0 + 1e-9);
    CHECK(std::abs(pc.killing_norm - pc.n2) <= 1e-9 * (1.0 + pc.n2));
    CHECK(pc.fd_rel_err <= report.fd_tol);
    CHECK(pc.sect_in_bounds);
    CHECK(pc.sect_min >= report.bounds.first - report.sect_tol);
    CHECK(pc.sect_max <= report.bounds.second + report.sect_tol);
  }

  CHECK(code_of([] { gl_numeric_crosscheck(gl(1, 2), 0, 1); }) ==
        pqr::errc::invalid_params);
}
