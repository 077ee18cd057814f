#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pqr/projplane.hpp"
#include "pqr/rng.hpp"

#include <array>
#include <cmath>
#include <cstdint>

namespace {

using namespace pqr::projplane;
using pqr::clifford::one;
using pqr::clifford::para_tag;
using pqr::clifford::quat_tag;
using pqr::clifford::sqnorm;
using pqr::clifford::unit;

AmbientVector basis_vector(int slot, const GenQuaternion& q) {
  AmbientVector u{{GenQuaternion{0, 0, 0, 0, q.tag},
                   GenQuaternion{0, 0, 0, 0, q.tag},
                   GenQuaternion{0, 0, 0, 0, q.tag}}};
  u.c[slot] = q;
  return u;
}

AmbientVector random_ambient(pqr::Rng& rng, SignatureTag tag) {
  AmbientVector u = zero_ambient(tag);
  for (auto& c : u.c)
    c = GenQuaternion{rng.gauss(), rng.gauss(), rng.gauss(), rng.gauss(), tag};
  return u;
}

double euclid_sq(const AmbientVector& u) {
  double s = 0.0;
  for (const auto& c : u.c)
    s += c.x * c.x + c.y * c.y + c.z * c.z + c.w * c.w;
  return s;
}

double dist(const AmbientVector& a, const AmbientVector& b) {
  double worst = 0.0;
  for (int s = 0; s < 3; ++s) {
    worst = std::max(worst, std::abs(a.c[s].x - b.c[s].x));
    worst = std::max(worst, std::abs(a.c[s].y - b.c[s].y));
    worst = std::max(worst, std::abs(a.c[s].z - b.c[s].z));
    worst = std::max(worst, std::abs(a.c[s].w - b.c[s].w));
  }
  return worst;
}

/// Random horizontal vector normalized to |<X,X>| = 1, rejecting near-null
/// draws (the indefinite metric makes them hopeless to normalize).
HorizontalVector unit_horizontal(const SpherePoint& p, pqr::Rng& rng) {
  for (int tries = 0; tries < 400; ++tries) {
    HorizontalVector h = project_pi_horizontal(p, random_ambient(rng, p.u.tag()));
    const double n = ambient_inner(h.X, h.X);
    if (std::abs(n) < std::max(0.1, 0.3 * euclid_sq(h.X))) continue;
    h.X *= 1.0 / std::sqrt(std::abs(n));
    return h;
  }
  FAIL("no unit horizontal vector found");
  return {};
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

TEST_CASE("ambient inner product basics") {
  const auto e0 = basis_vector(0, one(para_tag));
  CHECK(ambient_inner(e0, e0) == 1.0);

  // |j|^2 = -1 in the para tag: the ambient form is indefinite.
  const auto j0 = basis_vector(0, unit(Generator::j, para_tag));
  CHECK(ambient_inner(j0, j0) == -1.0);

  const auto i0 = basis_vector(0, unit(Generator::i, para_tag));
  CHECK(ambient_inner(e0, i0) == 0.0);

  // Symmetric and bilinear on random inputs.
  pqr::Rng rng(21);
  for (int n = 0; n < 50; ++n) {
    const auto u = random_ambient(rng, para_tag);
    const auto v = random_ambient(rng, para_tag);
    const auto w = random_ambient(rng, para_tag);
    CHECK(std::abs(ambient_inner(u, v) - ambient_inner(v, u)) < 1e-12);
    CHECK(std::abs(ambient_inner(u + w, v) - ambient_inner(u, v) -
                   ambient_inner(w, v)) < 1e-10);
  }
}

TEST_CASE("sphere sampler: determinism, constraint, indefiniteness") {
  for (auto tag : {para_tag, quat_tag}) {
    const auto a = sample_sphere_point(42, tag);
    const auto b = sample_sphere_point(42, tag);
    CHECK(dist(a.u, b.u) == 0.0);

    bool saw_negative = false;
    bool saw_positive = false;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto p = sample_sphere_point(seed, tag);
      CHECK(std::abs(ambient_inner(p.u, p.u) - 1.0) <= 1e-10);
      // Representatives stay Euclid-tame (the sampler rejects draws whose
      // g-norm is boosted away from the Euclidean one).
      CHECK(euclid_sq(p.u) <= 1.0 / 0.3 + 1e-9);
      for (const auto& c : p.u.c) {
        saw_negative = saw_negative || sqnorm(c) < -1e-6;
        saw_positive = saw_positive || sqnorm(c) > 1e-6;
      }
    }
    CHECK(saw_positive);
    if (tag == para_tag) CHECK(saw_negative);
  }
}

TEST_CASE("make_sphere_point validates and normalizes") {
  const auto e0 = basis_vector(0, one(para_tag));
  CHECK_NOTHROW(make_sphere_point(e0));
  // Offsets keeping |g(u,u) - 1| within 1e-6 are re-normalized...
  CHECK(std::abs(ambient_inner(make_sphere_point(e0 * (1.0 + 2e-7)).u, e0) -
                 1.0) < 1e-6);
  // ... larger ones are rejected rather than silently rescaled.
  CHECK(code_of([&] { make_sphere_point(e0 * 2.0); }) ==
        pqr::errc::invalid_params);
}

TEST_CASE("horizontal projection kills verticals and is idempotent") {
  pqr::Rng rng(31);
  for (auto tag : {para_tag, quat_tag}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto p = sample_sphere_point(seed, tag);

      // Vertical input u*j projects to zero.
      const auto uj = right_mul(p.u, unit(Generator::j, tag));
      CHECK(euclid_sq(project_pi_horizontal(p, uj).X) < 1e-20);

      const auto h = project_pi_horizontal(p, random_ambient(rng, tag));
      CHECK(horizontality_residual(p, h.X) <= 1e-10);
      // Idempotence: an already horizontal input passes through.
      CHECK(dist(project_pi_horizontal(p, h.X).X, h.X) <= 1e-12);
    }
  }
}

TEST_CASE("J relations per tag") {
  // Right multiplication reverses composition order, so the printed cyclic
  // relation J_a J_b = -eps_c J_c composes innermost-first for the split
  // algebra (g_a g_b = -eps_c g_c) and operator-order for the Hamilton
  // product (g_a g_b = g_c).
  for (auto tag : {para_tag, quat_tag}) {
    pqr::Rng rng(tag == para_tag ? 41 : 42);
    const auto signs = tag.signs();
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto p = sample_sphere_point(seed, tag);
      const auto h = project_pi_horizontal(p, random_ambient(rng, tag));

      for (int alpha = 1; alpha <= 3; ++alpha) {
        const auto twice = apply_J(apply_J(h, alpha), alpha);
        CHECK(dist(twice.X, -double(signs[alpha - 1]) * h.X) <= 1e-12);
        CHECK(horizontality_residual(p, apply_J(h, alpha).X) <= 1e-10);
      }
      for (int alpha = 1; alpha <= 3; ++alpha) {
        const int beta = alpha % 3 + 1;
        const int gamma = beta % 3 + 1;
        const auto composite = tag == para_tag
                                   ? apply_J(apply_J(h, alpha), beta)
                                   : apply_J(apply_J(h, beta), alpha);
        CHECK(dist(composite.X,
                   -double(signs[gamma - 1]) * apply_J(h, gamma).X) <= 1e-12);
      }
    }
  }
}

TEST_CASE("J isometry types") {
  for (auto tag : {para_tag, quat_tag}) {
    pqr::Rng rng(tag == para_tag ? 51 : 52);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const auto p = sample_sphere_point(seed, tag);
      const auto X = project_pi_horizontal(p, random_ambient(rng, tag));
      const auto Y = project_pi_horizontal(p, random_ambient(rng, tag));
      const double xy = ambient_inner(X.X, Y.X);
      for (int alpha = 1; alpha <= 3; ++alpha) {
        // J1 is an isometry; J2, J3 flip the sign of the metric exactly when
        // the tag sign eps_alpha is negative (para tag).
        const double expect = tag.signs()[alpha - 1] * xy;
        const double got =
            ambient_inner(apply_J(X, alpha).X, apply_J(Y, alpha).X);
        CHECK(std::abs(got - expect) <= 1e-12 * (1.0 + std::abs(xy)));
      }
    }
  }
}

TEST_CASE("submersion metric is representative-free") {
  pqr::Rng rng(61);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = sample_sphere_point(seed, para_tag);
    const auto X = project_pi_horizontal(p, random_ambient(rng, para_tag));
    const auto Y = project_pi_horizontal(p, random_ambient(rng, para_tag));

    // Another representative of the same projective point: u' = u h with a
    // unit h; horizontal lifts transport by the same right translation.
    const auto h = pqr::clifford::exp_generator(Generator::j,
                                                rng.uniform() - 0.5, para_tag) *
                   pqr::clifford::exp_generator(Generator::i,
                                                rng.uniform() - 0.5, para_tag);
    REQUIRE(std::abs(sqnorm(h) - 1.0) < 1e-12);
    const auto p2 = make_sphere_point(right_mul(p.u, h));
    const auto X2 = right_mul(X.X, h);
    const auto Y2 = right_mul(Y.X, h);

    CHECK(horizontality_residual(p2, X2) <= 1e-10);
    CHECK(std::abs(ambient_inner(X2, Y2) - ambient_inner(X.X, Y.X)) <= 1e-10);
  }
}

TEST_CASE("model sectional curvature on designated planes") {
  constexpr double cbar = 4.0;
  pqr::Rng rng(71);
  int definite_planes = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto p = sample_sphere_point(seed, para_tag);
    const auto Y = unit_horizontal(p, rng);

    // X inside the span: maximal curvature cbar, for both the isometric and
    // the anti-isometric member of the J-triple.
    CHECK(std::abs(model_sectional(p, apply_J(Y, 1), Y, cbar) - cbar) <= 1e-10);
    CHECK(std::abs(model_sectional(p, apply_J(Y, 2), Y, cbar) - cbar) <= 1e-10);

    // X orthogonal to span(Y, J1 Y, J2 Y, J3 Y): zero projection, cbar/4.
    const std::array<AmbientVector, 4> span{Y.X, apply_J(Y, 1).X,
                                            apply_J(Y, 2).X, apply_J(Y, 3).X};
    for (int tries = 0; tries < 400; ++tries) {
      const auto raw = project_pi_horizontal(p, random_ambient(rng, para_tag));
      AmbientVector rest = project_off_span(raw.X, span);
      const double n = ambient_inner(rest, rest);
      if (std::abs(n) < std::max(0.05, 0.3 * euclid_sq(rest))) continue;
      rest *= 1.0 / std::sqrt(std::abs(n));
      const HorizontalVector X{p, rest};
      const double k = model_sectional(p, X, Y, cbar);
      CHECK(std::abs(k - cbar / 4.0) <= 1e-9);
      // Symmetry in (X, Y) for definite planes.
      if (n * ambient_inner(Y.X, Y.X) > 0.0) {
        ++definite_planes;
        CHECK(std::abs(model_sectional(p, Y, X, cbar) - k) <= 1e-10);
      }
      break;
    }
  }
  CHECK(definite_planes > 5);
}

TEST_CASE("model sectional error paths") {
  pqr::Rng rng(81);
  const auto p = sample_sphere_point(3, para_tag);
  const auto Y = unit_horizontal(p, rng);

  // J1 Y + J2 Y is null in the para tag (norms +1 and -1 cancel): the
  // pseudo-orthonormality precondition rejects it.
  const HorizontalVector null_x{p, apply_J(Y, 1).X + apply_J(Y, 2).X};
  CHECK(std::abs(ambient_inner(null_x.X, null_x.X)) < 1e-9);
  CHECK(code_of([&] { model_sectional(p, null_x, Y, 4.0); }) ==
        pqr::errc::invalid_params);

  // Projection onto a null span direction has a singular Gram matrix.
  const auto null_q = one(para_tag) + unit(Generator::j, para_tag);
  const std::array<AmbientVector, 1> bad{basis_vector(0, null_q)};
  CHECK(code_of([&] {
          project_off_span(basis_vector(1, one(para_tag)), bad);
        }) == pqr::errc::degenerate_plane);
}

TEST_CASE("vertical basis spans the fiber directions") {
  const auto p = sample_sphere_point(9, para_tag);
  const auto verts = vertical_basis(p);
  CHECK(dist(verts[0], p.u) == 0.0);
  for (int a = 1; a < 4; ++a) {
    // u g_a for the three generators, in order.
    const auto expect =
        right_mul(p.u, unit(static_cast<Generator>(a), para_tag));
    CHECK(dist(verts[a], expect) == 0.0);
  }
}
