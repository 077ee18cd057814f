#include "pqr/projplane.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "pqr/rng.hpp"

namespace pqr::projplane {

AmbientVector zero_ambient(SignatureTag tag) {
  GenQuaternion z{0.0, 0.0, 0.0, 0.0, tag};
  return {{z, z, z}};
}

double ambient_inner(const AmbientVector& u, const AmbientVector& v) {
  double s = 0.0;
  for (int a = 0; a < 3; ++a) s += re(mul(conj(u.c[a]), v.c[a]));
  return s;
}

AmbientVector right_mul(const AmbientVector& u, const GenQuaternion& q) {
  return {{mul(u.c[0], q), mul(u.c[1], q), mul(u.c[2], q)}};
}

AmbientVector left_mul_weighted(const GenQuaternion& q,
                                const std::array<double, 3>& w,
                                const AmbientVector& u) {
  return {{mul(q, u.c[0]) * w[0], mul(q, u.c[1]) * w[1], mul(q, u.c[2]) * w[2]}};
}

AmbientVector project_off_span(const AmbientVector& X,
                               std::span<const AmbientVector> basis) {
  const int n = static_cast<int>(basis.size());
  Eigen::MatrixXd G(n, n);
  Eigen::VectorXd rhs(n);
  for (int a = 0; a < n; ++a) {
    rhs(a) = ambient_inner(basis[a], X);
    for (int b = 0; b < n; ++b) G(a, b) = ambient_inner(basis[a], basis[b]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
  lu.setThreshold(1e-9);
  if (!lu.isInvertible())
    fail(errc::degenerate_plane,
         "projection span has a degenerate induced inner product");
  const Eigen::VectorXd coef = lu.solve(rhs);
  AmbientVector Y = X;
  for (int a = 0; a < n; ++a) Y -= coef(a) * basis[a];
  return Y;
}

SpherePoint make_sphere_point(const AmbientVector& u) {
  const double n = ambient_inner(u, u);
  if (std::abs(n - 1.0) > 1e-6)
    fail(errc::invalid_params, "ambient vector is not on the pseudo-sphere");
  if (std::abs(n - 1.0) <= 1e-10) return SpherePoint{u};
  return SpherePoint{u * (1.0 / std::sqrt(n))};
}

std::array<AmbientVector, 4> vertical_basis(const SpherePoint& p) {
  const SignatureTag t = p.u.tag();
  return {p.u, right_mul(p.u, unit(Generator::i, t)),
          right_mul(p.u, unit(Generator::j, t)),
          right_mul(p.u, unit(Generator::k, t))};
}

SpherePoint sample_sphere_point(std::uint64_t seed, SignatureTag tag) {
  clifford::validate_tag(tag);
  Rng rng(seed);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    AmbientVector u = zero_ambient(tag);
    double e2 = 0.0;
    for (auto& comp : u.c) {
      comp = {rng.gauss(), rng.gauss(), rng.gauss(), rng.gauss(), tag};
      e2 += comp.x * comp.x + comp.y * comp.y + comp.z * comp.z +
            comp.w * comp.w;
    }
    // Indefinite norm: require a positive value that is also a bounded
    // fraction of the Euclidean size. Draws near the null cone normalize to
    // boosted representatives whose large components lose digits to
    // cancellation in every quadratic expression downstream.
    const double n = ambient_inner(u, u);
    if (n < 0.3 * e2) continue;
    return SpherePoint{u * (1.0 / std::sqrt(n))};
  }
  fail(errc::sampling_failure, "sphere sampler exhausted 10^4 rejections");
}

HorizontalVector project_pi_horizontal(const SpherePoint& p,
                                       const AmbientVector& X) {
  const auto vb = vertical_basis(p);
  return {p, project_off_span(X, vb)};
}

double horizontality_residual(const SpherePoint& p, const AmbientVector& X) {
  double r = 0.0;
  for (const auto& b : vertical_basis(p))
    r = std::max(r, std::abs(ambient_inner(b, X)));
  return r;
}

HorizontalVector apply_J(const HorizontalVector& h, int alpha) {
  if (alpha < 1 || alpha > 3)
    fail(errc::invalid_params, "J index must be 1, 2 or 3");
  return {h.base,
          right_mul(h.X, unit(static_cast<Generator>(alpha), h.X.tag()))};
}

double model_sectional([[maybe_unused]] const SpherePoint& p,
                       const HorizontalVector& X, const HorizontalVector& Y,
                       double cbar) {
  const double xx = ambient_inner(X.X, X.X);
  const double yy = ambient_inner(Y.X, Y.X);
  const double xy = ambient_inner(X.X, Y.X);
  if (std::abs(std::abs(xx) - 1.0) > 1e-8 ||
      std::abs(std::abs(yy) - 1.0) > 1e-8 || std::abs(xy) > 1e-8)
    fail(errc::invalid_params,
         "model_sectional requires a pseudo-orthonormal pair");
  const double Q = xx * yy - xy * xy;
  if (std::abs(Q) < 1e-9)
    fail(errc::degenerate_plane, "plane (X,Y) is degenerate");
  // Projection of X onto span(Y, J1 Y, J2 Y, J3 Y) via the Gram solve; the
  // span's Gram is (+/-1) diagonal up to J-signs, never degenerate here.
  std::array<AmbientVector, 4> span{Y.X, apply_J(Y, 1).X, apply_J(Y, 2).X,
                                    apply_J(Y, 3).X};
  const AmbientVector rest = project_off_span(X.X, span);
  const AmbientVector pr = X.X - rest;
  return (cbar / 4.0) * (1.0 + 3.0 * ambient_inner(pr, pr) / xx);
}

}  // namespace pqr::projplane
