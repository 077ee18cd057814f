#include "pqr/orbifold.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pqr/curvlab.hpp"
#include "pqr/error.hpp"
#include "pqr/rng.hpp"

namespace pqr::orbifold {

void validate(const GLParams& params) {
  if (params.p < 1 || params.q < 1)
    fail(errc::invalid_params, "weights p, q must be positive integers");
  if (std::gcd(params.p, params.q) != 1)
    fail(errc::invalid_params, "weights p, q must be coprime");
}

reduction::Spectrum gl_spectrum(const GLParams& params, double V2) {
  validate(params);
  if (!(V2 > 0.0))
    fail(errc::invalid_params, "squared Killing norm must be positive");
  const double p = params.p, q = params.q;
  const double A = p * p * p * p * q * q / (V2 * V2 * V2);
  reduction::Spectrum s;
  s.l1 = 2.0 * A - 4.0;
  s.l2 = s.l1;
  s.l3 = -4.0 * A - 4.0;
  s.trace_combo = s.l3 + 2.0 * s.l1;
  return s;
}

std::pair<double, double> gl_sectional_bounds(const GLParams& params) {
  validate(params);
  const double p = params.p, q = params.q;
  if (params.p <= params.q) {
    const double r = (q * q) / (p * p);
    return {4.0 - 2.0 * r, 4.0 + 4.0 * r};
  }
  const double r = (p * p * p * p) / (q * q * q * q);
  return {4.0 - 2.0 * r, 4.0 + 4.0 * r};
}

bool positivity_predicate(const GLParams& params) {
  validate(params);
  const double p2 = static_cast<double>(params.p) * params.p;
  const double q2 = static_cast<double>(params.q) * params.q;
  return p2 < std::sqrt(2.0) * q2 && q2 < 2.0 * p2;
}

std::pair<double, double> pinching_bounds(const GLParams& params) {
  if (!positivity_predicate(params))
    fail(errc::invalid_params,
         "pinching bounds require the positive-curvature regime");
  const double p2 = static_cast<double>(params.p) * params.p;
  const double q2 = static_cast<double>(params.q) * params.q;
  const double p4 = p2 * p2, q4 = q2 * q2;
  if (params.p <= params.q)
    return {0.25 - 0.75 * (q2 - p2) / (p2 + q2),
            0.25 + 0.75 * (q4 - p4) / (p4 + q4)};
  return {0.25 - 0.75 * (p4 - q4) / (p4 + q4),
          0.25 + 0.75 * (p2 - q2) / (p2 + q2)};
}

GLCrosscheckReport gl_numeric_crosscheck(const GLParams& params, int npoints,
                                         std::uint64_t seed) {
  validate(params);
  if (npoints < 1) fail(errc::invalid_params, "need at least one sample point");

  reduction::ReductionParams rp;
  rp.p = params.p;
  rp.q = params.q;
  rp.tag = clifford::quat_tag;

  GLCrosscheckReport rep;
  rep.params = params;
  rep.bounds = gl_sectional_bounds(params);
  rep.points.reserve(npoints);

  const double lo2 = static_cast<double>(std::min(params.p, params.q)) *
                     std::min(params.p, params.q);
  const double hi2 = static_cast<double>(std::max(params.p, params.q)) *
                     std::max(params.p, params.q);
  constexpr int ndirs = 6;  // closed-form sectional planes per point

  double l3_min = 0.0, l3_max = 0.0;
  bool all_ok = true;
  for (int idx = 0; idx < npoints; ++idx) {
    const std::uint64_t pseed = substream_seed(seed, idx);
    const reduction::PointOnK pt = reduction::sample_point_on_K(rp, pseed);
    GLPointCheck rec;
    rec.n2 = pt.n2;
    const auto V = reduction::killing_V(rp, pt);
    rec.killing_norm = projplane::ambient_inner(V.X, V.X);
    rec.norm_in_range =
        std::abs(rec.killing_norm - rec.n2) <= rep.norm_tol &&
        rec.killing_norm >= lo2 - rep.norm_tol &&
        rec.killing_norm <= hi2 + rep.norm_tol;

    const reduction::Spectrum cs = gl_spectrum(params, pt.n2);
    rec.closed = cs.sorted();
    if (idx == 0) l3_min = l3_max = cs.l3;
    l3_min = std::min(l3_min, cs.l3);
    l3_max = std::max(l3_max, cs.l3);

    const auto frame = reduction::make_quotient_frame(rp, pt);
    const auto chart = curvlab::build_chart(rp, pt, frame, curvlab::default_chart_radius,
                                        curvlab::default_riemann_step);
    const auto ct = curvlab::riemann_fd(chart);
    rec.fd = curvlab::fd_jacobi_spectrum(ct, {1.0, 0.0, 0.0, 0.0}).eigs;
    rec.fd_rel_err = 0.0;
    for (int k = 0; k < 3; ++k)
      rec.fd_rel_err = std::max(
          rec.fd_rel_err, std::abs(rec.fd[k] - rec.closed[k]) /
                              std::max(1.0, std::abs(rec.closed[k])));

    // Sectional samples: seeded closed-form planes plus the FD coordinate
    // planes of the chart (both live on the same quotient).
    bool first = true;
    auto record = [&](double K) {
      if (first || K < rec.sect_min) rec.sect_min = K;
      if (first || K > rec.sect_max) rec.sect_max = K;
      first = false;
    };
    for (int d = 0; d < ndirs; ++d) {
      const auto X = reduction::sample_h_direction(
          rp, frame, substream_seed(pseed, 2 * d + 1));
      const auto Y = reduction::sample_h_direction(
          rp, frame, substream_seed(pseed, 2 * d + 2));
      try {
        record(reduction::sectional_quotient(rp, pt, X, Y));
      } catch (const error&) {
        // a nearly-parallel draw: skip the degenerate plane
      }
    }
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        curvlab::Vec4 X{}, Y{};
        X[a] = 1.0;
        Y[b] = 1.0;
        record(curvlab::fd_sectional(ct, X, Y));
      }
    rec.sect_in_bounds = rec.sect_min >= rep.bounds.first - rep.sect_tol &&
                         rec.sect_max <= rep.bounds.second + rep.sect_tol;

    all_ok = all_ok && rec.norm_in_range && rec.fd_rel_err <= rep.fd_tol &&
             rec.sect_in_bounds;
    rep.points.push_back(rec);
  }
  rep.lambda3_spread = l3_max - l3_min;
  rep.pass = all_ok;
  return rep;
}

}  // namespace pqr::orbifold
