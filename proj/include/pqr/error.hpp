#pragma once
/**
 * Error taxonomy shared by every module.
 *
 * Numeric geometry fails in structured ways (null elements, singular sets,
 * degenerate planes, non-converging projections); each failure mode gets a
 * stable code so the C API can translate exceptions into status values
 * without string matching.
 */

#include <stdexcept>
#include <string>

namespace pqr {

enum class errc {
  ok = 0,
  invalid_params,      // bad arguments: tag mismatch, gcd(p,q) != 1, ...
  singular_element,    // algebra element with |sqnorm| below the null tolerance
  singular_set,        // |n^2| inside the configured margin (metric degenerates)
  degenerate_plane,    // sectional curvature of a plane with Q(X,Y) ~ 0
  projection_failure,  // Newton projection onto K0 did not converge
  sampling_failure,    // rejection sampler exhausted its retry budget
  chart_failure,       // FD stencil left the chart's convergence region
  numeric_failure,     // ill-conditioned linear algebra (e.g. cond(g) > 1e8)
  io_failure,          // report serialization / file output
};

/// Exception carrying an errc; the C API maps these to pqr_status values.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw error(code, what);
}

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::ok: return "ok";
    case errc::invalid_params: return "invalid_params";
    case errc::singular_element: return "singular_element";
    case errc::singular_set: return "singular_set";
    case errc::degenerate_plane: return "degenerate_plane";
    case errc::projection_failure: return "projection_failure";
    case errc::sampling_failure: return "sampling_failure";
    case errc::chart_failure: return "chart_failure";
    case errc::numeric_failure: return "numeric_failure";
    case errc::io_failure: return "io_failure";
  }
  return "unknown";
}

}  // namespace pqr
