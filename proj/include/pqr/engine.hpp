#pragma once
/**
 * Verification engine: runs the full closed-form vs finite-difference suite
 * over seeded sample points, assembles deterministic reports, and renders
 * them as JSON (schema report.schema.json) or CSV with a fixed column order.
 *
 * Determinism contract: identical options produce byte-identical output,
 * independent of the worker count — every point derives its own substream
 * seed and reports are assembled in index order.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "pqr/curvlab.hpp"
#include "pqr/orbifold.hpp"
#include "pqr/reduction.hpp"

namespace pqr::engine {

inline constexpr const char* schema_version = "1";
inline constexpr const char* version_string = "1.0.0";

/// Per-check tolerances; every report entry echoes the one it was judged by.
struct Tolerances {
  double closed = 1e-9;    // closed-form identities (matrix path, spreads)
  double fd = 1e-3;        // finite-difference comparisons
  double einstein = 1e-3;  // ||Ric - (scal/4) g||_inf
  double trace = 1e-10;    // trace identity of the Jacobi matrix
};

struct VerifyOptions {
  int p = 1;
  int q = 1;
  int points = 10;
  std::uint64_t seed = 0;
  int jobs = 1;
  Tolerances tol;
};

/// Everything measured at one sampled point of K.
struct PointRecord {
  int index = 0;
  bool chart_ok = false;  // sampling + chart + FD pipeline all succeeded
  std::string error;      // failure reason when !chart_ok
  double n2 = 0.0;
  std::array<double, 3> closed{};       // active convention, formula order
  std::array<double, 3> matrix_eigs{};  // sorted ascending
  double matrix_err = 0.0;              // vs sorted closed triple
  double trace_err = 0.0;               // |sum(eigs) - 3 kappa|
  std::array<double, 3> fd{};           // raw FD triple, sorted
  std::array<double, 3> fd_calibrated{};  // sorted(tau * fd)
  double fd_rel_err = 0.0;  // vs the kappa=+cbar closed family
  double einstein_residual = 0.0;
  double osserman_closed = 0.0;  // spectrum spread across directions
  double osserman_fd = 0.0;
  double osserman_fd_tol = 0.0;  // scale-aware: tol.fd * max(1, |eig| scale)
  double weyl_plus = 0.0;  // |W+| for orientation +1 (halves swap under -1)
  double weyl_minus = 0.0;
  bool pass = false;
};

/// Suite-level verdicts, one per certified claim.
struct SuiteChecks {
  bool closed_matrix = false;
  bool trace = false;
  bool fd_match = false;
  bool einstein = false;
  bool osserman = false;
  bool selfdual = false;
  bool nonhomogeneity = false;
};

inline constexpr double nonhomogeneity_threshold = 0.1;
inline constexpr double weyl_other_half_min = 1e-2;

struct VerificationReport {
  VerifyOptions options;
  curvlab::CalibrationRecord calibration;
  std::vector<PointRecord> points;
  int points_failed = 0;
  double failure_rate = 0.0;
  bool nonhomogeneity_applicable = false;  // p != q only
  double max_delta_l3 = 0.0;               // closed-form witness
  double max_weyl_other = 0.0;  // largest non-vanishing Weyl half seen
  SuiteChecks checks;
  bool pass = false;
  int exit_code = 1;  // 0 pass, 1 failed check, 3 failure rate > 20%
};

VerificationReport run_verify(const VerifyOptions& options);

struct SpectrumOptions {
  int p = 1;
  int q = 1;
  int points = 0;  // 0: n^2 grid (step 1/4 up to max(p,q)^2); else sampled
  std::uint64_t seed = 0;
};

struct SpectrumRow {
  double n2 = 0.0;
  double l1 = 0.0, l2 = 0.0, l3 = 0.0;
  double gap = 0.0;  // |l3 - l1|, decreasing in |n^2|
  double trace_combo = 0.0;
};

struct SpectrumReport {
  SpectrumOptions options;
  bool sampled = false;
  std::vector<SpectrumRow> rows;
  int exit_code = 0;
};

SpectrumReport run_spectrum(const SpectrumOptions& options);

struct GLOptions {
  int p = 1;
  int q = 1;
  int sweep_max = 0;  // > 0: enumerate coprime pairs p,q <= sweep_max
  bool crosscheck = false;
  int points = 5;  // crosscheck sample count
  std::uint64_t seed = 0;
};

struct GLRow {
  int p = 0, q = 0;
  bool positive = false;
  double sect_lo = 0.0, sect_hi = 0.0;
  bool has_pinch = false;  // pinching applies only on the positive regime
  double pinch_lo = 0.0, pinch_hi = 0.0;
};

struct GLReport {
  GLOptions options;
  std::vector<GLRow> rows;
  bool crosscheck_run = false;
  orbifold::GLCrosscheckReport crosscheck;
  int exit_code = 0;
};

GLReport run_gl(const GLOptions& options);

std::string to_json(const VerificationReport& report);
std::string to_json(const SpectrumReport& report);
std::string to_json(const GLReport& report);
std::string to_csv(const VerificationReport& report);
std::string to_csv(const SpectrumReport& report);
std::string to_csv(const GLReport& report);

}  // namespace pqr::engine
