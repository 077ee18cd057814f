#include "pqreduce.h"

#include <cstring>
#include <exception>
#include <string>
#include <variant>

#include "pqr/engine.hpp"
#include "pqr/error.hpp"
#include "pqr/orbifold.hpp"
#include "pqr/reduction.hpp"

struct pqr_report {
  std::variant<pqr::engine::VerificationReport, pqr::engine::SpectrumReport,
               pqr::engine::GLReport>
      data;
};

namespace {

thread_local std::string t_last_error;

pqr_status map_errc(pqr::errc code) {
  using pqr::errc;
  switch (code) {
    case errc::invalid_params:
      return PQR_ERR_INVALID_PARAMS;
    case errc::singular_element:
      return PQR_ERR_SINGULAR_ELEMENT;
    case errc::singular_set:
      return PQR_ERR_SINGULAR_SET;
    case errc::degenerate_plane:
      return PQR_ERR_DEGENERATE_PLANE;
    case errc::projection_failure:
      return PQR_ERR_PROJECTION;
    case errc::sampling_failure:
      return PQR_ERR_SAMPLING;
    case errc::chart_failure:
      return PQR_ERR_CHART;
    case errc::numeric_failure:
      return PQR_ERR_NUMERIC;
    case errc::io_failure:
      return PQR_ERR_IO;
    default:
      return PQR_ERR_INTERNAL;
  }
}

template <typename Fn>
pqr_status guarded(Fn&& fn) {
  try {
    fn();
    t_last_error.clear();
    return PQR_OK;
  } catch (const pqr::error& e) {
    t_last_error = e.what();
    return map_errc(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return PQR_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown failure";
    return PQR_ERR_INTERNAL;
  }
}

pqr_status invalid(const char* message) {
  t_last_error = message;
  return PQR_ERR_INVALID_PARAMS;
}

}  // namespace

extern "C" {

const char* pqr_version_string(void) { return pqr::engine::version_string; }

const char* pqr_last_error_message(void) { return t_last_error.c_str(); }

pqr_status pqr_closed_spectrum(int p, int q, int convention, double n2,
                               double out_eigs[3], double* out_trace_combo) {
  if (!out_eigs) return invalid("out_eigs must not be NULL");
  return guarded([&] {
    pqr::reduction::ReductionParams rp;
    rp.p = p;
    rp.q = q;
    rp.cbar_sign_convention = convention;
    pqr::reduction::validate(rp);
    const auto s = pqr::reduction::closed_form_spectrum(rp, n2);
    out_eigs[0] = s.l1;
    out_eigs[1] = s.l2;
    out_eigs[2] = s.l3;
    if (out_trace_combo) *out_trace_combo = s.trace_combo;
  });
}

pqr_status pqr_gl_spectrum(int p, int q, double V2, double out_eigs[3]) {
  if (!out_eigs) return invalid("out_eigs must not be NULL");
  return guarded([&] {
    const auto s = pqr::orbifold::gl_spectrum({p, q}, V2);
    out_eigs[0] = s.l1;
    out_eigs[1] = s.l2;
    out_eigs[2] = s.l3;
  });
}

pqr_status pqr_gl_sectional_bounds(int p, int q, double* out_lo,
                                   double* out_hi) {
  if (!out_lo || !out_hi) return invalid("bound outputs must not be NULL");
  return guarded([&] {
    const auto b = pqr::orbifold::gl_sectional_bounds({p, q});
    *out_lo = b.first;
    *out_hi = b.second;
  });
}

pqr_status pqr_gl_positivity(int p, int q, int* out_positive) {
  if (!out_positive) return invalid("out_positive must not be NULL");
  return guarded([&] {
    *out_positive = pqr::orbifold::positivity_predicate({p, q}) ? 1 : 0;
  });
}

pqr_status pqr_gl_pinching(int p, int q, double* out_lo, double* out_hi) {
  if (!out_lo || !out_hi) return invalid("bound outputs must not be NULL");
  return guarded([&] {
    const auto b = pqr::orbifold::pinching_bounds({p, q});
    *out_lo = b.first;
    *out_hi = b.second;
  });
}

pqr_status pqr_run_verify(const pqr_verify_options* options,
                          pqr_report** out_report) {
  if (!options || !out_report)
    return invalid("options and out_report must not be NULL");
  return guarded([&] {
    pqr::engine::VerifyOptions vo;
    vo.p = options->p;
    vo.q = options->q;
    vo.points = options->points;
    vo.jobs = options->jobs;
    vo.seed = options->seed;
    if (options->tol_closed > 0) vo.tol.closed = options->tol_closed;
    if (options->tol_fd > 0) vo.tol.fd = options->tol_fd;
    if (options->tol_einstein > 0) vo.tol.einstein = options->tol_einstein;
    *out_report = new pqr_report{pqr::engine::run_verify(vo)};
  });
}

pqr_status pqr_run_spectrum(int p, int q, int points, uint64_t seed,
                            pqr_report** out_report) {
  if (!out_report) return invalid("out_report must not be NULL");
  return guarded([&] {
    pqr::engine::SpectrumOptions so;
    so.p = p;
    so.q = q;
    so.points = points;
    so.seed = seed;
    *out_report = new pqr_report{pqr::engine::run_spectrum(so)};
  });
}

pqr_status pqr_run_gl(const pqr_gl_options* options, pqr_report** out_report) {
  if (!options || !out_report)
    return invalid("options and out_report must not be NULL");
  return guarded([&] {
    pqr::engine::GLOptions go;
    go.p = options->p;
    go.q = options->q;
    go.sweep_max = options->sweep_max;
    go.crosscheck = options->crosscheck != 0;
    go.points = options->points;
    go.seed = options->seed;
    *out_report = new pqr_report{pqr::engine::run_gl(go)};
  });
}

int pqr_report_exit_code(const pqr_report* report) {
  if (!report) return -1;
  return std::visit([](const auto& r) { return r.exit_code; }, report->data);
}

pqr_status pqr_report_render(const pqr_report* report, pqr_format format,
                             char** out_text) {
  if (!report || !out_text)
    return invalid("report and out_text must not be NULL");
  if (format != PQR_FORMAT_JSON && format != PQR_FORMAT_CSV)
    return invalid("format must be PQR_FORMAT_JSON or PQR_FORMAT_CSV");
  return guarded([&] {
    const std::string text = std::visit(
        [&](const auto& r) {
          return format == PQR_FORMAT_JSON ? pqr::engine::to_json(r)
                                           : pqr::engine::to_csv(r);
        },
        report->data);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out_text = buf;
  });
}

void pqr_string_free(char* text) { delete[] text; }

void pqr_report_free(pqr_report* report) { delete report; }

}  // extern "C"
