#include "pqr/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "pqr/error.hpp"
#include "pqr/rng.hpp"

namespace pqr::engine {

using nlohmann::ordered_json;

namespace {

constexpr int max_points = 1'000'000;
constexpr int max_jobs = 64;
constexpr int oss_ndirs = 8;          // per-point Osserman directions
constexpr double max_abs_jacobi_scale = 8.0;  // |A| cap for FD-checked points  // |A| cap for FD-checked points
// Substream index reserved for the calibration run (point indices stay
// below max_points).
constexpr std::uint64_t calibration_stream = 1u << 24;

reduction::ReductionParams para_params(int p, int q) {
  reduction::ReductionParams rp;
  rp.p = p;
  rp.q = q;
  rp.tag = clifford::para_tag;
  reduction::validate(rp);
  return rp;
}

double triple_spread(const std::vector<std::array<double, 3>>& triples) {
  double spread = 0.0;
  for (size_t a = 0; a < triples.size(); ++a)
    for (size_t b = a + 1; b < triples.size(); ++b)
      for (int k = 0; k < 3; ++k)
        spread = std::max(spread, std::abs(triples[a][k] - triples[b][k]));
  return spread;
}

PointRecord verify_point(const reduction::ReductionParams& rp,
                         const VerifyOptions& opt, int tau, int idx) {
  PointRecord rec;
  rec.index = idx;
  const std::uint64_t pseed = substream_seed(opt.seed, idx);
  try {
    // The FD oracle's absolute error scales with the curvature magnitude
    // A = p^4 q^2 / (n^2)^3 (the exact spectrum diverges like n^-6 toward the
    // singular set), so verification points keep |A| bounded. The closed-form
    // path needs no such guard.
    reduction::PointOnK pt = reduction::sample_point_on_K(rp, pseed);
    const double aq = std::pow(double(rp.p), 4) * double(rp.q) * double(rp.q);
    for (int sub = 1; sub < 20 && std::abs(aq / std::pow(pt.n2, 3)) > max_abs_jacobi_scale;
         ++sub)
      pt = reduction::sample_point_on_K(rp, substream_seed(pseed, 300 + sub));
    if (std::abs(aq / std::pow(pt.n2, 3)) > max_abs_jacobi_scale)
      fail(errc::sampling_failure,
           "no FD-conditioned point (|A| bounded) in 20 samples");
    rec.n2 = pt.n2;
    const reduction::Spectrum cs = reduction::closed_form_spectrum(rp, pt.n2);
    rec.closed = {cs.l1, cs.l2, cs.l3};
    const auto closed_sorted = cs.sorted();

    const auto frame = reduction::make_quotient_frame(rp, pt);
    const auto ms = reduction::matrix_spectrum(rp, pt, frame.e);
    rec.matrix_eigs = ms.eigs;
    for (int k = 0; k < 3; ++k)
      rec.matrix_err = std::max(rec.matrix_err,
                                std::abs(ms.eigs[k] - closed_sorted[k]));
    rec.trace_err = std::abs(ms.eigs[0] + ms.eigs[1] + ms.eigs[2] -
                             3.0 * reduction::signed_cbar(rp));

    const auto chart = curvlab::build_chart(rp, pt, frame, curvlab::default_chart_radius,
                                            curvlab::default_riemann_step);
    const auto ct = curvlab::riemann_fd(chart);
    const auto fd = curvlab::fd_jacobi_spectrum(ct, {1.0, 0.0, 0.0, 0.0});
    rec.fd = fd.eigs;
    rec.fd_calibrated = {tau * fd.eigs[0], tau * fd.eigs[1], tau * fd.eigs[2]};
    std::sort(rec.fd_calibrated.begin(), rec.fd_calibrated.end());
    reduction::ReductionParams plus = rp;
    plus.cbar_sign_convention = +1;
    const auto ref = reduction::closed_form_spectrum(plus, pt.n2).sorted();
    for (int k = 0; k < 3; ++k)
      rec.fd_rel_err = std::max(
          rec.fd_rel_err, std::abs(rec.fd_calibrated[k] - ref[k]) /
                              std::max(1.0, std::abs(ref[k])));

    rec.einstein_residual = curvlab::einstein_residual(ct);

    std::vector<std::array<double, 3>> closed_triples{ms.eigs};
    for (int d = 0; d < oss_ndirs; ++d) {
      const auto X = reduction::sample_h_direction(
          rp, frame, substream_seed(pseed, 100 + d));
      closed_triples.push_back(reduction::matrix_spectrum(rp, pt, X).eigs);
    }
    rec.osserman_closed = triple_spread(closed_triples);

    std::vector<std::array<double, 3>> fd_triples{fd.eigs};
    Rng rng(substream_seed(pseed, 200));
    while (static_cast<int>(fd_triples.size()) < oss_ndirs + 1) {
      curvlab::Vec4 x{rng.gauss(), rng.gauss(), rng.gauss(), rng.gauss()};
      double nrm = 0.0, c2 = 0.0;
      for (int a = 0; a < 4; ++a) {
        c2 += x[a] * x[a];
        for (int b = 0; b < 4; ++b) nrm += x[a] * ct.G(a, b) * x[b];
      }
      // Spacelike and with bounded boost relative to the chart frame (a
      // near-null draw normalizes to a direction FD cannot resolve).
      if (nrm < std::max(0.3, 0.3 * c2)) continue;
      fd_triples.push_back(curvlab::fd_jacobi_spectrum(ct, x).eigs);
    }
    rec.osserman_fd = triple_spread(fd_triples);
    // The FD spread inherits the eigenvalue scale of the point, which grows
    // like |A|; compare it against a scale-aware tolerance.
    rec.osserman_fd_tol =
        opt.tol.fd * std::max(1.0, std::max(std::abs(closed_sorted[0]),
                                            std::abs(closed_sorted[2])));

    const auto weyl = curvlab::weyl_duality_residual(ct, +1);
    rec.weyl_plus = weyl.first;
    rec.weyl_minus = weyl.second;

    rec.chart_ok = true;
    rec.pass = rec.matrix_err <= opt.tol.closed &&
               rec.trace_err <= opt.tol.trace &&
               rec.fd_rel_err <= opt.tol.fd &&
               rec.einstein_residual <= opt.tol.einstein &&
               rec.osserman_closed <= opt.tol.closed &&
               rec.osserman_fd <= rec.osserman_fd_tol &&
               std::min(rec.weyl_plus, rec.weyl_minus) <= opt.tol.fd;
  } catch (const std::exception& e) {
    rec.chart_ok = false;
    rec.error = e.what();
  }
  return rec;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* b2s(bool v) { return v ? "true" : "false"; }

ordered_json json_triple(const std::array<double, 3>& t) {
  return ordered_json::array({t[0], t[1], t[2]});
}

}  // namespace

VerificationReport run_verify(const VerifyOptions& options) {
  const reduction::ReductionParams rp = para_params(options.p, options.q);
  if (options.points < 1 || options.points > max_points)
    fail(errc::invalid_params, "points must be in [1, 1e6]");
  if (options.jobs < 1 || options.jobs > max_jobs)
    fail(errc::invalid_params, "jobs must be in [1, 64]");

  VerificationReport rep;
  rep.options = options;
  rep.calibration = curvlab::calibrate_global_sign(
      rp, substream_seed(options.seed, calibration_stream));
  const int tau = rep.calibration.tau;

  rep.points.resize(options.points);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int idx = next.fetch_add(1); idx < options.points;
         idx = next.fetch_add(1))
      rep.points[idx] = verify_point(rp, options, tau, idx);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < options.jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  bool all_matrix = true, all_trace = true, all_fd = true, all_ein = true,
       all_oss = true, all_sd = true;
  int ok = 0;
  double l3_min = 0.0, l3_max = 0.0;
  for (const auto& rec : rep.points) {
    if (!rec.chart_ok) {
      ++rep.points_failed;
      continue;
    }
    all_matrix = all_matrix && rec.matrix_err <= options.tol.closed;
    all_trace = all_trace && rec.trace_err <= options.tol.trace;
    all_fd = all_fd && rec.fd_rel_err <= options.tol.fd;
    all_ein = all_ein && rec.einstein_residual <= options.tol.einstein;
    all_oss = all_oss && rec.osserman_closed <= options.tol.closed &&
              rec.osserman_fd <= rec.osserman_fd_tol;
    all_sd = all_sd &&
             std::min(rec.weyl_plus, rec.weyl_minus) <= options.tol.fd;
    rep.max_weyl_other =
        std::max(rep.max_weyl_other, std::max(rec.weyl_plus, rec.weyl_minus));
    if (ok == 0) l3_min = l3_max = rec.closed[2];
    l3_min = std::min(l3_min, rec.closed[2]);
    l3_max = std::max(l3_max, rec.closed[2]);
    ++ok;
  }
  rep.failure_rate = static_cast<double>(rep.points_failed) / options.points;
  rep.nonhomogeneity_applicable = options.p != options.q;
  rep.max_delta_l3 = (ok > 0) ? l3_max - l3_min : 0.0;

  const bool any = ok > 0;
  rep.checks.closed_matrix = any && all_matrix;
  rep.checks.trace = any && all_trace;
  rep.checks.fd_match = any && all_fd;
  rep.checks.einstein = any && all_ein;
  rep.checks.osserman = any && all_oss;
  rep.checks.selfdual =
      any && all_sd && rep.max_weyl_other > weyl_other_half_min;
  rep.checks.nonhomogeneity =
      !rep.nonhomogeneity_applicable ||
      (any && rep.max_delta_l3 > nonhomogeneity_threshold);

  rep.pass = rep.checks.closed_matrix && rep.checks.trace &&
             rep.checks.fd_match && rep.checks.einstein &&
             rep.checks.osserman && rep.checks.selfdual &&
             rep.checks.nonhomogeneity && rep.failure_rate <= 0.2;
  rep.exit_code = rep.failure_rate > 0.2 ? 3 : (rep.pass ? 0 : 1);
  return rep;
}

SpectrumReport run_spectrum(const SpectrumOptions& options) {
  const reduction::ReductionParams rp = para_params(options.p, options.q);
  if (options.points < 0 || options.points > max_points)
    fail(errc::invalid_params, "points must be in [0, 1e6]");
  SpectrumReport rep;
  rep.options = options;
  rep.sampled = options.points > 0;

  auto push_row = [&](double n2) {
    const reduction::Spectrum s = reduction::closed_form_spectrum(rp, n2);
    rep.rows.push_back(
        {n2, s.l1, s.l2, s.l3, std::abs(s.l3 - s.l1), s.trace_combo});
  };
  if (rep.sampled) {
    int failed = 0;
    for (int idx = 0; idx < options.points; ++idx) {
      try {
        push_row(reduction::sample_point_on_K(
                     rp, substream_seed(options.seed, idx))
                     .n2);
      } catch (const error&) {
        ++failed;
      }
    }
    if (failed > 0.2 * options.points) rep.exit_code = 3;
  } else if (options.p == options.q) {
    // n^2 is identically p^2 on K when the weights agree.
    push_row(static_cast<double>(options.p) * options.p);
  } else {
    const int m = std::max(options.p, options.q);
    for (int k = 1; k <= 4 * m * m; ++k) push_row(0.25 * k);
  }
  return rep;
}

GLReport run_gl(const GLOptions& options) {
  GLReport rep;
  rep.options = options;
  auto push_row = [&](const orbifold::GLParams& gp) {
    GLRow row;
    row.p = gp.p;
    row.q = gp.q;
    row.positive = orbifold::positivity_predicate(gp);
    std::tie(row.sect_lo, row.sect_hi) = orbifold::gl_sectional_bounds(gp);
    row.has_pinch = row.positive;
    if (row.positive)
      std::tie(row.pinch_lo, row.pinch_hi) = orbifold::pinching_bounds(gp);
    rep.rows.push_back(row);
  };
  if (options.sweep_max > 0) {
    if (options.sweep_max > 1000)
      fail(errc::invalid_params, "sweep bound must be <= 1000");
    for (int p = 1; p <= options.sweep_max; ++p)
      for (int q = 1; q <= options.sweep_max; ++q)
        if (std::gcd(p, q) == 1) push_row({p, q});
  } else {
    const orbifold::GLParams gp{options.p, options.q};
    orbifold::validate(gp);
    push_row(gp);
    if (options.crosscheck) {
      rep.crosscheck =
          orbifold::gl_numeric_crosscheck(gp, options.points, options.seed);
      rep.crosscheck_run = true;
      if (!rep.crosscheck.pass) rep.exit_code = 1;
    }
  }
  return rep;
}

std::string to_json(const VerificationReport& report) {
  const auto& opt = report.options;
  ordered_json j;
  j["schema_version"] = schema_version;
  j["command"] = "verify";
  j["params"] = {{"p", opt.p}, {"q", opt.q}, {"tag", "para"},
                 {"cbar", 4.0}, {"convention", -1}};
  j["run"] = {{"points", opt.points}, {"seed", opt.seed}, {"jobs", opt.jobs}};
  j["tolerances"] = {{"closed", opt.tol.closed},
                     {"fd", opt.tol.fd},
                     {"einstein", opt.tol.einstein},
                     {"trace", opt.tol.trace}};
  j["calibration"] = {{"tau", report.calibration.tau},
                      {"match_error", report.calibration.match_error},
                      {"n2", report.calibration.n2},
                      {"fd", json_triple(report.calibration.fd)},
                      {"closed", json_triple(report.calibration.closed)}};
  j["points"] = ordered_json::array();
  for (const auto& rec : report.points) {
    ordered_json p;
    p["index"] = rec.index;
    p["chart_ok"] = rec.chart_ok;
    if (!rec.chart_ok) {
      p["error"] = rec.error;
      j["points"].push_back(p);
      continue;
    }
    p["n2"] = rec.n2;
    p["closed"] = json_triple(rec.closed);
    p["matrix_eigs"] = json_triple(rec.matrix_eigs);
    p["matrix_err"] = rec.matrix_err;
    p["matrix_tol"] = opt.tol.closed;
    p["trace_err"] = rec.trace_err;
    p["trace_tol"] = opt.tol.trace;
    p["fd"] = json_triple(rec.fd);
    p["fd_calibrated"] = json_triple(rec.fd_calibrated);
    p["fd_rel_err"] = rec.fd_rel_err;
    p["fd_tol"] = opt.tol.fd;
    p["einstein_residual"] = rec.einstein_residual;
    p["einstein_tol"] = opt.tol.einstein;
    p["osserman_closed"] = rec.osserman_closed;
    p["osserman_closed_tol"] = opt.tol.closed;
    p["osserman_fd"] = rec.osserman_fd;
    p["osserman_fd_tol"] = rec.osserman_fd_tol;
    p["weyl_plus"] = rec.weyl_plus;
    p["weyl_minus"] = rec.weyl_minus;
    p["weyl_vanishing_tol"] = opt.tol.fd;
    p["pass"] = rec.pass;
    j["points"].push_back(p);
  }
  j["suite"] = {
      {"points_failed", report.points_failed},
      {"failure_rate", report.failure_rate},
      {"nonhomogeneity_applicable", report.nonhomogeneity_applicable},
      {"max_delta_l3", report.max_delta_l3},
      {"nonhomogeneity_threshold", nonhomogeneity_threshold},
      {"max_weyl_other", report.max_weyl_other},
      {"weyl_other_min", weyl_other_half_min},
      {"checks",
       {{"closed_matrix", report.checks.closed_matrix},
        {"trace", report.checks.trace},
        {"fd_match", report.checks.fd_match},
        {"einstein", report.checks.einstein},
        {"osserman", report.checks.osserman},
        {"selfdual", report.checks.selfdual},
        {"nonhomogeneity", report.checks.nonhomogeneity}}},
      {"pass", report.pass},
      {"exit_code", report.exit_code}};
  return j.dump(2) + "\n";
}

std::string to_json(const SpectrumReport& report) {
  const auto& opt = report.options;
  ordered_json j;
  j["schema_version"] = schema_version;
  j["command"] = "spectrum";
  j["params"] = {{"p", opt.p}, {"q", opt.q}, {"tag", "para"},
                 {"cbar", 4.0}, {"convention", -1}};
  j["run"] = {{"mode", report.sampled ? "sampled" : "grid"},
              {"points", opt.points},
              {"seed", opt.seed}};
  j["rows"] = ordered_json::array();
  for (const auto& r : report.rows)
    j["rows"].push_back({{"n2", r.n2},
                         {"l1", r.l1},
                         {"l2", r.l2},
                         {"l3", r.l3},
                         {"gap", r.gap},
                         {"trace_combo", r.trace_combo}});
  j["exit_code"] = report.exit_code;
  return j.dump(2) + "\n";
}

std::string to_json(const GLReport& report) {
  const auto& opt = report.options;
  ordered_json j;
  j["schema_version"] = schema_version;
  j["command"] = "gl";
  j["params"] = {{"p", opt.p}, {"q", opt.q}, {"sweep_max", opt.sweep_max}};
  j["run"] = {{"crosscheck", opt.crosscheck},
              {"points", opt.points},
              {"seed", opt.seed}};
  j["rows"] = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json row = {{"p", r.p},
                        {"q", r.q},
                        {"positive", r.positive},
                        {"sect_lo", r.sect_lo},
                        {"sect_hi", r.sect_hi}};
    if (r.has_pinch) {
      row["pinch_lo"] = r.pinch_lo;
      row["pinch_hi"] = r.pinch_hi;
    } else {
      row["pinch_lo"] = nullptr;
      row["pinch_hi"] = nullptr;
    }
    j["rows"].push_back(row);
  }
  if (report.crosscheck_run) {
    const auto& c = report.crosscheck;
    ordered_json cj;
    cj["bounds"] = {c.bounds.first, c.bounds.second};
    cj["lambda3_spread"] = c.lambda3_spread;
    cj["norm_tol"] = c.norm_tol;
    cj["fd_tol"] = c.fd_tol;
    cj["sect_tol"] = c.sect_tol;
    cj["points"] = ordered_json::array();
    for (const auto& rec : c.points)
      cj["points"].push_back({{"n2", rec.n2},
                              {"killing_norm", rec.killing_norm},
                              {"norm_in_range", rec.norm_in_range},
                              {"closed", json_triple(rec.closed)},
                              {"fd", json_triple(rec.fd)},
                              {"fd_rel_err", rec.fd_rel_err},
                              {"sect_min", rec.sect_min},
                              {"sect_max", rec.sect_max},
                              {"sect_in_bounds", rec.sect_in_bounds}});
    cj["pass"] = c.pass;
    j["crosscheck"] = cj;
  } else {
    j["crosscheck"] = nullptr;
  }
  j["exit_code"] = report.exit_code;
  return j.dump(2) + "\n";
}

std::string to_csv(const VerificationReport& report) {
  const auto& opt = report.options;
  std::ostringstream os;
  os << "# schema_version=" << schema_version << " command=verify\n";
  os << "# p=" << opt.p << " q=" << opt.q << " tag=para points=" << opt.points
     << " seed=" << opt.seed << " jobs=" << opt.jobs << "\n";
  os << "# tau=" << report.calibration.tau
     << " calibration_error=" << num(report.calibration.match_error) << "\n";
  os << "# tol_closed=" << num(opt.tol.closed) << " tol_fd=" << num(opt.tol.fd)
     << " tol_einstein=" << num(opt.tol.einstein)
     << " tol_trace=" << num(opt.tol.trace) << "\n";
  os << "index,chart_ok,n2,closed_l1,closed_l2,closed_l3,"
        "matrix_l1,matrix_l2,matrix_l3,matrix_err,trace_err,"
        "fd_l1,fd_l2,fd_l3,cal_l1,cal_l2,cal_l3,fd_rel_err,"
        "einstein_residual,osserman_closed,osserman_fd,"
        "weyl_plus,weyl_minus,pass\n";
  for (const auto& rec : report.points) {
    os << rec.index << "," << b2s(rec.chart_ok) << ",";
    if (!rec.chart_ok) {
      os << std::string(21, ',') << "false\n";
      continue;
    }
    os << num(rec.n2) << "," << num(rec.closed[0]) << ","
       << num(rec.closed[1]) << "," << num(rec.closed[2]) << ","
       << num(rec.matrix_eigs[0]) << "," << num(rec.matrix_eigs[1]) << ","
       << num(rec.matrix_eigs[2]) << "," << num(rec.matrix_err) << ","
       << num(rec.trace_err) << "," << num(rec.fd[0]) << "," << num(rec.fd[1])
       << "," << num(rec.fd[2]) << "," << num(rec.fd_calibrated[0]) << ","
       << num(rec.fd_calibrated[1]) << "," << num(rec.fd_calibrated[2]) << ","
       << num(rec.fd_rel_err) << "," << num(rec.einstein_residual) << ","
       << num(rec.osserman_closed) << "," << num(rec.osserman_fd) << ","
       << num(rec.weyl_plus) << "," << num(rec.weyl_minus) << ","
       << b2s(rec.pass) << "\n";
  }
  os << "# failure_rate=" << num(report.failure_rate)
     << " max_delta_l3=" << num(report.max_delta_l3)
     << " pass=" << b2s(report.pass) << " exit_code=" << report.exit_code
     << "\n";
  return os.str();
}

std::string to_csv(const SpectrumReport& report) {
  const auto& opt = report.options;
  std::ostringstream os;
  os << "# schema_version=" << schema_version << " command=spectrum\n";
  os << "# p=" << opt.p << " q=" << opt.q
     << " mode=" << (report.sampled ? "sampled" : "grid")
     << " points=" << opt.points << " seed=" << opt.seed << "\n";
  os << "n2,l1,l2,l3,gap,trace_combo\n";
  for (const auto& r : report.rows)
    os << num(r.n2) << "," << num(r.l1) << "," << num(r.l2) << ","
       << num(r.l3) << "," << num(r.gap) << "," << num(r.trace_combo) << "\n";
  os << "# exit_code=" << report.exit_code << "\n";
  return os.str();
}

std::string to_csv(const GLReport& report) {
  const auto& opt = report.options;
  std::ostringstream os;
  os << "# schema_version=" << schema_version << " command=gl\n";
  os << "# p=" << opt.p << " q=" << opt.q << " sweep_max=" << opt.sweep_max
     << " crosscheck=" << b2s(opt.crosscheck) << " points=" << opt.points
     << " seed=" << opt.seed << "\n";
  os << "p,q,positive,sect_lo,sect_hi,pinch_lo,pinch_hi\n";
  for (const auto& r : report.rows) {
    os << r.p << "," << r.q << "," << b2s(r.positive) << ","
       << num(r.sect_lo) << "," << num(r.sect_hi) << ",";
    if (r.has_pinch)
      os << num(r.pinch_lo) << "," << num(r.pinch_hi) << "\n";
    else
      os << "n/a,n/a\n";
  }
  if (report.crosscheck_run) {
    const auto& c = report.crosscheck;
    os << "# crosscheck_pass=" << b2s(c.pass)
       << " lambda3_spread=" << num(c.lambda3_spread)
       << " norm_tol=" << num(c.norm_tol) << " fd_tol=" << num(c.fd_tol)
       << " sect_tol=" << num(c.sect_tol) << "\n";
  }
  os << "# exit_code=" << report.exit_code << "\n";
  return os.str();
}

}  // namespace pqr::engine
