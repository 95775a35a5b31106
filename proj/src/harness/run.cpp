#include "fbu/harness/run.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <ostream>

#include "fbu/errors.hpp"
#include "fbu/oracle.hpp"
#include "fbu/threebody.hpp"
#include "fbu/twobody.hpp"

namespace fbu {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string out_path(const RunConfig& rc, const std::string& suffix) {
  std::filesystem::create_directories(rc.out_dir);
  return (std::filesystem::path(rc.out_dir) / (rc.name + suffix)).string();
}

Parity parity_of(const RunConfig& rc) {
  return rc.parity == "odd" ? Parity::Odd : Parity::Even;
}

const char* kTwoBodyUnits =
    "v0, E0 in hbar^2/(mu xi0^2); q0 in 1/xi0; other columns dimensionless";

void export_wavefunction_table(const std::string& path,
                               const ThreeBodySpectrum& spec) {
  if (spec.states.empty()) return;
  CsvWriter csv(path, {"P", "K", "Phi"},
                "P, K in q0; Phi normalized on the scaled grid");
  const auto& gp = spec.grids.P;
  const auto& gk = spec.grids.K;
  const auto& wf = spec.states.front().wavefunction;
  for (std::size_t i = 0; i < gp.size(); ++i)
    for (std::size_t j = 0; j < gk.size(); ++j)
      csv.row({gp.nodes[i], gk.nodes[j], wf[i * gk.size() + j]});
}

bool monotone_decreasing(const std::vector<double>& v, double slack = 0.0) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1] + slack)) return false;
  return true;
}

// ---- two-body -------------------------------------------------------------

SweepReport run_two_body(const RunConfig& rc, std::ostream& log) {
  SweepReport rep;
  PotentialShape shape = PotentialShape::make(rc.shape, rc.shape_params);
  CsvWriter csv(out_path(rc, ".csv"),
                {"shape", "v0", "q0", "E0", "q0_asymptotic", "overlap",
                 "symmetric_fraction", "norm_residual"},
                kTwoBodyUnits);
  for (double v0 : rc.v0_list) {
    SweepPoint pt;
    pt.v0 = v0;
    try {
      TwoBodySolveOptions opt;
      opt.grid_n = rc.grid_n;
      opt.tol = rc.tol;
      const TwoBodyResult r = solve_bound_state_auto(shape, v0, opt);
      const AsymptoticQ0 qa = asymptotic_q0(shape, v0);
      pt.q0 = r.q0;
      pt.values["E0"] = r.E0;
      pt.values["q0_asymptotic"] = qa.value;
      pt.values["overlap"] = lorentzian_overlap(r);
      pt.values["symmetric_fraction"] = r.symmetric_fraction;
      pt.values["norm_residual"] = r.norm_residual;
      csv.row_mixed({shape.name(), CsvWriter::format(v0),
                     CsvWriter::format(r.q0), CsvWriter::format(r.E0),
                     CsvWriter::format(qa.value),
                     CsvWriter::format(pt.values["overlap"]),
                     CsvWriter::format(r.symmetric_fraction),
                     CsvWriter::format(r.norm_residual)});
    } catch (const std::exception& e) {
      pt.failed = true;
      pt.error = e.what();
      log << "[" << rc.name << "] v0=" << v0 << " failed: " << e.what() << "\n";
      csv.row_mixed({shape.name(), CsvWriter::format(v0), "", "", "", "", "",
                     ""});
    }
    rep.points.push_back(std::move(pt));
  }

  std::map<std::string, double> scalars;
  if (rc.mode == "two-body-sweep") {
    std::vector<std::pair<double, double>> q0_pts, resid_pts;
    std::vector<double> overlaps;
    for (const auto& p : rep.points) {
      if (p.failed) continue;
      q0_pts.emplace_back(std::abs(p.v0), p.q0);
      const double qa = p.values.at("q0_asymptotic");
      if (qa > 0 && std::abs(p.q0 / qa - 1.0) > 0)
        resid_pts.emplace_back(std::abs(p.v0), std::abs(p.q0 / qa - 1.0));
      overlaps.push_back(p.values.at("overlap"));
    }
    if (q0_pts.size() >= 3) {
      const PowerLawFit fit = fit_power_law(q0_pts);
      rep.fits["q0_exponent"] = fit.exponent;
      rep.fits["q0_prefactor"] = fit.prefactor;
      rep.fits["q0_fit_rms"] = fit.rms;
      const double want = shape.kind() == ShapeKind::TypeII ? 2.0 : 1.0;
      const double band = shape.kind() == ShapeKind::TypeII ? 0.1 : 0.05;
      rep.flags["q0_exponent_ok"] = std::abs(fit.exponent - want) <= band;
    }
    if (resid_pts.size() >= 3) {
      const PowerLawFit rfit = fit_power_law(resid_pts);
      rep.fits["asym_residual_exponent"] = rfit.exponent;
    }
    bool overlap_monotone = true;
    for (std::size_t i = 1; i < overlaps.size(); ++i)
      overlap_monotone = overlap_monotone && overlaps[i] >= overlaps[i - 1] - 1e-6;
    rep.flags["overlap_monotone"] = overlap_monotone;
    if (!overlaps.empty())
      rep.flags["overlap_final_999"] = overlaps.back() >= 0.999;
  }
  for (const auto& [k, v] : rep.fits) scalars[k] = v;
  write_summary_json(out_path(rc, ".summary.json"), rc.name, rc.mode, scalars,
                     rep.flags);
  return rep;
}

// ---- three-body -----------------------------------------------------------

SpectrumOptions spectrum_options(const RunConfig& rc) {
  SpectrumOptions opt;
  opt.n_states = rc.states;
  opt.tol = rc.tol;
  return opt;
}

SweepReport run_three_body_contact(const RunConfig& rc, std::ostream& log) {
  SweepReport rep;
  CsvWriter csv(out_path(rc, ".csv"),
                {"alpha", "parity", "n", "epsilon", "residual", "grid_NP",
                 "grid_NK"},
                "epsilon = E / |E0^(2)|, dimensionless; grid sizes in nodes");
  for (double alpha : rc.alpha_list) {
    SweepPoint pt;
    try {
      const MassConfig mass(alpha);
      const ThreeBodySpectrum spec = solve_contact_auto(
          mass, parity_of(rc), rc.grid_np, rc.grid_nk, spectrum_options(rc));
      if (!spec.note.empty())
        log << "[" << rc.name << "] alpha=" << alpha << ": " << spec.note
            << "\n";
      int n = 0;
      for (const auto& st : spec.states) {
        csv.row_mixed({CsvWriter::format(alpha), rc.parity,
                       std::to_string(n), CsvWriter::format(st.epsilon),
                       CsvWriter::format(st.residual),
                       std::to_string(rc.grid_np), std::to_string(rc.grid_nk)});
        pt.values["epsilon_" + std::to_string(n)] = st.epsilon;
        ++n;
      }
      if (!rc.export_wavefunction.empty())
        export_wavefunction_table(
            (std::filesystem::path(rc.out_dir) / rc.export_wavefunction)
                .string(),
            spec);
      rep.flags["all_below_threshold"] = true;
      for (const auto& st : spec.states)
        if (!(st.epsilon < -1.0)) rep.flags["all_below_threshold"] = false;
    } catch (const std::exception& e) {
      pt.failed = true;
      pt.error = e.what();
      log << "[" << rc.name << "] alpha=" << alpha << " failed: " << e.what()
          << "\n";
    }
    rep.points.push_back(std::move(pt));
  }
  std::map<std::string, double> scalars;
  for (const auto& p : rep.points)
    for (const auto& [k, v] : p.values) scalars[k] = v;
  write_summary_json(out_path(rc, ".summary.json"), rc.name, rc.mode, scalars,
                     rep.flags);
  return rep;
}

SweepReport run_three_body_finite_or_sweep(const RunConfig& rc,
                                           std::ostream& log) {
  SweepReport rep;
  PotentialShape shape = PotentialShape::make(rc.shape, rc.shape_params);
  const MassConfig mass(rc.alpha_list.front());
  const Parity par = parity_of(rc);

  // contact reference once per run
  ThreeBodySpectrum contact = solve_contact_auto(mass, par, rc.grid_np,
                                                 rc.grid_nk,
                                                 spectrum_options(rc));
  if (contact.states.empty())
    throw NoBoundState("three-body sweep: no contact reference state");
  const double eps_star = contact.states.front().epsilon;

  CsvWriter csv(out_path(rc, ".csv"),
                {"v0", "q0", "epsilon_n", "epsilon_star_n", "gap"},
                "v0 in hbar^2/(mu xi0^2); q0 in 1/xi0; ratios dimensionless");
  std::vector<double> gaps;
  SweepPoint last_ok;
  for (double v0 : rc.v0_list) {
    SweepPoint pt;
    pt.v0 = v0;
    try {
      const FiniteRangeResult fr = solve_finite_range_spectrum(
          shape, v0, mass, par, rc.grid_np, rc.grid_nk, spectrum_options(rc));
      if (fr.spectrum.states.empty())
        throw NoBoundState("no three-body state in window");
      pt.q0 = fr.two_body.q0;
      int n = 0;
      for (const auto& st : fr.spectrum.states) {
        const double star =
            n < static_cast<int>(contact.states.size())
                ? contact.states[n].epsilon
                : kNaN;
        const double gap = std::abs(st.epsilon - star);
        csv.row({v0, fr.two_body.q0, st.epsilon, star, gap});
        if (n == 0) {
          pt.values["epsilon_0"] = st.epsilon;
          pt.values["gap_0"] = gap;
          gaps.push_back(gap);
        }
        ++n;
      }
      last_ok = pt;
    } catch (const std::exception& e) {
      pt.failed = true;
      pt.error = e.what();
      log << "[" << rc.name << "] v0=" << v0 << " failed: " << e.what() << "\n";
      csv.row({v0, kNaN, kNaN, eps_star, kNaN});
    }
    rep.points.push_back(pt);
  }

  std::map<std::string, double> scalars;
  scalars["epsilon_star_0"] = eps_star;
  if (rc.mode == "three-body-sweep") {
    rep.flags["gap_monotone_decreasing"] = monotone_decreasing(gaps);
    if (!gaps.empty())
      rep.flags["final_gap_under_5pct"] =
          gaps.back() < 0.05 * std::abs(eps_star);
    // closed-form prediction routes at the smallest coupling
    if (!last_ok.failed && last_ok.q0 > 0) {
      const auto preds =
          universal_prediction(shape, rep.points.back().v0, contact,
                               last_ok.q0);
      if (!preds.empty()) {
        scalars["prediction_asymptotic_0"] = preds.front().energy_asymptotic;
        scalars["prediction_solved_0"] = preds.front().energy_solved;
        const double a = preds.front().energy_asymptotic;
        const double s = preds.front().energy_solved;
        rep.flags["prediction_routes_within_10pct"] =
            std::abs(a - s) <= 0.10 * std::abs(s);
      }
    }
  }
  for (const auto& [k, v] : rep.fits) scalars[k] = v;
  write_summary_json(out_path(rc, ".summary.json"), rc.name, rc.mode, scalars,
                     rep.flags);
  return rep;
}

SweepReport run_verify_proof(const RunConfig& rc, std::ostream& log) {
  SweepReport rep;
  PotentialShape shape = PotentialShape::make(rc.shape, rc.shape_params);
  const MassConfig mass(rc.alpha_list.front());
  const Parity par = parity_of(rc);

  ThreeBodySpectrum contact = solve_contact_auto(mass, par, rc.grid_np,
                                                 rc.grid_nk,
                                                 spectrum_options(rc));
  if (contact.states.empty())
    throw NoBoundState("verify-proof: no contact trial state");
  const double eps_star = contact.states.front().epsilon;

  log << "[" << rc.name << "] trial contact state eps* = " << eps_star << "\n";
  const std::vector<IterationDiagnostics> diags =
      iteration_diagnostics(shape, rc.q0_list, mass, eps_star, contact);

  CsvWriter csv(out_path(rc, ".csv"),
                {"q0", "R_two_body", "I1", "I2", "I3", "I4", "A_pm_max",
                 "residual_to_contact"},
                "q0 in 1/xi0; norms on the diagnostic lattice, dimensionless");
  std::vector<double> r2b, i2s, i3s, rtc, abound;
  for (std::size_t i = 0; i < rc.q0_list.size(); ++i) {
    const double q0 = rc.q0_list[i];
    const MomentumGrid g = build_two_scale_grid(256, q0, shape.range_scale());
    const double R = iterated_kernel_residual(shape, q0, rc.box, g);
    const IterationDiagnostics& d = diags[i];
    csv.row({q0, R, d.I1, d.I2, d.I3, d.I4, d.A_pm_max,
             d.residual_to_contact});
    SweepPoint pt;
    pt.q0 = q0;
    pt.values = {{"R_two_body", R},     {"I1", d.I1},
                 {"I2", d.I2},          {"I3", d.I3},
                 {"I4", d.I4},          {"A_pm_max", d.A_pm_max},
                 {"residual_to_contact", d.residual_to_contact}};
    rep.points.push_back(std::move(pt));
    r2b.push_back(R);
    i2s.push_back(d.I2);
    i3s.push_back(d.I3);
    rtc.push_back(d.residual_to_contact);
    abound.push_back(d.A_pm_max);
  }
  rep.flags["iterated_residual_decreasing"] = monotone_decreasing(r2b);
  rep.flags["I2_decreasing"] = monotone_decreasing(i2s);
  rep.flags["I3_decreasing"] = monotone_decreasing(i3s);
  rep.flags["residual_to_contact_decreasing"] = monotone_decreasing(rtc);
  bool bounded = true;
  for (double a : abound) bounded = bounded && a <= 2.0 * abound.front() + 1e-12;
  rep.flags["A_pm_bounded"] = bounded;

  std::map<std::string, double> scalars{{"eps_star", eps_star}};
  write_summary_json(out_path(rc, ".summary.json"), rc.name, rc.mode, scalars,
                     rep.flags);
  return rep;
}

SweepReport run_oracle_two_body(const RunConfig& rc, std::ostream& log) {
  SweepReport rep;
  PotentialShape shape = PotentialShape::make(rc.shape, rc.shape_params);
  CsvWriter csv(out_path(rc, ".csv"),
                {"shape", "v0", "q0", "E0", "q0_asymptotic", "overlap",
                 "symmetric_fraction", "norm_residual"},
                kTwoBodyUnits);
  for (double v0 : rc.v0_list) {
    SweepPoint pt;
    pt.v0 = v0;
    try {
      SpatialGrid g;
      g.extent = rc.oracle_extent_x;
      int n = static_cast<int>(std::round(2 * g.extent / rc.oracle_hx)) + 1;
      if (n % 2 == 0) ++n;
      g.n = n;
      const OracleTwoBody r =
          two_body_coordinate_refined(shape, v0, g, rc.oracle_levels);
      pt.values["E0"] = r.energy;
      pt.q0 = std::sqrt(2.0 * std::abs(r.energy));
      pt.values["error_bar"] = r.error_bar;
      csv.row_mixed({shape.name(), CsvWriter::format(v0),
                     CsvWriter::format(pt.q0), CsvWriter::format(r.energy), "",
                     "", "", ""});
    } catch (const std::exception& e) {
      pt.failed = true;
      pt.error = e.what();
      log << "[" << rc.name << "] oracle v0=" << v0 << " failed: " << e.what()
          << "\n";
    }
    rep.points.push_back(std::move(pt));
  }
  write_summary_json(out_path(rc, ".summary.json"), rc.name, rc.mode, {},
                     rep.flags);
  return rep;
}

SweepReport run_oracle_three_body(const RunConfig& rc, std::ostream& log) {
  SweepReport rep;
  PotentialShape shape = PotentialShape::make(rc.shape, rc.shape_params);
  CsvWriter csv(out_path(rc, ".csv"),
                {"alpha", "parity", "n", "epsilon", "residual", "grid_NP",
                 "grid_NK"},
                "oracle columns mirror the solver CSV; grids are FD nodes");
  for (double alpha : rc.alpha_list) {
    for (double v0 : rc.v0_list) {
      SweepPoint pt;
      pt.v0 = v0;
      try {
        const MassConfig mass(alpha);
        ThreeBodyOracleOptions opt;
        opt.hx = rc.oracle_hx;
        opt.extent_x = rc.oracle_extent_x;
        opt.extent_y = rc.oracle_extent_y;
        opt.n_states = rc.states;
        const OracleThreeBody r = three_body_coordinate_refined(
            shape, v0, mass, opt, rc.oracle_levels);
        int n = 0;
        for (double eps : r.epsilons) {
          csv.row_mixed({CsvWriter::format(alpha), "even", std::to_string(n),
                         CsvWriter::format(eps),
                         CsvWriter::format(r.error_bar), std::to_string(r.nx),
                         std::to_string(r.ny)});
          pt.values["epsilon_" + std::to_string(n)] = eps;
          ++n;
        }
      } catch (const std::exception& e) {
        pt.failed = true;
        pt.error = e.what();
        log << "[" << rc.name << "] oracle alpha=" << alpha << " v0=" << v0
            << " failed: " << e.what() << "\n";
      }
      rep.points.push_back(std::move(pt));
    }
  }
  write_summary_json(out_path(rc, ".summary.json"), rc.name, rc.mode, {},
                     rep.flags);
  return rep;
}

}  // namespace

SweepReport execute_run(const RunConfig& rc, std::ostream& log) {
  rc.validate();
  if (rc.mode == "two-body" || rc.mode == "two-body-sweep")
    return run_two_body(rc, log);
  if (rc.mode == "three-body-contact") return run_three_body_contact(rc, log);
  if (rc.mode == "three-body-finite" || rc.mode == "three-body-sweep")
    return run_three_body_finite_or_sweep(rc, log);
  if (rc.mode == "verify-proof") return run_verify_proof(rc, log);
  if (rc.mode == "oracle-two-body") return run_oracle_two_body(rc, log);
  if (rc.mode == "oracle-three-body") return run_oracle_three_body(rc, log);
  throw DomainError("execute_run: unhandled mode " + rc.mode);
}

int run_config(const ParsedConfig& pc, std::ostream& log) {
  bool ok = true;
  for (const RunConfig& rc : pc.runs) {
    log << "== run " << rc.name << " (" << rc.mode << ") ==\n";
    try {
      const SweepReport rep = execute_run(rc, log);
      for (const auto& [flag, val] : rep.flags)
        log << "   " << flag << ": " << (val ? "pass" : "FAIL") << "\n";
      ok = ok && rep.all_ok();
    } catch (const std::exception& e) {
      log << "   run failed: " << e.what() << "\n";
      ok = false;
    }
  }
  return ok ? 0 : 1;
}

int run_config_file(const std::string& path, std::ostream& log) {
  return run_config(parse_config_file(path), log);
}

}  // namespace fbu
