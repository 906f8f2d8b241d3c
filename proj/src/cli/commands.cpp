// Copyright 2026 The thz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fmt/format.h>

#include <cmath>
#include <exception>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <numbers>

#include "cli/output.hpp"
#include "detail/pool.hpp"
#include "thz/cli.hpp"
#include "thz/conditions.hpp"
#include "thz/errors.hpp"
#include "thz/observables.hpp"
#include "thz/optimize.hpp"
#include "thz/tomography.hpp"

namespace thz::cli {

namespace {

using detail::Cell;
using detail::CsvWriter;
using nlohmann::json;
namespace fs = std::filesystem;

struct Job {
  const RunConfig& cfg;
  std::string hash;
  fs::path dir;
  std::vector<std::string> files;
  std::vector<std::string> summary;
  json results = json::object();

  CsvWriter csv(const std::string& name, const std::vector<std::string>& header) {
    files.push_back(name);
    return CsvWriter((dir / name).string(), hash, header);
  }
  void note(const std::string& line) { summary.push_back(line); }
};

std::string fmt6(double x) { return fmt::format("{:.6g}", x); }

// Peaks above `rel` of the maximum, strongest first.
std::vector<std::size_t> peaks(const std::vector<double>& y, double rel) {
  std::vector<std::size_t> out;
  if (y.size() < 3) return out;
  double top = *std::max_element(y.begin(), y.end());
  for (std::size_t j = 1; j + 1 < y.size(); ++j)
    if (y[j] > y[j - 1] && y[j] >= y[j + 1] && y[j] >= rel * top) out.push_back(j);
  std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });
  return out;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t j = 1; j < x.size(); ++j) s += 0.5 * (y[j] + y[j - 1]) * (x[j] - x[j - 1]);
  return s;
}

// Carrier-frame spectrum of sigma_i. In the model frame the dressed lowering and
// raising parts of sigma_i are folded by f_thz; each part is shifted back and the
// non-secular cross terms between parts are dropped.
SpectrumResult optical_spectrum(const LindbladModel& m, double theta, int i, double f_thz,
                                const std::vector<double>& grid) {
  const CMat sig = sigma_in_dressed(theta).mat();
  CMat diag = CMat::Zero(2, 2), low = CMat::Zero(2, 2), up = CMat::Zero(2, 2);
  diag(0, 0) = sig(0, 0);
  diag(1, 1) = sig(1, 1);
  low(1, 0) = sig(1, 0);
  up(0, 1) = sig(0, 1);
  SpectrumResult total;
  const std::pair<const CMat*, double> parts[] = {{&diag, 0.0}, {&low, f_thz}, {&up, -f_thz}};
  for (const auto& [op, shift] : parts) {
    if (op->norm() == 0.0) continue;
    SpectrumResult s = emission_spectrum(m, embed(QMatrix(*op), i, m.dims()), grid, {shift, i, "optical"});
    if (total.intensities.empty()) {
      total = s;
    } else {
      for (std::size_t j = 0; j < grid.size(); ++j) total.intensities[j] += s.intensities[j];
      total.incoherent_power += s.incoherent_power;
      total.time_domain = total.time_domain || s.time_domain;
    }
  }
  return total;
}

void cmd_spectrum(Job& job) {
  const RunConfig& c = job.cfg;
  CsvWriter out = job.csv("spectrum.csv", {"regime", "omega_sb", "channel", "emitter", "frequency", "intensity"});
  json regimes = json::array();
  for (std::size_t r = 0; r < c.spectrum.omega_sb_values.size(); ++r) {
    SystemParams p = c.system;
    const double sb = c.spectrum.omega_sb_values[r];
    p.omega_sb = {sb, sb};
    LindbladModel m = build_grwa_model(p);
    DressedFrame d = dressed_frame(p);
    for (const std::string& ch : c.spectrum.channels) {
      const bool thz = ch == "thz";
      std::vector<double> grid = (thz ? c.spectrum.thz_grid : c.spectrum.optical_grid).values();
      if (grid.size() < 2) continue;
      for (int i = 0; i < 2; ++i) {
        SpectrumResult s = thz ? emission_spectrum(m, embed(ops::lowering(), i, m.dims()), grid, {p.f_thz, i, ch})
                               : optical_spectrum(m, d.theta[i], i, p.f_thz, grid);
        for (std::size_t j = 0; j < grid.size(); ++j) out.row({r, sb, ch, i + 1, grid[j], s.intensities[j]});
        std::vector<std::size_t> pk = peaks(s.intensities, 0.05);
        std::string where;
        for (std::size_t k = 0; k < std::min<std::size_t>(pk.size(), 5); ++k) where += " " + fmt6(grid[pk[k]]);
        job.note(fmt::format("omega_sb {} {} emitter {}: {} peaks (>5%) at{}; Omega_R = {}; integral {} vs power {}",
                             fmt6(sb), ch, i + 1, pk.size(), where, fmt6(d.omega_r[i]),
                             fmt6(trapezoid(grid, s.intensities)), fmt6(s.incoherent_power)));
        regimes.push_back({{"omega_sb", sb}, {"channel", ch}, {"emitter", i + 1}, {"peaks", pk.size()},
                           {"incoherent_power", s.incoherent_power}, {"time_domain", s.time_domain}});
      }
    }
  }
  job.results["spectra"] = regimes;
}

void cmd_optimize(Job& job) {
  const OptimizeConfig& o = job.cfg.optimize;
  std::vector<OptimResult> res(o.f_thz.size());
  std::vector<std::string> fail(o.f_thz.size());
  std::vector<std::exception_ptr> err(o.f_thz.size());
  thz::detail::parallel_for(res.size(), job.cfg.threads, [&](std::size_t k) {
    try {
      res[k] = maximize_concurrence(Cavity{o.chi, o.kappa, o.f_thz[k], o.gamma, o.n_fock}, o.omega_max, o.opt);
    } catch (const std::exception& e) {
      fail[k] = e.what();
      err[k] = std::current_exception();
    }
  });
  CsvWriter out = job.csv("optimize.csv", {"f_thz", "chi", "kappa", "ok", "concurrence", "omega_r_tilde", "theta_tilde",
                                          "g2_cross", "purcell", "evaluations", "converged", "adiabatic_valid",
                                          "rwa_valid", "omega1", "omega2", "delta1", "delta2", "omega_sb1",
                                          "omega_sb2", "failure"});
  int failures = 0;
  for (std::size_t k = 0; k < res.size(); ++k) {
    const OptimResult& r = res[k];
    const SystemParams& p = r.params;
    const bool ok = fail[k].empty();
    failures += !ok;
    out.row({o.f_thz[k], o.chi, o.kappa, ok, r.concurrence, r.omega_r_tilde, r.theta_tilde, r.g2_cross, r.purcell,
             r.evaluations, r.converged, r.adiabatic_valid, r.rwa_valid, p.omega[0], p.omega[1], p.delta[0],
             p.delta[1], p.omega_sb[0], p.omega_sb[1], fail[k]});
    if (ok)
      job.note(fmt::format("f_thz {}: C = {} at Omega~_R {} theta~ {} ({} evaluations{}{})", fmt6(o.f_thz[k]),
                           fmt6(r.concurrence), fmt6(r.omega_r_tilde), fmt6(r.theta_tilde), r.evaluations,
                           r.adiabatic_valid ? "" : ", outside adiabatic region", r.rwa_valid ? "" : ", outside RWA"));
    else
      job.note(fmt::format("f_thz {}: failed: {}", fmt6(o.f_thz[k]), fail[k]));
    job.results["concurrence"].push_back(r.concurrence);
  }
  if (failures == static_cast<int>(res.size()) && !res.empty()) std::rethrow_exception(err[0]);
}

void cmd_map(Job& job) {
  const MapConfig& m = job.cfg.map;
  SweepRequest req;
  req.chi = m.chi;
  req.kappa = m.kappa;
  req.f_thz = m.f_thz;
  req.gamma = m.gamma;
  req.omega_max = m.omega_max;
  req.n_fock = m.n_fock;
  req.compute_gap = m.compute_gap;
  req.threads = job.cfg.threads;
  req.opt = m.opt;
  SweepGrid g = sweep_map(req);
  CsvWriter out = job.csv("map.csv", {"ix", "iy", "chi", "kappa", "ok", "concurrence", "omega_r_tilde", "theta_tilde",
                                     "g2_cross", "gap", "adiabatic_valid", "rwa_valid", "failure"});
  int ok = 0;
  for (const SweepPoint& s : g.points) {
    ok += s.ok;
    out.row({s.ix, s.iy, s.x, s.y, s.ok, s.best.concurrence, s.best.omega_r_tilde, s.best.theta_tilde,
             s.best.g2_cross, s.gap, s.best.adiabatic_valid, s.best.rwa_valid, s.failure});
  }
  job.note(fmt::format("f_thz {}: {} x {} grid, {} points ok", fmt6(g.f_thz), g.chi.size(), g.kappa.size(), ok));
  if (const SweepPoint* b = g.best()) {
    job.note(fmt::format("max C = {} at chi {} kappa {}", fmt6(b->best.concurrence), fmt6(b->x), fmt6(b->y)));
    job.results["max_concurrence"] = b->best.concurrence;
  }
}

void cmd_driveplane(Job& job) {
  PlaneRequest req;
  req.base = job.cfg.system;
  req.omega1 = job.cfg.driveplane.omega1;
  req.omega2 = job.cfg.driveplane.omega2;
  req.threads = job.cfg.threads;
  PlaneResult r = drive_plane(req);
  CsvWriter out = job.csv("driveplane.csv", {"i1", "i2", "omega1", "omega2", "ok", "concurrence", "g2_cross",
                                            "residual0", "residual1", "residual2", "failure"});
  const std::size_t n2 = r.omega2.size();
  for (std::size_t k = 0; k < r.points.size(); ++k) {
    const PlanePoint& p = r.points[k];
    out.row({k / n2, k % n2, p.omega1, p.omega2, p.ok, p.concurrence, p.g2_cross, p.conditions.residual0,
             p.conditions.residual1, p.conditions.residual2, p.failure});
  }
  CsvWriter curves = job.csv("driveplane_curves.csv", {"condition", "omega1", "omega2"});
  for (int k = 0; k < 3; ++k)
    for (const auto& pt : r.curves[k]) curves.row({k, pt[0], pt[1]});
  if (r.points.empty()) {
    job.note("empty plane");
    return;
  }
  const PlanePoint& best = r.points[r.argmax_concurrence];
  job.note(fmt::format("max C = {} at ({}, {})", fmt6(best.concurrence), fmt6(best.omega1), fmt6(best.omega2)));
  job.note(fmt::format("min g2 at ({}, {})", fmt6(r.points[r.argmin_g2].omega1), fmt6(r.points[r.argmin_g2].omega2)));
  job.note(fmt::format("Pearson(C, g2) = {}", fmt6(r.pearson_c_g2)));
  if (r.intersection) {
    job.note(fmt::format("condition curves meet at ({}, {}), spread {}", fmt6((*r.intersection)[0]),
                         fmt6((*r.intersection)[1]), fmt6(r.intersection_spread)));
    job.results["intersection"] = *r.intersection;
  } else {
    job.note("condition curves do not meet inside the plane");
  }
  job.results["argmax"] = {best.omega1, best.omega2};
  job.results["pearson_c_g2"] = r.pearson_c_g2;
}

QMatrix bell_minus() {
  CVec v = CVec::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return QMatrix::projector(v, {2, 2});
}

// Gaussian filter over the (n_shot, eta_e) cell grid, weights renormalized at the edges.
std::vector<double> smooth(const std::vector<double>& v, std::size_t rows, std::size_t cols, double sigma) {
  if (sigma <= 0.0) return v;
  const int reach = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      double s = 0.0, w = 0.0;
      for (int di = -reach; di <= reach; ++di)
        for (int dj = -reach; dj <= reach; ++dj) {
          long a = static_cast<long>(i) + di, b = static_cast<long>(j) + dj;
          if (a < 0 || b < 0 || a >= static_cast<long>(rows) || b >= static_cast<long>(cols)) continue;
          double wt = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
          s += wt * v[a * cols + b];
          w += wt;
        }
      out[i * cols + j] = s / w;
    }
  return out;
}

json matrix_json(const QMatrix& m) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < m.size(); ++i) {
    json r = json::array(), q = json::array();
    for (int j = 0; j < m.size(); ++j) {
      r.push_back(m.mat()(i, j).real());
      q.push_back(m.mat()(i, j).imag());
    }
    re.push_back(r);
    im.push_back(q);
  }
  return {{"re", re}, {"im", im}};
}

void cmd_tomography(Job& job) {
  const RunConfig& c = job.cfg;
  const TomographyConfig& t = c.tomography;
  FidelityStudyRequest req;
  if (t.state == "bell") {
    req.prepared = bell_minus();
  } else {
    SteadyReport rep = steady_report(c.system, ModelLevel::Grwa);
    req.prepared = rep.rho;
    job.note(fmt::format("prepared steady state: C = {}", fmt6(rep.concurrence)));
  }
  if (t.reference == "bell") req.reference = bell_minus();
  req.n_shot = t.n_shot;
  req.eta_e = t.eta_e;
  req.eta_g = t.eta_g;
  req.n_ave = t.n_ave;
  req.seed = c.seed;
  req.threads = c.threads;
  req.options.singular_offset = t.singular_offset;
  if (t.rotation != "ideal") {
    req.options.rotation.pulsed = true;
    const double g = c.system.gamma[0];
    req.options.rotation.pulse = t.rotation == "fast" ? PulseParams::fast_preset(g) : PulseParams::slow_preset(g);
  }
  std::vector<FidelityCell> cells = fidelity_study(req);
  std::vector<double> means;
  for (const FidelityCell& cell : cells) means.push_back(cell.mean);
  std::vector<double> smoothed = smooth(means, t.n_shot.size(), t.eta_e.size(), t.smoothing_sigma);

  CsvWriter out = job.csv("tomography.csv",
                          {"n_shot", "eta_e", "eta_g", "singular", "mean_fidelity", "std_fidelity", "mean_smoothed"});
  CsvWriter raw = job.csv("tomography_raw.csv", {"n_shot", "eta_e", "realization", "fidelity"});
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const FidelityCell& cell = cells[k];
    out.row({cell.n_shot, cell.eta_e, t.eta_g, cell.singular, cell.mean, cell.stddev, smoothed[k]});
    for (std::size_t r = 0; r < cell.fidelities.size(); ++r) raw.row({cell.n_shot, cell.eta_e, r, cell.fidelities[r]});
    job.note(fmt::format("n_shot {} eta_e {}: F = {} +- {}{}", cell.n_shot, fmt6(cell.eta_e), fmt6(cell.mean),
                         fmt6(cell.stddev), cell.singular ? " (singular detector)" : ""));
  }

  // First realization of every cell in full, re-run with the study's seed.
  const QMatrix& ref = req.reference ? *req.reference : req.prepared;
  json records = json::array();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    DetectorModel d{cells[k].eta_e, t.eta_g};
    const std::uint64_t seed = derive_seed(c.seed, k, 0);
    TomographyRecord rec = run_tomography(req.prepared, ref, cells[k].n_shot, d, seed, req.options);
    json counts = json::array(), mitigated = json::array();
    for (const Counts& x : rec.counts) counts.push_back(x);
    for (const Probabilities& x : rec.mitigated) mitigated.push_back(x);
    records.push_back({{"n_shot", rec.n_shot},
                       {"seed", rec.seed},
                       {"eta_e", d.eta_e},
                       {"eta_g", d.eta_g},
                       {"singular", rec.singular},
                       {"counts", counts},
                       {"mitigated", mitigated},
                       {"rho_bar", matrix_json(rec.rho_bar)},
                       {"rho_phys", matrix_json(rec.rho_phys)},
                       {"fidelity", rec.fidelity}});
  }
  json doc = {{"manifest_hash", job.hash}, {"outcome_order", {"ee", "eg", "ge", "gg"}}, {"records", records}};
  job.files.push_back("tomography_records.json");
  detail::write_text((job.dir / "tomography_records.json").string(), doc.dump(1) + "\n");

  for (std::uint64_t n : t.n_shot) {
    WallClock w = wall_clock_estimate(static_cast<double>(n), c.system.gamma[0]);
    job.note(fmt::format("n_shot {}: acquisition ~ {} s per setting, {} s for all nine", n, fmt6(w.per_setting),
                         fmt6(w.total)));
  }
  job.results["mean_fidelity"] = means;
}

void cmd_validate(Job& job) {
  const ValidateConfig& v = job.cfg.validate;
  FullValidation r = validate_full(job.cfg.system, {v.n_fock, v.tol, v.samples_per_period});
  CsvWriter out = job.csv("validate.csv",
                          {"n_fock", "c_grwa", "c_full", "abs_difference", "oscillation", "residual", "periods"});
  out.row({r.n_fock, r.c_grwa, r.c_full, r.delta, r.oscillation, r.residual, r.periods});
  job.note(fmt::format("C_grwa = {}, C_full = {}, |difference| = {}", fmt6(r.c_grwa), fmt6(r.c_full), fmt6(r.delta)));
  job.note(fmt::format("in-period oscillation {} (trace distance), period residual {}", fmt6(r.oscillation),
                       fmt6(r.residual)));
  job.results["abs_difference"] = r.delta;
}

void cmd_gap(Job& job) {
  const RunConfig& c = job.cfg;
  const GapConfig& g = c.gap;
  std::vector<double> delta = g.delta.values();
  struct Row {
    bool ok = false;
    std::string failure;
    double theta = 0.0, concurrence = 0.0, purcell = 0.0;
    double gap_grwa = 0.0, gap_dd = 0.0, gap_dd_stat = 0.0, exact = 0.0, approx = 0.0;
  };
  std::vector<Row> rows(delta.size());
  std::vector<std::exception_ptr> err(delta.size());
  const Cavity cav{c.system.chi[0], c.system.kappa, c.system.f_thz, c.system.gamma[0], c.system.n_fock};
  thz::detail::parallel_for(rows.size(), c.threads, [&](std::size_t k) {
    Row& r = rows[k];
    r.theta = 0.5 * std::acos(delta[k] / g.omega_r_tilde);
    try {
      ReducedPoint rp = reduce_parameters(g.omega_r_tilde, r.theta, g.omega_max, cav);
      ReportOptions ro;
      ro.compute_gap = true;
      SteadyReport rep = steady_report(rp.derived, ModelLevel::Grwa, ro);
      DoublyDressedFrame dd = doubly_dressed_frame(rp.derived, dressed_frame(rp.derived));
      r.purcell = 0.5 * (dd.purcell[0] + dd.purcell[1]);
      r.concurrence = rep.concurrence;
      r.gap_grwa = rep.gap;
      DoublyDressedFrame sym = symmetric_doubly_dressed_frame(r.purcell, r.theta, g.omega_r_tilde);
      Superoperator L = liouvillian(build_doubly_dressed_model(sym, 0.0));
      r.gap_dd = gap_numeric(L);
      r.gap_dd_stat = gap_numeric(L, GapSector::Stationary);
      r.exact = gap_analytic(r.purcell, r.theta, GapMode::Exact);
      r.approx = gap_analytic(r.purcell, r.theta, GapMode::Approx);
      r.ok = true;
    } catch (const std::exception& e) {
      r.failure = e.what();
      err[k] = std::current_exception();
    }
  });
  CsvWriter out = job.csv("gap.csv", {"delta", "theta_tilde", "ok", "concurrence", "gap_grwa", "gap_doubly_dressed",
                                     "gap_doubly_dressed_stationary", "gap_exact", "gap_approx", "purcell", "failure"});
  double worst = 0.0, worst_stat = 0.0;
  int ok = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Row& r = rows[k];
    out.row({delta[k], r.theta, r.ok, r.concurrence, r.gap_grwa, r.gap_dd, r.gap_dd_stat, r.exact, r.approx, r.purcell,
             r.failure});
    if (r.ok) {
      ++ok;
      if (r.exact > 0.0) {
        worst = std::max(worst, std::abs(r.gap_dd - r.exact) / r.exact);
        worst_stat = std::max(worst_stat, std::abs(r.gap_dd_stat - r.exact) / r.exact);
      }
    }
  }
  job.note(fmt::format("{} of {} detunings feasible; worst |gap_dd - exact| / exact = {} (all modes), {} (stationary)",
                       ok, rows.size(), fmt6(worst), fmt6(worst_stat)));
  job.results["worst_relative_error"] = worst;
  job.results["worst_relative_error_stationary"] = worst_stat;
  if (ok == 0 && !rows.empty()) std::rethrow_exception(err[0]);
}

}  // namespace

RunOutput run(Command cmd, const RunConfig& c) {
  validate_config(c);
  Job job{c, manifest_hash(c, cmd), fs::path(c.out), {}, {}, json::object()};
  std::error_code ec;
  fs::create_directories(job.dir, ec);
  if (ec) throw ConfigError(c.source + ": out: cannot create output directory " + c.out + ": " + ec.message());

  switch (cmd) {
    case Command::Spectrum:
      cmd_spectrum(job);
      break;
    case Command::Optimize:
      cmd_optimize(job);
      break;
    case Command::Map:
      cmd_map(job);
      break;
    case Command::DrivePlane:
      cmd_driveplane(job);
      break;
    case Command::Tomography:
      cmd_tomography(job);
      break;
    case Command::Validate:
      cmd_validate(job);
      break;
    case Command::Gap:
      cmd_gap(job);
      break;
  }

  const std::string name = command_name(cmd);
  std::string summary = fmt::format("{}\nmanifest: {}\nseed: {}\n", name, job.hash, c.seed);
  for (const std::string& line : job.summary) summary += line + "\n";
  const std::string summary_file = name + "_summary.txt";
  detail::write_text((job.dir / summary_file).string(), summary);
  job.files.push_back(summary_file);

  json files = json::array();
  for (const std::string& f : job.files)
    files.push_back({{"name", f}, {"sha1", detail::sha1_file((job.dir / f).string())}});
  json manifest = {{"manifest",
                    {{"format", 1},
                     {"command", name},
                     {"hash", job.hash},
                     {"hashed_inputs", json::parse(canonical_json(c, cmd, false))},
                     {"files", files},
                     {"results", job.results}}},
                   {"config", json::parse(canonical_json(c, cmd, true))}};
  const std::string manifest_file = name + "_manifest.json";
  detail::write_text((job.dir / manifest_file).string(), manifest.dump(1) + "\n");

  RunOutput r;
  r.hash = job.hash;
  r.files = job.files;
  r.files.push_back(manifest_file);
  r.summary = summary;
  return r;
}

}  // namespace thz::cli
