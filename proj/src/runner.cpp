#include "mzk/runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <sstream>

#include "mzk/diagnostics.hpp"
#include "mzk/errors.hpp"
#include "mzk/estimates.hpp"
#include "mzk/evolution.hpp"
#include "mzk/groundstate.hpp"
#include "mzk/io.hpp"
#include "mzk/plot.hpp"
#include "mzk/propagator.hpp"
#include "mzk/spectral.hpp"

#ifndef MZK_VERSION
#define MZK_VERSION "0.0.0"
#endif

namespace mzk {

namespace fs = std::filesystem;
using nlohmann::json;

std::string code_version() { return MZK_VERSION; }

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects artifacts and checksums them as they are written.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void text(const std::string& name, const std::string& content) {
    write_text(dir_ / name, content);
    add(name);
  }
  void snapshot(const std::string& name, const Field2D& f, double t) {
    write_snapshot(f, t, dir_ / name);
    add(name);
  }
  void trajectory(const std::string& name, const Trajectory& traj) {
    write_trajectory_csv(traj, dir_ / name);
    add(name);
  }
  const std::vector<Artifact>& artifacts() const { return artifacts_; }
  const fs::path& dir() const { return dir_; }

 private:
  void add(const std::string& name) { artifacts_.push_back({name, file_checksum(dir_ / name)}); }
  fs::path dir_;
  std::vector<Artifact> artifacts_;
};

std::string csv_row(std::initializer_list<double> values) {
  std::string row;
  for (double v : values) {
    if (!row.empty()) row += ',';
    row += format_double(v);
  }
  return row + '\n';
}

SpectralGrid grid_of(const RunConfig& cfg) {
  return make_grid(cfg.grid.n_x, cfg.grid.n_y, cfg.grid.period_x, cfg.grid.period_y);
}

double relative_drift(const std::vector<double>& v) {
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x - v.front()));
  return v.front() != 0.0 ? worst / std::abs(v.front()) : worst;
}

double absolute_drift(const std::vector<double>& v) {
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x - v.front()));
  return worst;
}

json trajectory_summary(const Trajectory& traj) {
  return {{"outcome", to_string(traj.outcome)},
          {"steps", traj.steps},
          {"samples", traj.size()},
          {"t_final", traj.times.back()},
          {"mass_drift", relative_drift(traj.mass)},
          {"energy_drift", relative_drift(traj.energy)},
          {"energy_drift_abs", absolute_drift(traj.energy)},
          {"grad_l2_growth", traj.grad_l2.front() > 0.0 ? traj.grad_l2.back() / traj.grad_l2.front() : 0.0}};
}

json fit_json(const RateFit& f) {
  return {{"series", to_string(f.series_kind)}, {"t_star", f.t_star},   {"rho", f.rho},
          {"rho_stderr", f.rho_stderr},         {"amplitude", f.amplitude}, {"residual", f.residual},
          {"window", {f.window.first, f.window.second}}, {"points", f.points}};
}

json distances_json(const std::vector<std::pair<std::string, double>>& d) {
  json out = json::object();
  for (const auto& [label, v] : d) out[label] = v;
  return out;
}

void write_evolution(Outputs& out, const Trajectory& traj) {
  out.trajectory("trajectory.csv", traj);
  out.snapshot("final.mzk", *traj.final_state, traj.times.back());
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04zu.mzk", k);
    out.snapshot(name, traj.snapshots[k].second, traj.snapshots[k].first);
  }
  const bool growing = traj.grad_l2.front() > 0.0;
  out.text("grad_l2.svg", emit_plot({{"||grad u||", traj.times, traj.grad_l2}, {"||u||_Hs", traj.times, traj.hs_norm}},
                                    {"gradient and Sobolev norms", "t", "norm", false, growing}));
  out.text("mass_energy.svg", emit_plot({{"mass", traj.times, traj.mass}, {"energy", traj.times, traj.energy}},
                                        {"conserved quantities", "t", "value", false, false}));
}

double reference_ground_state_mass() {
  static const double m = solve_ground_state(1.0, make_grid(256, 256, 40.0, 40.0)).mass;
  return m;
}

std::string run_groundstate(const RunConfig& cfg, Outputs& out, json& results) {
  const auto& b = cfg.groundstate;
  const GroundStateResult q = solve_ground_state(b.speed, grid_of(cfg), b.tol, b.max_iter);
  out.snapshot("profile.mzk", q.field, 0.0);
  const double e = energy(q.field);
  std::string table = "quantity,value\n";
  auto add = [&](const char* name, double v) {
    table += std::string(name) + "," + format_double(v) + "\n";
    results[name] = v;
  };
  add("speed", q.speed);
  add("mass", q.mass);
  add("residual", q.residual);
  add("iterations", q.iterations);
  add("pohozaev_quartic_ratio", q.pohozaev_ratios.first);
  add("pohozaev_gradient_ratio", q.pohozaev_ratios.second);
  add("energy", e);
  add("stabilization_factor", q.stabilization_factor);
  add("peak", q.field.physical().maxCoeff());
  out.text("groundstate.csv", table);
  return "completed";
}

std::string run_evolve(const RunConfig& cfg, Outputs& out, json& results) {
  const Field2D u0 = make_initial_data(cfg, grid_of(cfg));
  const Trajectory traj = evolve(u0, cfg.evolve);
  write_evolution(out, traj);
  results["trajectory"] = trajectory_summary(traj);
  return to_string(traj.outcome);
}

std::string run_fit(const RunConfig& cfg, Outputs& out, json& results) {
  const Field2D u0 = make_initial_data(cfg, grid_of(cfg));
  const Trajectory traj = evolve(u0, cfg.evolve);
  write_evolution(out, traj);
  results["trajectory"] = trajectory_summary(traj);

  if (traj.outcome != Outcome::blowup_detected) {
    results["rate_check"] = {{"status", to_string(RateCheckStatus::not_applicable)},
                             {"reason", "trajectory did not flag a blow-up"}};
    return to_string(RateCheckStatus::not_applicable);
  }
  const SeriesKind kind = cfg.fit.series == "hs_norm" ? SeriesKind::hs_norm : SeriesKind::grad_l2;
  std::optional<std::pair<double, double>> window;
  if (cfg.fit.t_a >= 0.0 || cfg.fit.t_b >= 0.0) window = std::pair{cfg.fit.t_a, cfg.fit.t_b};

  const RateFit fit = fit_blowup_rate(traj, kind, window);
  results["fit"] = fit_json(fit);
  try {
    const SeriesKind other = kind == SeriesKind::hs_norm ? SeriesKind::grad_l2 : SeriesKind::hs_norm;
    results["fit_other_series"] = fit_json(fit_blowup_rate(traj, other, window));
  } catch (const FitError& e) {
    results["fit_other_series"] = {{"error", e.what()}};
  }
  const RateCheckReport check = rate_bound_check(traj, fit);
  results["rate_check"] = {{"status", to_string(check.status)},
                           {"rho", check.rho},
                           {"rho_min", check.rho_min},
                           {"uncertainty", check.uncertainty},
                           {"window", {check.window.first, check.window.second}},
                           {"distances", distances_json(check.distances)}};
  out.text("rate.svg", emit_rate_plot(fit.rho, "fitted rate of " + to_string(kind)));
  return to_string(check.status);
}

std::string run_picard(const RunConfig& cfg, Outputs& out, json& results) {
  const auto& b = cfg.picard;
  const Field2D u0 = make_initial_data(cfg, grid_of(cfg));
  const PicardResult r =
      picard_iterate(u0, b.T, b.n_iter, b.n_time_samples, cfg.evolve.coupling, cfg.evolve.dealias);
  std::string table = "iteration,iterate_norm,difference_norm\n";
  for (std::size_t n = 0; n < r.iterate_norms.size(); ++n)
    table += std::to_string(n) + "," + format_double(r.iterate_norms[n]) + "," +
             (n == 0 ? std::string("") : format_double(r.difference_norms[n - 1])) + "\n";
  out.text("picard.csv", table);
  out.snapshot("final_iterate.mzk", r.slab.frames().back(), r.slab.times().back());

  std::vector<double> ratios;
  for (std::size_t n = 1; n < r.difference_norms.size(); ++n)
    ratios.push_back(r.difference_norms[n - 1] > 0.0 ? r.difference_norms[n] / r.difference_norms[n - 1] : 0.0);
  results["iterate_norms"] = r.iterate_norms;
  results["difference_norms"] = r.difference_norms;
  results["contraction_ratios"] = ratios;
  results["triple_norm"] = triple_norm(r.slab, b.s);
  results["hs_norm_u0"] = sobolev_norm(u0, b.s);
  return "completed";
}

std::string run_envelope(const RunConfig& cfg, Outputs& out, json& results) {
  const auto& b = cfg.envelope;
  const EnvelopeSweep sw = envelope_sweep(b.levels, b.horizons, grid_of(cfg), b.n_time_samples, cfg.threads);
  std::string table = "k,T,integral\n";
  std::vector<Series> plot;
  for (std::size_t l = 0; l < sw.levels.size(); ++l) {
    plot.push_back({"k = " + std::to_string(sw.levels[l]), sw.horizons, sw.integrals[l]});
    for (std::size_t h = 0; h < sw.horizons.size(); ++h)
      table += csv_row({double(sw.levels[l]), sw.horizons[h], sw.integrals[l][h]});
  }
  out.text("envelope.csv", table);
  out.text("envelope.svg", emit_plot(plot, {"kernel envelope integrals", "T", "integral", true, true}));
  results["t_slopes"] = sw.t_slopes;
  results["k_slopes"] = sw.k_slopes;
  results["fitted_T_slope"] = sw.fitted_T_slope;
  results["fitted_k_slope"] = sw.fitted_k_slope ? json(*sw.fitted_k_slope) : json(nullptr);
  return "completed";
}

std::string run_smoothing(const RunConfig& cfg, Outputs& out, json& results) {
  const auto& b = cfg.smoothing;
  const SmoothingSweep sw = smoothing_sweep(b.s, b.ensemble_size, b.horizons, grid_of(cfg),
                                            b.n_time_samples, b.band, cfg.seed, cfg.threads);
  std::string table = "member,T,ratio\n";
  std::vector<double> worst(sw.horizons.size(), 0.0);
  for (int m = 0; m < sw.ensemble_size; ++m)
    for (std::size_t h = 0; h < sw.horizons.size(); ++h) {
      table += csv_row({double(m), sw.horizons[h], sw.ratios[m][h]});
      worst[h] = std::max(worst[h], sw.ratios[m][h]);
    }
  out.text("smoothing.csv", table);
  std::vector<double> scaled(worst.size());
  for (std::size_t h = 0; h < worst.size(); ++h) scaled[h] = worst[h] / std::pow(sw.horizons[h], 0.125);
  out.text("smoothing.svg", emit_plot({{"max ratio", sw.horizons, worst}, {"max ratio / T^(1/8)", sw.horizons, scaled}},
                                      {"smoothing ratios", "T", "ratio", true, true}));
  results["sup_constant"] = sw.sup_constant;
  results["max_ratio_per_T"] = worst;
  return "completed";
}

std::string run_probe(const RunConfig& cfg, Outputs& out, json& results) {
  const auto& b = cfg.probe;
  const Field2D u0 = make_initial_data(cfg, grid_of(cfg));
  const ProbeTable t =
      triple_norm_power_probe(u0, b.s, b.horizons, b.n_time_samples, cfg.evolve.coupling, cfg.evolve.dealias);
  std::string table = "T,iterate_norm,linear_norm,bound\n";
  for (const auto& r : t.rows) table += csv_row({r.T, r.iterate_norm, r.linear_norm, r.bound});
  out.text("probe.csv", table);
  results["A"] = t.A;
  results["B"] = t.B;
  results["covers"] = t.covers;
  results["hs_norm_u0"] = sobolev_norm(u0, b.s);
  return t.covers ? "completed" : "bound_not_covering";
}

std::string run_report(const RunConfig& cfg, Outputs& out, json& results) {
  const auto& b = cfg.rate;
  const LwpVariant variant = b.variant == "ball_scaled" ? LwpVariant::ball_scaled : LwpVariant::ball_free;
  std::string table = "norm_hs,T_loc,T_loc_other_variant\n";
  const LwpVariant other = variant == LwpVariant::ball_free ? LwpVariant::ball_scaled : LwpVariant::ball_free;
  for (double n : b.norms) {
    const auto t = lwp_time_probe(n, b.c_s, variant);
    const auto t2 = lwp_time_probe(n, b.c_s, other);
    table += format_double(n) + "," + (t ? format_double(*t) : "inf") + "," + (t2 ? format_double(*t2) : "inf") + "\n";
  }
  out.text("rate_algebra.csv", table);
  const double rho = rate_exponent(variant);
  out.text("rate.svg", emit_rate_plot(rho, "rate implied by the local theory (" + to_string(variant) + ")"));
  results["variant"] = to_string(variant);
  results["c_s"] = b.c_s;
  results["lwp_exponent"] = lwp_exponent(variant);
  results["rate_exponent"] = rho;
  results["rate_exponent_other_variant"] = rate_exponent(other);
  results["distances"] = distances_json(reference_distances(rho));
  return "completed";
}

json manifest_json(const RunManifest& m, const RunConfig& cfg) {
  json echo = json::object();
  for (const auto& [k, v] : cfg.echo) echo[k] = v;
  json artifacts = json::array();
  for (const auto& a : m.artifacts) artifacts.push_back({{"path", a.path}, {"fnv1a64", a.checksum}});
  json out = {{"experiment", m.experiment},
              {"version", m.version},
              {"seed", cfg.seed},
              {"threads", cfg.threads},
              {"config", echo},
              {"started", m.started},
              {"finished", m.finished},
              {"outcome", m.outcome},
              {"success", m.success},
              {"artifacts", artifacts},
              {"results", m.results}};
  if (!m.error.empty()) out["error"] = m.error;
  return out;
}

}  // namespace

Field2D make_initial_data(const RunConfig& cfg, const SpectralGrid& grid) {
  const auto& b = cfg.initial;
  Field2D u = Field2D::zeros(grid);
  // M[Q] does not depend on c in two dimensions, nor (once resolved) on the
  // box, so it is taken from one well-resolved solve unless a soliton was
  // already computed on this grid.
  std::optional<double> q_mass;
  if (b.kind == "soliton") {
    const GroundStateResult q = solve_ground_state(b.speed, grid);
    q_mass = q.mass;
    u = soliton_initial_data(q, b.amplitude_factor);
  } else if (b.kind == "gaussian") {
    if (!(b.sigma_x > 0.0 && b.sigma_y > 0.0)) throw ConfigurationError("gaussian widths must be > 0");
    u = Field2D::from_function(grid, [&](double x, double y) {
      const double a = x / b.sigma_x, c = y / b.sigma_y;
      return b.amplitude * std::exp(-0.5 * (a * a + c * c));
    });
  } else if (b.kind == "random") {
    u = random_band_limited(grid, b.band, b.norm_s, cfg.seed);
  }

  double scale = 1.0;
  if (b.mass_ratio > 0.0) {
    if (!q_mass) q_mass = reference_ground_state_mass();
    const double target = b.mass_ratio * *q_mass;
    if (mass(u) == 0.0) throw DomainError("cannot rescale zero data to a target mass");
    scale = std::sqrt(target / mass(u));
  } else if (b.norm_hs > 0.0) {
    const double n = sobolev_norm(u, b.norm_s);
    if (n == 0.0) throw DomainError("cannot rescale zero data to a target norm");
    scale = b.norm_hs / n;
  }
  return scale == 1.0 ? u : scale * u;
}

RunManifest run(const RunConfig& cfg) {
  require_experiment_blocks(cfg);
  RunManifest m;
  m.experiment = cfg.experiment;
  m.version = code_version();
  m.started = utc_now();
  Outputs out(cfg.output_dir);

  auto finish = [&] {
    m.finished = utc_now();
    m.artifacts = out.artifacts();
    write_text(out.dir() / "manifest.json", manifest_json(m, cfg).dump(2) + "\n");
  };

  try {
    const std::string& e = cfg.experiment;
    if (e == "groundstate") m.outcome = run_groundstate(cfg, out, m.results);
    else if (e == "evolve") m.outcome = run_evolve(cfg, out, m.results);
    else if (e == "fit") m.outcome = run_fit(cfg, out, m.results);
    else if (e == "picard") m.outcome = run_picard(cfg, out, m.results);
    else if (e == "envelope") m.outcome = run_envelope(cfg, out, m.results);
    else if (e == "smoothing") m.outcome = run_smoothing(cfg, out, m.results);
    else if (e == "probe") m.outcome = run_probe(cfg, out, m.results);
    else m.outcome = run_report(cfg, out, m.results);
    m.success = true;
  } catch (const std::exception& ex) {
    m.outcome = "failed";
    m.error = ex.what();
    finish();
    throw;
  }
  finish();
  return m;
}

int exit_code_for(std::exception_ptr error) {
  try {
    std::rethrow_exception(error);
  } catch (const ConfigurationError&) {
    return 2;
  } catch (const IoError&) {
    return 4;
  } catch (const FormatError&) {
    return 4;
  } catch (const fs::filesystem_error&) {
    return 4;
  } catch (...) {
    return 3;
  }
}

int resolve_threads(std::optional<int> flag, const char* env_value, int fallback) {
  if (flag) {
    if (*flag < 1) throw ConfigurationError("--threads must be >= 1");
    return *flag;
  }
  if (env_value && *env_value) {
    char* end = nullptr;
    const long v = std::strtol(env_value, &end, 10);
    if (*end != '\0' || v < 1) throw ConfigurationError(std::string("MZK_THREADS must be a positive integer, got '") + env_value + "'");
    return static_cast<int>(v);
  }
  return fallback;
}

}  // namespace mzk
