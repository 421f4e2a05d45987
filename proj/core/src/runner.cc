#include "tdk/runner.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdk/audit.h"
#include "tdk/blasius.h"
#include "tdk/bo.h"
#include "tdk/checkpoint.h"
#include "tdk/ledger.h"
#include "tdk/presets.h"
#include "tdk/reconstruct.h"
#include "tdk/stepper.h"
#include "tdk/weights.h"

namespace tdk {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kVersion[] = "1.0.0";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

json config_json(const RunConfig& c) {
  json j;
  j["grid"] = {{"n_modes", c.n_modes},
               {"half_length", c.half_length},
               {"n_y", c.n_y},
               {"y_max", c.y_max}};
  j["model"] = {{"tau0", c.tau0},
                {"r", c.r},
                {"delta", c.delta_override},
                {"eps", c.eps_override},
                {"t_star", c.t_star_override},
                {"c0_tilde", c.constants.c0_tilde},
                {"c1", c.constants.c1},
                {"c2", c.constants.c2},
                {"e0_target", c.e0_target}};
  j["stepper"] = {{"dt", c.dt},
                  {"t_end", c.t_end},
                  {"scheme", c.scheme},
                  {"certified", c.certified},
                  {"threads", c.threads}};
  j["initial"] = {{"preset", c.preset},
                  {"checkpoint", c.resume_path},
                  {"soliton_speed", c.soliton_speed},
                  {"soliton_x0", c.soliton_x0},
                  {"soliton_tail_tol", c.soliton_tail_tol},
                  {"amplitude", c.amplitude}};
  j["output"] = {{"directory", c.output_dir},
                 {"ledger_cadence", c.ledger_cadence},
                 {"checkpoint_cadence", c.checkpoint_cadence},
                 {"lemma_cadence", c.lemma_cadence},
                 {"formats", c.formats}};
  j["reconstruct"] = {{"nu", c.nu},
                      {"n_ybar", c.n_ybar},
                      {"ybar_max", c.ybar_max},
                      {"n_ytilde", c.n_ytilde},
                      {"ytilde_max", c.ytilde_max}};
  return j;
}

/// Fully resolved inputs of one integration: grid, state, radius and the
/// relaxation parameters after any certified-window selection.
struct RunSetup {
  std::shared_ptr<Fourier> fourier;
  DeckState state;
  double tau = 0.0;
  double delta = 0.0;
  double r = 2.5;
  double dt = 0.0;
  double t_end = 0.0;
  double t_star = 0.0;
  double e0 = 0.0;
  bool resumed = false;
  PresetBundle bundle;
};

RunSetup build_setup(const RunConfig& config_in) {
  RunConfig config = config_in;
  CheckpointData data;
  const bool resumed = !config.resume_path.empty();
  if (resumed) {
    data = checkpoint_read(config.resume_path);
    // The checkpoint owns the grid shape; the preset machinery below only
    // supplies flags, sources and the eps handle.
    config.n_modes = data.wbar.n_modes();
    config.n_y = data.wbar.n_y();
    config.half_length = data.half_length;
    config.y_max = data.y_max;
  }

  RunSetup s;
  s.bundle = make_preset(config);
  s.fourier = s.bundle.fourier;
  s.state = s.bundle.state;
  s.tau = s.bundle.tau0;
  s.r = config.r;
  s.resumed = resumed;
  if (resumed) {
    s.state.wbar = data.wbar;
    s.state.A = data.A;
    s.state.t = data.t;
    s.state.eps = data.eps;
    s.tau = data.tau;
    if (data.r > 0.0) s.r = data.r;
    if (s.bundle.eps_handle) *s.bundle.eps_handle = data.eps;
  }

  const EstimateConstants& ec = config.constants;
  s.delta = config.delta_override > 0.0 ? config.delta_override
                                        : select_delta(ec);
  if (resumed && data.delta > 0.0) s.delta = data.delta;
  s.dt = config.dt;
  s.t_end = config.t_end;

  if (config.certified && !resumed) {
    // Measure the initial size at the inflated radius, then pick the
    // relaxation weights and the guaranteed window from it.
    NormParams np;
    np.tau = 10.0 * config.tau0;
    np.r = s.r;
    np.delta = s.delta;
    np.eps = s.state.eps;
    s.e0 = composite_norms(s.fourier->grid(), s.state, np).X;
    const SelectedParams sel = select_parameters(s.e0, config.tau0, ec);
    if (!sel.feasible)
      throw ConfigError("certified window infeasible for initial size " +
                        fmt17(s.e0));
    s.delta = sel.delta;
    s.state.eps = sel.eps;
    if (s.bundle.eps_handle) *s.bundle.eps_handle = sel.eps;
    s.t_star = sel.t_star;
    s.t_end = s.state.t + sel.t_star;
    s.dt = sel.t_star / 64.0;
  }
  return s;
}

StepperConfig stepper_config(const RunConfig& config, const RunSetup& s) {
  StepperConfig sc;
  sc.dt = s.dt;
  sc.t_end = s.t_end;
  sc.ledger_cadence = config.ledger_cadence;
  sc.checkpoint_cadence = config.checkpoint_cadence;
  sc.lemma_cadence = config.lemma_cadence;
  sc.evolve_wbar = s.bundle.evolve_wbar;
  sc.nonlinear_terms = s.bundle.nonlinear_terms;
  sc.forced_bo = s.bundle.forced_bo;
  sc.n_threads = config.threads;
  sc.norms.tau = s.tau;
  sc.norms.r = s.r;
  sc.norms.delta = s.delta;
  sc.norms.eps = s.state.eps;
  sc.c1 = config.constants.c1;
  sc.c2 = config.constants.c2;
  sc.source_w = s.bundle.source_w;
  sc.source_A = s.bundle.source_A;
  return sc;
}

CheckpointData to_checkpoint(const RunSetup& s, const DeckState& st,
                             double tau) {
  const Grid& grid = s.fourier->grid();
  CheckpointData d;
  d.t = st.t;
  d.tau = tau;
  d.eps = st.eps;
  d.delta = s.delta;
  d.r = s.r;
  d.half_length = grid.half_length();
  d.y_max = grid.y_max();
  d.wbar = st.wbar;
  d.A = st.A;
  return d;
}

const char* reason_name(StopReason r) {
  switch (r) {
    case StopReason::blow_up:
      return "blow-up";
    case StopReason::radius_exhausted:
      return "radius-exhausted";
    default:
      return "completed";
  }
}

json manifest_json(const RunConfig& config, const RunSetup& s) {
  json j;
  j["tool"] = "tdk";
  j["version"] = kVersion;
  j["config"] = config_json(config);
  j["derived"] = {{"delta", s.delta},
                  {"eps", s.state.eps},
                  {"r", s.r},
                  {"tau_start", s.tau},
                  {"dt", s.dt},
                  {"t_end", s.t_end},
                  {"t_star", s.t_star},
                  {"e0_measured", s.e0},
                  {"certified", config.certified},
                  {"resumed", s.resumed}};
  j["flags"] = {{"evolve_wbar", s.bundle.evolve_wbar},
                {"nonlinear_terms", s.bundle.nonlinear_terms},
                {"forced_bo", s.bundle.forced_bo}};
  if (s.bundle.has_soliton) {
    const SolitonInfo& so = s.bundle.soliton;
    j["soliton"] = {
        {"amplitude", so.amplitude},
        {"width", so.width},
        {"speed", so.speed},
        {"residual_l2", so.residual_l2},
        {"branch", so.branch},
        {"sign_convention",
         "peak value a = 4 c branch, profile a / (1 + c^2 (x-x0)^2); the "
         "branch field records the sign selected by the traveling residual"}};
  }
  j["conventions"] = {
      {"forward_transform",
       "f_hat_k = dx (-1)^k DFT_k; inverse carries dxi / (2 pi)"},
      {"convolution",
       "(2 pi L_x)^{-1} sum_m f_m g_{k-m}, band 3|k| <= n_modes - 1"},
      {"column_constant",
       "y_max minus the y-grid trapezoid of theta, one code path everywhere"},
      {"ledger_float_format", "%.17g"}};
  j["scheme"] = {
      {"shear",
       "half phase, compact Crank-Nicolson diffusion, half phase; two-step "
       "midpoint extrapolation of the forcing"},
      {"displacement", "integrating-factor two-step Adams-Bashforth"}};
  return j;
}

void write_audit_csv(const std::string& path, const RunResult& res) {
  std::ostringstream out;
  out << "label,t,value,bound,ratio,active\n";
  for (const LemmaSnapshot& snap : res.lemmas)
    for (const LemmaRatio& lr : snap.ratios)
      out << lr.label << ',' << fmt17(snap.t) << ',' << fmt17(lr.t_value)
          << ',' << fmt17(lr.bound) << ',' << fmt17(lr.ratio) << ','
          << (lr.active ? 1 : 0) << '\n';
  write_text(path, out.str());
}

json audit_report(const RunResult& res) {
  double odd_shear = 0.0;
  double odd_vort = 0.0;
  for (const AuditSample& sm : res.samples) {
    odd_shear = std::max(odd_shear, std::abs(sm.odd_shear));
    odd_vort = std::max(odd_vort, std::abs(sm.odd_vort));
  }
  auto rms_of = [&](double LedgerRow::* member) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const LedgerRow& row : res.ledger.rows) {
      const double v = row.*member;
      if (std::isfinite(v)) {
        sum += v * v;
        ++n;
      }
    }
    return n == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(n));
  };
  std::size_t interior = 0;
  for (const LedgerRow& row : res.ledger.rows)
    if (std::isfinite(row.residual_A)) ++interior;

  json j;
  j["rows"] = res.ledger.size();
  j["interior_rows"] = interior;
  j["oddness"] = {{"max_shear", odd_shear}, {"max_vorticity", odd_vort}};
  j["residual_rms"] = {{"displacement", rms_of(&LedgerRow::residual_A)},
                       {"shear", rms_of(&LedgerRow::residual_w)},
                       {"vorticity", rms_of(&LedgerRow::residual_vort)}};
  json snaps = json::array();
  for (const LemmaSnapshot& snap : res.lemmas) {
    json ratios = json::array();
    for (const LemmaRatio& lr : snap.ratios)
      ratios.push_back({{"label", lr.label},
                        {"value", lr.t_value},
                        {"bound", lr.bound},
                        {"ratio", lr.ratio},
                        {"active", lr.active}});
    snaps.push_back({{"t", snap.t}, {"ratios", std::move(ratios)}});
  }
  j["lemma_snapshots"] = std::move(snaps);
  if (!res.ledger.empty()) {
    const LedgerRow& last = res.ledger.rows.back();
    j["final"] = {{"t", last.t}, {"tau", last.tau}, {"E", last.E}};
  }
  return j;
}

int finish_run(const std::string& dir, const RunConfig& config,
               const RunSetup& setup, const RunResult& res) {
  const bool want_csv = config.formats.find("csv") != std::string::npos;
  const bool want_json = config.formats.find("json") != std::string::npos;
  write_ledger_csv(res.ledger, dir + "/ledger.csv");
  if (want_csv) write_audit_csv(dir + "/audit.csv", res);
  if (want_json)
    write_text(dir + "/audit.json", audit_report(res).dump(2) + "\n");
  checkpoint_write(dir + "/final.ckpt",
                   to_checkpoint(setup, res.state, res.tau));
  json man = manifest_json(config, setup);
  man["result"] = {{"reason", reason_name(res.reason)},
                   {"steps", res.steps_taken},
                   {"t_final", res.state.t},
                   {"tau_final", res.tau}};
  write_text(dir + "/manifest.json", man.dump(2) + "\n");
  switch (res.reason) {
    case StopReason::blow_up:
      return kExitBlowUp;
    case StopReason::radius_exhausted:
      return kExitRadiusExhausted;
    default:
      return kExitOk;
  }
}

int run_with_outputs(const RunConfig& config, RunSetup& setup,
                     RunResult* result_out) {
  fs::create_directories(config.output_dir);
  const std::string dir = config.output_dir;
  StepperConfig sc = stepper_config(config, setup);

  if (!(sc.t_end > setup.state.t)) {
    // Degenerate window: record the starting instant and stop.
    LedgerRow row = snapshot_row(*setup.fourier, setup.state, setup.tau, sc);
    EnergyLedger ledger;
    ledger.append(row);
    write_ledger_csv(ledger, dir + "/ledger.csv");
    json man = manifest_json(config, setup);
    man["result"] = {{"reason", "completed"},
                     {"steps", 0},
                     {"t_final", setup.state.t},
                     {"tau_final", setup.tau}};
    write_text(dir + "/manifest.json", man.dump(2) + "\n");
    return kExitOk;
  }

  const RunSetup& su = setup;
  const Grid& grid = su.fourier->grid();
  const double half_length = grid.half_length();
  const double y_max = grid.y_max();
  const double delta = su.delta;
  const double r = su.r;
  sc.on_checkpoint = [dir, half_length, y_max, delta, r](
                         const DeckState& st, double tau, std::size_t step) {
    CheckpointData d;
    d.t = st.t;
    d.tau = tau;
    d.eps = st.eps;
    d.delta = delta;
    d.r = r;
    d.half_length = half_length;
    d.y_max = y_max;
    d.wbar = st.wbar;
    d.A = st.A;
    char name[48];
    std::snprintf(name, sizeof name, "checkpoint_%08zu.ckpt", step);
    checkpoint_write(dir + "/" + name, d);
  };

  Stepper stepper(*setup.fourier, sc);
  RunResult res = stepper.run(setup.state, setup.tau);
  const int code = finish_run(dir, config, setup, res);
  if (result_out) *result_out = std::move(res);
  return code;
}

}  // namespace

RunConfig resolve_config(const CliOptions& options) {
  RunConfig config;
  if (!options.config_path.empty()) config = parse_run_config(options.config_path);
  if (!options.preset.empty() && options.preset != config.preset)
    apply_preset_defaults(options.preset, config);
  if (!options.resume.empty()) config.resume_path = options.resume;
  if (!options.output_dir.empty()) config.output_dir = options.output_dir;
  if (options.threads > 0) config.threads = options.threads;
  if (options.certified) config.certified = true;
  validate_run_config(config);
  return config;
}

int cmd_run(const CliOptions& options) {
  try {
    const RunConfig config = resolve_config(options);
    RunSetup setup = build_setup(config);
    return run_with_outputs(config, setup, nullptr);
  } catch (const CorruptCheckpointError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCorruptCheckpoint;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  }
}

int cmd_audit(const CliOptions& options) {
  try {
    RunConfig config;
    if (!options.config_path.empty())
      config = parse_run_config(options.config_path);
    const std::string dir =
        !options.output_dir.empty() ? options.output_dir : config.output_dir;
    const int threads = options.threads > 0 ? options.threads : config.threads;

    EnergyLedger ledger = read_ledger_csv(dir + "/ledger.csv");
    if (ledger.empty()) throw std::runtime_error("empty ledger: " + dir);

    bool evolve = true, nonlinear = true, forced = true;
    double c1 = config.constants.c1, c2 = config.constants.c2;
    {
      std::ifstream in(dir + "/manifest.json");
      if (in) {
        try {
          json man;
          in >> man;
          if (man.contains("flags")) {
            evolve = man["flags"].value("evolve_wbar", true);
            nonlinear = man["flags"].value("nonlinear_terms", true);
            forced = man["flags"].value("forced_bo", true);
          }
          if (man.contains("config") && man["config"].contains("model")) {
            c1 = man["config"]["model"].value("c1", c1);
            c2 = man["config"]["model"].value("c2", c2);
          }
        } catch (const json::exception&) {
          // stale or foreign manifest; keep full-dynamics defaults
        }
      }
    }

    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.path().extension() == ".ckpt")
        paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw std::runtime_error("no checkpoints in " + dir);

    struct ColumnRef {
      const char* name;
      double LedgerRow::* member;
    };
    static const ColumnRef kChecked[] = {
        {"X", &LedgerRow::X},          {"Y", &LedgerRow::Y},
        {"Z", &LedgerRow::Z},          {"H", &LedgerRow::H},
        {"Gamma1", &LedgerRow::Gamma1}, {"Gamma2", &LedgerRow::Gamma2},
        {"T_A1", &LedgerRow::T_A1},    {"T_A2", &LedgerRow::T_A2},
        {"T_N", &LedgerRow::T_N},      {"T_L", &LedgerRow::T_L},
        {"T_M", &LedgerRow::T_M},      {"T_B", &LedgerRow::T_B},
        {"T_dyN", &LedgerRow::T_dyN},  {"T_dyL", &LedgerRow::T_dyL},
        {"T_dyM", &LedgerRow::T_dyM},  {"T_dyB", &LedgerRow::T_dyB}};

    json checks = json::array();
    double worst = 0.0;
    std::size_t compared = 0;
    std::shared_ptr<Fourier> fourier;
    for (const std::string& path : paths) {
      CheckpointData d = checkpoint_read(path);
      Grid grid(d.wbar.n_modes(), d.half_length, d.wbar.n_y(), d.y_max);
      if (!fourier || !(fourier->grid() == grid))
        fourier = std::make_shared<Fourier>(grid);
      DeckState st(grid);
      st.wbar = d.wbar;
      st.A = d.A;
      st.t = d.t;
      st.eps = d.eps;

      StepperConfig sc;
      sc.evolve_wbar = evolve;
      sc.nonlinear_terms = nonlinear;
      sc.forced_bo = forced;
      sc.n_threads = threads;
      sc.norms.r = d.r > 0.0 ? d.r : 2.5;
      sc.norms.delta = d.delta > 0.0 ? d.delta : 1.0;
      sc.norms.eps = d.eps;
      sc.c1 = c1;
      sc.c2 = c2;
      LedgerRow fresh = snapshot_row(*fourier, st, d.tau, sc);

      // nearest recorded instant
      const LedgerRow* best = &ledger.rows.front();
      for (const LedgerRow& row : ledger.rows)
        if (std::abs(row.t - d.t) < std::abs(best->t - d.t)) best = &row;
      const bool aligned = std::abs(best->t - d.t) <= 1e-12 * std::max(1.0, std::abs(d.t));

      double file_worst = 0.0;
      const char* worst_col = "";
      if (aligned) {
        for (const ColumnRef& col : kChecked) {
          const double a = fresh.*(col.member);
          const double b = (*best).*(col.member);
          const double rel = std::abs(a - b) / std::max(1.0, std::abs(b));
          if (rel > file_worst) {
            file_worst = rel;
            worst_col = col.name;
          }
        }
        worst = std::max(worst, file_worst);
        ++compared;
      }
      checks.push_back({{"file", fs::path(path).filename().string()},
                        {"t", d.t},
                        {"tau", d.tau},
                        {"ledger_t", best->t},
                        {"aligned", aligned},
                        {"max_mismatch", file_worst},
                        {"worst_column", worst_col}});
    }

    json report;
    report["rows"] = ledger.size();
    report["checkpoints"] = paths.size();
    report["compared"] = compared;
    report["max_mismatch"] = worst;
    report["checks"] = std::move(checks);
    write_text(dir + "/audit_recheck.json", report.dump(2) + "\n");
    std::printf(
        "audit: %zu checkpoint(s) against %zu ledger row(s), max column "
        "mismatch %.3g\n",
        compared, ledger.size(), worst);
    return kExitOk;
  } catch (const CorruptCheckpointError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCorruptCheckpoint;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  }
}

int cmd_bo(const CliOptions& options) {
  try {
    CliOptions opts = options;
    if (opts.preset.empty() && opts.config_path.empty())
      opts.preset = "bo-soliton";
    const RunConfig config = resolve_config(opts);
    RunSetup setup = build_setup(config);
    const Grid& grid = setup.fourier->grid();

    const SurfaceSpectrum a0 = setup.state.A;
    const double t_start = setup.state.t;
    const BOInvariants inv0 = bo_invariants(grid, a0);

    RunResult res;
    const int code = run_with_outputs(config, setup, &res);
    if (!(config.t_end > t_start)) return code;

    const BOInvariants inv1 = bo_invariants(grid, res.state.A);
    const double span = res.state.t - t_start;
    const double speed = setup.bundle.has_soliton
                             ? setup.bundle.soliton.speed
                             : 0.0;

    // traveling-frame comparison against the phase-shifted start
    SurfaceSpectrum shifted = a0;
    for (std::size_t i = 0; i < grid.n_modes(); ++i)
      shifted[i] *= std::exp(complex(0.0, -grid.xi(i) * speed * span));
    std::vector<complex> p_final, p_shift, p_start;
    setup.fourier->inverse(res.state.A, p_final);
    setup.fourier->inverse(shifted, p_shift);
    setup.fourier->inverse(a0, p_start);
    double max_err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < grid.n_modes(); ++i) {
      max_err = std::max(max_err, std::abs(p_final[i] - p_shift[i]));
      scale = std::max(scale, std::abs(p_start[i]));
    }

    json rep;
    rep["t_span"] = span;
    if (setup.bundle.has_soliton) {
      const SolitonInfo& so = setup.bundle.soliton;
      rep["soliton"] = {{"amplitude", so.amplitude},
                        {"width", so.width},
                        {"speed", so.speed},
                        {"residual_l2", so.residual_l2},
                        {"branch", so.branch}};
    }
    rep["mean_start"] = inv0.mean;
    rep["mean_final"] = inv1.mean;
    rep["mean_drift"] = std::abs(inv1.mean - inv0.mean);
    rep["l2_mass_start"] = inv0.l2_mass;
    rep["l2_mass_final"] = inv1.l2_mass;
    rep["l2_mass_drift"] =
        std::abs(inv1.l2_mass - inv0.l2_mass) /
        std::max(inv0.l2_mass, std::numeric_limits<double>::min());
    rep["traveling_frame_linf"] =
        scale > 0.0 ? max_err / scale : max_err;
    write_text(config.output_dir + "/bo_report.json", rep.dump(2) + "\n");
    return code;
  } catch (const CorruptCheckpointError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCorruptCheckpoint;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  }
}

int cmd_blasius(const CliOptions& options) {
  try {
    const std::string dir =
        options.output_dir.empty() ? std::string("out") : options.output_dir;
    const BlasiusProfile p = blasius_solve();
    fs::create_directories(dir);

    std::ostringstream csv;
    csv << "eta,f,fp,fpp\n";
    for (std::size_t i = 0; i < p.eta.size(); ++i)
      csv << fmt17(p.eta[i]) << ',' << fmt17(p.f[i]) << ',' << fmt17(p.fp[i])
          << ',' << fmt17(p.fpp[i]) << '\n';
    write_text(dir + "/blasius.csv", csv.str());

    json j;
    j["f_pp0"] = p.f_pp0;
    j["eta_max"] = p.eta_max();
    j["h"] = p.h;
    j["far_speed"] = p.fp.back();
    // quartic wall-expansion coefficient of the normalized base speed
    j["wall_quartic_coefficient"] = 1.0 / (24.0 * p.f_pp0 * p.f_pp0);
    write_text(dir + "/blasius.json", j.dump(2) + "\n");
    std::printf("blasius: f''(0) = %.12f, far speed %.12f\n", p.f_pp0,
                p.fp.back());
    return kExitOk;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  }
}

int cmd_reconstruct(const CliOptions& options) {
  try {
    const RunConfig config = resolve_config(options);
    RunSetup setup = build_setup(config);
    const BlasiusProfile bl = blasius_solve();

    ReconstructOptions ro;
    ro.n_ybar = config.n_ybar;
    ro.ybar_max = config.ybar_max;
    ro.n_ytilde = config.n_ytilde;
    ro.ytilde_max = config.ytilde_max;
    const DeckComposite dc =
        reconstruct(*setup.fourier, setup.state, bl, config.nu, ro);

    fs::create_directories(config.output_dir);
    const std::string dir = config.output_dir;
    const std::size_t n_x = dc.x.size();

    {
      std::ostringstream out;
      out << "x,ybar,u1,v1,p1\n";
      for (std::size_t i = 0; i < n_x; ++i)
        for (std::size_t j = 0; j < dc.ybar.size(); ++j) {
          const std::size_t q = i * dc.ybar.size() + j;
          out << fmt17(dc.x[i]) << ',' << fmt17(dc.ybar[j]) << ','
              << fmt17(dc.u1[q]) << ',' << fmt17(dc.v1[q]) << ','
              << fmt17(dc.p1[q]) << '\n';
        }
      write_text(dir + "/deck_main.csv", out.str());
    }
    {
      std::ostringstream out;
      out << "x,y,u,v,p\n";
      for (std::size_t i = 0; i < n_x; ++i)
        for (std::size_t j = 0; j < dc.y_lower.size(); ++j) {
          const std::size_t q = i * dc.y_lower.size() + j;
          out << fmt17(dc.x[i]) << ',' << fmt17(dc.y_lower[j]) << ','
              << fmt17(dc.u_low[q]) << ',' << fmt17(dc.v_low[q]) << ','
              << fmt17(dc.p_low[i]) << '\n';
        }
      write_text(dir + "/deck_lower.csv", out.str());
    }
    {
      std::ostringstream out;
      out << "x,ytilde,u2,v2,p2\n";
      for (std::size_t i = 0; i < n_x; ++i)
        for (std::size_t j = 0; j < dc.ytilde.size(); ++j) {
          const std::size_t q = i * dc.ytilde.size() + j;
          out << fmt17(dc.x[i]) << ',' << fmt17(dc.ytilde[j]) << ','
              << fmt17(dc.u2[q]) << ',' << fmt17(dc.v2[q]) << ','
              << fmt17(dc.p2[q]) << '\n';
        }
      write_text(dir + "/deck_upper.csv", out.str());
    }

    // overlap study: mismatch at the geometric-mean height for a viscosity
    // sweep, with the log-log slope of the decay
    json matches = json::array();
    std::vector<double> ln_nu, ln_mm;
    for (const double nu_k : {1e-2, 1e-3, 1e-4}) {
      const double ybar = std::pow(nu_k, 1.0 / 32.0);
      const double mm =
          matching_mismatch(*setup.fourier, setup.state, bl, nu_k, ybar);
      matches.push_back({{"nu", nu_k}, {"ybar", ybar}, {"mismatch", mm}});
      if (mm > 0.0) {
        ln_nu.push_back(std::log(nu_k));
        ln_mm.push_back(std::log(mm));
      }
    }
    double slope = 0.0;
    if (ln_nu.size() >= 2) {
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < ln_nu.size(); ++i) {
        mx += ln_nu[i];
        my += ln_mm[i];
      }
      mx /= static_cast<double>(ln_nu.size());
      my /= static_cast<double>(ln_nu.size());
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < ln_nu.size(); ++i) {
        num += (ln_nu[i] - mx) * (ln_mm[i] - my);
        den += (ln_nu[i] - mx) * (ln_nu[i] - mx);
      }
      slope = den > 0.0 ? num / den : 0.0;
    }

    json j;
    j["nu"] = config.nu;
    j["scalings"] = {{"x_scale", dc.scalings.x_scale},
                     {"ybar_scale", dc.scalings.ybar_scale},
                     {"y_scale", dc.scalings.y_scale},
                     {"ytilde_scale", dc.scalings.ytilde_scale},
                     {"t_scale", dc.scalings.t_scale},
                     {"u_main_pert", dc.scalings.u_main_pert},
                     {"uvp_quarter", dc.scalings.uvp_quarter},
                     {"u_lower", dc.scalings.u_lower},
                     {"v_lower", dc.scalings.v_lower}};
    j["cr_residual"] = dc.cr_residual;
    j["matching"] = std::move(matches);
    j["matching_slope"] = slope;
    j["f_pp0"] = bl.f_pp0;
    write_text(dir + "/reconstruct.json", j.dump(2) + "\n");
    std::printf("reconstruct: cr residual %.3g, matching slope %.4f\n",
                dc.cr_residual, slope);
    return kExitOk;
  } catch (const CorruptCheckpointError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCorruptCheckpoint;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  }
}

namespace {

DeckState selftest_state(const Grid& grid, std::mt19937_64& rng, double amp) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  DeckState s(grid);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    if (!grid.retained(i)) continue;
    const double decay =
        std::exp(-0.25 * std::abs(static_cast<double>(grid.wavenumber(i))));
    for (std::size_t j = 1; j + 1 < grid.n_y(); ++j) {
      const double y = grid.y(j);
      s.wbar(i, j) =
          amp * decay * y * std::exp(-0.5 * y * y) * complex(uni(rng), uni(rng));
    }
    s.A[i] = amp * decay * complex(uni(rng), uni(rng));
  }
  enforce_hermitian(grid, s.wbar);
  enforce_hermitian(grid, s.A);
  return s;
}

}  // namespace

int cmd_selftest(const CliOptions&) {
  int failures = 0;
  auto check = [&failures](const char* name, bool ok) {
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", name);
    if (!ok) ++failures;
  };
  auto guarded = [](auto&& fn) -> bool {
    try {
      return fn();
    } catch (const std::exception& e) {
      std::fprintf(stderr, "  (%s)\n", e.what());
      return false;
    }
  };
  std::mt19937_64 rng(0x5eed5eedULL);

  check("fft-round-trip", guarded([&] {
          Grid grid(32, 5.0, 32, 12.0);
          Fourier fourier(grid);
          DeckState s = selftest_state(grid, rng, 1.0);
          std::vector<complex> phys;
          fourier.inverse(s.wbar, phys);
          SpectralField back(grid);
          fourier.forward(phys, back);
          double diff = 0.0;
          for (std::size_t i = 0; i < grid.n_modes(); ++i)
            for (std::size_t j = 0; j < grid.n_y(); ++j)
              diff = std::max(diff, std::abs(back(i, j) - s.wbar(i, j)));
          return diff < 1e-12 * std::max(1.0, max_abs(s.wbar));
        }));

  check("convolution-direct", guarded([&] {
          Grid grid(32, 5.0, 16, 12.0);
          Fourier fourier(grid);
          std::uniform_real_distribution<double> uni(-1.0, 1.0);
          SurfaceSpectrum a(grid), b(grid);
          for (std::size_t i = 0; i < grid.n_modes(); ++i)
            if (grid.retained(i)) {
              a[i] = complex(uni(rng), uni(rng));
              b[i] = complex(uni(rng), uni(rng));
            }
          SurfaceSpectrum via(grid);
          fourier.convolve(a, b, via);
          const long kd = grid.dealias_limit();
          const double pref = 1.0 / (2.0 * M_PI * grid.half_length());
          auto at = [&](const SurfaceSpectrum& f, long k) {
            const std::size_t i =
                k >= 0 ? static_cast<std::size_t>(k)
                       : grid.n_modes() - static_cast<std::size_t>(-k);
            return f[i];
          };
          double worst = 0.0;
          for (long k = -kd; k <= kd; ++k) {
            complex sum(0.0, 0.0);
            for (long m = -kd; m <= kd; ++m) {
              const long km = k - m;
              if (km < -kd || km > kd) continue;
              sum += at(a, m) * at(b, km);
            }
            worst = std::max(worst, std::abs(pref * sum - at(via, k)));
          }
          return worst < 1e-12;
        }));

  check("hermitian-through-steps", guarded([&] {
          Grid grid(32, 5.0, 32, 12.0);
          Fourier fourier(grid);
          DeckState s = selftest_state(grid, rng, 1e-2);
          StepperConfig sc;
          sc.dt = 1e-4;
          sc.t_end = 3e-4;
          sc.ledger_cadence = 0;
          sc.lemma_cadence = 0;
          Stepper stepper(fourier, sc);
          RunResult res = stepper.run(s, 0.1);
          if (res.reason != StopReason::completed) return false;
          return hermitian_defect(grid, res.state.wbar) < 1e-12 &&
                 hermitian_defect(grid, res.state.A) < 1e-12;
        }));

  check("hardy-inequality", guarded([&] {
          Grid grid(8, 1.0, 256, 12.0);
          std::vector<double> f(grid.n_y());
          for (std::size_t j = 0; j < grid.n_y(); ++j)
            f[j] = std::exp(-0.5 * grid.y(j) * grid.y(j));
          return hardy_check(grid, f, 0.0, 1.0 / 64.0).satisfied;
        }));

  check("pressure-form-equivalence", guarded([&] {
          Grid grid(32, 5.0, 64, 12.0);
          Fourier fourier(grid);
          DeckState s = selftest_state(grid, rng, 0.5);
          s.t = 0.05;
          ThetaBank bank = make_theta_bank(grid, s.t, s.eps);
          SpectralField b1 =
              term_B(fourier, s.wbar, s.A, bank, s.t, s.eps, 1);
          SpectralField b2 =
              term_B_unrewritten(fourier, s.wbar, s.A, bank, s.t, s.eps, 1);
          double diff = 0.0;
          for (std::size_t i = 0; i < grid.n_modes(); ++i)
            for (std::size_t j = 0; j < grid.n_y(); ++j)
              diff = std::max(diff, std::abs(b1(i, j) - b2(i, j)));
          return diff < 1e-10 * std::max(1.0, max_abs(b1));
        }));

  check("soliton-residual", guarded([&] {
          Grid grid(512, 40.0, 16, 12.0);
          Fourier fourier(grid);
          SolitonInfo info;
          bo_soliton(fourier, 0.25, 0.0, 1e-6, &info);
          return info.residual_l2 < 1e-6;
        }));

  check("diffusion-column", guarded([&] {
          Grid grid(8, 1.0, 256, 12.0);
          Fourier fourier(grid);
          DeckState s(grid);
          for (std::size_t j = 1; j + 1 < grid.n_y(); ++j) {
            const double y = grid.y(j);
            s.wbar(0, j) = complex(std::exp(-(y - 4.0) * (y - 4.0)), 0.0);
          }
          StepperConfig sc;
          sc.dt = 1e-3;
          sc.t_end = 0.01;
          sc.nonlinear_terms = false;
          sc.forced_bo = false;
          sc.ledger_cadence = 0;
          sc.lemma_cadence = 0;
          Stepper stepper(fourier, sc);
          RunResult res = stepper.run(s, 1e4);
          if (res.reason != StopReason::completed) return false;
          const double t = res.state.t;
          double num = 0.0, den = 0.0;
          for (std::size_t j = 0; j < grid.n_y(); ++j) {
            const double y = grid.y(j);
            double exact = 0.0;
            for (int n = -3; n <= 3; ++n) {
              const double yp = y - 2.0 * n * grid.y_max();
              const double ym = -y - 2.0 * n * grid.y_max();
              exact += std::exp(-(yp - 4.0) * (yp - 4.0) / (1.0 + 4.0 * t));
              exact -= std::exp(-(ym - 4.0) * (ym - 4.0) / (1.0 + 4.0 * t));
            }
            exact /= std::sqrt(1.0 + 4.0 * t);
            const double got = res.state.wbar(0, j).real();
            num += (got - exact) * (got - exact);
            den += exact * exact;
          }
          return std::sqrt(num / den) < 1e-4;
        }));

  check("checkpoint-round-trip", guarded([&] {
          Grid grid(16, 4.0, 32, 12.0);
          DeckState s = selftest_state(grid, rng, 0.7);
          CheckpointData d;
          d.t = 0.25;
          d.tau = 0.08;
          d.eps = 1.0 / 64.0;
          d.delta = 4.36;
          d.r = 2.5;
          d.half_length = grid.half_length();
          d.y_max = grid.y_max();
          d.wbar = s.wbar;
          d.A = s.A;
          const fs::path p1 = fs::temp_directory_path() / "tdk_selftest_a.ckpt";
          const fs::path p2 = fs::temp_directory_path() / "tdk_selftest_b.ckpt";
          checkpoint_write(p1.string(), d);
          CheckpointData back = checkpoint_read(p1.string());
          checkpoint_write(p2.string(), back);
          std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
          std::stringstream s1, s2;
          s1 << f1.rdbuf();
          s2 << f2.rdbuf();
          const bool same_bytes = s1.str() == s2.str() && !s1.str().empty();
          fs::remove(p1);
          fs::remove(p2);
          bool same_data = back.t == d.t && back.tau == d.tau &&
                           back.eps == d.eps && back.delta == d.delta &&
                           back.r == d.r;
          for (std::size_t i = 0; same_data && i < grid.n_modes(); ++i)
            for (std::size_t j = 0; j < grid.n_y(); ++j)
              if (back.wbar(i, j) != d.wbar(i, j)) {
                same_data = false;
                break;
              }
          return same_bytes && same_data;
        }));

  check("base-profile", guarded([&] {
          const BlasiusProfile p = blasius_solve(12.0, 1e-10, 1e-2);
          return std::abs(p.f_pp0 - 0.4696) < 1e-3 &&
                 std::abs(p.fp.back() - 1.0) < 1e-8;
        }));

  check("parameter-selection", guarded([&] {
          const SelectedParams sel =
              select_parameters(1e-2, 0.1, EstimateConstants{});
          return sel.feasible && sel.t_star > 0.0 &&
                 sel.eps <= 1.0 / 64.0 + 1e-15;
        }));

  if (failures == 0) std::printf("selftest: all checks passed\n");
  return failures == 0 ? kExitOk : kExitConfigError;
}

}  // namespace tdk
