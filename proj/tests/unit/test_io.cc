#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdk/checkpoint.h"
#include "tdk/config.h"
#include "tdk/field.h"
#include "tdk/grid.h"
#include "tdk/ledger.h"
#include "tdk/runner.h"

namespace fs = std::filesystem;
using nlohmann::json;
using tdk::complex;

namespace {

fs::path work_dir() {
  static const fs::path base = [] {
    fs::path p = fs::temp_directory_path() / "tdk_io_suite";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return base;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(TDK_CLI_PATH) + " " + args + " > /dev/null 2> /dev/null";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

json load_json(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

// Bitwise-faithful comparison: NaN matches NaN, zero keeps its sign.
bool same_value(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  if (a == 0.0 && b == 0.0) return std::signbit(a) == std::signbit(b);
  return a == b;
}

}  // namespace

TEST_CASE("ledger csv survives a round trip at full precision") {
  tdk::EnergyLedger ledger;
  tdk::LedgerRow r0;
  r0.t = 0.0;
  r0.tau = 3.14159265358979312;
  r0.X = 1.0 / 3.0;
  r0.Y = 1e-308;
  r0.Z = -0.0;
  r0.H = 6.02214076e23;
  r0.E = 2.2250738585072014e-308;
  r0.Gamma1 = -1.0e17 / 3.0;
  r0.T_A1 = 5e-324;
  r0.residual_A = std::numeric_limits<double>::quiet_NaN();
  tdk::LedgerRow r1 = r0;
  r1.t = 1.0 / 3.0;
  r1.residual_A = 0.125;
  r1.residual_w = -7.25;
  r1.residual_vort = std::numeric_limits<double>::infinity();
  ledger.append(r0);
  ledger.append(r1);

  const fs::path path = work_dir() / "roundtrip.csv";
  tdk::write_ledger_csv(ledger, path.string());
  const tdk::EnergyLedger back = tdk::read_ledger_csv(path.string());

  REQUIRE(back.size() == 2);
  for (std::size_t n = 0; n < 2; ++n) {
    const tdk::LedgerRow& a = ledger.rows[n];
    const tdk::LedgerRow& b = back.rows[n];
    CHECK(same_value(a.t, b.t));
    CHECK(same_value(a.tau, b.tau));
    CHECK(same_value(a.X, b.X));
    CHECK(same_value(a.Y, b.Y));
    CHECK(same_value(a.Z, b.Z));
    CHECK(same_value(a.H, b.H));
    CHECK(same_value(a.E, b.E));
    CHECK(same_value(a.Gamma1, b.Gamma1));
    CHECK(same_value(a.Gamma2, b.Gamma2));
    CHECK(same_value(a.T_A1, b.T_A1));
    CHECK(same_value(a.T_B, b.T_B));
    CHECK(same_value(a.T_dyB, b.T_dyB));
    CHECK(same_value(a.residual_A, b.residual_A));
    CHECK(same_value(a.residual_w, b.residual_w));
    CHECK(same_value(a.residual_vort, b.residual_vort));
  }
  // NaN cells pass through as NaN.
  CHECK(std::isnan(back.rows[0].residual_A));

  SUBCASE("append rejects non-increasing timestamps") {
    tdk::LedgerRow again = r1;
    CHECK_THROWS_AS(ledger.append(again), std::invalid_argument);
  }

  SUBCASE("reader rejects a foreign header") {
    const fs::path bad = work_dir() / "bad_header.csv";
    write_file(bad, "time,value\n0,1\n");
    CHECK_THROWS_AS(tdk::read_ledger_csv(bad.string()), std::runtime_error);
  }

  SUBCASE("reader rejects a short row") {
    const fs::path bad = work_dir() / "short_row.csv";
    write_file(bad, std::string(tdk::kLedgerColumns) + "\n1.0,2.0\n");
    CHECK_THROWS_AS(tdk::read_ledger_csv(bad.string()), std::runtime_error);
  }

  SUBCASE("reader rejects a missing file") {
    CHECK_THROWS_AS(tdk::read_ledger_csv((work_dir() / "absent.csv").string()),
                    std::runtime_error);
  }
}

TEST_CASE("committed fixture checkpoint reads back bit for bit") {
  const fs::path fixture = fs::path(TDK_FIXTURE_DIR) / "small.ckpt";
  const tdk::CheckpointData d = tdk::checkpoint_read(fixture.string());

  CHECK(d.wbar.n_modes() == 8);
  CHECK(d.wbar.n_y() == 16);
  CHECK(d.A.n_modes() == 8);
  CHECK(d.t == 0.015625);
  CHECK(d.tau == 0.0625);
  CHECK(d.eps == 0.015625);
  CHECK(d.delta == 4.25);
  CHECK(d.r == 2.5);
  CHECK(d.half_length == 1.0);
  CHECK(d.y_max == 12.0);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 16; ++j) {
      const std::size_t q = i * 16 + j;
      const double re = static_cast<double>((3 * q) % 11) * 0.0625 - 0.25;
      const double im = static_cast<double>((5 * q) % 13) * 0.03125 - 0.1875;
      CHECK(d.wbar(i, j) == complex(re, im));
    }
    const double re = static_cast<double>((7 * i) % 9) * 0.125 - 0.5;
    const double im = static_cast<double>((11 * i) % 5) * 0.0625 - 0.125;
    CHECK(d.A[i] == complex(re, im));
  }

  SUBCASE("rewriting the fixture reproduces its exact bytes") {
    const fs::path copy = work_dir() / "fixture_rewrite.ckpt";
    tdk::checkpoint_write(copy.string(), d);
    CHECK(read_file(copy) == read_file(fixture));
  }

  SUBCASE("a flipped payload byte fails the checksum") {
    std::string bytes = read_file(fixture);
    bytes[100] = static_cast<char>(bytes[100] ^ 0x40);
    const fs::path bad = work_dir() / "tampered.ckpt";
    write_file(bad, bytes);
    CHECK_THROWS_AS(tdk::checkpoint_read(bad.string()),
                    tdk::CorruptCheckpointError);
  }

  SUBCASE("a truncated file is rejected") {
    const fs::path bad = work_dir() / "truncated.ckpt";
    write_file(bad, read_file(fixture).substr(0, 60));
    CHECK_THROWS_AS(tdk::checkpoint_read(bad.string()),
                    tdk::CorruptCheckpointError);
  }

  SUBCASE("a wrong magic is rejected") {
    std::string bytes = read_file(fixture);
    bytes[0] = 'X';
    const fs::path bad = work_dir() / "bad_magic.ckpt";
    write_file(bad, bytes);
    CHECK_THROWS_AS(tdk::checkpoint_read(bad.string()),
                    tdk::CorruptCheckpointError);
  }

  SUBCASE("an inconsistent shape header is rejected") {
    // Claim one extra mode; the byte count no longer matches.
    std::string bytes = read_file(fixture);
    bytes[8] = 9;
    const fs::path bad = work_dir() / "bad_shape.ckpt";
    write_file(bad, bytes);
    CHECK_THROWS_AS(tdk::checkpoint_read(bad.string()),
                    tdk::CorruptCheckpointError);
  }

  SUBCASE("a missing file raises a plain runtime error") {
    CHECK_THROWS_AS(tdk::checkpoint_read((work_dir() / "absent.ckpt").string()),
                    std::runtime_error);
  }
}

TEST_CASE("checkpoint writer round trip and shape validation") {
  tdk::Grid grid(16, 4.0, 32, 12.0);
  tdk::CheckpointData d;
  d.t = 0.25;
  d.tau = 0.08;
  d.eps = 1.0 / 64.0;
  d.delta = 4.3643578047198484;
  d.r = 2.5;
  d.half_length = grid.half_length();
  d.y_max = grid.y_max();
  d.wbar = tdk::SpectralField(grid);
  d.A = tdk::SurfaceSpectrum(grid);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    for (std::size_t j = 0; j < grid.n_y(); ++j)
      d.wbar(i, j) = complex(std::sin(0.3 * i + 0.1 * j), 1e-300 * (i + j));
    d.A[i] = complex(-0.0, std::cos(0.7 * i));
  }

  const fs::path p1 = work_dir() / "rt_a.ckpt";
  const fs::path p2 = work_dir() / "rt_b.ckpt";
  tdk::checkpoint_write(p1.string(), d);
  const tdk::CheckpointData back = tdk::checkpoint_read(p1.string());
  tdk::checkpoint_write(p2.string(), back);

  CHECK(read_file(p1) == read_file(p2));
  CHECK(back.t == d.t);
  CHECK(back.tau == d.tau);
  CHECK(back.eps == d.eps);
  CHECK(back.delta == d.delta);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    for (std::size_t j = 0; j < grid.n_y(); ++j)
      CHECK(back.wbar(i, j) == d.wbar(i, j));
    CHECK(same_value(back.A[i].real(), d.A[i].real()));
    CHECK(back.A[i].imag() == d.A[i].imag());
  }

  tdk::CheckpointData bad = d;
  bad.A = tdk::SurfaceSpectrum(grid.n_modes() / 2);
  CHECK_THROWS_AS(tdk::checkpoint_write((work_dir() / "bad.ckpt").string(), bad),
                  std::invalid_argument);
}

TEST_CASE("configuration text: sections, presets, overrides, defects") {
  const std::string text =
      "# leading comment\n"
      "[grid]\n"
      "n_modes = 32          ; inline comment\n"
      "half_length = 2.5\n"
      "[model]\n"
      "tau0 = 0.2\n"
      "c1 = 3.0\n"
      "[stepper]\n"
      "dt = 5e-4\n"
      "threads = 2\n"
      "certified = yes\n"
      "[initial]\n"
      "preset = heat-column\n"
      "amplitude = 0.5\n"
      "[output]\n"
      "directory = /tmp/somewhere\n"
      "formats = csv\n"
      "[reconstruct]\n"
      "nu = 1e-4\n";
  const tdk::RunConfig c = tdk::parse_run_config_text(text);

  // Preset defaults land first; explicit keys override them regardless of
  // their position in the file.
  CHECK(c.preset == "heat-column");
  CHECK(c.n_modes == 32);
  CHECK(c.n_y == 512);
  CHECK(c.half_length == 2.5);
  CHECK(c.tau0 == 0.2);
  CHECK(c.constants.c1 == 3.0);
  CHECK(c.dt == 5e-4);
  CHECK(c.t_end == 0.1);
  CHECK(c.threads == 2);
  CHECK(c.certified);
  CHECK(c.amplitude == 0.5);
  CHECK(c.output_dir == "/tmp/somewhere");
  CHECK(c.formats == "csv");
  CHECK(c.nu == 1e-4);

  SUBCASE("defect reporting") {
    CHECK_THROWS_AS(tdk::parse_run_config_text("[grid]\nwidth = 3\n"),
                    tdk::ConfigError);
    CHECK_THROWS_AS(tdk::parse_run_config_text("[grid]\nn_modes = eight\n"),
                    tdk::ConfigError);
    CHECK_THROWS_AS(
        tdk::parse_run_config_text("[stepper]\ncertified = maybe\n"),
        tdk::ConfigError);
    CHECK_THROWS_AS(tdk::parse_run_config_text("n_modes = 8\n"),
                    tdk::ConfigError);
    CHECK_THROWS_AS(tdk::parse_run_config_text("[grid\nn_modes = 8\n"),
                    tdk::ConfigError);
    CHECK_THROWS_AS(
        tdk::parse_run_config_text("[initial]\npreset = mystery\n"),
        tdk::ConfigError);
    CHECK_THROWS_AS(tdk::parse_run_config((work_dir() / "absent.ini").string()),
                    tdk::ConfigError);
  }

  SUBCASE("named preset defaults") {
    tdk::RunConfig b;
    tdk::apply_preset_defaults("bo-soliton", b);
    CHECK(b.n_modes == 512);
    CHECK(b.half_length == 40.0);
    CHECK(b.dt == 5e-5);
    CHECK(b.ledger_cadence == 200);
    tdk::RunConfig h;
    tdk::apply_preset_defaults("heat-column", h);
    CHECK(h.tau0 == 1e4);
    CHECK(h.n_modes == 8);
    tdk::RunConfig m;
    tdk::apply_preset_defaults("manufactured-convergence", m);
    CHECK(m.n_modes == 16);
    CHECK(m.amplitude == 0.1);
    CHECK_THROWS_AS(tdk::apply_preset_defaults("mystery", m), tdk::ConfigError);
  }

  SUBCASE("structural validation") {
    tdk::RunConfig ok;
    CHECK_NOTHROW(tdk::validate_run_config(ok));

    auto reject = [](auto&& mutate) {
      tdk::RunConfig c2;
      mutate(c2);
      CHECK_THROWS_AS(tdk::validate_run_config(c2), tdk::ConfigError);
    };
    reject([](tdk::RunConfig& c2) { c2.n_modes = 24; });
    reject([](tdk::RunConfig& c2) { c2.n_modes = 4; });
    reject([](tdk::RunConfig& c2) { c2.n_y = 8; });
    reject([](tdk::RunConfig& c2) { c2.half_length = 0.0; });
    reject([](tdk::RunConfig& c2) { c2.y_max = 6.0; });
    reject([](tdk::RunConfig& c2) { c2.r = 2.0; });
    reject([](tdk::RunConfig& c2) { c2.tau0 = 0.0; });
    reject([](tdk::RunConfig& c2) { c2.dt = 0.0; });
    reject([](tdk::RunConfig& c2) { c2.t_end = -1.0; });
    reject([](tdk::RunConfig& c2) { c2.threads = 0; });
    reject([](tdk::RunConfig& c2) { c2.scheme = "leapfrog"; });
    reject([](tdk::RunConfig& c2) {
      c2.certified = true;
      c2.eps_override = 0.01;
    });
    reject([](tdk::RunConfig& c2) { c2.preset = "mystery"; });
    reject([](tdk::RunConfig& c2) { c2.soliton_speed = 0.0; });
    reject([](tdk::RunConfig& c2) { c2.soliton_tail_tol = 2.0; });
    reject([](tdk::RunConfig& c2) { c2.nu = 1.5; });
    reject([](tdk::RunConfig& c2) { c2.formats = "csv,xml"; });

    // Resume skips the preset-name check: the checkpoint supplies the state.
    tdk::RunConfig resume;
    resume.preset = "mystery";
    resume.resume_path = "whatever.ckpt";
    CHECK_NOTHROW(tdk::validate_run_config(resume));
  }

  SUBCASE("flag overrides resolve on top of the file") {
    const fs::path cfg = work_dir() / "resolve.ini";
    write_file(cfg,
               "[initial]\npreset = heat-column\n[grid]\nn_modes = 32\n");
    tdk::CliOptions opts;
    opts.config_path = cfg.string();

    // Same preset named again: defaults must not clobber explicit keys.
    opts.preset = "heat-column";
    tdk::RunConfig same = tdk::resolve_config(opts);
    CHECK(same.n_modes == 32);

    // A different preset replaces the grid defaults wholesale.
    opts.preset = "manufactured-convergence";
    tdk::RunConfig swapped = tdk::resolve_config(opts);
    CHECK(swapped.preset == "manufactured-convergence");
    CHECK(swapped.n_modes == 16);

    opts.preset.clear();
    opts.threads = 3;
    opts.output_dir = "/tmp/elsewhere";
    opts.certified = true;
    tdk::RunConfig flags = tdk::resolve_config(opts);
    CHECK(flags.threads == 3);
    CHECK(flags.output_dir == "/tmp/elsewhere");
    CHECK(flags.certified);
  }
}

TEST_CASE("cli: diffusion run produces the full output set and resumes") {
  const fs::path dir = work_dir() / "run_heat";
  const fs::path cfg = work_dir() / "heat.ini";
  write_file(cfg,
             "[initial]\n"
             "preset = heat-column\n"
             "[stepper]\n"
             "t_end = 0.002\n"
             "[output]\n"
             "checkpoint_cadence = 10\n");
  REQUIRE(run_cli("run --config " + cfg.string() + " --output " +
                  dir.string()) == tdk::kExitOk);

  CHECK(fs::exists(dir / "ledger.csv"));
  CHECK(fs::exists(dir / "audit.csv"));
  CHECK(fs::exists(dir / "audit.json"));
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "final.ckpt"));
  CHECK(fs::exists(dir / "checkpoint_00000010.ckpt"));
  CHECK(fs::exists(dir / "checkpoint_00000020.ckpt"));

  const tdk::EnergyLedger ledger =
      tdk::read_ledger_csv((dir / "ledger.csv").string());
  CHECK(ledger.size() == 21);
  CHECK(ledger.rows.front().t == 0.0);
  CHECK(ledger.rows.back().t == doctest::Approx(0.002).epsilon(1e-12));

  const json man = load_json(dir / "manifest.json");
  CHECK(man["result"]["reason"] == "completed");
  CHECK(man["result"]["steps"] == 20);
  CHECK(man["derived"]["resumed"] == false);
  CHECK(man["flags"]["nonlinear_terms"] == false);
  CHECK(man["config"]["grid"]["n_modes"] == 8);
  CHECK(man["config"]["grid"]["n_y"] == 512);

  const json audit = load_json(dir / "audit.json");
  CHECK(audit["rows"] == 21);
  CHECK(audit["oddness"]["max_shear"].get<double>() < 1e-10);
  CHECK(audit["residual_rms"]["displacement"].get<double>() < 1e-12);
  CHECK(std::isfinite(audit["residual_rms"]["shear"].get<double>()));

  SUBCASE("resumed continuation matches an unbroken run") {
    const fs::path cfg2 = work_dir() / "heat2.ini";
    write_file(cfg2,
               "[initial]\npreset = heat-column\n[stepper]\nt_end = 0.004\n");
    const fs::path resumed = work_dir() / "run_heat_resumed";
    REQUIRE(run_cli("run --config " + cfg2.string() + " --resume " +
                    (dir / "final.ckpt").string() + " --output " +
                    resumed.string()) == tdk::kExitOk);
    const fs::path direct = work_dir() / "run_heat_direct";
    REQUIRE(run_cli("run --config " + cfg2.string() + " --output " +
                    direct.string()) == tdk::kExitOk);

    const json man_r = load_json(resumed / "manifest.json");
    CHECK(man_r["result"]["steps"] == 20);
    CHECK(man_r["derived"]["resumed"] == true);

    const tdk::CheckpointData a =
        tdk::checkpoint_read((resumed / "final.ckpt").string());
    const tdk::CheckpointData b =
        tdk::checkpoint_read((direct / "final.ckpt").string());
    CHECK(a.t == doctest::Approx(0.004).epsilon(1e-12));
    CHECK(b.t == doctest::Approx(0.004).epsilon(1e-12));
    // The forcing-free column scheme has no step-to-step memory, so the
    // stitched trajectory reproduces the unbroken one exactly.
    CHECK(a.tau == b.tau);
    for (std::size_t j = 0; j < a.wbar.n_y(); ++j)
      CHECK(a.wbar(0, j) == b.wbar(0, j));
  }

  SUBCASE("resuming at the final instant records a degenerate window") {
    const fs::path still = work_dir() / "run_heat_still";
    REQUIRE(run_cli("run --config " + cfg.string() + " --resume " +
                    (dir / "final.ckpt").string() + " --output " +
                    still.string()) == tdk::kExitOk);
    const json man_s = load_json(still / "manifest.json");
    CHECK(man_s["result"]["steps"] == 0);
    const tdk::EnergyLedger one =
        tdk::read_ledger_csv((still / "ledger.csv").string());
    CHECK(one.size() == 1);
    CHECK(one.rows.front().t == doctest::Approx(0.002).epsilon(1e-12));
  }

  SUBCASE("audit recheck agrees with the recorded ledger") {
    REQUIRE(run_cli("audit --output " + dir.string()) == tdk::kExitOk);
    const json rep = load_json(dir / "audit_recheck.json");
    CHECK(rep["checkpoints"] == 3);
    CHECK(rep["compared"].get<int>() >= 2);
    CHECK(rep["max_mismatch"].get<double>() < 1e-9);
  }

  SUBCASE("a tampered checkpoint stops a resume with the corrupt exit code") {
    std::string bytes = read_file(dir / "final.ckpt");
    bytes[90] = static_cast<char>(bytes[90] ^ 0x01);
    const fs::path bad = work_dir() / "tampered_resume.ckpt";
    write_file(bad, bytes);
    CHECK(run_cli("run --resume " + bad.string() + " --output " +
                  (work_dir() / "run_tampered").string()) ==
          tdk::kExitCorruptCheckpoint);
  }
}

TEST_CASE("cli: failure exit codes") {
  CHECK(run_cli("run --config " + (work_dir() / "absent.ini").string()) ==
        tdk::kExitConfigError);

  const fs::path bad_cfg = work_dir() / "bad.ini";
  write_file(bad_cfg, "[grid]\nwidth = 3\n");
  CHECK(run_cli("run --config " + bad_cfg.string()) == tdk::kExitConfigError);

  SUBCASE("unstable data reports blow-up") {
    const fs::path cfg = work_dir() / "blowup.ini";
    write_file(cfg,
               "[initial]\n"
               "preset = manufactured-convergence\n"
               "amplitude = 1e200\n"
               "[model]\n"
               "c1 = 0\n"
               "[stepper]\n"
               "t_end = 0.005\n");
    const fs::path dir = work_dir() / "run_blowup";
    CHECK(run_cli("run --config " + cfg.string() + " --output " +
                  dir.string()) == tdk::kExitBlowUp);
    const json man = load_json(dir / "manifest.json");
    CHECK(man["result"]["reason"] == "blow-up");
  }

  SUBCASE("a tiny radius budget reports exhaustion") {
    const fs::path cfg = work_dir() / "exhaust.ini";
    write_file(cfg,
               "[initial]\n"
               "preset = manufactured-convergence\n"
               "[model]\n"
               "tau0 = 1e-6\n");
    const fs::path dir = work_dir() / "run_exhaust";
    CHECK(run_cli("run --config " + cfg.string() + " --output " +
                  dir.string()) == tdk::kExitRadiusExhausted);
    const json man = load_json(dir / "manifest.json");
    CHECK(man["result"]["reason"] == "radius-exhausted");
    CHECK(man["result"]["steps"] == 0);
  }
}

TEST_CASE("cli: solitary-wave study reports conserved quantities") {
  const fs::path cfg = work_dir() / "bo.ini";
  write_file(cfg,
             "[initial]\n"
             "preset = bo-soliton\n"
             "[grid]\n"
             "n_modes = 256\n"
             "half_length = 20\n"
             "n_y = 16\n"
             "[stepper]\n"
             "dt = 5e-4\n"
             "t_end = 0.05\n"
             "[output]\n"
             "ledger_cadence = 10\n");
  const fs::path dir = work_dir() / "run_bo";
  REQUIRE(run_cli("bo --config " + cfg.string() + " --output " +
                  dir.string()) == tdk::kExitOk);

  const json rep = load_json(dir / "bo_report.json");
  CHECK(rep["t_span"].get<double>() == doctest::Approx(0.05).epsilon(1e-12));
  // The reported speed is the fitted traveling speed of the selected
  // branch: its sign follows the branch and its magnitude carries the
  // periodic-torus correction to the requested 0.25.
  const double speed = rep["soliton"]["speed"].get<double>();
  const double branch = rep["soliton"]["branch"].get<double>();
  CHECK(std::abs(speed) == doctest::Approx(0.25).epsilon(0.02));
  CHECK(speed * branch > 0.0);
  CHECK(rep["soliton"]["residual_l2"].get<double>() < 1e-6);
  CHECK(rep["mean_drift"].get<double>() < 1e-14);
  CHECK(rep["l2_mass_drift"].get<double>() < 1e-6);
  CHECK(rep["traveling_frame_linf"].get<double>() < 1e-4);

  const json man = load_json(dir / "manifest.json");
  CHECK(man["flags"]["evolve_wbar"] == false);
  CHECK(man["soliton"]["branch"].is_number());
}

TEST_CASE("cli: base-profile and three-deck commands") {
  const fs::path dirb = work_dir() / "run_blasius";
  REQUIRE(run_cli("blasius --output " + dirb.string()) == tdk::kExitOk);
  const json bl = load_json(dirb / "blasius.json");
  CHECK(bl["f_pp0"].get<double>() == doctest::Approx(0.4696).epsilon(1e-4));
  CHECK(bl["far_speed"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  {
    std::ifstream csv(dirb / "blasius.csv");
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "eta,f,fp,fpp");
  }

  const fs::path cfg = work_dir() / "recon.ini";
  write_file(cfg,
             "[initial]\n"
             "preset = small-data-certified\n"
             "[reconstruct]\n"
             "n_ybar = 17\n"
             "n_ytilde = 9\n");
  const fs::path dirr = work_dir() / "run_recon";
  REQUIRE(run_cli("reconstruct --config " + cfg.string() + " --output " +
                  dirr.string()) == tdk::kExitOk);
  CHECK(fs::exists(dirr / "deck_main.csv"));
  CHECK(fs::exists(dirr / "deck_lower.csv"));
  CHECK(fs::exists(dirr / "deck_upper.csv"));
  const json rec = load_json(dirr / "reconstruct.json");
  CHECK(rec["cr_residual"].get<double>() < 1e-8);
  CHECK(rec["matching"].size() == 3);
  CHECK(std::isfinite(rec["matching_slope"].get<double>()));
  for (const json& m : rec["matching"])
    CHECK(m["mismatch"].get<double>() > 0.0);
}

TEST_CASE("cli: selftest passes and bad usage maps to the config exit code") {
  CHECK(run_cli("selftest") == tdk::kExitOk);
  CHECK(run_cli("") == tdk::kExitConfigError);
  CHECK(run_cli("frobnicate") == tdk::kExitConfigError);
}
