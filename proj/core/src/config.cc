#include "tdk/config.h"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace tdk {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct Entry {
  std::string key;  // "section.name"
  std::string value;
};

std::vector<Entry> tokenize(const std::string& text) {
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos || section.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value inside a section");
    entries.push_back(
        {section + "." + trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }
  return entries;
}

double as_double(const Entry& e) {
  char* end = nullptr;
  const double v = std::strtod(e.value.c_str(), &end);
  if (end == e.value.c_str() || *end != '\0')
    throw ConfigError("config key " + e.key + ": not a number: " + e.value);
  return v;
}

std::size_t as_size(const Entry& e) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(e.value.c_str(), &end, 10);
  if (end == e.value.c_str() || *end != '\0')
    throw ConfigError("config key " + e.key + ": not a count: " + e.value);
  return static_cast<std::size_t>(v);
}

int as_int(const Entry& e) {
  char* end = nullptr;
  const long v = std::strtol(e.value.c_str(), &end, 10);
  if (end == e.value.c_str() || *end != '\0')
    throw ConfigError("config key " + e.key + ": not an integer: " + e.value);
  return static_cast<int>(v);
}

bool as_bool(const Entry& e) {
  if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0") return false;
  throw ConfigError("config key " + e.key + ": not a boolean: " + e.value);
}

void assign(const Entry& e, RunConfig& c) {
  const std::string& k = e.key;
  if (k == "grid.n_modes") c.n_modes = as_size(e);
  else if (k == "grid.half_length") c.half_length = as_double(e);
  else if (k == "grid.n_y") c.n_y = as_size(e);
  else if (k == "grid.y_max") c.y_max = as_double(e);
  else if (k == "model.tau0") c.tau0 = as_double(e);
  else if (k == "model.r") c.r = as_double(e);
  else if (k == "model.delta") c.delta_override = as_double(e);
  else if (k == "model.eps") c.eps_override = as_double(e);
  else if (k == "model.t_star") c.t_star_override = as_double(e);
  else if (k == "model.c0_tilde") c.constants.c0_tilde = as_double(e);
  else if (k == "model.c1") c.constants.c1 = as_double(e);
  else if (k == "model.c2") c.constants.c2 = as_double(e);
  else if (k == "model.e0_target") c.e0_target = as_double(e);
  else if (k == "stepper.dt") c.dt = as_double(e);
  else if (k == "stepper.t_end") c.t_end = as_double(e);
  else if (k == "stepper.scheme") c.scheme = e.value;
  else if (k == "stepper.certified") c.certified = as_bool(e);
  else if (k == "stepper.threads") c.threads = as_int(e);
  else if (k == "initial.preset") c.preset = e.value;
  else if (k == "initial.checkpoint") c.resume_path = e.value;
  else if (k == "initial.soliton_speed") c.soliton_speed = as_double(e);
  else if (k == "initial.soliton_x0") c.soliton_x0 = as_double(e);
  else if (k == "initial.soliton_tail_tol") c.soliton_tail_tol = as_double(e);
  else if (k == "initial.amplitude") c.amplitude = as_double(e);
  else if (k == "output.directory") c.output_dir = e.value;
  else if (k == "output.ledger_cadence") c.ledger_cadence = as_size(e);
  else if (k == "output.checkpoint_cadence") c.checkpoint_cadence = as_size(e);
  else if (k == "output.lemma_cadence") c.lemma_cadence = as_size(e);
  else if (k == "output.formats") c.formats = e.value;
  else if (k == "reconstruct.nu") c.nu = as_double(e);
  else if (k == "reconstruct.n_ybar") c.n_ybar = as_size(e);
  else if (k == "reconstruct.ybar_max") c.ybar_max = as_double(e);
  else if (k == "reconstruct.n_ytilde") c.n_ytilde = as_size(e);
  else if (k == "reconstruct.ytilde_max") c.ytilde_max = as_double(e);
  else throw ConfigError("unknown configuration key: " + k);
}

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

void apply_preset_defaults(const std::string& preset, RunConfig& c) {
  if (preset == "small-data-certified") {
    // the struct defaults
  } else if (preset == "bo-soliton") {
    c.n_modes = 512;
    c.half_length = 40.0;
    c.n_y = 16;
    c.y_max = 12.0;
    c.dt = 5e-5;
    c.t_end = 1.0;
    c.ledger_cadence = 200;
  } else if (preset == "heat-column") {
    c.n_modes = 8;
    c.half_length = 1.0;
    c.n_y = 512;
    c.y_max = 12.0;
    c.dt = 1e-4;
    c.t_end = 0.1;
    // Only the mean column carries data, so no weight sees the radius; a
    // huge tau0 keeps the certificate ODE from ending the window early.
    c.tau0 = 1e4;
  } else if (preset == "manufactured-convergence") {
    c.n_modes = 16;
    c.half_length = 4.0;
    c.n_y = 64;
    c.y_max = 12.0;
    c.dt = 1e-3;
    c.t_end = 0.02;
    // Sized so the radius budget tau0 - t_end (Gamma1 + 1) stays positive
    // for the default forcing amplitude.
    c.tau0 = 2.0;
    c.amplitude = 0.1;
  } else {
    throw ConfigError("unknown preset: " + preset);
  }
  c.preset = preset;
}

RunConfig parse_run_config_text(const std::string& text) {
  const std::vector<Entry> entries = tokenize(text);
  RunConfig config;
  for (const Entry& e : entries)
    if (e.key == "initial.preset") apply_preset_defaults(e.value, config);
  for (const Entry& e : entries) assign(e, config);
  return config;
}

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config_text(buf.str());
}

void validate_run_config(const RunConfig& c) {
  if (!power_of_two(c.n_modes) || c.n_modes < 8)
    throw ConfigError("grid.n_modes must be a power of two, at least 8");
  if (c.n_y < 16) throw ConfigError("grid.n_y must be at least 16");
  if (c.half_length <= 0.0) throw ConfigError("grid.half_length must be positive");
  if (c.y_max < 8.0) throw ConfigError("grid.y_max must be at least 8");
  if (!(c.r > 2.0)) throw ConfigError("model.r must exceed 2");
  if (!(c.tau0 > 0.0)) throw ConfigError("model.tau0 must be positive");
  if (!(c.dt > 0.0)) throw ConfigError("stepper.dt must be positive");
  if (c.t_end < 0.0) throw ConfigError("stepper.t_end must be nonnegative");
  if (c.threads < 1) throw ConfigError("stepper.threads must be at least 1");
  if (c.scheme != "strang-cn-ab2")
    throw ConfigError("stepper.scheme: only strang-cn-ab2 is implemented");
  if (c.certified && (c.delta_override != 0.0 || c.eps_override != 0.0 ||
                      c.t_star_override != 0.0))
    throw ConfigError(
        "certified runs derive delta/eps/t_star; remove the overrides");
  if (c.resume_path.empty()) {
    if (c.preset != "small-data-certified" && c.preset != "bo-soliton" &&
        c.preset != "heat-column" && c.preset != "manufactured-convergence")
      throw ConfigError("unknown preset: " + c.preset);
  }
  if (!(c.soliton_speed > 0.0))
    throw ConfigError("initial.soliton_speed must be positive");
  if (!(c.soliton_tail_tol > 0.0 && c.soliton_tail_tol < 1.0))
    throw ConfigError("initial.soliton_tail_tol must lie in (0,1)");
  if (!(c.nu > 0.0 && c.nu < 1.0))
    throw ConfigError("reconstruct.nu must lie in (0,1)");
  std::istringstream fmts(c.formats);
  std::string token;
  while (std::getline(fmts, token, ',')) {
    if (token != "csv" && token != "json" && !token.empty())
      throw ConfigError("output.formats: unknown format " + token);
  }
}

}  // namespace tdk
