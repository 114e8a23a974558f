#include "gspm/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "gspm/errors.hpp"

namespace gspm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number, got '" + v + "'");
  }
}

std::int64_t parse_int(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ParseError(line, "expected a boolean, got '" + v + "'");
}

Vec3 parse_vec3(const std::string& v, int line) {
  std::istringstream ss(v);
  Vec3 out;
  if (!(ss >> out.x >> out.y >> out.z)) {
    throw ParseError(line, "expected three numbers, got '" + v + "'");
  }
  std::string rest;
  if (ss >> rest) throw ParseError(line, "trailing content '" + rest + "'");
  return out;
}

void finalize(RunConfig& cfg) {
  // exclusivity rules
  const int dt_given = (cfg.dt_seconds ? 1 : 0) + (cfg.dt_dimensionless ? 1 : 0);
  if (dt_given != 1) {
    throw ValidationError("exactly one of time.dt_seconds and time.dt must be given");
  }
  const int t_given = (cfg.t_seconds ? 1 : 0) + (cfg.t_dimensionless ? 1 : 0) +
                      (cfg.n_steps ? 1 : 0);
  if (t_given != 1) {
    throw ValidationError("exactly one of time.T_seconds, time.T and time.n_steps must be given");
  }
  if (cfg.size_m && cfg.spacing) {
    throw ValidationError("give mesh.size_* (physical) or mesh.d* (dimensionless), not both");
  }
  if (!cfg.size_m && !cfg.spacing) {
    throw ValidationError("mesh extent missing: give mesh.size_* or mesh.d*");
  }

  const bool needs_material = cfg.size_m.has_value() || cfg.dt_seconds.has_value() ||
                              cfg.t_seconds.has_value();
  if (needs_material) validate(cfg.material);

  // mesh
  cfg.mesh.nx = cfg.nx;
  cfg.mesh.ny = cfg.ny;
  cfg.mesh.nz = cfg.nz;
  if (cfg.spacing) {
    cfg.mesh.dx = (*cfg.spacing)[0];
    cfg.mesh.dy = (*cfg.spacing)[1];
    cfg.mesh.dz = (*cfg.spacing)[2];
  } else {
    const auto& s = *cfg.size_m;
    // rescale by the domain diameter unless the material pins L explicitly
    if (!cfg.length_given) {
      cfg.material.L = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
    }
    cfg.mesh.dx = s[0] / cfg.material.L / static_cast<double>(cfg.nx);
    cfg.mesh.dy = s[1] / cfg.material.L / static_cast<double>(cfg.ny);
    cfg.mesh.dz = s[2] / cfg.material.L / static_cast<double>(cfg.nz);
  }
  validate(cfg.mesh);

  // dimensionless groups
  cfg.q = cfg.q_override ? *cfg.q_override : cfg.material.Q();
  cfg.eps = cfg.eps_override ? *cfg.eps_override : cfg.material.eps();
  cfg.alpha = cfg.alpha_override ? *cfg.alpha_override : cfg.material.alpha;
  if (cfg.q < 0.0) throw ValidationError("Q must be >= 0");
  if (!(cfg.eps > 0.0)) throw ValidationError("eps must be > 0");
  if (cfg.alpha < 0.0) throw ValidationError("alpha must be >= 0");

  // time
  cfg.dt = cfg.dt_seconds ? cfg.material.seconds_to_dimensionless(*cfg.dt_seconds)
                          : *cfg.dt_dimensionless;
  if (!(cfg.dt > 0.0)) throw ValidationError("dt must be > 0");
  if (cfg.n_steps) {
    cfg.steps = *cfg.n_steps;
  } else {
    const double t = cfg.t_seconds ? cfg.material.seconds_to_dimensionless(*cfg.t_seconds)
                                   : *cfg.t_dimensionless;
    if (!(t > 0.0)) throw ValidationError("T must be > 0");
    cfg.steps = static_cast<std::int64_t>(std::llround(t / cfg.dt));
  }
  if (cfg.steps < 0) throw ValidationError("n_steps must be >= 0");
  if (cfg.snapshot_stride < 0) throw ValidationError("snapshot_stride must be >= 0");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::unordered_map<std::string, int> seen;

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(lineno, "empty key");
    if (value.empty()) throw ParseError(lineno, "empty value for '" + key + "'");
    if (seen.count(key)) {
      throw ParseError(lineno, "duplicate key '" + key + "' (first on line " +
                                   std::to_string(seen.at(key)) + ")");
    }
    seen[key] = lineno;

    if (key == "scheme") {
      const auto k = scheme_from_string(value);
      if (!k) throw ParseError(lineno, "unknown scheme '" + value + "'");
      cfg.scheme = *k;
    } else if (key == "mesh.nx") {
      cfg.nx = static_cast<std::size_t>(parse_int(value, lineno));
    } else if (key == "mesh.ny") {
      cfg.ny = static_cast<std::size_t>(parse_int(value, lineno));
    } else if (key == "mesh.nz") {
      cfg.nz = static_cast<std::size_t>(parse_int(value, lineno));
    } else if (key == "mesh.size_x" || key == "mesh.size_y" || key == "mesh.size_z") {
      if (!cfg.size_m) cfg.size_m = std::array<double, 3>{0.0, 0.0, 0.0};
      (*cfg.size_m)[key.back() - 'x'] = parse_double(value, lineno);
    } else if (key == "mesh.dx" || key == "mesh.dy" || key == "mesh.dz") {
      if (!cfg.spacing) cfg.spacing = std::array<double, 3>{1.0, 1.0, 1.0};
      (*cfg.spacing)[key.back() - 'x'] = parse_double(value, lineno);
    } else if (key == "material.Ms") {
      cfg.material.Ms = parse_double(value, lineno);
      cfg.material_given = true;
    } else if (key == "material.Aex") {
      cfg.material.A_ex = parse_double(value, lineno);
      cfg.material_given = true;
    } else if (key == "material.Ku") {
      cfg.material.Ku = parse_double(value, lineno);
      cfg.material_given = true;
    } else if (key == "material.gamma") {
      cfg.material.gamma = parse_double(value, lineno);
      cfg.material_given = true;
    } else if (key == "material.mu0") {
      cfg.material.mu0 = parse_double(value, lineno);
      cfg.material_given = true;
    } else if (key == "material.L") {
      cfg.material.L = parse_double(value, lineno);
      cfg.material_given = true;
      cfg.length_given = true;
    } else if (key == "material.alpha") {
      cfg.material.alpha = parse_double(value, lineno);
      cfg.material_given = true;
    } else if (key == "override.Q") {
      cfg.q_override = parse_double(value, lineno);
    } else if (key == "override.eps") {
      cfg.eps_override = parse_double(value, lineno);
    } else if (key == "override.alpha") {
      cfg.alpha_override = parse_double(value, lineno);
    } else if (key == "time.dt_seconds") {
      cfg.dt_seconds = parse_double(value, lineno);
    } else if (key == "time.dt") {
      cfg.dt_dimensionless = parse_double(value, lineno);
    } else if (key == "time.T_seconds") {
      cfg.t_seconds = parse_double(value, lineno);
    } else if (key == "time.T") {
      cfg.t_dimensionless = parse_double(value, lineno);
    } else if (key == "time.n_steps") {
      cfg.n_steps = parse_int(value, lineno);
    } else if (key == "terms.anisotropy") {
      cfg.anisotropy = parse_bool(value, lineno);
    } else if (key == "terms.external") {
      cfg.external = parse_bool(value, lineno);
    } else if (key == "terms.stray") {
      cfg.stray = parse_bool(value, lineno);
    } else if (key == "field.he") {
      cfg.h_ext = parse_vec3(value, lineno);
    } else if (key == "output.dir") {
      cfg.output_dir = value;
    } else if (key == "output.snapshot_stride") {
      cfg.snapshot_stride = parse_int(value, lineno);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(value, lineno));
    } else {
      throw ParseError(lineno, "unknown key '" + key + "'");
    }
  }

  finalize(cfg);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace gspm
