#include "oldb2d/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "oldb2d/errors.hpp"

namespace oldb2d {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError("unreadable value for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view v) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("unreadable value for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

std::vector<double> parse_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    const std::string_view item = trim(v.substr(0, comma));
    if (!item.empty()) out.push_back(parse_double(key, item));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

template <class T>
Setter real(T RunConfig::*member) {
  return [member](RunConfig& c, std::string_view k, std::string_view v) {
    c.*member = parse_double(k, v);
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"n", [](RunConfig& c, auto k, auto v) { c.n = parse_int<int>(k, v); }},
      {"L", real(&RunConfig::L)},
      {"nu", [](RunConfig& c, auto k, auto v) { c.params.nu = parse_double(k, v); }},
      {"kappa", [](RunConfig& c, auto k, auto v) { c.params.kappa = parse_double(k, v); }},
      {"k", [](RunConfig& c, auto k, auto v) { c.params.k = parse_double(k, v); }},
      {"bigK", [](RunConfig& c, auto k, auto v) { c.params.bigK = parse_double(k, v); }},
      {"preset",
       [](RunConfig& c, auto, auto v) {
         constexpr std::string_view prefix = "snapshot:";
         if (v.substr(0, prefix.size()) == prefix) {
           c.initial.preset = "snapshot";
           c.initial.snapshot_path = std::string(trim(v.substr(prefix.size())));
         } else {
           c.initial.preset = std::string(v);
         }
       }},
      {"rho0", [](RunConfig& c, auto k, auto v) { c.initial.rho0 = parse_double(k, v); }},
      {"c0", [](RunConfig& c, auto k, auto v) { c.initial.c0 = parse_double(k, v); }},
      {"seed",
       [](RunConfig& c, auto k, auto v) { c.initial.seed = parse_int<std::uint64_t>(k, v); }},
      {"u_amp", [](RunConfig& c, auto k, auto v) { c.initial.u_amp = parse_double(k, v); }},
      {"stress_amp",
       [](RunConfig& c, auto k, auto v) { c.initial.stress_amp = parse_double(k, v); }},
      {"d_mean", [](RunConfig& c, auto k, auto v) { c.initial.d_mean = parse_double(k, v); }},
      {"rho_mean", [](RunConfig& c, auto k, auto v) { c.initial.rho_mean = parse_double(k, v); }},
      {"rho_amp", [](RunConfig& c, auto k, auto v) { c.initial.rho_amp = parse_double(k, v); }},
      {"band", [](RunConfig& c, auto k, auto v) { c.initial.band = parse_int<int>(k, v); }},
      {"cfl", [](RunConfig& c, auto k, auto v) { c.step.cfl = parse_double(k, v); }},
      {"dt_min", [](RunConfig& c, auto k, auto v) { c.step.dt_min = parse_double(k, v); }},
      {"dt_max", [](RunConfig& c, auto k, auto v) { c.step.dt_max = parse_double(k, v); }},
      {"t_end", [](RunConfig& c, auto k, auto v) { c.step.t_end = parse_double(k, v); }},
      {"output_every",
       [](RunConfig& c, auto k, auto v) { c.step.output_every = parse_int<int>(k, v); }},
      {"snapshot_times",
       [](RunConfig& c, auto k, auto v) { c.step.snapshot_times = parse_list(k, v); }},
      {"out_dir", [](RunConfig& c, auto, auto v) { c.out_dir = std::string(v); }},
      {"positivity_tol",
       [](RunConfig& c, auto k, auto v) { c.monitors.positivity_tol = parse_double(k, v); }},
      {"energy_tol",
       [](RunConfig& c, auto k, auto v) { c.monitors.energy_tol = parse_double(k, v); }},
      {"c_ceiling",
       [](RunConfig& c, auto k, auto v) { c.monitors.c_ceiling = parse_double(k, v); }},
      {"generic_C", real(&RunConfig::generic_C)},
      {"picard_t0", [](RunConfig& c, auto k, auto v) { c.picard.t0 = parse_double(k, v); }},
      {"picard_nodes",
       [](RunConfig& c, auto k, auto v) { c.picard.n_time_nodes = parse_int<int>(k, v); }},
      {"picard_max_iter",
       [](RunConfig& c, auto k, auto v) { c.picard.max_iter = parse_int<int>(k, v); }},
      {"picard_tol", [](RunConfig& c, auto k, auto v) { c.picard.tol = parse_double(k, v); }},
  };
  return table;
}

const std::set<std::string, std::less<>> kPresets{"equilibrium", "uniform", "taylor_green",
                                                  "random_admissible", "snapshot"};

}  // namespace

void RunConfig::validate() const {
  if (n < 8 || n % 2 != 0) throw ConfigError("invariant violated: n >= 8 and even");
  if (!(L > 0.0)) throw ConfigError("invariant violated: L > 0");
  params.validate();
  step.validate();
  if (!(monitors.positivity_tol >= 0.0))
    throw ConfigError("invariant violated: positivity_tol >= 0");
  if (!(monitors.energy_tol >= 0.0)) throw ConfigError("invariant violated: energy_tol >= 0");
  if (!(monitors.c_ceiling > 0.0)) throw ConfigError("invariant violated: c_ceiling > 0");
  if (!kPresets.contains(initial.preset))
    throw ConfigError("unknown preset '" + initial.preset + "'");
  if (initial.preset == "snapshot" && initial.snapshot_path.empty())
    throw ConfigError("invariant violated: snapshot preset needs a path");
  if (!(initial.rho0 >= 0.0)) throw ConfigError("invariant violated: rho0 >= 0");
  if (!(initial.c0 >= 0.0)) throw ConfigError("invariant violated: c0 >= 0");
  if (!(initial.u_amp >= 0.0)) throw ConfigError("invariant violated: u_amp >= 0");
  if (!(initial.stress_amp >= 0.0)) throw ConfigError("invariant violated: stress_amp >= 0");
  if (!(initial.d_mean > 0.0)) throw ConfigError("invariant violated: d_mean > 0");
  if (!(initial.rho_mean >= 0.0)) throw ConfigError("invariant violated: rho_mean >= 0");
  if (!(initial.rho_amp >= 0.0 && initial.rho_amp < 1.0))
    throw ConfigError("invariant violated: 0 <= rho_amp < 1");
  if (initial.band < 1 || 3 * initial.band > n)
    throw ConfigError("invariant violated: 1 <= band <= n/3");
  if (!(generic_C > 0.0)) throw ConfigError("invariant violated: generic_C > 0");
  picard.validate();
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown key '" + std::string(key) + "'");
    if (!seen.emplace(key).second) throw ConfigError("duplicate key '" + std::string(key) + "'");
    if (value.empty() && key != "snapshot_times")
      throw ConfigError("unreadable value for '" + std::string(key) + "': empty");
    it->second(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const RunConfig& c) {
  std::string out;
  auto put = [&](const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
    out += buf;
  };
  put("n", c.n);
  put("L", c.L);
  put("nu", c.params.nu);
  put("kappa", c.params.kappa);
  put("k", c.params.k);
  put("bigK", c.params.bigK);
  out += "preset = " +
         (c.initial.preset == "snapshot" ? "snapshot:" + c.initial.snapshot_path
                                         : c.initial.preset) +
         "\n";
  put("rho0", c.initial.rho0);
  put("c0", c.initial.c0);
  out += "seed = " + std::to_string(c.initial.seed) + "\n";
  put("u_amp", c.initial.u_amp);
  put("stress_amp", c.initial.stress_amp);
  put("d_mean", c.initial.d_mean);
  put("rho_mean", c.initial.rho_mean);
  put("rho_amp", c.initial.rho_amp);
  put("band", c.initial.band);
  put("cfl", c.step.cfl);
  put("dt_min", c.step.dt_min);
  put("dt_max", c.step.dt_max);
  put("t_end", c.step.t_end);
  put("output_every", c.step.output_every);
  if (!c.step.snapshot_times.empty()) {
    out += "snapshot_times = ";
    for (std::size_t i = 0; i < c.step.snapshot_times.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%.17g", i ? "," : "", c.step.snapshot_times[i]);
      out += buf;
    }
    out += "\n";
  }
  out += "out_dir = " + c.out_dir + "\n";
  put("positivity_tol", c.monitors.positivity_tol);
  put("energy_tol", c.monitors.energy_tol);
  put("c_ceiling", c.monitors.c_ceiling);
  put("generic_C", c.generic_C);
  put("picard_t0", c.picard.t0);
  put("picard_nodes", c.picard.n_time_nodes);
  put("picard_max_iter", c.picard.max_iter);
  put("picard_tol", c.picard.tol);
  return out;
}

}  // namespace oldb2d
