#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "oldb2d/fields.hpp"
#include "oldb2d/integrate.hpp"
#include "oldb2d/picard.hpp"

namespace oldb2d {

/// Initial-condition preset and its parameters.
///   equilibrium        u = 0, σ = ρ₀𝕀, ρ = ρ₀
///   uniform            u = 0, σ = (c₀/2)𝕀, ρ = ρ₀
///   taylor_green       u = (sin x cos y, -cos x sin y) · u_amp, σ = 0, ρ = 0
///   random_admissible  seeded band-limited data, see build_initial
///   snapshot:<path>    state read from a snapshot file
struct InitialSpec {
  std::string preset = "random_admissible";
  std::string snapshot_path;
  double rho0 = 1.0;
  double c0 = 2.0;
  std::uint64_t seed = 42;
  double u_amp = 0.5;
  double stress_amp = 0.3;
  double d_mean = 0.5;
  double rho_mean = 1.0;
  double rho_amp = 0.2;
  int band = 4;
};

struct RunConfig {
  int n = 64;
  double L = 6.283185307179586;
  PhysParams params;
  InitialSpec initial;
  StepControl step;
  MonitorSet monitors;
  std::string out_dir = "oldb2d_out";
  double generic_C = 1.0;
  PicardConfig picard;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

/// Parses flat `key = value` lines (`#` starts a comment). Unknown keys,
/// duplicate keys, unreadable values and invariant violations throw
/// ConfigError. Unspecified keys keep the RunConfig defaults.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// The key=value rendering of a config (parse_config round-trips it).
std::string format_config(const RunConfig& cfg);

}  // namespace oldb2d
