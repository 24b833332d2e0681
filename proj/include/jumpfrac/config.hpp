#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jumpfrac/rng.hpp"
#include "jumpfrac/sde.hpp"

namespace jumpfrac {

struct HolderSection {
  std::size_t n_times = 20;
  int j_lo = 6;
  int j_hi = 11;
  double h_cap = 1.5;
  double delta_max = kDefaultDeltaMax;
};

struct SpectrumSection {
  std::string mode = "theory";    ///< theory | empirical
  std::string kind = "pointwise"; ///< pointwise | local (theory mode)
  double h_min = 0.0;
  double h_max = 1.2;
  std::size_t n_h = 121;
  double t = 0.5;
  double region_lo = 0.0;
  double region_hi = 1.0;
  double bin_width = 0.1;
  int j_max = 14;
};

struct TangentSection {
  double t0 = 0.0;
  std::vector<double> alpha{0.1, 0.03, 0.01, 0.003};
  std::size_t n_paths = 1000;
};

struct BandSection {
  double delta = 2.0;
  double eps = 0.1;
  std::vector<double> m{6, 8, 10};
  std::size_t n_paths = 200;
};

struct AdmissibleSection {
  double x_lo = -5.0;
  double x_hi = 5.0;
  std::size_t n_x = 41;
};

struct GeneratorSection {
  std::string f = "x*x";
  std::vector<double> t{0.01};
  std::size_t n_paths = 1000;
};

/// Parsed configuration. Expression fields keep their canonical text.
struct RunConfig {
  ModelSpec model;
  SimulationConfig sim;
  std::string output_dir = "out";
  std::uint64_t master_seed = 0;
  std::size_t simulate_paths = 1;
  HolderSection holder;
  SpectrumSection spectrum;
  TangentSection tangent;
  BandSection band;
  AdmissibleSection admissible;
  GeneratorSection generator;

  /// Seeds of the runtime streams derive from master_seed.
  std::uint64_t seed_for(std::string_view label, std::uint64_t index) const {
    return derive_seed(master_seed, label, index);
  }
};

/// Line-oriented `key = value` text with `[section]` headers and `#`
/// comments. Unknown sections or keys, duplicates and malformed lines are
/// errors (ParseError carries the line number; ValidationError names the key).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical text: every key, fixed order, canonical expressions and
/// shortest round-trip numbers.
std::string serialize_config(const RunConfig& cfg);

/// Sets one `section.key` from text as if it appeared in the file, then
/// revalidates.
void set_config_option(RunConfig& cfg, const std::string& dotted_key, const std::string& value);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace jumpfrac
