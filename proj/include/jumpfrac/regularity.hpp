#pragma once

#include <cstdint>
#include <vector>

#include "jumpfrac/parallel.hpp"
#include "jumpfrac/sde.hpp"

namespace jumpfrac {

struct HolderEstimate {
  double t = 0.0;
  double h_hat = 0.0;
  double r2 = 0.0;
  int scales_used = 0;
  bool smooth = false;   ///< slope >= 1 (up to 1e-9) or flat path: h_hat set to the cap
  bool at_jump = false;  ///< t is a jump node: h_hat = 0 by convention
};

struct HolderOptions {
  int j_lo = 6;
  int j_hi = 11;
  double h_cap = 1.5;
};

/// Least-squares slope of log2 osc_j(t) against -j, where osc_j is the
/// range of M (values and left limits) over [t - 2^-j, t + 2^-j].
HolderEstimate estimate_holder(const SamplePath& path, double t, const HolderOptions& opt = {});

/// min(1/(delta beta), 1/2) with diffusion, 1/(delta beta) without.
double theoretical_exponent(double beta_t, double delta_t, bool sigma_zero);

struct BandEnvelope {
  int m = 0;
  double beta_bar = 0.0;  ///< sup over [s,t] of beta, plus 2/m
  double beta_hat = 0.0;  ///< same over [s,t] widened by 2^-m on each side
};

/// Envelopes from samples (times[i], betas[i]) with increasing times.
BandEnvelope beta_envelope(const std::vector<double>& times, const std::vector<double>& betas, double s,
                           double t, int m);

struct BandResult {
  double frequency = 0.0;
  std::vector<double> statistics;  ///< per path
  double threshold = 0.0;          ///< 6 m^2
};

/// Per path: sup over pairs of level-(m+2) dyadic points at distance
/// <= 2^-m of 2^(m/(delta(beta_hat + eps))) |small-jump increment|, where
/// the small-jump part keeps marks below 2^(-m/delta). Returns the
/// frequency of paths exceeding 6 m^2.
BandResult band_statistic(const ModelSpec& model, double delta, double eps, int m, std::size_t n_paths,
                          std::uint64_t seed, const SimulationConfig& cfg, Parallelism par = {});

}  // namespace jumpfrac
