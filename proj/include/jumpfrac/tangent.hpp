#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "jumpfrac/parallel.hpp"
#include "jumpfrac/sde.hpp"

namespace jumpfrac {

struct RescaledEnsemble {
  double t0 = 0.0;
  double alpha = 0.0;
  double beta0 = 0.0;                ///< beta_tilde(x0) when t0 = 0, NaN otherwise
  std::vector<double> samples;       ///< (M_{t0+alpha} - M_{t0}) / alpha^(1/beta0_i)
  std::vector<double> path_beta0;    ///< beta_tilde(M_{t0}) per path
};

/// Requires a pure-jump builtin model (sigma ZERO, b = 0). Path i uses
/// derive_seed(seed, "points", i). With t0 = 0 the path is simulated on
/// [0, alpha] only.
RescaledEnsemble rescale_increments(const ModelSpec& model, double t0, double alpha, std::size_t n_paths,
                                    std::uint64_t seed, const SimulationConfig& cfg, Parallelism par = {});

/// One marginal S_horizon of the symmetric process with Levy measure
/// beta0 u^(-1-beta0) du on z_floor < |u| < z_cap.
double stable_draw(double beta0, double z_floor, double z_cap, double horizon, std::uint64_t seed);

/// n_paths independent draws; draw i uses derive_seed(seed, "stable", i).
std::vector<double> simulate_stable(double beta0, std::size_t n_paths, double z_cap, std::uint64_t seed,
                                    double z_floor = 1e-4, double horizon = 1.0, Parallelism par = {});

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov statistic with the asymptotic p-value
/// (Stephens' small-sample correction).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct TangentRow {
  double alpha = 0.0;
  double ks = 0.0;
  double p = 1.0;
};

/// For each alpha (reported in descending order): KS between the rescaled
/// increments and a matched truncated stable ensemble. The rescaled model
/// jumps live on ((z_min/alpha)^(1/beta0), alpha^(-1/beta0)), so the
/// comparator uses that window.
std::vector<TangentRow> tangent_test(const ModelSpec& model, double t0, std::vector<double> alpha_seq,
                                     std::size_t n_paths, std::uint64_t seed, const SimulationConfig& cfg,
                                     Parallelism par = {});

/// (alpha, E|M_{alpha ^ tau} - x0|^gamma / alpha) with tau the first grid
/// time where beta_tilde(M) exceeds beta_tilde(x0) + eta.
std::vector<std::pair<double, double>> moment_ratio(const ModelSpec& model, double eta, double gamma,
                                                    const std::vector<double>& alpha_seq, std::size_t n_paths,
                                                    std::uint64_t seed, const SimulationConfig& cfg,
                                                    Parallelism par = {});

}  // namespace jumpfrac
