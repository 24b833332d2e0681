#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jumpfrac/expr.hpp"
#include "jumpfrac/parallel.hpp"
#include "jumpfrac/points.hpp"

namespace jumpfrac {

enum class JumpKind { Builtin, Custom };
enum class Hypothesis { None, CaseA, CaseB };

/// Coefficients of dM = sigma(M) dB + b(M) dt + compensated jumps G(M-, z).
struct ModelSpec {
  std::optional<Expr> sigma;  ///< nullopt is the ZERO flag
  Expr b = Expr::constant(0.0);
  JumpKind jump_kind = JumpKind::Builtin;
  Expr beta_tilde = Expr::constant(1.0);  ///< Builtin: G(x,z) = sign(z)|z|^(1/beta_tilde(x))
  Expr g = Expr::constant(0.0);           ///< Custom: G(x,z)
  Interval beta_band{0.01, 1.99};
  Hypothesis hypothesis = Hypothesis::None;
  double x0 = 0.0;

  bool sigma_zero() const noexcept { return !sigma.has_value(); }
  /// Custom coefficient that is identically zero.
  bool jump_zero() const noexcept;
  double sigma_at(double x) const { return sigma ? sigma->eval(x) : 0.0; }
  double jump(double x, double z) const;
  /// Local index at state x. Custom coefficients use the log-slope of |G|
  /// between |z| = 1e-8 and 1e-7.
  double beta(double x) const;

  /// Throws ValidationError on a band outside (0,2), a hypothesis the band
  /// contradicts, or a builtin index leaving the band on x0 +- 10.
  void validate() const;
};

struct SimulationConfig {
  double dt = 1.0 / 4096.0;
  double z_min = 1e-4;
  double horizon = 1.0;
  std::uint64_t seed = 0;  ///< Brownian stream
  int quad_n = 64;

  void validate() const;
};

struct SamplePath {
  double x0 = 0.0;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> left_values;
  std::vector<double> jump_marks;     ///< 0 at non-jump nodes
  std::vector<std::uint8_t> is_jump;
  std::vector<double> x, y, z;        ///< diffusion, drift and jump parts

  std::size_t size() const noexcept { return grid.size(); }
  /// Index of the last node with grid time <= t.
  std::size_t index_at(double t) const;
  double value_at(double t) const { return values[index_at(t)]; }
};

/// Jump-adapted Euler scheme. Jumps are applied exactly at their times;
/// between nodes M += sigma dB + (b - c) dt with c the truncated
/// compensator. Brownian increments are keyed by (cfg.seed, uniform
/// interval index) and bridged at interior jump times, so adding jumps never
/// reshuffles the Brownian path.
SamplePath simulate_path(const ModelSpec& model, const PointSystem& ps, const SimulationConfig& cfg);

struct TerminalState {
  double m = 0.0, x = 0.0, y = 0.0, z = 0.0;
  /// Integral over [0, horizon] of the truncated jump variance rate along the path.
  double variance_integral = 0.0;
};

/// Same scheme as simulate_path without storing the path.
TerminalState simulate_terminal(const ModelSpec& model, const PointSystem& ps,
                                const SimulationConfig& cfg, bool track_variance = false);

struct CompensatorValue {
  double value = 0.0;
  bool symmetric = true;  ///< false when |value| > 1e-10
};

/// Integral of G(x, z) dz/z^2 over z_min < |z| < 1.
CompensatorValue compensator_drift(const ModelSpec& model, double x, double z_min, int quad_n = 64);

/// Integral of G(x, z)^2 dz/z^2 over z_min < |z| < 1.
double jump_second_moment(const ModelSpec& model, double x, double z_min, int quad_n = 64);

/// Sup-norm gaps between successive truncation levels of coupled systems,
/// measured on the uniform nodes.
std::vector<double> refine_convergence(const ModelSpec& model, std::uint64_t seed,
                                       const std::vector<double>& z_min_seq,
                                       const SimulationConfig& cfg);

/// Same for caller-supplied systems; throws ValidationError unless each
/// system extends the previous one.
std::vector<double> refine_convergence(const ModelSpec& model, const std::vector<PointSystem>& systems,
                                       const SimulationConfig& cfg);

/// Integral of G(x, z) dz/z^2 over 0 < z < 1. Throws NumericalError when it
/// diverges (builtin index >= 1).
double compute_btilde(const ModelSpec& model, double x);

/// b f' + sigma^2 f''/2 + integral of f(x+G) - f(x) - G f'(x) over C(0,1).
double generator_apply(const ModelSpec& model, const Expr& f, double x, int quad_n = 64);

struct GeneratorPoint {
  double t = 0.0;
  double mc_rate = 0.0;
  double generator_value = 0.0;
};

/// (mean f(M_t) - f(x0)) / t over n_paths, paired with the generator at x0.
/// Path i uses derive_seed(seed, "points", i) and derive_seed(seed, "brownian", i).
std::vector<GeneratorPoint> generator_consistency(const ModelSpec& model, const Expr& f,
                                                  const std::vector<double>& t_seq,
                                                  std::size_t n_paths, std::uint64_t seed,
                                                  const SimulationConfig& cfg, Parallelism par = {});

struct MartingaleStats {
  double mean_z = 0.0;
  double var_z = 0.0;
  double predicted_var = 0.0;
};

MartingaleStats martingale_check(const ModelSpec& model, double t, std::size_t n_paths,
                                 std::uint64_t seed, const SimulationConfig& cfg, Parallelism par = {});

struct AdmissibilityPlan {
  double x_lo = -5.0;
  double x_hi = 5.0;
  std::size_t n_x = 41;
  int quad_n = 64;
};

struct ConditionResult {
  std::string name;
  bool passed = true;
  std::string detail;
  double value = 0.0;
};

struct AdmissibilityReport {
  std::vector<ConditionResult> conditions;
  double slope_at_x0 = 0.0;
  double lipschitz_c = 0.0;
  double k0 = 0.0;
  double k1 = 0.0;
  bool compensator_symmetric = true;

  bool passed() const;
  const ConditionResult& condition(const std::string& name) const;
};

/// Numerical checks of the class conditions on the x grid of `plan`, plus
/// the growth (K0) and Lipschitz (K1) integrals.
AdmissibilityReport check_admissible(const ModelSpec& model, const AdmissibilityPlan& plan = {});

}  // namespace jumpfrac
