#pragma once

#include <cmath>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "jumpfrac/expr.hpp"
#include "jumpfrac/points.hpp"

namespace jumpfrac {

inline constexpr double kNegInf = -HUGE_VAL;

/// Endpoint value of F_cont / F_jump. HTimesGamma2 is the symbolic c1 =
/// h * gamma2, resolved when h is known.
enum class CValue { One, Zero, NegInf, HTimesGamma2 };

std::string to_string(CValue c);

/// gamma h on [0, 1/gamma), c at 1/gamma, -inf beyond.
double f_cont(CValue c, double gamma, double h);

/// gamma1 h on [0, 1/gamma1), c1 at 1/gamma1, gamma2 h on (1/gamma1,
/// 1/gamma2), c2 at 1/gamma2, -inf beyond. Throws ValidationError unless
/// gamma1 > gamma2.
double f_jump(CValue c1, CValue c2, double gamma1, double gamma2, double h);

struct SpectrumCase {
  enum class Kind { Diffusion, Cont, Jump };
  Kind kind = Kind::Cont;
  CValue c = CValue::One;  ///< Cont
  double gamma = 1.0;      ///< Cont and Diffusion
  CValue c1 = CValue::One, c2 = CValue::One;
  double gamma1 = 1.0, gamma2 = 1.0;
  std::string label;

  double evaluate(double h) const;
};

struct PointContext {
  bool sigma_zero = false;
  double beta_t = 1.0;
  double beta_t_minus = 1.0;
  double delta_t = 1.0;
  bool is_jump_time = false;
  bool lm_plus = false;
  bool lm_minus = false;
  double delta_one_tol = 0.05;  ///< |delta_t - 1| within this counts as delta_t = 1
};

/// Resolves which formula applies at the point. At a continuity time the
/// point is a strict local minimum of beta iff both lm flags hold. A jump
/// time with equal one-sided indices is treated as a continuity time.
SpectrumCase resolve_case(const PointContext& ctx);
double pointwise_spectrum(const PointContext& ctx, double h);

enum class SpectrumFlag { Ok, Undefined, Empty };
std::string to_string(SpectrumFlag f);

struct SpectrumValue {
  double d = kNegInf;
  SpectrumFlag flag = SpectrumFlag::Ok;
};

struct IntervalContext {
  bool sigma_zero = false;
  std::vector<double> betas;       ///< beta sampled on I
  std::vector<double> jump_betas;  ///< beta at the jump times inside I
};

/// Local spectrum on I. Without diffusion the value is Undefined at
/// h = 1/beta(T) for jump times T (tolerance 1e-9) and at h = 1/inf beta.
SpectrumValue local_spectrum(const IntervalContext& ctx, double h);

enum class Side { Plus, Minus };

struct LmResult {
  bool lm = false;
  bool insufficient = false;
};

/// Strict-local-minimum test of the modified map on one side of t. The
/// plus side is the side where beta is larger (the right side at a
/// continuity time) and its value at t is the larger one-sided limit; the
/// minus side carries the smaller limit. Uses the `window` samples nearest
/// to t on that side; fewer samples give false with the insufficient flag.
LmResult lm_detect(const std::vector<double>& u, const std::vector<double>& beta, double t, double beta_t,
                   double beta_t_minus, Side side, std::size_t window = 32, double tol = 1e-9);

struct SpectrumSample {
  double h = 0.0;
  double d = kNegInf;
  SpectrumFlag flag = SpectrumFlag::Ok;
  std::string label;
};

struct SpectrumCurve {
  enum class Mode { Theory, Empirical };
  std::vector<SpectrumSample> samples;
  Interval region{0.0, 1.0};
  Mode mode = Mode::Theory;
};

SpectrumCurve theory_curve(const PointContext& ctx, const std::vector<double>& hs);
SpectrumCurve local_theory_curve(const IntervalContext& ctx, const std::vector<double>& hs, Interval region);

/// Box-counting estimate of the spectrum of the pure-jump exponent field
/// h_t = 1/(delta_t beta(t)) (capped at 1/2 with diffusion). Cells of the
/// mark pyramid get the rate of their largest mark; a bin (lo, hi) is
/// empty when no finest cell in I has its exponent inside it, and
/// otherwise D is the slope of log2 #{cells : h_cell <= center} over levels
/// j_max-4..j_max.
struct EmpiricalOptions {
  int j_max = 14;
  bool sigma_zero = true;
  double delta_max = kDefaultDeltaMax;
};
SpectrumCurve empirical_spectrum(const PointSystem& ps, const std::vector<double>& beta_times,
                                 const std::vector<double>& betas, Interval region,
                                 const std::vector<std::pair<double, double>>& h_bins,
                                 const EmpiricalOptions& opt = {});

struct SupConsistency {
  double local_value = kNegInf;
  double sup_of_pointwise = kNegInf;
  SpectrumFlag local_flag = SpectrumFlag::Ok;
};

/// Compares the local spectrum on I with the sup of pointwise spectra over
/// t_grid uniform points of I; `provider` gives the point context at t.
SupConsistency sup_consistency(Interval region, double h, std::size_t t_grid,
                               const std::function<PointContext(double)>& provider);

void write_spectrum_csv(const SpectrumCurve& c, std::ostream& out);
/// JSON with mode, region, per-sample case labels and caller-supplied
/// provenance entries (key, value).
void write_spectrum_json(const SpectrumCurve& c, const std::vector<std::pair<std::string, std::string>>& provenance,
                         std::ostream& out);

}  // namespace jumpfrac
