#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace jumpfrac {

/// One atom (T_n, Z_n) of the driving Poisson system.
struct JumpEvent {
  double t = 0.0;
  double z = 0.0;

  friend bool operator==(const JumpEvent&, const JumpEvent&) = default;
};

/// Finite truncation of the Poisson system with intensity dt (x) dz/z^2 on
/// z_min < |z| < 1. Events are sorted by decreasing |z|.
struct PointSystem {
  std::vector<JumpEvent> events;
  double horizon = 1.0;
  double z_min = 1e-4;
  std::uint64_t seed = 0;

  /// Indices of `events` in increasing time order.
  std::vector<std::size_t> time_order() const;
};

/// Expected number of events: horizon * 2 (1/z_min - 1).
double expected_event_count(double horizon, double z_min);

/// Inverse of the conditional tail P(|Z| > u) = (1/u - 1)/(1/z_min - 1):
/// returns |Z| = 1 / (1 + U (1/z_min - 1)).
double mark_inverse_transform(double uniform, double z_min);

/// Samples the truncated system. Marks arrive as a homogeneous Poisson
/// process of rate 2*horizon in w = 1/|z| starting at w = 1, each with an
/// independent uniform time and a fair sign. Event k depends only on
/// (seed, k), so a smaller z_min extends the system of a larger one with
/// the same seed. Throws ValidationError unless 0 < z_min <= 1 and
/// horizon > 0; z_min = 1 yields an empty system.
PointSystem sample_points(double horizon, double z_min, std::uint64_t seed);

/// Same arrival scheme restricted to w = 1/|z| in [w_lo, w_hi); used for
/// mark windows that extend above 1.
std::vector<JumpEvent> sample_mark_window(double w_lo, double w_hi, double horizon,
                                          std::uint64_t seed);

inline constexpr double kDefaultDeltaMax = 16.0;

/// Finite-N approximation rate at t.
struct ApproxRate {
  double t = 0.0;
  double delta_hat = 1.0;               ///< >= 1; delta_max stands for +infinity
  std::optional<std::size_t> witness;   ///< maximizing event index, if any
};

/// max(1, sup_n log|T_n - t| / log|Z_n|) over events with |T_n - t| < window
/// and |Z_n| < 1, capped at delta_max. A zero distance yields the delta_max
/// sentinel.
ApproxRate approx_rate(const PointSystem& ps, double t, double delta_max = kDefaultDeltaMax,
                       double window = 1.0);

/// Scale-regression rate: the reciprocal least-squares slope of
/// log2(max |Z_n| over |T_n - t| <= 2^-j) against -j for j in
/// [j_lo, j_hi], clamped to [1, delta_max]. Consistent with oscillation
/// based exponent estimates over the same levels.
ApproxRate approx_rate_regression(const PointSystem& ps, double t, int j_lo, int j_hi,
                                  double delta_max = kDefaultDeltaMax);

/// Fraction of the grid {k * horizon / grid_n : 0 <= k < grid_n} lying in
/// the union of closed balls B(T_n, |Z_n|^delta).
double covering_fraction(const PointSystem& ps, double delta, std::size_t grid_n);

/// Largest |Z_n| per dyadic cell of [0, 1) (times scaled by the horizon),
/// for levels 0..j_max. Level j has 2^j cells.
class MarkPyramid {
public:
  MarkPyramid(const PointSystem& ps, int j_max);

  int j_max() const noexcept { return j_max_; }
  const std::vector<double>& level(int j) const { return levels_.at(static_cast<std::size_t>(j)); }

  /// Coarse approximation rate of a cell: the delta for which the largest
  /// mark equals the cell size, max(1, j ln 2 / -ln(max|Z|)); empty cells
  /// give 1.
  double cell_rate(int j, std::size_t cell, double delta_max = kDefaultDeltaMax) const;

private:
  int j_max_;
  std::vector<std::vector<double>> levels_;
};

struct BoxDimension {
  double dimension = 0.0;
  int levels_used = 0;
  bool flagged = false;   ///< some level had no counted cell
  std::vector<std::size_t> counts;  ///< per level j_max-4 .. j_max
};

/// Least-squares slope of log2 N_j against j for j = j_max-4..j_max, where
/// N_j counts dyadic cells of size 2^-j holding the center of a ball
/// B(T_n, |Z_n|^delta) of radius at least 2^-j. Estimates
/// dim {t : delta_t >= delta} = 1/delta.
BoxDimension level_set_box_dim(const PointSystem& ps, double delta, int j_max);

/// Least-squares slope and R^2 helper shared by the box-counting estimators.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

/// CSV with header `t,z`, rows in stored order, shortest round-trip floats.
void write_points_csv(const PointSystem& ps, std::ostream& out);
PointSystem read_points_csv(std::istream& in, double horizon, double z_min, std::uint64_t seed);

}  // namespace jumpfrac
