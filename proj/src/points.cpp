#include "jumpfrac/points.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>

#include "jumpfrac/error.hpp"
#include "jumpfrac/format.hpp"
#include "jumpfrac/rng.hpp"

namespace jumpfrac {

std::vector<std::size_t> PointSystem::time_order() const {
  std::vector<std::size_t> idx(events.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [this](std::size_t a, std::size_t b) { return events[a].t < events[b].t; });
  return idx;
}

double expected_event_count(double horizon, double z_min) {
  return horizon * 2.0 * (1.0 / z_min - 1.0);
}

double mark_inverse_transform(double uniform, double z_min) {
  if (!(uniform >= 0.0 && uniform <= 1.0)) throw ValidationError("inverse transform: U outside [0,1]");
  if (!(z_min > 0.0 && z_min <= 1.0)) throw ValidationError("inverse transform: z_min outside (0,1]");
  return 1.0 / (1.0 + uniform * (1.0 / z_min - 1.0));
}

std::vector<JumpEvent> sample_mark_window(double w_lo, double w_hi, double horizon,
                                          std::uint64_t seed) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("horizon must be positive");
  if (!(w_lo > 0.0) || !(w_hi >= w_lo) || !std::isfinite(w_hi))
    throw ValidationError("mark window must satisfy 0 < w_lo <= w_hi < inf");
  const double rate = 2.0 * horizon;
  std::vector<JumpEvent> events;
  events.reserve(static_cast<std::size_t>((w_hi - w_lo) * rate * 1.05) + 16);
  const CounterRng rng(seed ^ hash_label("points"));
  double w = w_lo;
  for (std::uint64_t k = 0;; ++k) {
    w += -std::log(rng.uniform_at(3 * k)) / rate;
    if (w >= w_hi) break;
    const double t = rng.uniform_at(3 * k + 1) * horizon;
    const double sign = (rng.at(3 * k + 2) >> 63) ? -1.0 : 1.0;
    events.push_back({t, sign / w});
  }
  return events;
}

PointSystem sample_points(double horizon, double z_min, std::uint64_t seed) {
  if (!(z_min > 0.0 && z_min <= 1.0)) throw ValidationError("z_min must lie in (0, 1]");
  PointSystem ps;
  ps.horizon = horizon;
  ps.z_min = z_min;
  ps.seed = seed;
  ps.events = sample_mark_window(1.0, 1.0 / z_min, horizon, seed);
  return ps;
}

ApproxRate approx_rate(const PointSystem& ps, double t, double delta_max, double window) {
  if (!(delta_max > 1.0)) throw ValidationError("approx_rate: delta_max must exceed 1");
  if (!(window > 0.0 && window <= 1.0)) throw ValidationError("approx_rate: window must lie in (0, 1]");
  ApproxRate out;
  out.t = t;
  double best = 1.0;
  for (std::size_t i = 0; i < ps.events.size(); ++i) {
    const auto& e = ps.events[i];
    const double d = std::fabs(e.t - t);
    const double mark = std::fabs(e.z);
    if (d >= window || mark >= 1.0) continue;
    if (d == 0.0) {
      out.delta_hat = delta_max;
      out.witness = i;
      return out;
    }
    const double ratio = std::log(d) / std::log(mark);
    if (!out.witness || ratio > best) {
      out.witness = i;
      best = std::max(best, ratio);
    }
  }
  out.delta_hat = std::min(best, delta_max);
  return out;
}

ApproxRate approx_rate_regression(const PointSystem& ps, double t, int j_lo, int j_hi,
                                  double delta_max) {
  if (j_lo < 0 || j_hi <= j_lo) throw ValidationError("approx_rate_regression: need 0 <= j_lo < j_hi");
  const std::size_t levels = static_cast<std::size_t>(j_hi - j_lo + 1);
  std::vector<double> max_mark(levels, 0.0);
  std::vector<std::size_t> arg(levels, 0);
  const double outer = std::ldexp(1.0, -j_lo);
  for (std::size_t i = 0; i < ps.events.size(); ++i) {
    const double d = std::fabs(ps.events[i].t - t);
    if (d > outer) continue;
    const double mark = std::fabs(ps.events[i].z);
    for (std::size_t l = 0; l < levels; ++l) {
      if (d > std::ldexp(1.0, -(j_lo + static_cast<int>(l)))) break;
      if (mark > max_mark[l]) {
        max_mark[l] = mark;
        arg[l] = i;
      }
    }
  }
  std::vector<double> xs, ys;
  for (std::size_t l = 0; l < levels; ++l) {
    if (max_mark[l] <= 0.0) continue;
    xs.push_back(-static_cast<double>(j_lo + static_cast<int>(l)));
    ys.push_back(std::log2(max_mark[l]));
  }
  ApproxRate out;
  out.t = t;
  if (xs.size() < 2) return out;
  out.witness = arg[xs.size() - 1];
  const double slope = fit_line(xs, ys).slope;
  out.delta_hat = slope > 0.0 ? std::clamp(1.0 / slope, 1.0, delta_max) : delta_max;
  return out;
}

double covering_fraction(const PointSystem& ps, double delta, std::size_t grid_n) {
  if (grid_n < 1) throw ValidationError("covering_fraction: grid_n must be positive");
  if (!(delta >= 1.0)) throw ValidationError("covering_fraction: delta must be >= 1");
  if (ps.events.empty()) return 0.0;
  std::vector<long long> diff(grid_n + 1, 0);
  const double scale = static_cast<double>(grid_n) / ps.horizon;
  const auto last = static_cast<long long>(grid_n) - 1;
  for (const auto& e : ps.events) {
    const double r = std::pow(std::fabs(e.z), delta);
    const long long k0 = std::max(0LL, static_cast<long long>(std::ceil((e.t - r) * scale)));
    const long long k1 = std::min(last, static_cast<long long>(std::floor((e.t + r) * scale)));
    if (k0 > k1) continue;
    ++diff[static_cast<std::size_t>(k0)];
    --diff[static_cast<std::size_t>(k1 + 1)];
  }
  std::size_t covered = 0;
  long long running = 0;
  for (std::size_t k = 0; k < grid_n; ++k) {
    running += diff[k];
    if (running > 0) ++covered;
  }
  return static_cast<double>(covered) / static_cast<double>(grid_n);
}

MarkPyramid::MarkPyramid(const PointSystem& ps, int j_max) : j_max_(j_max) {
  if (j_max < 0 || j_max > 26) throw ValidationError("MarkPyramid: j_max must lie in [0, 26]");
  levels_.resize(static_cast<std::size_t>(j_max) + 1);
  auto& finest = levels_.back();
  finest.assign(std::size_t{1} << j_max, 0.0);
  const double cells = std::ldexp(1.0, j_max);
  for (const auto& e : ps.events) {
    auto c = static_cast<std::size_t>(std::floor(e.t / ps.horizon * cells));
    c = std::min(c, finest.size() - 1);
    finest[c] = std::max(finest[c], std::fabs(e.z));
  }
  for (int j = j_max - 1; j >= 0; --j) {
    const auto& fine = levels_[static_cast<std::size_t>(j) + 1];
    auto& coarse = levels_[static_cast<std::size_t>(j)];
    coarse.resize(fine.size() / 2);
    for (std::size_t c = 0; c < coarse.size(); ++c) coarse[c] = std::max(fine[2 * c], fine[2 * c + 1]);
  }
}

double MarkPyramid::cell_rate(int j, std::size_t cell, double delta_max) const {
  const double m = level(j).at(cell);
  if (m <= 0.0) return 1.0;
  if (m >= 1.0) return delta_max;
  return std::clamp(static_cast<double>(j) * std::numbers::ln2 / -std::log(m), 1.0, delta_max);
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) throw ValidationError("fit_line: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return f;
}

BoxDimension level_set_box_dim(const PointSystem& ps, double delta, int j_max) {
  if (j_max < 6) throw ValidationError("level_set_box_dim: j_max must be >= 6");
  if (!(delta >= 1.0)) throw ValidationError("level_set_box_dim: delta must be >= 1");
  const MarkPyramid pyramid(ps, j_max);
  BoxDimension out;
  std::vector<double> xs, ys;
  for (int j = j_max - 4; j <= j_max; ++j) {
    const double threshold = std::pow(ps.horizon * std::ldexp(1.0, -j), 1.0 / delta);
    const auto& lvl = pyramid.level(j);
    const auto n = static_cast<std::size_t>(
        std::count_if(lvl.begin(), lvl.end(), [threshold](double m) { return m >= threshold; }));
    out.counts.push_back(n);
    if (n == 0) {
      out.flagged = true;
      continue;
    }
    xs.push_back(static_cast<double>(j));
    ys.push_back(std::log2(static_cast<double>(n)));
  }
  out.levels_used = static_cast<int>(xs.size());
  if (xs.size() >= 2) {
    out.dimension = fit_line(xs, ys).slope;
  } else {
    out.flagged = true;
    out.dimension = 0.0;
  }
  return out;
}

void write_points_csv(const PointSystem& ps, std::ostream& out) {
  out << "t,z\n";
  for (const auto& e : ps.events) out << format_double(e.t) << ',' << format_double(e.z) << '\n';
}

PointSystem read_points_csv(std::istream& in, double horizon, double z_min, std::uint64_t seed) {
  PointSystem ps;
  ps.horizon = horizon;
  ps.z_min = z_min;
  ps.seed = seed;
  std::string line;
  if (!std::getline(in, line) || line != "t,z") throw ValidationError("points CSV: missing header 't,z'");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError("points CSV: malformed row '" + line + "'");
    ps.events.push_back({parse_double(std::string_view(line).substr(0, comma)),
                         parse_double(std::string_view(line).substr(comma + 1))});
  }
  return ps;
}

}  // namespace jumpfrac
