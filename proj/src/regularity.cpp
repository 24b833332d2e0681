#include "jumpfrac/regularity.hpp"

#include <algorithm>
#include <cmath>

#include "jumpfrac/error.hpp"
#include "jumpfrac/quadrature.hpp"
#include "jumpfrac/rng.hpp"

namespace jumpfrac {

namespace {

/// Range of the path over [a, b]: node values and left limits inside,
/// plus the value in force at a.
double oscillation(const SamplePath& p, double a, double b) {
  std::size_t i = p.index_at(a);
  double lo = p.values[i], hi = lo;
  for (++i; i < p.size() && p.grid[i] <= b; ++i) {
    lo = std::min({lo, p.values[i], p.left_values[i]});
    hi = std::max({hi, p.values[i], p.left_values[i]});
  }
  return hi - lo;
}

}  // namespace

HolderEstimate estimate_holder(const SamplePath& path, double t, const HolderOptions& opt) {
  if (path.size() < 2) throw ValidationError("estimate_holder: path too short");
  if (opt.j_lo < 0 || opt.j_hi <= opt.j_lo) throw ValidationError("estimate_holder: need 0 <= j_lo < j_hi");
  if (!(opt.h_cap > 0.0)) throw ValidationError("estimate_holder: h_cap must be positive");
  const double t0 = path.grid.front(), t1 = path.grid.back();
  if (!(t >= t0 && t <= t1)) throw ValidationError("estimate_holder: t outside the path domain");
  HolderEstimate out;
  out.t = t;
  const std::size_t at = path.index_at(t);
  if (path.grid[at] == t && path.is_jump[at] && path.jump_marks[at] != 0.0) {
    out.at_jump = true;
    return out;
  }
  std::vector<double> xs, ys;
  for (int j = opt.j_lo; j <= opt.j_hi; ++j) {
    const double r = std::ldexp(1.0, -j);
    const double osc = oscillation(path, std::max(t0, t - r), std::min(t1, t + r));
    if (osc <= 0.0) continue;
    xs.push_back(-static_cast<double>(j));
    ys.push_back(std::log2(osc));
  }
  out.scales_used = static_cast<int>(xs.size());
  if (xs.size() < 2) {
    out.smooth = true;
    out.h_hat = opt.h_cap;
    out.r2 = 1.0;
    return out;
  }
  const LineFit fit = fit_line(xs, ys);
  out.r2 = fit.r2;
  if (fit.slope >= 1.0 - 1e-9) {
    out.smooth = true;
    out.h_hat = opt.h_cap;
  } else {
    out.h_hat = std::clamp(fit.slope, 0.0, opt.h_cap);
  }
  return out;
}

double theoretical_exponent(double beta_t, double delta_t, bool sigma_zero) {
  const double h = 1.0 / (delta_t * beta_t);
  return sigma_zero ? h : std::min(h, 0.5);
}

BandEnvelope beta_envelope(const std::vector<double>& times, const std::vector<double>& betas, double s,
                           double t, int m) {
  if (times.size() != betas.size() || times.empty()) throw ValidationError("beta_envelope: bad samples");
  if (m < 1) throw ValidationError("beta_envelope: m must be positive");
  if (s > t) std::swap(s, t);
  const double widen = std::ldexp(1.0, -m);
  auto sup_over = [&](double a, double b) {
    a = std::max(a, times.front());
    b = std::min(b, times.back());
    double best = -HUGE_VAL;
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] >= a && times[i] <= b) best = std::max(best, betas[i]);
    if (best == -HUGE_VAL) throw ValidationError("beta_envelope: window holds no sample");
    return best;
  };
  BandEnvelope env;
  env.m = m;
  env.beta_bar = sup_over(s, t) + 2.0 / m;
  env.beta_hat = sup_over(s - widen, t + widen) + 2.0 / m;
  return env;
}

BandResult band_statistic(const ModelSpec& model, double delta, double eps, int m, std::size_t n_paths,
                          std::uint64_t seed, const SimulationConfig& cfg, Parallelism par) {
  if (!(delta > 1.0)) throw ValidationError("band_statistic: delta must exceed 1");
  if (!(eps > 0.0)) throw ValidationError("band_statistic: eps must be positive");
  if (m < 6 || m > 20) throw ValidationError("band_statistic: m must lie in [6, 20]");
  if (n_paths == 0) throw ValidationError("band_statistic: n_paths must be positive");
  model.validate();
  cfg.validate();
  const double r = std::pow(2.0, -static_cast<double>(m) / delta);
  if (!(cfg.z_min < r)) throw ValidationError("band_statistic: z_min too large for level m");

  BandResult out;
  out.threshold = 6.0 * m * m;
  out.statistics.assign(n_paths, 0.0);
  if (model.jump_zero()) return out;

  const int level = m + 2;
  const std::size_t cells = std::size_t{1} << level;
  const double cell = cfg.horizon / static_cast<double>(cells);
  double small_comp = 0.0;
  const bool comp_needs_x = model.jump_kind == JumpKind::Custom && model.g.uses_x();
  auto small_compensator = [&](double x) {
    if (model.jump_kind == JumpKind::Builtin) return 0.0;
    return integrate_levy_window([&](double z) { return model.jump(x, z) + model.jump(x, -z); }, cfg.z_min, r,
                                 cfg.quad_n);
  };
  if (!comp_needs_x) small_comp = small_compensator(0.0);

  parallel_for(n_paths, par, [&](std::size_t i) {
    SimulationConfig ci = cfg;
    ci.seed = derive_seed(seed, "brownian", i);
    const auto ps = sample_points(cfg.horizon, cfg.z_min, derive_seed(seed, "points", i));
    const auto path = simulate_path(model, ps, ci);
    std::vector<JumpEvent> ev(ps.events);
    std::stable_sort(ev.begin(), ev.end(), [](const JumpEvent& a, const JumpEvent& b) { return a.t < b.t; });

    // Small-jump component at every node, then sampled at the dyadic points.
    std::vector<double> small(path.size(), 0.0);
    std::size_t e = 0;
    double acc = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (k > 0) {
        const double ds = path.grid[k] - path.grid[k - 1];
        acc -= (comp_needs_x ? small_compensator(path.left_values[k]) : small_comp) * ds;
      }
      if (path.is_jump[k]) {
        bool all_small = true;
        bool any = false;
        while (e < ev.size() && ev[e].t <= path.grid[k]) {
          if (ev[e].t == path.grid[k]) {
            any = true;
            all_small = all_small && std::fabs(ev[e].z) < r;
          }
          ++e;
        }
        if (any && all_small) acc += path.jump_marks[k];
      }
      small[k] = acc;
    }
    std::vector<double> at_point(cells + 1);
    std::vector<double> cell_beta(cells, -HUGE_VAL);
    for (std::size_t c = 0; c <= cells; ++c) at_point[c] = small[path.index_at(static_cast<double>(c) * cell)];
    for (std::size_t c = 0; c < cells; ++c) {
      const double a = static_cast<double>(c) * cell;
      std::size_t k = path.index_at(a);
      double best = model.beta(path.values[k]);
      for (++k; k < path.size() && path.grid[k] <= a + cell; ++k)
        best = std::max({best, model.beta(path.values[k]), model.beta(path.left_values[k])});
      cell_beta[c] = best;
    }
    double stat = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
      for (std::size_t d = 1; d <= 4 && c + d <= cells; ++d) {
        const std::size_t lo = c >= 4 ? c - 4 : 0;
        const std::size_t hi = std::min(cells, c + d + 4);
        double beta_sup = -HUGE_VAL;
        for (std::size_t q = lo; q < hi; ++q) beta_sup = std::max(beta_sup, cell_beta[q]);
        const double beta_hat = beta_sup + 2.0 / m;
        const double scale = std::pow(2.0, static_cast<double>(m) / (delta * (beta_hat + eps)));
        stat = std::max(stat, scale * std::fabs(at_point[c + d] - at_point[c]));
      }
    }
    out.statistics[i] = stat;
  });
  std::size_t exceed = 0;
  for (double s : out.statistics)
    if (s > out.threshold) ++exceed;
  out.frequency = static_cast<double>(exceed) / static_cast<double>(n_paths);
  return out;
}

}  // namespace jumpfrac
