#include "jumpfrac/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "jumpfrac/error.hpp"
#include "jumpfrac/rng.hpp"

namespace jumpfrac {

namespace {

void require_pure_jump(const ModelSpec& model) {
  if (!model.sigma_zero()) throw ValidationError("tangent analysis requires sigma ZERO");
  if (model.jump_kind != JumpKind::Builtin) throw ValidationError("tangent analysis requires the builtin jump coefficient");
  const auto b = model.b.constant_value();
  if (!b || *b != 0.0) throw ValidationError("tangent analysis requires b = 0");
}

double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0, sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::fabs(term) <= 1e-12 * std::fabs(sum)) return std::clamp(2.0 * sum, 0.0, 1.0);
    sign = -sign;
  }
  return 1.0;
}

}  // namespace

RescaledEnsemble rescale_increments(const ModelSpec& model, double t0, double alpha, std::size_t n_paths,
                                    std::uint64_t seed, const SimulationConfig& cfg, Parallelism par) {
  require_pure_jump(model);
  model.validate();
  cfg.validate();
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  if (!(t0 >= 0.0) || t0 + alpha > cfg.horizon * (1.0 + 1e-12))
    throw ValidationError("need 0 <= t0 and t0 + alpha <= horizon");
  if (n_paths == 0) throw ValidationError("n_paths must be positive");
  RescaledEnsemble ens;
  ens.t0 = t0;
  ens.alpha = alpha;
  ens.beta0 = t0 == 0.0 ? model.beta_tilde.eval(model.x0) : std::nan("");
  ens.samples.resize(n_paths);
  ens.path_beta0.resize(n_paths);
  SimulationConfig c = cfg;
  c.horizon = t0 + alpha;
  parallel_for(n_paths, par, [&](std::size_t i) {
    const auto ps = sample_points(c.horizon, c.z_min, derive_seed(seed, "points", i));
    double m0 = model.x0, m1;
    if (t0 == 0.0) {
      m1 = simulate_terminal(model, ps, c).m;
    } else {
      const auto path = simulate_path(model, ps, c);
      m0 = path.value_at(t0);
      m1 = path.values.back();
    }
    const double b0 = model.beta_tilde.eval(m0);
    ens.path_beta0[i] = b0;
    ens.samples[i] = (m1 - m0) / std::pow(alpha, 1.0 / b0);
  });
  return ens;
}

double stable_draw(double beta0, double z_floor, double z_cap, double horizon, std::uint64_t seed) {
  if (!(beta0 > 0.0 && beta0 < 2.0)) throw ValidationError("beta0 must lie in (0, 2)");
  if (!(z_floor > 0.0 && z_floor < z_cap)) throw ValidationError("need 0 < z_floor < z_cap");
  // u = |z|^(1/beta0) turns dz/z^2 into beta0 u^(-1-beta0) du.
  const double w_lo = std::pow(z_cap, -beta0);
  const double w_hi = std::pow(z_floor, -beta0);
  double sum = 0.0;
  for (const auto& e : sample_mark_window(w_lo, w_hi, horizon, seed)) {
    const double u = std::pow(std::fabs(e.z), 1.0 / beta0);
    sum += e.z < 0.0 ? -u : u;
  }
  return sum;
}

std::vector<double> simulate_stable(double beta0, std::size_t n_paths, double z_cap, std::uint64_t seed,
                                    double z_floor, double horizon, Parallelism par) {
  if (!(z_cap >= 1.0)) throw ValidationError("z_cap must be >= 1");
  if (!(z_floor > 0.0 && z_floor < 1.0)) throw ValidationError("z_floor must lie in (0, 1)");
  if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
  std::vector<double> out(n_paths);
  parallel_for(n_paths, par, [&](std::size_t i) {
    out[i] = stable_draw(beta0, z_floor, z_cap, horizon, derive_seed(seed, "stable", i));
  });
  return out;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ValidationError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)};
}

std::vector<TangentRow> tangent_test(const ModelSpec& model, double t0, std::vector<double> alpha_seq,
                                     std::size_t n_paths, std::uint64_t seed, const SimulationConfig& cfg,
                                     Parallelism par) {
  if (alpha_seq.empty()) throw ValidationError("tangent_test: empty alpha sequence");
  std::sort(alpha_seq.begin(), alpha_seq.end(), std::greater<>());
  std::vector<TangentRow> rows;
  for (std::size_t k = 0; k < alpha_seq.size(); ++k) {
    const double alpha = alpha_seq[k];
    const auto ens = rescale_increments(model, t0, alpha, n_paths, derive_seed(seed, "tangent", k), cfg, par);
    const std::uint64_t cseed = derive_seed(seed, "comparator", k);
    std::vector<double> ref(n_paths);
    parallel_for(n_paths, par, [&](std::size_t i) {
      const double b0 = ens.path_beta0[i];
      const double floor = std::pow(cfg.z_min / alpha, 1.0 / b0);
      const double cap = std::pow(alpha, -1.0 / b0);
      ref[i] = stable_draw(b0, floor, cap, 1.0, derive_seed(cseed, "stable", i));
    });
    const KsResult ks = ks_two_sample(ens.samples, ref);
    rows.push_back({alpha, ks.statistic, ks.p_value});
  }
  return rows;
}

std::vector<std::pair<double, double>> moment_ratio(const ModelSpec& model, double eta, double gamma,
                                                    const std::vector<double>& alpha_seq, std::size_t n_paths,
                                                    std::uint64_t seed, const SimulationConfig& cfg,
                                                    Parallelism par) {
  model.validate();
  cfg.validate();
  if (!(eta > 0.0)) throw ValidationError("moment_ratio: eta must be positive");
  if (n_paths == 0) throw ValidationError("moment_ratio: n_paths must be positive");
  const bool jumpless = model.jump_zero();
  const double beta0 = jumpless ? 1.0 : model.beta(model.x0);
  const double lo = beta0 + eta;
  const double hi = beta0 >= 1.0 ? 2.0 : std::min(1.0, 2.0 * beta0);
  if (!jumpless && !(gamma > lo && gamma < hi))
    throw ValidationError("moment_ratio: gamma outside the admissible band (" + std::to_string(lo) + ", " +
                          std::to_string(hi) + ")");
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < alpha_seq.size(); ++k) {
    const double alpha = alpha_seq[k];
    if (!(alpha > 0.0)) throw ValidationError("moment_ratio: alpha must be positive");
    SimulationConfig c = cfg;
    c.horizon = alpha;
    const std::uint64_t kseed = derive_seed(seed, "moment", k);
    std::vector<double> vals(n_paths);
    parallel_for(n_paths, par, [&](std::size_t i) {
      SimulationConfig ci = c;
      ci.seed = derive_seed(kseed, "brownian", i);
      PointSystem ps;
      ps.horizon = alpha;
      ps.z_min = c.z_min;
      if (!jumpless) ps = sample_points(alpha, c.z_min, derive_seed(kseed, "points", i));
      const auto path = simulate_path(model, ps, ci);
      double m = path.values.back();
      if (!jumpless) {
        for (std::size_t q = 0; q < path.size(); ++q) {
          if (model.beta(path.values[q]) > lo) {
            m = path.values[q];
            break;
          }
        }
      }
      vals[i] = std::pow(std::fabs(m - model.x0), gamma);
    });
    double sum = 0.0;
    for (double v : vals) sum += v;
    out.emplace_back(alpha, sum / static_cast<double>(n_paths) / alpha);
  }
  return out;
}

}  // namespace jumpfrac
