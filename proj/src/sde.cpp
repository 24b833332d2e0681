#include "jumpfrac/sde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "jumpfrac/error.hpp"
#include "jumpfrac/format.hpp"
#include "jumpfrac/quadrature.hpp"
#include "jumpfrac/rng.hpp"

namespace jumpfrac {

bool ModelSpec::jump_zero() const noexcept {
  if (jump_kind != JumpKind::Custom) return false;
  const auto c = g.constant_value();
  return c && *c == 0.0;
}

double ModelSpec::jump(double x, double z) const {
  if (jump_kind == JumpKind::Custom) return g.eval(x, z);
  const double beta = beta_tilde.eval(x);
  if (!(beta > 0.0 && beta < 2.0)) {
    throw NumericalError("beta_tilde(" + format_double(x) + ") = " + format_double(beta) +
                         " leaves (0, 2)");
  }
  const double mag = std::pow(std::fabs(z), 1.0 / beta);
  return z < 0.0 ? -mag : mag;
}

double ModelSpec::beta(double x) const {
  if (jump_kind == JumpKind::Builtin) return beta_tilde.eval(x);
  const double a = std::fabs(g.eval(x, 1e-7));
  const double c = std::fabs(g.eval(x, 1e-8));
  if (a == 0.0 || c == 0.0) throw NumericalError("local index undefined: jump coefficient vanishes near 0");
  return 1.0 / std::log10(a / c);
}

void ModelSpec::validate() const {
  if (!(beta_band.lo > 0.0 && beta_band.lo <= beta_band.hi && beta_band.hi < 2.0))
    throw ValidationError("beta_band must satisfy 0 < lo <= hi < 2");
  if (hypothesis == Hypothesis::CaseA && beta_band.lo < 1.0)
    throw ValidationError("hypothesis case_a requires beta_band lo >= 1");
  if (hypothesis == Hypothesis::CaseB && beta_band.hi >= 1.0)
    throw ValidationError("hypothesis case_b requires beta_band hi < 1");
  if (!std::isfinite(x0)) throw ValidationError("x0 must be finite");
  if (jump_kind == JumpKind::Builtin) {
    bool inside = false;
    try {
      inside = check_range(beta_tilde, x0 - 10.0, x0 + 10.0, beta_band, 2001);
    } catch (const NumericalError& e) {
      throw ValidationError(std::string("beta_tilde: ") + e.what());
    }
    if (!inside) {
      throw ValidationError("beta_tilde leaves beta_band [" + format_double(beta_band.lo) + ", " +
                            format_double(beta_band.hi) + "]");
    }
  }
}

void SimulationConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("sim.dt must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("sim.horizon must be positive");
  if (!(z_min > 0.0 && z_min < 1.0)) throw ValidationError("sim.z_min must lie in (0, 1)");
  if (quad_n < 1) throw ValidationError("sim.quad_n must be positive");
  if (horizon / dt > 1e8) throw ValidationError("sim.dt too small for the horizon");
}

std::size_t SamplePath::index_at(double t) const {
  if (grid.empty()) throw ValidationError("empty path");
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  if (it == grid.begin()) return 0;
  return static_cast<std::size_t>(it - grid.begin()) - 1;
}

namespace {

double builtin_second_moment(double beta, double z_min) {
  const double p = 2.0 / beta - 1.0;
  return 2.0 * (1.0 - std::pow(z_min, p)) / p;
}

/// Evaluates a state-dependent rate, caching it when the model makes it
/// state independent.
class RateCache {
public:
  template <typename Fn>
  RateCache(bool constant_in_x, Fn&& fn) : fn_(std::forward<Fn>(fn)) {
    if (constant_in_x) fixed_ = fn_(0.0);
  }
  double operator()(double x) const { return fixed_ ? *fixed_ : fn_(x); }

private:
  std::function<double(double)> fn_;
  std::optional<double> fixed_;
};

RateCache make_compensator(const ModelSpec& model, double z_min, int quad_n) {
  if (model.jump_kind == JumpKind::Builtin || model.jump_zero())
    return RateCache(true, [](double) { return 0.0; });
  return RateCache(!model.g.uses_x(), [&model, z_min, quad_n](double x) {
    return compensator_drift(model, x, z_min, quad_n).value;
  });
}

RateCache make_variance_rate(const ModelSpec& model, double z_min, int quad_n) {
  if (model.jump_zero()) return RateCache(true, [](double) { return 0.0; });
  if (model.jump_kind == JumpKind::Builtin) {
    return RateCache(model.beta_tilde.is_constant(), [&model, z_min](double x) {
      return builtin_second_moment(model.beta_tilde.eval(x), z_min);
    });
  }
  return RateCache(!model.g.uses_x(), [&model, z_min, quad_n](double x) {
    return jump_second_moment(model, x, z_min, quad_n);
  });
}

std::vector<JumpEvent> events_in_time_order(const ModelSpec& model, const PointSystem& ps) {
  if (model.jump_zero()) return {};
  std::vector<JumpEvent> ev(ps.events);
  std::stable_sort(ev.begin(), ev.end(), [](const JumpEvent& a, const JumpEvent& b) { return a.t < b.t; });
  return ev;
}

struct NodeRecord {
  double t, m, left, mark;
  bool jump;
  double x, y, z;
  bool uniform;
};

/// Core of the jump-adapted Euler scheme. Calls sink(const NodeRecord&) for
/// every node in time order and returns the variance integral when asked.
template <typename Sink>
double run_scheme(const ModelSpec& model, const PointSystem& ps, const SimulationConfig& cfg,
                  bool track_variance, Sink&& sink) {
  const double H = cfg.horizon;
  if (std::fabs(ps.horizon - H) > 1e-12 * H)
    throw ValidationError("point system horizon differs from sim.horizon");
  const auto ev = events_in_time_order(model, ps);
  const auto n = static_cast<std::size_t>(std::ceil(H / cfg.dt - 1e-9));
  const bool diffusion = !model.sigma_zero();
  const RateCache comp = make_compensator(model, ps.z_min, cfg.quad_n);
  std::optional<RateCache> var_rate;
  if (track_variance) var_rate.emplace(make_variance_rate(model, ps.z_min, cfg.quad_n));

  const double x0 = model.x0;
  double X = 0.0, Y = 0.0, Z = 0.0, M = x0, var_acc = 0.0;
  const CounterRng brown(derive_seed(cfg.seed, "brownian", 0));

  auto check = [&M](double t) {
    if (!std::isfinite(M)) throw NumericalError("state became non-finite at t = " + format_double(t));
  };
  auto drift_step = [&](double t_end, double ds, double dW) {
    if (diffusion) X += model.sigma->eval(M) * dW;
    Y += model.b.eval(M) * ds;
    Z -= comp(M) * ds;
    if (var_rate) var_acc += (*var_rate)(M)*ds;
    M = x0 + ((X + Y) + Z);
    check(t_end);
  };
  std::size_t e = 0;
  auto apply_jumps_at = [&](double s) {
    const double left = M;
    double mark = 0.0;
    while (e < ev.size() && ev[e].t == s) {
      const double g = model.jump(M, ev[e].z);
      mark += g;
      Z += g;
      M = left + mark;
      ++e;
    }
    check(s);
    return std::pair{left, mark};
  };

  if (!ev.empty() && ev.front().t <= 0.0) {
    const double left = M;
    double mark = 0.0;
    while (e < ev.size() && ev[e].t <= 0.0) {
      const double g = model.jump(M, ev[e].z);
      mark += g;
      Z += g;
      M = left + mark;
      ++e;
    }
    check(0.0);
    sink(NodeRecord{0.0, M, left, mark, true, X, Y, Z, true});
  } else {
    sink(NodeRecord{0.0, M, M, 0.0, false, X, Y, Z, true});
  }

  for (std::size_t k = 0; k < n; ++k) {
    const double ta = static_cast<double>(k) * cfg.dt;
    const double tb = k + 1 == n ? H : static_cast<double>(k + 1) * cfg.dt;
    std::size_t e_end = e;
    while (e_end < ev.size() && ev[e_end].t <= tb) ++e_end;
    const double dw_total = diffusion ? std::sqrt(tb - ta) * brown.normal_at(k) : 0.0;
    if (e == e_end) {
      drift_step(tb, tb - ta, dw_total);
      sink(NodeRecord{tb, M, M, 0.0, false, X, Y, Z, true});
      continue;
    }
    const CounterRng bridge(derive_seed(cfg.seed, "bridge", k));
    std::uint64_t bridge_draw = 0;
    double u = ta;
    double w_rem = dw_total;
    while (e < e_end) {
      const double s = ev[e].t;
      double dW = 0.0;
      if (diffusion) {
        if (s < tb) {
          const double mean = w_rem * (s - u) / (tb - u);
          const double var = (s - u) * (tb - s) / (tb - u);
          dW = mean + std::sqrt(var) * bridge.normal_at(bridge_draw++);
        } else {
          dW = w_rem;
        }
        w_rem -= dW;
      }
      drift_step(s, s - u, dW);
      u = s;
      const auto [left, mark] = apply_jumps_at(s);
      sink(NodeRecord{s, M, left, mark, true, X, Y, Z, s == tb});
    }
    if (u < tb) {
      drift_step(tb, tb - u, w_rem);
      sink(NodeRecord{tb, M, M, 0.0, false, X, Y, Z, true});
    }
  }
  return var_acc;
}

void validate_run(const ModelSpec& model, const SimulationConfig& cfg) {
  model.validate();
  cfg.validate();
}

TerminalState terminal_unchecked(const ModelSpec& model, const PointSystem& ps,
                                 const SimulationConfig& cfg, bool track_variance) {
  TerminalState out;
  out.variance_integral = run_scheme(model, ps, cfg, track_variance, [&out](const NodeRecord& r) {
    out.m = r.m;
    out.x = r.x;
    out.y = r.y;
    out.z = r.z;
  });
  return out;
}

std::vector<double> uniform_values(const ModelSpec& model, const PointSystem& ps,
                                   const SimulationConfig& cfg) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(cfg.horizon / cfg.dt) + 2);
  run_scheme(model, ps, cfg, false, [&out](const NodeRecord& r) {
    if (r.uniform) out.push_back(r.m);
  });
  return out;
}

PointSystem ensemble_points(const ModelSpec& model, double horizon, double z_min, std::uint64_t seed,
                            std::size_t i) {
  if (model.jump_zero()) {
    PointSystem ps;
    ps.horizon = horizon;
    ps.z_min = z_min;
    return ps;
  }
  return sample_points(horizon, z_min, derive_seed(seed, "points", i));
}

double symmetric_part(const ModelSpec& model, double x, double z) {
  return model.jump(x, z) + model.jump(x, -z);
}

}  // namespace

SamplePath simulate_path(const ModelSpec& model, const PointSystem& ps, const SimulationConfig& cfg) {
  validate_run(model, cfg);
  SamplePath path;
  path.x0 = model.x0;
  const std::size_t expect = static_cast<std::size_t>(cfg.horizon / cfg.dt) + ps.events.size() + 2;
  for (auto* v : {&path.grid, &path.values, &path.left_values, &path.jump_marks, &path.x, &path.y, &path.z})
    v->reserve(expect);
  path.is_jump.reserve(expect);
  run_scheme(model, ps, cfg, false, [&path](const NodeRecord& r) {
    path.grid.push_back(r.t);
    path.values.push_back(r.m);
    path.left_values.push_back(r.left);
    path.jump_marks.push_back(r.mark);
    path.is_jump.push_back(r.jump ? 1 : 0);
    path.x.push_back(r.x);
    path.y.push_back(r.y);
    path.z.push_back(r.z);
  });
  return path;
}

TerminalState simulate_terminal(const ModelSpec& model, const PointSystem& ps,
                                const SimulationConfig& cfg, bool track_variance) {
  validate_run(model, cfg);
  return terminal_unchecked(model, ps, cfg, track_variance);
}

CompensatorValue compensator_drift(const ModelSpec& model, double x, double z_min, int quad_n) {
  if (!(z_min > 0.0 && z_min <= 1.0)) throw ValidationError("compensator_drift: z_min must lie in (0, 1]");
  CompensatorValue out;
  if (model.jump_zero() || z_min == 1.0) return out;
  out.value = integrate_levy_window([&](double z) { return symmetric_part(model, x, z); }, z_min, 1.0, quad_n);
  out.symmetric = std::fabs(out.value) <= 1e-10;
  return out;
}

double jump_second_moment(const ModelSpec& model, double x, double z_min, int quad_n) {
  if (model.jump_zero()) return 0.0;
  if (model.jump_kind == JumpKind::Builtin) return builtin_second_moment(model.beta_tilde.eval(x), z_min);
  return integrate_levy_window(
      [&](double z) {
        const double a = model.jump(x, z), b = model.jump(x, -z);
        return a * a + b * b;
      },
      z_min, 1.0, quad_n);
}

std::vector<double> refine_convergence(const ModelSpec& model, std::uint64_t seed,
                                       const std::vector<double>& z_min_seq,
                                       const SimulationConfig& cfg) {
  std::vector<PointSystem> systems;
  systems.reserve(z_min_seq.size());
  for (double z : z_min_seq) systems.push_back(sample_points(cfg.horizon, z, seed));
  return refine_convergence(model, systems, cfg);
}

std::vector<double> refine_convergence(const ModelSpec& model, const std::vector<PointSystem>& systems,
                                       const SimulationConfig& cfg) {
  validate_run(model, cfg);
  if (systems.size() < 2) throw ValidationError("refine_convergence: need at least two truncation levels");
  for (std::size_t k = 0; k + 1 < systems.size(); ++k) {
    const auto& coarse = systems[k];
    const auto& fine = systems[k + 1];
    if (!(fine.z_min < coarse.z_min)) throw ValidationError("refine_convergence: z_min sequence must decrease");
    const bool prefix = coarse.seed == fine.seed && coarse.events.size() <= fine.events.size() &&
                        std::equal(coarse.events.begin(), coarse.events.end(), fine.events.begin());
    if (!prefix) throw ValidationError("refine_convergence: uncoupled point systems (seed mismatch)");
  }
  std::vector<double> gaps;
  std::vector<double> prev = uniform_values(model, systems[0], cfg);
  for (std::size_t k = 1; k < systems.size(); ++k) {
    std::vector<double> cur = uniform_values(model, systems[k], cfg);
    double gap = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) gap = std::max(gap, std::fabs(cur[i] - prev[i]));
    gaps.push_back(gap);
    prev = std::move(cur);
  }
  return gaps;
}

double compute_btilde(const ModelSpec& model, double x) {
  if (model.jump_zero()) return 0.0;
  if (model.jump_kind == JumpKind::Builtin) {
    const double beta = model.beta_tilde.eval(x);
    if (beta >= 1.0) {
      throw NumericalError("b~ diverges: beta_tilde(" + format_double(x) + ") = " + format_double(beta) +
                           " >= 1");
    }
  }
  return integrate_levy([&](double z) { return model.jump(x, z); }, 1.0);
}

double generator_apply(const ModelSpec& model, const Expr& f, double x, int quad_n) {
  constexpr double kStep = 1e-5;
  constexpr double kSingular = 1e-6;
  if (f.uses_z()) throw ValidationError("generator_apply: f must depend on x only");
  const double f0 = f.eval(x);
  const double fp = f.eval(x + kStep), fm = f.eval(x - kStep);
  const double d1 = (fp - fm) / (2.0 * kStep);
  const double d2 = (fp - 2.0 * f0 + fm) / (kStep * kStep);
  const double sigma = model.sigma_at(x);
  double value = model.b.eval(x) * d1 + 0.5 * sigma * sigma * d2;
  if (model.jump_zero()) return value;

  auto psi = [&](double z) {
    const double g = model.jump(x, z);
    return f.eval(x + g) - f0 - g * d1;
  };
  value += integrate_levy_window([&](double z) { return psi(z) + psi(-z); }, kSingular, 1.0, quad_n);

  auto g2 = [&](double z) {
    const double a = model.jump(x, z), b = model.jump(x, -z);
    return a * a + b * b;
  };
  double inner = 0.0;
  if (model.jump_kind == JumpKind::Builtin) {
    const double p = 2.0 / model.beta_tilde.eval(x) - 1.0;
    inner = 2.0 * std::pow(kSingular, p) / p;
  } else {
    const double p = local_power(g2, kSingular);
    if (p <= 1.0 + 1e-9) throw NumericalError("generator_apply: small-jump variance diverges");
    if (std::isfinite(p)) inner = g2(kSingular) / kSingular / (p - 1.0);
  }
  return value + 0.5 * d2 * inner;
}

std::vector<GeneratorPoint> generator_consistency(const ModelSpec& model, const Expr& f,
                                                  const std::vector<double>& t_seq,
                                                  std::size_t n_paths, std::uint64_t seed,
                                                  const SimulationConfig& cfg, Parallelism par) {
  validate_run(model, cfg);
  if (n_paths == 0) throw ValidationError("generator_consistency: n_paths must be positive");
  const double f0 = f.eval(model.x0);
  const double gen = generator_apply(model, f, model.x0, cfg.quad_n);
  std::vector<GeneratorPoint> out;
  for (double t : t_seq) {
    if (!(t > 0.0)) throw ValidationError("generator_consistency: times must be positive");
    SimulationConfig c = cfg;
    c.horizon = t;
    std::vector<double> fv(n_paths);
    parallel_for(n_paths, par, [&](std::size_t i) {
      SimulationConfig ci = c;
      ci.seed = derive_seed(seed, "brownian", i);
      const auto ps = ensemble_points(model, t, c.z_min, seed, i);
      fv[i] = f.eval(terminal_unchecked(model, ps, ci, false).m);
    });
    double sum = 0.0;
    for (double v : fv) sum += v;
    out.push_back({t, (sum / static_cast<double>(n_paths) - f0) / t, gen});
  }
  return out;
}

MartingaleStats martingale_check(const ModelSpec& model, double t, std::size_t n_paths,
                                 std::uint64_t seed, const SimulationConfig& cfg, Parallelism par) {
  validate_run(model, cfg);
  if (n_paths < 2) throw ValidationError("martingale_check: need at least two paths");
  if (!(t > 0.0)) throw ValidationError("martingale_check: t must be positive");
  SimulationConfig c = cfg;
  c.horizon = t;
  std::vector<double> zs(n_paths), vs(n_paths);
  parallel_for(n_paths, par, [&](std::size_t i) {
    SimulationConfig ci = c;
    ci.seed = derive_seed(seed, "brownian", i);
    const auto ps = ensemble_points(model, t, c.z_min, seed, i);
    const auto term = terminal_unchecked(model, ps, ci, true);
    zs[i] = term.z;
    vs[i] = term.variance_integral;
  });
  MartingaleStats out;
  const double n = static_cast<double>(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) {
    out.mean_z += zs[i];
    out.predicted_var += vs[i];
  }
  out.mean_z /= n;
  out.predicted_var /= n;
  for (double z : zs) out.var_z += (z - out.mean_z) * (z - out.mean_z);
  out.var_z /= n - 1.0;
  return out;
}

bool AdmissibilityReport::passed() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.passed; });
}

const ConditionResult& AdmissibilityReport::condition(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return c;
  throw ValidationError("no admissibility condition named " + name);
}

AdmissibilityReport check_admissible(const ModelSpec& model, const AdmissibilityPlan& plan) {
  if (!(plan.x_lo < plan.x_hi) || plan.n_x < 2) throw ValidationError("check_admissible: bad x grid");
  AdmissibilityReport rep;
  std::vector<double> xs(plan.n_x);
  for (std::size_t i = 0; i < plan.n_x; ++i)
    xs[i] = plan.x_lo + (plan.x_hi - plan.x_lo) * static_cast<double>(i) / static_cast<double>(plan.n_x - 1);
  std::vector<double> zs;
  for (int k = 0; k <= 16; ++k) zs.push_back(std::pow(10.0, -0.5 * k));

  auto add = [&rep](std::string name, bool ok, std::string detail, double value = 0.0) {
    rep.conditions.push_back({std::move(name), ok, std::move(detail), value});
  };
  auto guarded = [&add](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const Error& e) {
      add(name, false, std::string("evaluation failed: ") + e.what());
    }
  };

  guarded("odd_symmetry", [&] {
    for (double x : xs) {
      for (double z : zs) {
        const double gp = model.jump(x, z), gm = model.jump(x, -z);
        if (std::fabs(gp + gm) > 1e-12 * std::max(1.0, std::fabs(gp))) {
          add("odd_symmetry", false,
              "G(x,-z) != -G(x,z) at x=" + format_double(x) + ", z=" + format_double(z));
          return;
        }
        if (gp < 0.0) {
          add("odd_symmetry", false, "sign(G) != sign(z) at x=" + format_double(x) + ", z=" + format_double(z));
          return;
        }
      }
    }
    add("odd_symmetry", true, "G odd in z with the sign of z on the sampled grid");
  });

  if (model.jump_zero()) {
    for (const char* name : {"stable_like_exponent", "log_lipschitz", "range_envelope", "growth_k0", "lipschitz_k1"})
      add(name, true, "jump coefficient vanishes identically");
  } else {
    std::vector<double> betas(xs.size(), 0.0);
    guarded("stable_like_exponent", [&] {
      auto slope = [&](double x, double z) {
        return std::log10(std::fabs(model.jump(x, z)) / std::fabs(model.jump(x, z / 10.0)));
      };
      bool ok = true;
      std::string detail = "log-slope matches 1/beta within 0.05 for |z| in [1e-8, 1e-2]";
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double s_fine = slope(xs[i], 1e-7);
        const double s_prev = slope(xs[i], 1e-6);
        const double target = model.jump_kind == JumpKind::Builtin ? 1.0 / model.beta_tilde.eval(xs[i]) : s_prev;
        betas[i] = 1.0 / s_fine;
        if (!std::isfinite(s_fine) || std::fabs(s_fine - target) > 0.05 || std::fabs(s_prev - target) > 0.05) {
          ok = false;
          detail = "log-slope " + format_double(s_fine) + " does not settle at x=" + format_double(xs[i]);
          break;
        }
      }
      rep.slope_at_x0 = slope(model.x0, 1e-7);
      add("stable_like_exponent", ok, detail, rep.slope_at_x0);
    });

    guarded("log_lipschitz", [&] {
      double c = 0.0;
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        for (double z : zs) {
          if (z >= 1.0) continue;
          const double a = std::log(std::fabs(model.jump(xs[i], z)));
          const double b = std::log(std::fabs(model.jump(xs[i + 1], z)));
          c = std::max(c, std::fabs(a - b) / (std::fabs(std::log(z)) * (xs[i + 1] - xs[i])));
        }
      }
      rep.lipschitz_c = c;
      add("log_lipschitz", std::isfinite(c), "C = " + format_double(c), c);
    });

    guarded("range_envelope", [&] {
      constexpr double kEps = 0.05;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double beta = model.jump_kind == JumpKind::Builtin ? model.beta_tilde.eval(xs[i]) : betas[i];
        if (!model.beta_band.contains(beta)) {
          add("range_envelope", false, "beta = " + format_double(beta) + " outside beta_band at x=" + format_double(xs[i]));
          return;
        }
        for (double z : zs) {
          if (z > 1e-4) continue;
          if (std::fabs(model.jump(xs[i], z)) > std::pow(z, 1.0 / (beta + kEps))) {
            add("range_envelope", false, "|G| exceeds |z|^(1/(beta+0.05)) at x=" + format_double(xs[i]));
            return;
          }
        }
      }
      add("range_envelope", true, "beta inside band; envelope holds for |z| <= 1e-4");
    });

    guarded("growth_k0", [&] {
      double k0 = 0.0;
      for (double x : xs) {
        const double v = integrate_levy(
            [&](double z) {
              const double a = model.jump(x, z), b = model.jump(x, -z);
              return a * a + b * b;
            },
            1.0, plan.quad_n);
        k0 = std::max(k0, v / (1.0 + x * x));
      }
      rep.k0 = k0;
      add("growth_k0", std::isfinite(k0), "K0 = " + format_double(k0), k0);
    });

    guarded("lipschitz_k1", [&] {
      double k1 = 0.0;
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double x = xs[i], y = xs[i + 1];
        const double v = integrate_levy(
            [&](double z) {
              const double a = model.jump(x, z) - model.jump(y, z);
              const double b = model.jump(x, -z) - model.jump(y, -z);
              return a * a + b * b;
            },
            1.0, plan.quad_n);
        k1 = std::max(k1, v / ((y - x) * (y - x)));
      }
      rep.k1 = k1;
      add("lipschitz_k1", std::isfinite(k1), "K1 = " + format_double(k1), k1);
    });
  }

  try {
    rep.compensator_symmetric = compensator_drift(model, model.x0, 1e-4, plan.quad_n).symmetric;
  } catch (const Error&) {
    rep.compensator_symmetric = false;
  }
  return rep;
}

}  // namespace jumpfrac
