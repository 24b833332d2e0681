#include "jumpfrac/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "jumpfrac/error.hpp"
#include "jumpfrac/format.hpp"
#include "jumpfrac/pathio.hpp"
#include "jumpfrac/regularity.hpp"
#include "jumpfrac/spectrum.hpp"
#include "jumpfrac/tangent.hpp"

namespace jumpfrac {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

/// Files staged under a temporary name and renamed on commit; anything not
/// committed is removed.
class ArtifactSet {
public:
  explicit ArtifactSet(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ValidationError("cannot create output directory '" + dir_.string() + "': " + ec.message());
  }
  ArtifactSet(const ArtifactSet&) = delete;
  ArtifactSet& operator=(const ArtifactSet&) = delete;
  ~ArtifactSet() {
    if (!committed_) rollback();
  }

  std::ofstream& open(const std::string& name) {
    const fs::path final_path = dir_ / name;
    const fs::path tmp = dir_ / (name + ".partial");
    streams_.push_back(std::make_unique<std::ofstream>(tmp, std::ios::binary | std::ios::trunc));
    if (!*streams_.back()) throw ValidationError("cannot write '" + tmp.string() + "'");
    staged_.emplace_back(tmp, final_path);
    return *streams_.back();
  }

  std::vector<std::string> commit() {
    for (auto& s : streams_) {
      s->flush();
      if (!*s) throw NumericalError("write failure while emitting artifacts");
      s->close();
    }
    std::vector<std::string> out;
    for (const auto& [tmp, final_path] : staged_) {
      fs::rename(tmp, final_path);
      out.push_back(final_path.string());
    }
    committed_ = true;
    return out;
  }

private:
  void rollback() noexcept {
    for (auto& s : streams_) s->close();
    for (const auto& [tmp, final_path] : staged_) {
      std::error_code ec;
      fs::remove(tmp, ec);
    }
  }

  fs::path dir_;
  std::vector<std::unique_ptr<std::ofstream>> streams_;
  std::vector<std::pair<fs::path, fs::path>> staged_;
  bool committed_ = false;
};

Json model_json(const RunConfig& cfg) {
  Json j;
  j["sigma"] = cfg.model.sigma ? cfg.model.sigma->to_string() : "ZERO";
  j["b"] = cfg.model.b.to_string();
  if (cfg.model.jump_kind == JumpKind::Builtin) j["beta_tilde"] = cfg.model.beta_tilde.to_string();
  else j["g"] = cfg.model.g.to_string();
  j["x0"] = cfg.model.x0;
  j["dt"] = cfg.sim.dt;
  j["z_min"] = cfg.sim.z_min;
  j["horizon"] = cfg.sim.horizon;
  j["seed"] = cfg.master_seed;
  return j;
}

struct PathRun {
  PointSystem ps;
  SamplePath path;
};

PathRun simulate_indexed(const RunConfig& cfg, std::size_t i) {
  PathRun r;
  SimulationConfig sim = cfg.sim;
  sim.seed = cfg.seed_for("brownian", i);
  r.ps = sample_points(sim.horizon, sim.z_min, cfg.seed_for("points", i));
  r.path = simulate_path(cfg.model, r.ps, sim);
  return r;
}

std::vector<double> h_grid(const SpectrumSection& s) {
  std::vector<double> hs(s.n_h);
  for (std::size_t i = 0; i < s.n_h; ++i)
    hs[i] = s.h_min + (s.h_max - s.h_min) * static_cast<double>(i) / static_cast<double>(s.n_h - 1);
  return hs;
}

std::string run_simulate(const RunConfig& cfg, Parallelism par, ArtifactSet& out) {
  const std::size_t n = cfg.simulate_paths;
  std::vector<PathRun> runs(n);
  parallel_for(n, par, [&](std::size_t i) { runs[i] = simulate_indexed(cfg, i); });
  const SamplePath& p = runs[0].path;
  write_path_csv(p, out.open("path.csv"));
  write_path_binary(p, out.open("path.jfp"));
  if (n > 1) {
    auto& os = out.open("ensemble.csv");
    os << "t,mean,var\n";
    const auto steps = static_cast<std::size_t>(std::ceil(cfg.sim.horizon / cfg.sim.dt - 1e-9));
    for (std::size_t k = 0; k <= steps; ++k) {
      const double t = std::min(cfg.sim.horizon, static_cast<double>(k) * cfg.sim.dt);
      double mean = 0.0;
      for (const auto& r : runs) mean += r.path.value_at(t);
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (const auto& r : runs) {
        const double d = r.path.value_at(t) - mean;
        var += d * d;
      }
      var /= static_cast<double>(n - 1);
      os << format_double(t) << ',' << format_double(mean) << ',' << format_double(var) << '\n';
    }
  }
  const auto jumps = std::count(p.is_jump.begin(), p.is_jump.end(), std::uint8_t{1});
  return "simulate: " + std::to_string(n) + " path(s), " + std::to_string(p.size()) + " nodes, " +
         std::to_string(jumps) + " jumps, M(T) = " + format_double(p.values.back());
}

std::string run_points(const RunConfig& cfg, ArtifactSet& out) {
  const PointSystem ps = sample_points(cfg.sim.horizon, cfg.sim.z_min, cfg.seed_for("points", 0));
  write_points_csv(ps, out.open("points.csv"));
  Json j;
  j["count"] = ps.events.size();
  j["expected_count"] = expected_event_count(ps.horizon, ps.z_min);
  j["covering_fraction_delta1"] = covering_fraction(ps, 1.0, 10000);
  j["config"] = model_json(cfg);
  out.open("points.json") << j.dump(2) << '\n';
  return "points: " + std::to_string(ps.events.size()) + " events (expected " +
         format_double(expected_event_count(ps.horizon, ps.z_min)) + ")";
}

std::string run_holder(const RunConfig& cfg, ArtifactSet& out) {
  const PathRun r = simulate_indexed(cfg, 0);
  const HolderOptions opt{cfg.holder.j_lo, cfg.holder.j_hi, cfg.holder.h_cap};
  auto& os = out.open("holder.csv");
  os << "t,h_hat,r2,h_theory,delta_hat,beta_t\n";
  double sum = 0.0;
  for (std::size_t i = 0; i < cfg.holder.n_times; ++i) {
    const double t = cfg.sim.horizon * (static_cast<double>(i) + 0.5) / static_cast<double>(cfg.holder.n_times);
    const HolderEstimate h = estimate_holder(r.path, t, opt);
    const double delta =
        approx_rate_regression(r.ps, t, cfg.holder.j_lo, cfg.holder.j_hi, cfg.holder.delta_max).delta_hat;
    const double beta = cfg.model.beta(r.path.value_at(t));
    const double theory = theoretical_exponent(beta, delta, cfg.model.sigma_zero());
    sum += std::fabs(h.h_hat - theory);
    os << format_double(t) << ',' << format_double(h.h_hat) << ',' << format_double(h.r2) << ','
       << format_double(theory) << ',' << format_double(delta) << ',' << format_double(beta) << '\n';
  }
  return "holder: " + std::to_string(cfg.holder.n_times) + " times, mean |h_hat - h_theory| = " +
         format_double(sum / static_cast<double>(cfg.holder.n_times));
}

PointContext context_at(const RunConfig& cfg, const PathRun& r, double t) {
  const SamplePath& p = r.path;
  const std::size_t idx = p.index_at(t);
  PointContext ctx;
  ctx.sigma_zero = cfg.model.sigma_zero();
  ctx.is_jump_time = p.grid[idx] == t && p.is_jump[idx];
  ctx.beta_t = cfg.model.beta(p.values[idx]);
  ctx.beta_t_minus = ctx.is_jump_time ? cfg.model.beta(p.left_values[idx]) : ctx.beta_t;
  ctx.delta_t = approx_rate_regression(r.ps, t, cfg.holder.j_lo, cfg.holder.j_hi, cfg.holder.delta_max).delta_hat;
  std::vector<double> u, b;
  u.reserve(p.size());
  b.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i == idx) continue;
    u.push_back(p.grid[i]);
    b.push_back(cfg.model.beta(p.values[i]));
  }
  ctx.lm_plus = lm_detect(u, b, t, ctx.beta_t, ctx.beta_t_minus, Side::Plus).lm;
  ctx.lm_minus = lm_detect(u, b, t, ctx.beta_t, ctx.beta_t_minus, Side::Minus).lm;
  return ctx;
}

std::string run_spectrum(const RunConfig& cfg, ArtifactSet& out) {
  const auto& sc = cfg.spectrum;
  const PathRun r = simulate_indexed(cfg, 0);
  const auto hs = h_grid(sc);
  SpectrumCurve curve;
  std::vector<std::pair<std::string, std::string>> prov{{"mode", sc.mode}, {"seed", std::to_string(cfg.master_seed)}};
  if (sc.mode == "theory" && sc.kind == "pointwise") {
    const PointContext ctx = context_at(cfg, r, sc.t);
    curve = theory_curve(ctx, hs);
    prov.emplace_back("kind", "pointwise");
    prov.emplace_back("t", format_double(sc.t));
    prov.emplace_back("case", resolve_case(ctx).label);
    prov.emplace_back("beta_t", format_double(ctx.beta_t));
    prov.emplace_back("beta_t_minus", format_double(ctx.beta_t_minus));
    prov.emplace_back("delta_t", format_double(ctx.delta_t));
  } else if (sc.mode == "theory") {
    IntervalContext ictx;
    ictx.sigma_zero = cfg.model.sigma_zero();
    const SamplePath& p = r.path;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p.grid[i] < sc.region_lo || p.grid[i] > sc.region_hi) continue;
      ictx.betas.push_back(cfg.model.beta(p.values[i]));
      if (p.is_jump[i]) {
        ictx.betas.push_back(cfg.model.beta(p.left_values[i]));
        ictx.jump_betas.push_back(cfg.model.beta(p.values[i]));
      }
    }
    curve = local_theory_curve(ictx, hs, {sc.region_lo, sc.region_hi});
    prov.emplace_back("kind", "local");
  } else {
    std::vector<double> bt, bv;
    for (std::size_t i = 0; i < r.path.size(); ++i) {
      bt.push_back(r.path.grid[i]);
      bv.push_back(cfg.model.beta(r.path.values[i]));
    }
    std::vector<std::pair<double, double>> bins;
    for (double h : hs) bins.emplace_back(h - 0.5 * sc.bin_width, h + 0.5 * sc.bin_width);
    EmpiricalOptions opt;
    opt.j_max = sc.j_max;
    opt.sigma_zero = cfg.model.sigma_zero();
    opt.delta_max = cfg.holder.delta_max;
    curve = empirical_spectrum(r.ps, bt, bv, {sc.region_lo, sc.region_hi}, bins, opt);
    prov.emplace_back("kind", "box-count");
    prov.emplace_back("j_max", std::to_string(sc.j_max));
    prov.emplace_back("bin_width", format_double(sc.bin_width));
  }
  prov.emplace_back("model", model_json(cfg).dump());
  write_spectrum_csv(curve, out.open("spectrum.csv"));
  write_spectrum_json(curve, prov, out.open("spectrum.json"));
  return "spectrum: " + sc.mode + ", " + std::to_string(curve.samples.size()) + " samples";
}

std::string run_tangent(const RunConfig& cfg, Parallelism par, ArtifactSet& out) {
  const auto& tc = cfg.tangent;
  const auto rows = tangent_test(cfg.model, tc.t0, tc.alpha, tc.n_paths, cfg.seed_for("tangent", 0), cfg.sim, par);
  auto& os = out.open("tangent.csv");
  os << "alpha,ks,p\n";
  Json j;
  j["t0"] = tc.t0;
  if (tc.t0 == 0.0) j["beta0"] = cfg.model.beta_tilde.eval(cfg.model.x0);
  j["n_paths"] = tc.n_paths;
  j["config"] = model_json(cfg);
  Json arr = Json::array();
  for (const auto& r : rows) {
    os << format_double(r.alpha) << ',' << format_double(r.ks) << ',' << format_double(r.p) << '\n';
    arr.push_back({{"alpha", r.alpha}, {"ks", r.ks}, {"p", r.p}});
  }
  j["rows"] = arr;
  out.open("tangent.json") << j.dump(2) << '\n';
  return "tangent: " + std::to_string(rows.size()) + " scales, smallest-alpha p = " + format_double(rows.back().p);
}

std::string run_band(const RunConfig& cfg, Parallelism par, ArtifactSet& out) {
  const auto& bc = cfg.band;
  auto& os = out.open("band_stats.csv");
  os << "m,frequency,threshold,mean_statistic,max_statistic\n";
  Json arr = Json::array();
  for (double mv : bc.m) {
    const int m = static_cast<int>(mv);
    const BandResult res = band_statistic(cfg.model, bc.delta, bc.eps, m, bc.n_paths, cfg.seed_for("band", 0), cfg.sim, par);
    double mean = 0.0, mx = 0.0;
    for (double s : res.statistics) {
      mean += s;
      mx = std::max(mx, s);
    }
    mean /= static_cast<double>(res.statistics.size());
    os << m << ',' << format_double(res.frequency) << ',' << format_double(res.threshold) << ','
       << format_double(mean) << ',' << format_double(mx) << '\n';
    arr.push_back({{"m", m}, {"frequency", res.frequency}, {"threshold", res.threshold}, {"mean_statistic", mean},
                   {"max_statistic", mx}});
  }
  Json j;
  j["delta"] = bc.delta;
  j["eps"] = bc.eps;
  j["n_paths"] = bc.n_paths;
  j["levels"] = arr;
  j["config"] = model_json(cfg);
  out.open("band_stats.json") << j.dump(2) << '\n';
  return "band-stats: " + std::to_string(bc.m.size()) + " levels";
}

std::string run_admissible(const RunConfig& cfg, ArtifactSet& out, int& exit_code) {
  AdmissibilityPlan plan;
  plan.x_lo = cfg.admissible.x_lo;
  plan.x_hi = cfg.admissible.x_hi;
  plan.n_x = cfg.admissible.n_x;
  plan.quad_n = cfg.sim.quad_n;
  const AdmissibilityReport rep = check_admissible(cfg.model, plan);
  Json j;
  j["passed"] = rep.passed();
  Json conds = Json::array();
  std::string failed;
  for (const auto& c : rep.conditions) {
    conds.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"value", c.value}});
    if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
  }
  j["conditions"] = conds;
  j["slope_at_x0"] = rep.slope_at_x0;
  j["lipschitz_c"] = rep.lipschitz_c;
  j["k0"] = rep.k0;
  j["k1"] = rep.k1;
  j["compensator_symmetric"] = rep.compensator_symmetric;
  j["config"] = model_json(cfg);
  out.open("admissibility.json") << j.dump(2) << '\n';
  if (!rep.passed()) {
    exit_code = 1;
    return "check-admissible: FAILED conditions: " + failed;
  }
  return "check-admissible: all conditions pass";
}

std::string run_generator(const RunConfig& cfg, Parallelism par, ArtifactSet& out) {
  const Expr f = Expr::parse(cfg.generator.f);
  const auto rows = generator_consistency(cfg.model, f, cfg.generator.t, cfg.generator.n_paths,
                                          cfg.seed_for("generator", 0), cfg.sim, par);
  auto& os = out.open("generator.csv");
  os << "t,mc_rate,generator_value\n";
  for (const auto& r : rows)
    os << format_double(r.t) << ',' << format_double(r.mc_rate) << ',' << format_double(r.generator_value) << '\n';
  return "generator-check: generator value " + format_double(rows.front().generator_value) + ", mc rate " +
         format_double(rows.front().mc_rate);
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"simulate", "points", "holder", "spectrum", "tangent",
                                              "band-stats", "check-admissible", "generator-check"};
  return names;
}

RunOutcome run_subcommand(const std::string& name, const RunConfig& cfg, Parallelism par) {
  RunOutcome res;
  try {
    const auto& names = subcommand_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
      throw ValidationError("unknown subcommand '" + name + "'");
    ArtifactSet out(cfg.output_dir);
    int code = 0;
    if (name == "simulate") res.summary = run_simulate(cfg, par, out);
    else if (name == "points") res.summary = run_points(cfg, out);
    else if (name == "holder") res.summary = run_holder(cfg, out);
    else if (name == "spectrum") res.summary = run_spectrum(cfg, out);
    else if (name == "tangent") res.summary = run_tangent(cfg, par, out);
    else if (name == "band-stats") res.summary = run_band(cfg, par, out);
    else if (name == "check-admissible") res.summary = run_admissible(cfg, out, code);
    else res.summary = run_generator(cfg, par, out);
    res.artifacts = out.commit();
    res.exit_code = code;
  } catch (const ValidationError& e) {
    res.exit_code = 1;
    res.summary = name + ": validation error: " + e.what();
    res.artifacts.clear();
  } catch (const NumericalError& e) {
    res.exit_code = 2;
    res.summary = name + ": numerical error: " + e.what();
    res.artifacts.clear();
  } catch (const std::exception& e) {
    res.exit_code = 2;
    res.summary = name + ": error: " + e.what();
    res.artifacts.clear();
  }
  return res;
}

}  // namespace jumpfrac
