#include "jumpfrac/jumpfrac.h"

#include <cstring>
#include <fstream>
#include <string>

#include "jumpfrac/config.hpp"
#include "jumpfrac/error.hpp"
#include "jumpfrac/pathio.hpp"
#include "jumpfrac/regularity.hpp"
#include "jumpfrac/runner.hpp"
#include "jumpfrac/spectrum.hpp"
#include "jumpfrac/tangent.hpp"

struct jf_config {
  jumpfrac::RunConfig cfg;
};
struct jf_expr {
  jumpfrac::Expr e;
};
struct jf_points {
  jumpfrac::PointSystem ps;
};
struct jf_model {
  jumpfrac::ModelSpec m;
};
struct jf_path {
  jumpfrac::SamplePath p;
};

namespace {

thread_local std::string g_last_error;

jf_status fail(jf_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <typename Fn>
jf_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const jumpfrac::ParseError& e) {
    return fail(JF_ERR_PARSE, e.what());
  } catch (const jumpfrac::ValidationError& e) {
    return fail(JF_ERR_VALIDATION, e.what());
  } catch (const jumpfrac::NumericalError& e) {
    return fail(JF_ERR_NUMERICAL, e.what());
  } catch (const std::exception& e) {
    return fail(JF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(JF_ERR_INTERNAL, "unknown exception");
  }
}

#define JF_REQUIRE(cond, what) \
  if (!(cond)) return fail(JF_ERR_ARGUMENT, what)

void copy_out(const std::string& s, char* buf, std::size_t len) {
  if (buf == nullptr || len == 0) return;
  const std::size_t n = std::min(len - 1, s.size());
  std::memcpy(buf, s.data(), n);
  buf[n] = '\0';
}

std::optional<jumpfrac::Expr> parse_sigma(const char* sigma) {
  if (sigma == nullptr || std::strcmp(sigma, "ZERO") == 0) return std::nullopt;
  return jumpfrac::Expr::parse(sigma);
}

}  // namespace

extern "C" {

const char* jf_last_error(void) { return g_last_error.c_str(); }

uint64_t jf_derive_seed(uint64_t master, const char* label, uint64_t index) {
  return jumpfrac::derive_seed(master, label ? label : "", index);
}

jf_status jf_config_default(jf_config** out) {
  JF_REQUIRE(out, "out is null");
  return guarded([&] {
    *out = new jf_config{};
    return JF_OK;
  });
}

jf_status jf_config_load(const char* path, jf_config** out) {
  JF_REQUIRE(path && out, "null argument");
  return guarded([&] {
    auto cfg = jumpfrac::load_config(path);
    *out = new jf_config{std::move(cfg)};
    return JF_OK;
  });
}

jf_status jf_config_parse(const char* text, jf_config** out) {
  JF_REQUIRE(text && out, "null argument");
  return guarded([&] {
    auto cfg = jumpfrac::parse_config(text);
    *out = new jf_config{std::move(cfg)};
    return JF_OK;
  });
}

jf_status jf_config_set_seed(jf_config* cfg, uint64_t seed) {
  JF_REQUIRE(cfg, "config is null");
  cfg->cfg.master_seed = seed;
  g_last_error.clear();
  return JF_OK;
}

jf_status jf_config_set_output_dir(jf_config* cfg, const char* dir) {
  JF_REQUIRE(cfg && dir, "null argument");
  JF_REQUIRE(*dir, "output directory is empty");
  cfg->cfg.output_dir = dir;
  g_last_error.clear();
  return JF_OK;
}

jf_status jf_config_set_option(jf_config* cfg, const char* dotted_key, const char* value) {
  JF_REQUIRE(cfg && dotted_key && value, "null argument");
  return guarded([&] {
    jumpfrac::RunConfig copy = cfg->cfg;
    jumpfrac::set_config_option(copy, dotted_key, value);
    cfg->cfg = std::move(copy);
    return JF_OK;
  });
}

jf_status jf_config_serialize(const jf_config* cfg, char* buf, size_t len, size_t* needed) {
  JF_REQUIRE(cfg, "config is null");
  return guarded([&] {
    const std::string s = jumpfrac::serialize_config(cfg->cfg);
    if (needed) *needed = s.size() + 1;
    copy_out(s, buf, len);
    return JF_OK;
  });
}

void jf_config_free(jf_config* cfg) { delete cfg; }

jf_status jf_run_subcommand(const jf_config* cfg, const char* name, unsigned threads, int* exit_code,
                            char* summary, size_t len) {
  JF_REQUIRE(cfg && name && exit_code, "null argument");
  return guarded([&] {
    const auto res = jumpfrac::run_subcommand(name, cfg->cfg, jumpfrac::Parallelism{threads});
    *exit_code = res.exit_code;
    copy_out(res.summary, summary, len);
    if (res.exit_code != 0) g_last_error = res.summary;
    return JF_OK;
  });
}

jf_status jf_expr_parse(const char* text, int allow_z, jf_expr** out) {
  JF_REQUIRE(text && out, "null argument");
  return guarded([&] {
    *out = new jf_expr{jumpfrac::Expr::parse(text, allow_z != 0)};
    return JF_OK;
  });
}

jf_status jf_expr_eval(const jf_expr* e, double x, double z, double* out) {
  JF_REQUIRE(e && out, "null argument");
  return guarded([&] {
    *out = e->e.eval(x, z);
    return JF_OK;
  });
}

void jf_expr_free(jf_expr* e) { delete e; }

jf_status jf_points_sample(double horizon, double z_min, uint64_t seed, jf_points** out) {
  JF_REQUIRE(out, "out is null");
  return guarded([&] {
    *out = new jf_points{jumpfrac::sample_points(horizon, z_min, seed)};
    return JF_OK;
  });
}

size_t jf_points_count(const jf_points* ps) { return ps ? ps->ps.events.size() : 0; }

jf_status jf_points_get(const jf_points* ps, size_t i, double* t, double* z) {
  JF_REQUIRE(ps && t && z, "null argument");
  JF_REQUIRE(i < ps->ps.events.size(), "event index out of range");
  *t = ps->ps.events[i].t;
  *z = ps->ps.events[i].z;
  g_last_error.clear();
  return JF_OK;
}

jf_status jf_points_write_csv(const jf_points* ps, const char* path) {
  JF_REQUIRE(ps && path, "null argument");
  return guarded([&] {
    std::ofstream os(path);
    if (!os) return fail(JF_ERR_IO, std::string("cannot write ") + path);
    jumpfrac::write_points_csv(ps->ps, os);
    return os ? JF_OK : fail(JF_ERR_IO, std::string("write failed: ") + path);
  });
}

jf_status jf_points_approx_rate(const jf_points* ps, double t, double delta_max, double* out) {
  JF_REQUIRE(ps && out, "null argument");
  return guarded([&] {
    *out = jumpfrac::approx_rate(ps->ps, t, delta_max).delta_hat;
    return JF_OK;
  });
}

void jf_points_free(jf_points* ps) { delete ps; }

jf_status jf_model_create_builtin(const char* sigma, const char* b, const char* beta_tilde, double x0,
                                  jf_model** out) {
  JF_REQUIRE(beta_tilde && out, "null argument");
  return guarded([&] {
    jumpfrac::ModelSpec m;
    m.sigma = parse_sigma(sigma);
    if (b) m.b = jumpfrac::Expr::parse(b);
    m.jump_kind = jumpfrac::JumpKind::Builtin;
    m.beta_tilde = jumpfrac::Expr::parse(beta_tilde);
    m.x0 = x0;
    m.validate();
    *out = new jf_model{std::move(m)};
    return JF_OK;
  });
}

jf_status jf_model_create_custom(const char* sigma, const char* b, const char* g, double x0, jf_model** out) {
  JF_REQUIRE(g && out, "null argument");
  return guarded([&] {
    jumpfrac::ModelSpec m;
    m.sigma = parse_sigma(sigma);
    if (b) m.b = jumpfrac::Expr::parse(b);
    m.jump_kind = jumpfrac::JumpKind::Custom;
    m.g = jumpfrac::Expr::parse(g, true);
    m.x0 = x0;
    m.validate();
    *out = new jf_model{std::move(m)};
    return JF_OK;
  });
}

void jf_model_free(jf_model* m) { delete m; }

jf_status jf_path_simulate(const jf_model* m, const jf_points* ps, double dt, uint64_t brownian_seed,
                           jf_path** out) {
  JF_REQUIRE(m && ps && out, "null argument");
  return guarded([&] {
    jumpfrac::SimulationConfig sim;
    sim.dt = dt;
    sim.z_min = ps->ps.z_min;
    sim.horizon = ps->ps.horizon;
    sim.seed = brownian_seed;
    *out = new jf_path{jumpfrac::simulate_path(m->m, ps->ps, sim)};
    return JF_OK;
  });
}

size_t jf_path_size(const jf_path* p) { return p ? p->p.size() : 0; }

jf_status jf_path_get(const jf_path* p, size_t i, double* t, double* value, double* left_value, int* is_jump) {
  JF_REQUIRE(p, "path is null");
  JF_REQUIRE(i < p->p.size(), "node index out of range");
  if (t) *t = p->p.grid[i];
  if (value) *value = p->p.values[i];
  if (left_value) *left_value = p->p.left_values[i];
  if (is_jump) *is_jump = p->p.is_jump[i];
  g_last_error.clear();
  return JF_OK;
}

jf_status jf_path_write_csv(const jf_path* p, const char* path) {
  JF_REQUIRE(p && path, "null argument");
  return guarded([&] {
    std::ofstream os(path);
    if (!os) return fail(JF_ERR_IO, std::string("cannot write ") + path);
    jumpfrac::write_path_csv(p->p, os);
    return os ? JF_OK : fail(JF_ERR_IO, std::string("write failed: ") + path);
  });
}

void jf_path_free(jf_path* p) { delete p; }

jf_status jf_theoretical_exponent(double beta_t, double delta_t, int sigma_zero, double* out) {
  JF_REQUIRE(out, "out is null");
  return guarded([&] {
    *out = jumpfrac::theoretical_exponent(beta_t, delta_t, sigma_zero != 0);
    return JF_OK;
  });
}

jf_status jf_pointwise_spectrum(int sigma_zero, double beta_t, double beta_t_minus, double delta_t,
                                int is_jump_time, int lm_plus, int lm_minus, double h, double* out) {
  JF_REQUIRE(out, "out is null");
  return guarded([&] {
    jumpfrac::PointContext ctx;
    ctx.sigma_zero = sigma_zero != 0;
    ctx.beta_t = beta_t;
    ctx.beta_t_minus = beta_t_minus;
    ctx.delta_t = delta_t;
    ctx.is_jump_time = is_jump_time != 0;
    ctx.lm_plus = lm_plus != 0;
    ctx.lm_minus = lm_minus != 0;
    *out = jumpfrac::pointwise_spectrum(ctx, h);
    return JF_OK;
  });
}

jf_status jf_ks_two_sample(const double* a, size_t na, const double* b, size_t nb, double* statistic,
                           double* p_value) {
  JF_REQUIRE(a && b && statistic && p_value, "null argument");
  return guarded([&] {
    const auto r = jumpfrac::ks_two_sample(std::vector<double>(a, a + na), std::vector<double>(b, b + nb));
    *statistic = r.statistic;
    *p_value = r.p_value;
    return JF_OK;
  });
}

}  // extern "C"
