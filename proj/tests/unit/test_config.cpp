#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <unordered_set>

#include "jumpfrac/config.hpp"
#include "jumpfrac/error.hpp"
#include "jumpfrac/rng.hpp"

using namespace jumpfrac;

namespace {

std::string error_of(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const RunConfig c = parse_config("[model]\nbeta_tilde = \"1.2\"\n");
  CHECK(c.model.beta_tilde.constant_value() == std::optional<double>(1.2));
  CHECK(c.model.sigma_zero());
  CHECK(c.sim.dt == 1.0 / 4096);
  CHECK(c.sim.z_min == 1e-4);
  CHECK(c.sim.horizon == 1.0);
  CHECK(c.holder.j_lo == 6);
  CHECK(c.holder.j_hi == 11);
  CHECK(c.holder.h_cap == 1.5);
  CHECK(c.output_dir == "out");
}

TEST_CASE("full config with comments and every section") {
  const char* text = R"(# jump diffusion run
[model]
sigma = 0.5*cos(x)      # diffusion coefficient
b = 0.1
jump = builtin
beta_tilde = clamp(1+0.5*sin(x), 0.6, 1.8)
beta_band_lo = 0.5
beta_band_hi = 1.9
x0 = 0.25

[sim]
dt = 0.00048828125
z_min = 1e-5
horizon = 1
quad_n = 32

[run]
seed = 12345
output_dir = results

[spectrum]
mode = empirical
n_h = 13

[tangent]
alpha = 0.1, 0.01
[band-stats]
m = 6, 7
)";
  const RunConfig c = parse_config(text);
  CHECK(c.model.sigma.has_value());
  CHECK(c.model.sigma_at(0.0) == 0.5);
  CHECK(c.model.x0 == 0.25);
  CHECK(c.model.beta_band == Interval{0.5, 1.9});
  CHECK(c.sim.dt == 1.0 / 2048);
  CHECK(c.sim.quad_n == 32);
  CHECK(c.master_seed == 12345);
  CHECK(c.output_dir == "results");
  CHECK(c.spectrum.mode == "empirical");
  CHECK(c.tangent.alpha == std::vector<double>{0.1, 0.01});
  CHECK(c.band.m == std::vector<double>{6, 7});
}

TEST_CASE("custom jump coefficient") {
  const RunConfig c = parse_config("[model]\njump = custom\ng = sign(z)*pow(abs(z), 0.8)\n");
  CHECK(c.model.jump_kind == JumpKind::Custom);
  CHECK(c.model.g.uses_z());
}

TEST_CASE("validation errors name the key") {
  const auto e = error_of("[model]\nbeta_tilde = 2.5\n");
  CHECK(contains(e, "beta_band"));
  const auto d = error_of("[model]\nb = 1\nb = 2\n");
  CHECK(contains(d, "duplicate"));
  CHECK(contains(d, "model.b"));
  const auto u = error_of("[model]\nbeta = 1\n");
  CHECK(contains(u, "model.beta"));
  CHECK(contains(error_of("[sim]\ndt = -1\n"), "dt"));
  CHECK(contains(error_of("[sim]\nquad_n = many\n"), "sim.quad_n"));
  CHECK(contains(error_of("[holder]\nj_lo = 9\nj_hi = 8\n"), "holder.j_lo"));
  CHECK_THROWS_AS(parse_config("[model]\nbeta_tilde = 2.5\n"), ValidationError);
}

TEST_CASE("syntax errors carry the line number") {
  auto line_of = [](const std::string& text) {
    try {
      (void)parse_config(text);
    } catch (const ParseError& e) {
      return e.position();
    }
    return -1;
  };
  CHECK(line_of("[model]\nb = 1\n[nosuch]\n") == 3);
  CHECK(line_of("# c\n\n[model]\nb 1\n") == 4);
  CHECK(line_of("b = 1\n") == 1);
  CHECK(line_of("[model\n") == 1);
  CHECK(line_of("[model]\n\nb = 1 +\n") == 3);
}

TEST_CASE("serialize round-trips") {
  const RunConfig a = parse_config(
      "[model]\nsigma = 0.3\nbeta_tilde = clamp(1+0.5*sin(x),0.6,1.8)\n[sim]\nz_min = 0.001\n[run]\nseed = 99\n"
      "[tangent]\nalpha = 0.1, 0.03\n");
  const std::string text = serialize_config(a);
  const RunConfig b = parse_config(text);
  CHECK(a == b);
  CHECK(serialize_config(b) == text);
  CHECK(parse_config(serialize_config(RunConfig{})) == RunConfig{});
}

TEST_CASE("round trip under random option settings") {
  CounterRng rng(derive_seed(1, "config", 0));
  for (int k = 0; k < 200; ++k) {
    RunConfig c;
    set_config_option(c, "sim.z_min", std::to_string(1e-5 + 0.01 * rng.uniform()));
    set_config_option(c, "run.seed", std::to_string(rng.next_u64()));
    set_config_option(c, "model.x0", std::to_string(rng.normal()));
    set_config_option(c, "holder.n_times", std::to_string(1 + rng.next_u64() % 100));
    set_config_option(c, "spectrum.bin_width", std::to_string(0.01 + rng.uniform()));
    CHECK(parse_config(serialize_config(c)) == c);
  }
}

TEST_CASE("set_config_option") {
  RunConfig c;
  set_config_option(c, "model.beta_tilde", "1.25");
  CHECK(c.model.beta_tilde.constant_value() == std::optional<double>(1.25));
  CHECK_THROWS_AS(set_config_option(c, "model.beta_tilde", "2.5"), ValidationError);
  CHECK(c.model.beta_tilde.constant_value() == std::optional<double>(1.25));  // unchanged on failure
  CHECK_THROWS_AS(set_config_option(c, "nosuch", "1"), ValidationError);
  CHECK_THROWS_AS(set_config_option(c, "model.nosuch", "1"), ValidationError);
  set_config_option(c, "model.sigma", "ZERO");
  CHECK(c.model.sigma_zero());
}

TEST_CASE("load_config from a file") {
  const std::string path = "jumpfrac_test_config.ini";
  {
    std::ofstream out(path);
    out << "[model]\nbeta_tilde = 1.2\n";
  }
  CHECK(load_config(path).model.beta_tilde.constant_value() == std::optional<double>(1.2));
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config("definitely/missing.ini"), ValidationError);
}

TEST_CASE("derive_seed") {
  CHECK(derive_seed(7, "paths", 3) == derive_seed(7, "paths", 3));
  static_assert(derive_seed(1, "a", 0) != derive_seed(1, "b", 0));
  // Collision scan over 10^6 sampled masters.
  CounterRng rng(12345);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(3'000'000);
  std::size_t pair_collisions = 0;
  for (int i = 0; i < 1'000'000; ++i) {
    const std::uint64_t m = rng.next_u64();
    const auto p0 = derive_seed(m, "paths", 0), p1 = derive_seed(m, "paths", 1), q0 = derive_seed(m, "points", 0);
    if (p0 == p1 || p0 == q0) ++pair_collisions;
    seen.insert(p0);
    seen.insert(p1);
    seen.insert(q0);
  }
  CHECK(pair_collisions == 0);
  CHECK(seen.size() == 3'000'000);
}
