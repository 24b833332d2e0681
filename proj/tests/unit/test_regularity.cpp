#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "jumpfrac/error.hpp"
#include "jumpfrac/regularity.hpp"
#include "jumpfrac/rng.hpp"

using namespace jumpfrac;

namespace {

SamplePath from_function(double (*f)(double), std::size_t n = 4096) {
  SamplePath p;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    p.grid.push_back(t);
    p.values.push_back(f(t));
    p.left_values.push_back(f(t));
    p.jump_marks.push_back(0.0);
    p.is_jump.push_back(0);
    p.x.push_back(0.0);
    p.y.push_back(f(t) - f(0));
    p.z.push_back(0.0);
  }
  p.x0 = f(0);
  return p;
}

SamplePath brownian(std::uint64_t seed) {
  ModelSpec m;
  m.sigma = Expr::parse("1");
  m.jump_kind = JumpKind::Custom;
  m.g = Expr::parse("0", true);
  SimulationConfig c;
  c.seed = seed;
  PointSystem empty;
  empty.z_min = c.z_min;
  return simulate_path(m, empty, c);
}

}  // namespace

TEST_CASE("affine path is flagged smooth") {
  const auto p = from_function([](double t) { return 0.7 * t; });
  const auto h = estimate_holder(p, 0.5);
  CHECK(h.smooth);
  CHECK(h.h_hat == 1.5);
  HolderOptions o;
  o.h_cap = 2.0;
  CHECK(estimate_holder(p, 0.5, o).h_hat == 2.0);
  const auto flat = from_function([](double) { return 3.0; });
  CHECK(estimate_holder(flat, 0.5).smooth);
}

TEST_CASE("a jump at t gives exponent 0") {
  auto p = from_function([](double t) { return t < 0.5 ? 0.0 : 1.0; });
  const std::size_t i = p.index_at(0.5);
  p.left_values[i] = 0.0;
  p.jump_marks[i] = 1.0;
  p.is_jump[i] = 1;
  const auto h = estimate_holder(p, 0.5);
  CHECK(h.at_jump);
  CHECK(h.h_hat == 0.0);
  // Just after the jump the window still straddles it: oscillation bounded below.
  CHECK(estimate_holder(p, 0.5 + 1.0 / 4096).h_hat < 0.05);
}

TEST_CASE("power-law cusp recovers its exponent") {
  const auto p = from_function([](double t) { return std::pow(std::fabs(t - 0.5), 0.3); });
  CHECK(estimate_holder(p, 0.5).h_hat == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("estimate_holder validation") {
  const auto p = from_function([](double t) { return t; });
  CHECK_THROWS_AS(estimate_holder(p, 1.5), ValidationError);
  CHECK_THROWS_AS(estimate_holder(p, 0.5, {8, 8, 1.5}), ValidationError);
}

TEST_CASE("shift equivariance and insensitivity to an affine part") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto p = brownian(derive_seed(1, "brownian", s));
    auto shifted = p, tilted = p;
    for (std::size_t i = 0; i < p.size(); ++i) {
      shifted.values[i] += 5.0;
      shifted.left_values[i] += 5.0;
      tilted.values[i] += 0.3 * p.grid[i];
      tilted.left_values[i] += 0.3 * p.grid[i];
    }
    for (double t : {0.25, 0.5, 0.75}) {
      const auto a = estimate_holder(p, t);
      CHECK(estimate_holder(shifted, t).h_hat == doctest::Approx(a.h_hat).epsilon(1e-9));
      if (a.h_hat < 1.0) CHECK(std::fabs(estimate_holder(tilted, t).h_hat - a.h_hat) <= 0.05);
    }
  }
}

TEST_CASE("Brownian exponent is near 1/2") {
  std::vector<double> hs;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto p = brownian(derive_seed(2, "brownian", s));
    for (int k = 1; k <= 20; ++k) hs.push_back(estimate_holder(p, k / 21.0).h_hat);
  }
  std::nth_element(hs.begin(), hs.begin() + static_cast<long>(hs.size() / 2), hs.end());
  CHECK(hs[hs.size() / 2] == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("theoretical_exponent") {
  CHECK(theoretical_exponent(1.5, 1.0, false) == 0.5);
  CHECK(theoretical_exponent(1.5, 2.0, false) == doctest::Approx(1.0 / 3.0));
  CHECK(theoretical_exponent(1.5, 1.0, true) == doctest::Approx(2.0 / 3.0));
  CounterRng rng(derive_seed(4, "theory", 0));
  for (int k = 0; k < 1000; ++k) {
    const double b = 0.01 + 1.98 * rng.uniform(), d = 1.0 + 10.0 * rng.uniform();
    const double h = theoretical_exponent(b, d, false);
    CHECK(h <= 0.5);
    if (1.0 / (d * b) <= 0.5) CHECK(h == 1.0 / (d * b));
    else CHECK(h == 0.5);
  }
}

TEST_CASE("beta_envelope") {
  std::vector<double> ts, bs;
  for (int i = 0; i <= 1000; ++i) {
    ts.push_back(i / 1000.0);
    bs.push_back(1.0 + 0.5 * std::sin(6.0 * i / 1000.0));
  }
  const auto e = beta_envelope(ts, bs, 0.4, 0.2, 8);
  double sup = 0.0, wide = 0.0, inf = 2.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] >= 0.2 && ts[i] <= 0.4) sup = std::max(sup, bs[i]);
    if (ts[i] >= 0.2 - 1.0 / 256 && ts[i] <= 0.4 + 1.0 / 256) wide = std::max(wide, bs[i]);
    if (ts[i] >= 0.2 && ts[i] <= 0.4) inf = std::min(inf, bs[i]);
  }
  CHECK(e.beta_bar == doctest::Approx(sup + 0.25));
  CHECK(e.beta_hat == doctest::Approx(wide + 0.25));
  CHECK(e.beta_hat >= e.beta_bar);
  CHECK(e.beta_bar >= inf + 0.25);
  // Enlarging the interval never decreases the envelope.
  CHECK(beta_envelope(ts, bs, 0.1, 0.4, 8).beta_bar >= e.beta_bar);
  // Widening is clipped to the path domain.
  CHECK_NOTHROW(beta_envelope(ts, bs, 0.0, 1.0, 8));
  CHECK_THROWS_AS(beta_envelope(ts, bs, 2.0, 3.0, 8), ValidationError);
}

TEST_CASE("band_statistic") {
  ModelSpec m;
  m.beta_tilde = Expr::parse("1.2");
  SimulationConfig c;
  c.z_min = 1e-4;
  const auto r = band_statistic(m, 2.0, 0.1, 6, 8, 5, c);
  CHECK(r.threshold == 6.0 * 36.0);
  CHECK(r.statistics.size() == 8);
  CHECK(r.frequency >= 0.0);
  CHECK(r.frequency <= 1.0);
  for (double s : r.statistics) CHECK(s >= 0.0);
  const auto again = band_statistic(m, 2.0, 0.1, 6, 8, 5, c, Parallelism{3});
  CHECK(again.statistics == r.statistics);
  CHECK_THROWS_AS(band_statistic(m, 1.0, 0.1, 6, 8, 5, c), ValidationError);
  CHECK_THROWS_AS(band_statistic(m, 2.0, 0.1, 4, 8, 5, c), ValidationError);
  c.z_min = 0.5;
  CHECK_THROWS_AS(band_statistic(m, 2.0, 0.1, 6, 8, 5, c), ValidationError);
}
