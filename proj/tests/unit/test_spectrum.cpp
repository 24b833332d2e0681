#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "jumpfrac/error.hpp"
#include "jumpfrac/rng.hpp"
#include "jumpfrac/spectrum.hpp"

using namespace jumpfrac;

namespace {

PointContext jump_ctx(double beta_minus, double beta, bool lm_plus, bool lm_minus, double delta) {
  PointContext c;
  c.sigma_zero = true;
  c.is_jump_time = true;
  c.beta_t_minus = beta_minus;
  c.beta_t = beta;
  c.lm_plus = lm_plus;
  c.lm_minus = lm_minus;
  c.delta_t = delta;
  return c;
}

}  // namespace

TEST_CASE("f_cont") {
  CHECK(f_cont(CValue::One, 1.5, 0.4) == doctest::Approx(0.6));
  CHECK(f_cont(CValue::One, 1.5, 2.0 / 3.0) == 1.0);
  CHECK(f_cont(CValue::Zero, 1.5, 2.0 / 3.0) == 0.0);
  CHECK(f_cont(CValue::NegInf, 1.5, 2.0 / 3.0) == kNegInf);
  CHECK(f_cont(CValue::One, 1.5, 0.8) == kNegInf);
  CHECK(f_cont(CValue::Zero, 1.5, 0.8) == kNegInf);
  CHECK_THROWS_AS(f_cont(CValue::One, 2.5, 0.1), ValidationError);
  CHECK_THROWS_AS(f_cont(CValue::One, 1.5, -0.1), ValidationError);
}

TEST_CASE("f_jump") {
  CHECK(f_jump(CValue::One, CValue::One, 1.8, 1.2, 0.3) == doctest::Approx(0.54));
  CHECK(f_jump(CValue::One, CValue::One, 1.8, 1.2, 0.7) == doctest::Approx(0.84));
  CHECK(f_jump(CValue::HTimesGamma2, CValue::NegInf, 1.8, 1.2, 1 / 1.8) == doctest::Approx(2.0 / 3.0));
  CHECK(f_jump(CValue::One, CValue::Zero, 1.8, 1.2, 1 / 1.2) == 0.0);
  CHECK(f_jump(CValue::One, CValue::Zero, 1.8, 1.2, 0.9) == kNegInf);
  CHECK_THROWS_AS(f_jump(CValue::One, CValue::One, 1.2, 1.8, 0.3), ValidationError);
  CHECK_THROWS_AS(f_jump(CValue::One, CValue::One, 1.2, 1.2, 0.3), ValidationError);
}

TEST_CASE("linear branches are positively homogeneous") {
  for (double h : {0.05, 0.1, 0.2}) {
    CHECK(f_cont(CValue::One, 1.5, 2 * h) == doctest::Approx(2 * f_cont(CValue::One, 1.5, h)));
    CHECK(f_jump(CValue::One, CValue::One, 1.8, 1.2, 2 * h) == doctest::Approx(2 * f_jump(CValue::One, CValue::One, 1.8, 1.2, h)));
  }
}

TEST_CASE("f_jump approaches f_cont as gamma1 approaches gamma2") {
  for (double h : {0.1, 0.3, 0.5, 0.8}) {
    const double eps = 1e-9;
    CHECK(f_jump(CValue::One, CValue::One, 1.2 + eps, 1.2, h) == doctest::Approx(f_cont(CValue::One, 1.2, h)).epsilon(1e-6));
  }
  CHECK(f_jump(CValue::One, CValue::One, 1.2 + 1e-9, 1.2, 1.0) == kNegInf);
}

TEST_CASE("pointwise spectrum with diffusion") {
  PointContext c;
  c.beta_t = c.beta_t_minus = 1.2;
  CHECK(pointwise_spectrum(c, 0.3) == doctest::Approx(0.36));
  CHECK(pointwise_spectrum(c, 0.5) == 1.0);
  CHECK(pointwise_spectrum(c, 0.6) == kNegInf);
  c.is_jump_time = true;
  c.beta_t_minus = 1.6;
  CHECK(pointwise_spectrum(c, 0.25) == doctest::Approx(0.4));  // max of the one-sided indices
  CHECK(resolve_case(c).label == "diffusion");
}

TEST_CASE("pointwise spectrum hand examples without diffusion") {
  CHECK(pointwise_spectrum(jump_ctx(1.8, 1.2, false, false, 1.0), 0.7) == doctest::Approx(0.84));
  // LM on the minus side with a decreasing index: -inf at 1/beta_m.
  CHECK(pointwise_spectrum(jump_ctx(1.8, 1.2, false, true, 1.0), 1 / 1.2) == kNegInf);
  CHECK_THROWS_AS(pointwise_spectrum([] {
    PointContext c;
    c.sigma_zero = true;
    c.beta_t = 1.2;
    c.beta_t_minus = 1.3;
    return c;
  }(), 0.1), ValidationError);
}

TEST_CASE("continuity cases") {
  PointContext c;
  c.sigma_zero = true;
  c.beta_t = c.beta_t_minus = 1.25;
  const double bp = 1 / 1.25;
  CHECK(pointwise_spectrum(c, bp) == 1.0);
  c.lm_plus = true;
  CHECK(pointwise_spectrum(c, bp) == 1.0);  // one side only is not a strict local minimum
  c.lm_minus = true;
  c.delta_t = 1.0;
  CHECK(pointwise_spectrum(c, bp) == 0.0);
  c.delta_t = 1.04;
  CHECK(pointwise_spectrum(c, bp) == 0.0);
  c.delta_t = 1.5;
  CHECK(pointwise_spectrum(c, bp) == kNegInf);
  CHECK(pointwise_spectrum(c, 0.4) == doctest::Approx(0.5));
  CHECK(pointwise_spectrum(c, 0.9) == kNegInf);
}

// Every combination of the jump-time tables, resolved by hand:
// c1 = h*beta_m when t is in LM(beta^{t+}), 1 otherwise;
// c2 = 1 outside LM(beta^{t-}); 0 when in LM(beta^{t-}) with a positive
// index jump and delta_t = 1; -inf otherwise.
TEST_CASE("jump-time case table") {
  struct Row {
    bool plus, minus;
    int sign;
    bool delta_one;
    double c1_at_b1;  // value at h = 1/beta_M with beta_M = 1.8, beta_m = 1.2
    double c2_at_b2;
  };
  const double sym = 1.2 / 1.8;
  const Row rows[] = {
      {false, false, +1, true, 1, 1},           {false, false, +1, false, 1, 1},
      {false, false, -1, true, 1, 1},           {false, false, -1, false, 1, 1},
      {false, true, +1, true, 1, 0},            {false, true, +1, false, 1, kNegInf},
      {false, true, -1, true, 1, kNegInf},      {false, true, -1, false, 1, kNegInf},
      {true, false, +1, true, sym, 1},          {true, false, +1, false, sym, 1},
      {true, false, -1, true, sym, 1},          {true, false, -1, false, sym, 1},
      {true, true, +1, true, sym, 0},           {true, true, +1, false, sym, kNegInf},
      {true, true, -1, true, sym, kNegInf},     {true, true, -1, false, sym, kNegInf},
  };
  for (const auto& r : rows) {
    CAPTURE(r.plus);
    CAPTURE(r.minus);
    CAPTURE(r.sign);
    CAPTURE(r.delta_one);
    const double bm = r.sign > 0 ? 1.2 : 1.8, b = r.sign > 0 ? 1.8 : 1.2;
    const auto ctx = jump_ctx(bm, b, r.plus, r.minus, r.delta_one ? 1.0 : 1.7);
    const auto sc = resolve_case(ctx);
    CHECK(sc.kind == SpectrumCase::Kind::Jump);
    CHECK(sc.gamma1 == 1.8);
    CHECK(sc.gamma2 == 1.2);
    CHECK(pointwise_spectrum(ctx, 1 / 1.8) == doctest::Approx(r.c1_at_b1));
    CHECK(pointwise_spectrum(ctx, 1 / 1.2) == r.c2_at_b2);
    CHECK(pointwise_spectrum(ctx, 0.3) == doctest::Approx(0.54));
    CHECK(pointwise_spectrum(ctx, 0.7) == doctest::Approx(0.84));
    CHECK(pointwise_spectrum(ctx, 0.9) == kNegInf);
  }
}

TEST_CASE("jump with equal one-sided indices falls back to the continuity formula") {
  auto ctx = jump_ctx(1.3, 1.3, true, true, 1.0);
  const auto sc = resolve_case(ctx);
  CHECK(sc.kind == SpectrumCase::Kind::Cont);
  CHECK(sc.label.rfind("jump-flat-index:", 0) == 0);
  CHECK(pointwise_spectrum(ctx, 1 / 1.3) == 0.0);
}

TEST_CASE("pointwise spectrum never exceeds 1 and vanishes past 1/beta_m") {
  CounterRng rng(derive_seed(1, "spectrum", 0));
  for (int k = 0; k < 2000; ++k) {
    const double a = 0.05 + 1.9 * rng.uniform(), b = 0.05 + 1.9 * rng.uniform();
    const bool jump = rng.uniform() < 0.5;
    PointContext c = jump_ctx(jump ? a : b, b, rng.uniform() < 0.5, rng.uniform() < 0.5, 1 + rng.uniform());
    c.is_jump_time = jump;
    const double h = 3.0 * rng.uniform();
    const double v = pointwise_spectrum(c, h);
    CHECK(v <= 1.0);
    if (h > 1.0 / std::min(c.beta_t, c.beta_t_minus) * (1 + 1e-9)) CHECK(v == kNegInf);
  }
}

TEST_CASE("Levy reduction on a 1000-point grid") {
  PointContext c;
  c.beta_t = c.beta_t_minus = 1.2;
  for (int i = 0; i < 1000; ++i) {
    const double h = 1.2 * i / 999.0;
    const double expected = h < 0.5 ? 1.2 * h : (h == 0.5 ? 1.0 : kNegInf);
    CHECK(pointwise_spectrum(c, h) == expected);
  }
}

TEST_CASE("local spectrum") {
  IntervalContext d;
  d.betas = {1.0, 1.6, 1.3};
  CHECK(local_spectrum(d, 0.25).d == doctest::Approx(0.4));
  CHECK(local_spectrum(d, 0.5).d == 1.0);
  CHECK(local_spectrum(d, 0.6).d == kNegInf);

  IntervalContext p;
  p.sigma_zero = true;
  for (int i = 0; i <= 800; ++i) p.betas.push_back(1.0 + 0.8 * i / 800.0);
  CHECK(local_spectrum(p, 0.625).d == doctest::Approx(1.0));
  CHECK(local_spectrum(p, 0.4).d == doctest::Approx(0.72));
  CHECK(local_spectrum(p, 1.0).flag == SpectrumFlag::Undefined);
  CHECK(local_spectrum(p, 1.1).d == kNegInf);
  CHECK(local_spectrum(p, 1.1).flag == SpectrumFlag::Ok);
  p.jump_betas = {1.25};
  CHECK(local_spectrum(p, 0.8).flag == SpectrumFlag::Undefined);
  CHECK(local_spectrum(p, 0.8 + 1e-6).flag == SpectrumFlag::Ok);
  CHECK_THROWS_AS(local_spectrum(IntervalContext{}, 0.3), ValidationError);
}

TEST_CASE("lm_detect") {
  const double t = 0.5, du = 1.0 / 4096;
  std::vector<double> u;
  for (int i = -40; i <= 40; ++i)
    if (i != 0) u.push_back(t + i * du);
  std::vector<double> flat(u.size(), 1.3), vee;
  for (double s : u) vee.push_back(0.9 + std::fabs(s - t));
  CHECK_FALSE(lm_detect(u, flat, t, 1.3, 1.3, Side::Plus).lm);
  CHECK_FALSE(lm_detect(u, flat, t, 1.3, 1.3, Side::Minus).lm);
  CHECK(lm_detect(u, vee, t, 0.9, 0.9, Side::Plus).lm);
  CHECK(lm_detect(u, vee, t, 0.9, 0.9, Side::Minus).lm);

  // Jump with beta(t-) = 1.8, beta(t) = 1.2 and right samples 1.2 + |u - t|.
  // The plus map takes the larger limit 1.8 at t; the left samples tend to
  // 1.8 from below, so t is not a strict minimum there.
  std::vector<double> jb;
  for (double s : u) jb.push_back(s > t ? 1.2 + std::fabs(s - t) : 1.8 - std::fabs(s - t));
  CHECK_FALSE(lm_detect(u, jb, t, 1.2, 1.8, Side::Plus).lm);
  CHECK(lm_detect(u, jb, t, 1.2, 1.8, Side::Minus).lm);

  const auto few = lm_detect({0.49, 0.51}, {1.0, 1.0}, t, 0.9, 0.9, Side::Plus);
  CHECK_FALSE(few.lm);
  CHECK(few.insufficient);
}

TEST_CASE("sup consistency on randomized contexts") {
  CounterRng rng(derive_seed(2, "sup", 0));
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const bool sigma_zero = rng.uniform() < 0.7;
    std::vector<PointContext> pts(16);
    for (auto& c : pts) {
      c.sigma_zero = sigma_zero;
      c.beta_t = 0.2 + 1.7 * rng.uniform();
      c.is_jump_time = rng.uniform() < 0.2;
      c.beta_t_minus = c.is_jump_time ? 0.2 + 1.7 * rng.uniform() : c.beta_t;
    }
    const double h = 2.5 * rng.uniform();
    std::size_t idx = 0;
    const auto res = sup_consistency({0, 1}, h, pts.size(), [&](double) { return pts[idx++]; });
    if (res.local_flag != SpectrumFlag::Ok) continue;
    bool near_break = false;
    for (const auto& c : pts)
      for (double b : {c.beta_t, c.beta_t_minus}) near_break |= std::fabs(h - 1 / b) < 1e-9;
    if (near_break) continue;
    ++compared;
    if (res.local_value == kNegInf) CHECK(res.sup_of_pointwise == kNegInf);
    else CHECK(res.sup_of_pointwise == doctest::Approx(res.local_value).epsilon(1e-9));
  }
  CHECK(compared > 900);
}

TEST_CASE("sup consistency hand examples") {
  auto provider = [](bool sigma_zero) {
    return [sigma_zero](double t) {
      PointContext c;
      c.sigma_zero = sigma_zero;
      c.beta_t = c.beta_t_minus = 1.0 + 0.5 * t;
      return c;
    };
  };
  auto a = sup_consistency({0, 1}, 0.3, 100, provider(false));
  CHECK(a.local_value == doctest::Approx(0.3 * 1.4975));
  CHECK(a.sup_of_pointwise == doctest::Approx(a.local_value));
  auto b = sup_consistency({0, 1}, 0.5, 100, provider(false));
  CHECK(b.local_value == 1.0);
  CHECK(b.sup_of_pointwise == 1.0);
  auto c = sup_consistency({0, 1}, 1.2, 100, provider(true));
  CHECK(c.local_value == kNegInf);
  CHECK(c.sup_of_pointwise == kNegInf);
}

TEST_CASE("empirical spectrum on a planted system") {
  // One big mark: cells near it get a large rate, the rest rate 1.
  PointSystem ps;
  ps.horizon = 1.0;
  ps.events = {{0.3, 0.5}};
  const auto curve = empirical_spectrum(ps, {0.0}, {1.25}, {0, 1}, {{0.75, 0.85}, {0.95, 1.05}}, {10, true});
  REQUIRE(curve.samples.size() == 2);
  CHECK(curve.samples[0].flag == SpectrumFlag::Ok);
  CHECK(curve.samples[0].d == doctest::Approx(1.0));
  CHECK(curve.samples[1].flag == SpectrumFlag::Empty);
  CHECK(curve.samples[1].d == kNegInf);
  CHECK_THROWS_AS(empirical_spectrum(ps, {0.0}, {1.25}, {0, 1}, {{0.9, 0.8}}, {10, true}), ValidationError);
}

TEST_CASE("empirical spectrum matches theory on a simulated system") {
  const auto ps = sample_points(1.0, 1e-5, derive_seed(3, "points", 0));
  const auto curve = empirical_spectrum(ps, {0.0}, {1.25}, {0, 1}, {{0.35, 0.45}, {0.75, 0.85}, {0.95, 1.05}}, {14, true});
  CHECK(curve.samples[0].d == doctest::Approx(0.5).epsilon(0.3));
  CHECK(curve.samples[1].d == doctest::Approx(1.0).epsilon(0.1));
  CHECK(curve.samples[2].flag == SpectrumFlag::Empty);
}

TEST_CASE("spectrum CSV and JSON") {
  PointContext c;
  c.beta_t = c.beta_t_minus = 1.2;
  const auto curve = theory_curve(c, {0.0, 0.5, 1.0});
  std::stringstream csv;
  write_spectrum_csv(curve, csv);
  CHECK(csv.str() == "h,d,flag\n0,0,ok\n0.5,1,ok\n1,-inf,ok\n");
  std::stringstream js;
  write_spectrum_json(curve, {{"seed", "7"}}, js);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["mode"] == "theory");
  CHECK(j["provenance"]["seed"] == "7");
  CHECK(j["samples"][2]["d"] == "-inf");
  CHECK(j["samples"][0]["case"] == "diffusion");
}
