#include "jumpfrac/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "jumpfrac/error.hpp"
#include "jumpfrac/format.hpp"

namespace jumpfrac {

namespace {

constexpr double kBreakTol = 1e-12;

bool near(double h, double breakpoint) {
  return std::fabs(h - breakpoint) <= kBreakTol * std::max(1.0, std::fabs(breakpoint));
}

double resolve_c(CValue c, double h, double gamma2) {
  switch (c) {
    case CValue::One: return 1.0;
    case CValue::Zero: return 0.0;
    case CValue::NegInf: return kNegInf;
    case CValue::HTimesGamma2: return h * gamma2;
  }
  return kNegInf;
}

void check_gamma(double g, const char* what) {
  if (!(g > 0.0 && g < 2.0)) throw ValidationError(std::string(what) + " must lie in (0, 2)");
}

void check_h(double h) {
  if (!(h >= 0.0) || !std::isfinite(h)) throw ValidationError("h must be finite and >= 0");
}

double diffusion_value(double gamma, double h) {
  if (near(h, 0.5)) return 1.0;
  return h < 0.5 ? gamma * h : kNegInf;
}

}  // namespace

std::string to_string(CValue c) {
  switch (c) {
    case CValue::One: return "1";
    case CValue::Zero: return "0";
    case CValue::NegInf: return "-inf";
    case CValue::HTimesGamma2: return "h*gamma2";
  }
  return "?";
}

std::string to_string(SpectrumFlag f) {
  switch (f) {
    case SpectrumFlag::Ok: return "ok";
    case SpectrumFlag::Undefined: return "undefined";
    case SpectrumFlag::Empty: return "empty";
  }
  return "?";
}

double f_cont(CValue c, double gamma, double h) {
  check_gamma(gamma, "gamma");
  check_h(h);
  if (c == CValue::HTimesGamma2) throw ValidationError("f_cont: symbolic endpoint not allowed");
  const double bp = 1.0 / gamma;
  if (near(h, bp)) return resolve_c(c, h, gamma);
  return h < bp ? gamma * h : kNegInf;
}

double f_jump(CValue c1, CValue c2, double gamma1, double gamma2, double h) {
  check_gamma(gamma1, "gamma1");
  check_gamma(gamma2, "gamma2");
  check_h(h);
  if (!(gamma1 > gamma2)) throw ValidationError("f_jump: need gamma1 > gamma2");
  const double b1 = 1.0 / gamma1, b2 = 1.0 / gamma2;
  if (near(h, b1)) return resolve_c(c1, h, gamma2);
  if (h < b1) return gamma1 * h;
  if (near(h, b2)) return resolve_c(c2, h, gamma2);
  if (h < b2) return gamma2 * h;
  return kNegInf;
}

double SpectrumCase::evaluate(double h) const {
  switch (kind) {
    case Kind::Diffusion:
      check_h(h);
      return diffusion_value(gamma, h);
    case Kind::Cont: return f_cont(c, gamma, h);
    case Kind::Jump: return f_jump(c1, c2, gamma1, gamma2, h);
  }
  return kNegInf;
}

SpectrumCase resolve_case(const PointContext& ctx) {
  check_gamma(ctx.beta_t, "beta_t");
  check_gamma(ctx.beta_t_minus, "beta_t_minus");
  if (!(ctx.delta_t >= 1.0)) throw ValidationError("delta_t must be >= 1");
  if (!ctx.is_jump_time && ctx.beta_t != ctx.beta_t_minus)
    throw ValidationError("inconsistent context: beta_t_minus differs from beta_t at a continuity time");

  SpectrumCase sc;
  if (!ctx.sigma_zero) {
    sc.kind = SpectrumCase::Kind::Diffusion;
    sc.gamma = std::max(ctx.beta_t, ctx.beta_t_minus);
    sc.label = "diffusion";
    return sc;
  }
  const bool delta_one = std::fabs(ctx.delta_t - 1.0) <= ctx.delta_one_tol;
  const double dbeta = ctx.beta_t - ctx.beta_t_minus;
  if (!ctx.is_jump_time || dbeta == 0.0) {
    const bool lm = ctx.lm_plus && ctx.lm_minus;
    sc.kind = SpectrumCase::Kind::Cont;
    sc.gamma = ctx.beta_t;
    const std::string prefix = ctx.is_jump_time ? "jump-flat-index:" : "continuity:";
    if (!lm) {
      sc.c = CValue::One;
      sc.label = prefix + "no-local-min";
    } else if (delta_one) {
      sc.c = CValue::Zero;
      sc.label = prefix + "local-min,delta=1";
    } else {
      sc.c = CValue::NegInf;
      sc.label = prefix + "local-min,delta>1";
    }
    return sc;
  }
  sc.kind = SpectrumCase::Kind::Jump;
  sc.gamma1 = std::max(ctx.beta_t, ctx.beta_t_minus);
  sc.gamma2 = std::min(ctx.beta_t, ctx.beta_t_minus);
  sc.c1 = ctx.lm_plus ? CValue::HTimesGamma2 : CValue::One;
  std::string minus_label;
  if (!ctx.lm_minus) {
    sc.c2 = CValue::One;
    minus_label = "minus=no";
  } else if (dbeta > 0.0 && delta_one) {
    sc.c2 = CValue::Zero;
    minus_label = "minus=lm,dbeta>0,delta=1";
  } else {
    sc.c2 = CValue::NegInf;
    minus_label = dbeta < 0.0 ? "minus=lm,dbeta<0" : "minus=lm,delta>1";
  }
  sc.label = std::string("jump:plus=") + (ctx.lm_plus ? "lm" : "no") + "," + minus_label;
  return sc;
}

double pointwise_spectrum(const PointContext& ctx, double h) { return resolve_case(ctx).evaluate(h); }

SpectrumValue local_spectrum(const IntervalContext& ctx, double h) {
  if (ctx.betas.empty()) throw ValidationError("local_spectrum: no beta samples");
  check_h(h);
  for (double b : ctx.betas) check_gamma(b, "beta");
  SpectrumValue out;
  if (!ctx.sigma_zero) {
    out.d = diffusion_value(*std::max_element(ctx.betas.begin(), ctx.betas.end()), h);
    return out;
  }
  const double inf_beta = *std::min_element(ctx.betas.begin(), ctx.betas.end());
  const double bp = 1.0 / inf_beta;
  if (near(h, bp)) {
    out.flag = SpectrumFlag::Undefined;
    return out;
  }
  if (h > bp) return out;
  for (double b : ctx.jump_betas) {
    if (std::fabs(h - 1.0 / b) <= 1e-9) {
      out.flag = SpectrumFlag::Undefined;
      return out;
    }
  }
  const double cap = 1.0 / h;
  double sup = kNegInf;
  for (double b : ctx.betas)
    if (b <= cap * (1.0 + kBreakTol)) sup = std::max(sup, b);
  if (sup == kNegInf) {
    out.flag = SpectrumFlag::Empty;
    return out;
  }
  out.d = h * sup;
  return out;
}

LmResult lm_detect(const std::vector<double>& u, const std::vector<double>& beta, double t, double beta_t,
                   double beta_t_minus, Side side, std::size_t window, double tol) {
  if (u.size() != beta.size()) throw ValidationError("lm_detect: sample arrays differ in length");
  if (window == 0) throw ValidationError("lm_detect: window must be positive");
  const bool jump = std::fabs(beta_t - beta_t_minus) > tol;
  bool right;
  double at_t;
  if (!jump) {
    right = side == Side::Plus;
    at_t = beta_t;
  } else {
    const bool high_right = beta_t > beta_t_minus;
    right = side == Side::Plus ? high_right : !high_right;
    at_t = side == Side::Plus ? std::max(beta_t, beta_t_minus) : std::min(beta_t, beta_t_minus);
  }
  std::vector<double> vals;
  if (right) {
    for (std::size_t i = 0; i < u.size() && vals.size() < window; ++i)
      if (u[i] > t) vals.push_back(beta[i]);
  } else {
    for (std::size_t i = u.size(); i-- > 0 && vals.size() < window;)
      if (u[i] < t) vals.push_back(beta[i]);
  }
  LmResult out;
  if (vals.size() < window) {
    out.insufficient = true;
    return out;
  }
  out.lm = std::all_of(vals.begin(), vals.end(), [&](double b) { return b > at_t + tol; });
  return out;
}

SpectrumCurve theory_curve(const PointContext& ctx, const std::vector<double>& hs) {
  const SpectrumCase sc = resolve_case(ctx);
  SpectrumCurve curve;
  curve.mode = SpectrumCurve::Mode::Theory;
  for (double h : hs) curve.samples.push_back({h, sc.evaluate(h), SpectrumFlag::Ok, sc.label});
  return curve;
}

SpectrumCurve local_theory_curve(const IntervalContext& ctx, const std::vector<double>& hs, Interval region) {
  SpectrumCurve curve;
  curve.mode = SpectrumCurve::Mode::Theory;
  curve.region = region;
  const std::string label = ctx.sigma_zero ? "local:pure-jump" : "local:diffusion";
  for (double h : hs) {
    const SpectrumValue v = local_spectrum(ctx, h);
    curve.samples.push_back({h, v.d, v.flag, label});
  }
  return curve;
}

SpectrumCurve empirical_spectrum(const PointSystem& ps, const std::vector<double>& beta_times,
                                 const std::vector<double>& betas, Interval region,
                                 const std::vector<std::pair<double, double>>& h_bins,
                                 const EmpiricalOptions& opt) {
  if (beta_times.empty() || beta_times.size() != betas.size())
    throw ValidationError("empirical_spectrum: bad beta samples");
  if (!(region.lo < region.hi)) throw ValidationError("empirical_spectrum: empty region");
  if (opt.j_max < 6) throw ValidationError("empirical_spectrum: j_max must be >= 6");
  for (std::size_t i = 0; i < h_bins.size(); ++i) {
    if (!(h_bins[i].first < h_bins[i].second)) throw ValidationError("empirical_spectrum: bin with lo >= hi");
    if (i > 0 && !(h_bins[i].first + h_bins[i].second > h_bins[i - 1].first + h_bins[i - 1].second))
      throw ValidationError("empirical_spectrum: bin centers must increase");
  }
  const MarkPyramid pyramid(ps, opt.j_max);
  auto beta_at = [&](double t) {
    auto it = std::upper_bound(beta_times.begin(), beta_times.end(), t);
    const std::size_t i = it == beta_times.begin() ? 0 : static_cast<std::size_t>(it - beta_times.begin()) - 1;
    return betas[i];
  };
  const int j_lo = opt.j_max - 4;
  std::vector<std::vector<double>> exps(5);
  for (int j = j_lo; j <= opt.j_max; ++j) {
    const std::size_t cells = std::size_t{1} << j;
    const double w = ps.horizon / static_cast<double>(cells);
    auto& out = exps[static_cast<std::size_t>(j - j_lo)];
    for (std::size_t c = 0; c < cells; ++c) {
      const double center = (static_cast<double>(c) + 0.5) * w;
      if (center < region.lo || center > region.hi) continue;
      double h = 1.0 / (pyramid.cell_rate(j, c, opt.delta_max) * beta_at(center));
      if (!opt.sigma_zero) h = std::min(h, 0.5);
      out.push_back(h);
    }
  }
  SpectrumCurve curve;
  curve.mode = SpectrumCurve::Mode::Empirical;
  curve.region = region;
  for (const auto& [lo, hi] : h_bins) {
    const double center = 0.5 * (lo + hi);
    SpectrumSample s{center, kNegInf, SpectrumFlag::Ok, "box-count"};
    const auto& finest = exps.back();
    if (std::none_of(finest.begin(), finest.end(), [&](double h) { return h >= lo && h <= hi; })) {
      s.flag = SpectrumFlag::Empty;
      curve.samples.push_back(s);
      continue;
    }
    std::vector<double> xs, ys;
    for (int j = j_lo; j <= opt.j_max; ++j) {
      const auto& e = exps[static_cast<std::size_t>(j - j_lo)];
      const auto n = std::count_if(e.begin(), e.end(), [&](double h) { return h <= center; });
      if (n == 0) continue;
      xs.push_back(static_cast<double>(j));
      ys.push_back(std::log2(static_cast<double>(n)));
    }
    if (xs.size() < 2) {
      s.flag = SpectrumFlag::Undefined;
    } else {
      s.d = std::clamp(fit_line(xs, ys).slope, 0.0, 1.0);
    }
    curve.samples.push_back(s);
  }
  return curve;
}

SupConsistency sup_consistency(Interval region, double h, std::size_t t_grid,
                               const std::function<PointContext(double)>& provider) {
  if (t_grid == 0 || !(region.lo < region.hi)) throw ValidationError("sup_consistency: bad grid");
  IntervalContext ictx;
  SupConsistency out;
  for (std::size_t i = 0; i < t_grid; ++i) {
    const double t = region.lo + (region.hi - region.lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(t_grid);
    const PointContext ctx = provider(t);
    if (i == 0) ictx.sigma_zero = ctx.sigma_zero;
    else if (ictx.sigma_zero != ctx.sigma_zero) throw ValidationError("sup_consistency: mixed diffusion flags");
    ictx.betas.push_back(ctx.beta_t);
    if (ctx.is_jump_time) {
      ictx.betas.push_back(ctx.beta_t_minus);
      ictx.jump_betas.push_back(ctx.beta_t);
      ictx.jump_betas.push_back(ctx.beta_t_minus);
    }
    out.sup_of_pointwise = std::max(out.sup_of_pointwise, pointwise_spectrum(ctx, h));
  }
  const SpectrumValue v = local_spectrum(ictx, h);
  out.local_value = v.d;
  out.local_flag = v.flag;
  return out;
}

void write_spectrum_csv(const SpectrumCurve& c, std::ostream& out) {
  out << "h,d,flag\n";
  for (const auto& s : c.samples) out << format_double(s.h) << ',' << format_double(s.d) << ',' << to_string(s.flag) << '\n';
}

void write_spectrum_json(const SpectrumCurve& c, const std::vector<std::pair<std::string, std::string>>& provenance,
                         std::ostream& out) {
  nlohmann::ordered_json j;
  j["mode"] = c.mode == SpectrumCurve::Mode::Theory ? "theory" : "empirical";
  j["region"] = {c.region.lo, c.region.hi};
  nlohmann::ordered_json prov = nlohmann::ordered_json::object();
  for (const auto& [k, v] : provenance) prov[k] = v;
  j["provenance"] = prov;
  nlohmann::ordered_json samples = nlohmann::ordered_json::array();
  for (const auto& s : c.samples) {
    nlohmann::ordered_json e;
    e["h"] = s.h;
    if (std::isfinite(s.d)) e["d"] = s.d;
    else e["d"] = format_double(s.d);
    e["flag"] = to_string(s.flag);
    e["case"] = s.label;
    samples.push_back(e);
  }
  j["samples"] = samples;
  out << j.dump(2) << '\n';
}

}  // namespace jumpfrac
