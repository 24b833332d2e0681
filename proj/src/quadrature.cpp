#include "jumpfrac/quadrature.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "jumpfrac/error.hpp"

namespace jumpfrac {

namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
};

Panel kronrod(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = kKronrod[7] * fc;
  double g = kGauss[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kNodes[static_cast<std::size_t>(i)];
    const double s = f(c - dx) + f(c + dx);
    k += kKronrod[static_cast<std::size_t>(i)] * s;
    if (i % 2 == 1) g += kGauss[static_cast<std::size_t>(i / 2)] * s;
  }
  return {a, b, k * h, std::fabs((k - g) * h)};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, int panels,
                     double abs_tol, double rel_tol) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) throw ValidationError("integrate: bad interval");
  if (a == b) return {};
  panels = std::max(1, panels);
  std::vector<Panel> work;
  const double w = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + w * i;
    const double hi = i + 1 == panels ? b : a + w * (i + 1);
    work.push_back(kronrod(f, lo, hi));
  }
  QuadResult out;
  constexpr int kMaxPanels = 20000;
  std::vector<Panel> done;
  while (!work.empty()) {
    double total = 0.0;
    for (const auto& p : work) total += p.value;
    for (const auto& p : done) total += p.value;
    const double tol = std::max(abs_tol, rel_tol * std::fabs(total));
    std::vector<Panel> next;
    const double per_len = tol / (b - a);
    for (const auto& p : work) {
      if (p.error <= per_len * (p.b - p.a) || p.b - p.a < 1e-14 * (b - a)) {
        done.push_back(p);
      } else {
        const double m = 0.5 * (p.a + p.b);
        next.push_back(kronrod(f, p.a, m));
        next.push_back(kronrod(f, m, p.b));
      }
    }
    if (done.size() + next.size() > kMaxPanels) throw NumericalError("quadrature did not converge");
    work = std::move(next);
  }
  for (const auto& p : done) {
    out.value += p.value;
    out.error += p.error;
  }
  if (!std::isfinite(out.value)) throw NumericalError("quadrature produced a non-finite value");
  return out;
}

double integrate_levy_window(const std::function<double(double)>& phi, double lo, double hi,
                             int panels) {
  if (!(lo > 0.0 && lo <= hi)) throw ValidationError("integrate_levy_window: need 0 < lo <= hi");
  if (lo == hi) return 0.0;
  auto g = [&phi](double u) {
    const double z = std::exp(u);
    return phi(z) / z;
  };
  return integrate(g, std::log(lo), std::log(hi), panels).value;
}

double local_power(const std::function<double(double)>& phi, double z) {
  const double a = std::fabs(phi(z));
  const double b = std::fabs(phi(z / 10.0));
  if (a == 0.0 || b == 0.0) return HUGE_VAL;
  return std::log10(a / b);
}

double integrate_levy(const std::function<double(double)>& phi, double hi, int panels) {
  constexpr double kFloor = 1e-12;
  if (!(hi > kFloor)) throw ValidationError("integrate_levy: upper limit too small");
  const double p = local_power(phi, kFloor);
  if (p <= 1.0 + 1e-9) throw NumericalError("integral diverges at z -> 0 (local power <= 1)");
  double tail = 0.0;
  if (std::isfinite(p)) tail = phi(kFloor) / kFloor / (p - 1.0);
  return integrate_levy_window(phi, kFloor, hi, panels) + tail;
}

}  // namespace jumpfrac
