#pragma once

#include <functional>

namespace jumpfrac {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (7/15) on [a, b], starting from `panels` equal
/// panels. Throws NumericalError when the tolerance cannot be met.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     int panels = 8, double abs_tol = 1e-13, double rel_tol = 1e-11);

/// Integral of phi(z) dz / z^2 over lo < z < hi (0 < lo < hi) through the
/// substitution z = e^u.
double integrate_levy_window(const std::function<double(double)>& phi, double lo, double hi,
                             int panels = 64);

/// Integral of phi(z) dz / z^2 over 0 < z < hi. The region below 1e-12 is
/// closed analytically from the local power law of phi; a power law no
/// steeper than z^1 raises NumericalError (divergence).
double integrate_levy(const std::function<double(double)>& phi, double hi = 1.0, int panels = 64);

/// Local exponent p of phi ~ C z^p at z, from phi(z) and phi(z / 10).
double local_power(const std::function<double(double)>& phi, double z);

}  // namespace jumpfrac
