#include "nanoscat/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nanoscat {

namespace {

// j_0, j_1 and their derivatives from the closed forms, with series
// fallbacks near x = 0 to avoid cancellation.
double j0_val(double x) {
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

double j1_val(double x) {
  if (std::abs(x) < 1e-3) {
    double x2 = x * x;
    return x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0));
  }
  return std::sin(x) / (x * x) - std::cos(x) / x;
}

}  // namespace

void sph_bessel_j_array(int nmax, double x, std::vector<double>& j,
                        std::vector<double>& jd) {
  if (nmax < 0) throw std::domain_error("sph_bessel_j_array: nmax < 0");
  if (x < 0) throw std::domain_error("sph_bessel_j_array: x < 0");
  j.assign(nmax + 1, 0.0);
  jd.assign(nmax + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;  // j_0(0) = 1, j_n(0) = 0 for n > 0
    if (nmax >= 1) jd[1] = 1.0 / 3.0;
    return;
  }
  if (nmax == 0) {
    j[0] = j0_val(x);
    jd[0] = -j1_val(x);
    return;
  }

  // Miller's algorithm: start the downward recurrence well above nmax,
  // then rescale so the tail matches j_0.
  int nstart = nmax + std::max(20, int(std::ceil(1.5 * x)));
  double fp = 0.0;       // j_{n+1} seed
  double fc = 1e-30;     // j_n seed (arbitrary scale)
  for (int n = nstart; n >= 1; --n) {
    double fm = (2.0 * n + 1.0) / x * fc - fp;
    fp = fc;
    fc = fm;
    if (n - 1 <= nmax) j[n - 1] = fc;
    if (std::abs(fc) > 1e250) {  // renormalize to dodge overflow
      double s = 1e-250;
      fc *= s;
      fp *= s;
      for (int m = n - 1; m <= nmax; ++m) j[m] *= s;
    }
  }
  double scale = j0_val(x) / j[0];
  for (auto& v : j) v *= scale;

  jd[0] = -j1_val(x);
  for (int n = 1; n <= nmax; ++n) jd[n] = j[n - 1] - (n + 1.0) / x * j[n];
}

void sph_bessel_y_array(int nmax, double x, std::vector<double>& y,
                        std::vector<double>& yd) {
  if (nmax < 0) throw std::domain_error("sph_bessel_y_array: nmax < 0");
  if (x <= 0) throw std::domain_error("sph_bessel_y_array: x <= 0");
  y.assign(nmax + 1, 0.0);
  yd.assign(nmax + 1, 0.0);
  y[0] = -std::cos(x) / x;
  if (nmax >= 1) y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int n = 1; n < nmax; ++n)
    y[n + 1] = (2.0 * n + 1.0) / x * y[n] - y[n - 1];
  yd[0] = std::sin(x) / x + std::cos(x) / (x * x);
  for (int n = 1; n <= nmax; ++n) yd[n] = y[n - 1] - (n + 1.0) / x * y[n];
}

double sph_bessel_j(int n, double x) {
  std::vector<double> j, jd;
  sph_bessel_j_array(n, x, j, jd);
  return j[n];
}

Complex sph_hankel1(int n, double x) {
  std::vector<double> j, jd, y, yd;
  sph_bessel_j_array(n, x, j, jd);
  sph_bessel_y_array(n, x, y, yd);
  return {j[n], y[n]};
}

Complex sph_hankel1_derivative(int n, double x) {
  std::vector<double> j, jd, y, yd;
  sph_bessel_j_array(n, x, j, jd);
  sph_bessel_y_array(n, x, y, yd);
  return {jd[n], yd[n]};
}

double legendre_p(int n, double t) {
  if (std::abs(t) > 1.0) throw std::domain_error("legendre_p: |t| > 1");
  if (n < 0) throw std::domain_error("legendre_p: n < 0");
  double pm = 1.0;
  if (n == 0) return pm;
  double pc = t;
  for (int m = 1; m < n; ++m) {
    double pn = ((2.0 * m + 1.0) * t * pc - m * pm) / (m + 1.0);
    pm = pc;
    pc = pn;
  }
  return pc;
}

void legendre_p_array(int nmax, double t, std::vector<double>& p) {
  if (std::abs(t) > 1.0) throw std::domain_error("legendre_p_array: |t| > 1");
  p.assign(nmax + 1, 0.0);
  p[0] = 1.0;
  if (nmax >= 1) p[1] = t;
  for (int n = 1; n < nmax; ++n)
    p[n + 1] = ((2.0 * n + 1.0) * t * p[n] - n * p[n - 1]) / (n + 1.0);
}

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw std::domain_error("gauss_legendre: n < 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev initial guess, Newton on P_n
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p = legendre_p(n, x);
      double pm = legendre_p(n - 1, x);
      dp = n * (pm - x * p) / (1.0 - x * x);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

SphericalBesselTable SphericalBesselTable::compute(int nmax, double x) {
  SphericalBesselTable t;
  t.order_max = nmax;
  t.argument = x;
  sph_bessel_j_array(nmax, x, t.j, t.jd);
  sph_bessel_y_array(nmax, x, t.y, t.yd);
  return t;
}

double SphericalBesselTable::wronskian_residual() const {
  // j_n y_n' - j_n' y_n = 1/x^2
  double x2 = argument * argument;
  double worst = 0.0;
  for (int n = 0; n <= order_max; ++n) {
    double w = j[n] * yd[n] - jd[n] * y[n];
    worst = std::max(worst, std::abs(w * x2 - 1.0));
  }
  return worst;
}

}  // namespace nanoscat
