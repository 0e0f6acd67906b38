#ifndef NANOSCAT_SPECFUN_HPP
#define NANOSCAT_SPECFUN_HPP

#include <vector>

#include "nanoscat/common.hpp"

namespace nanoscat {

// Spherical Bessel functions of the first kind j_0..j_nmax and their
// derivatives at x >= 0. Computed by Miller's downward recurrence,
// normalized against j_0 = sin(x)/x.
void sph_bessel_j_array(int nmax, double x, std::vector<double>& j,
                        std::vector<double>& jd);

// Spherical Bessel y_n (Neumann) by upward recurrence; requires x > 0.
void sph_bessel_y_array(int nmax, double x, std::vector<double>& y,
                        std::vector<double>& yd);

double sph_bessel_j(int n, double x);

// h_n^(1)(x) = j_n(x) + i y_n(x); x > 0.
Complex sph_hankel1(int n, double x);
Complex sph_hankel1_derivative(int n, double x);

// Legendre polynomial P_n(t), |t| <= 1, three-term recurrence.
double legendre_p(int n, double t);
void legendre_p_array(int nmax, double t, std::vector<double>& p);

// Gauss-Legendre nodes/weights on [-1, 1] (Newton on P_n).
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

// All four families at a common argument, with the Wronskian residual
// max_n |x^2 (j_n y_n' - j_n' y_n) - 1| used as a self-check.
struct SphericalBesselTable {
  int order_max = 0;
  double argument = 0;
  std::vector<double> j, jd;
  std::vector<double> y, yd;

  Complex h1(int n) const { return {j[n], y[n]}; }
  Complex h1d(int n) const { return {jd[n], yd[n]}; }

  static SphericalBesselTable compute(int nmax, double x);
  double wronskian_residual() const;
};

}  // namespace nanoscat

#endif
