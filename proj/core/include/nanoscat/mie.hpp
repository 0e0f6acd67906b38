#ifndef NANOSCAT_MIE_HPP
#define NANOSCAT_MIE_HPP

#include <vector>

#include "nanoscat/scenario.hpp"

namespace nanoscat {

// Exact series solution of the penetrable-sphere transmission problem:
// homogeneous background, D = delta*B + z with B the unit ball, plane
// incident wave exp(i kappa0 x.d). Exterior scattered coefficients
// multiply h_n^(1)(kappa0 r) P_n(cos theta), interior ones j_n(kappa1 r);
// both absorb the modal amplitude i^n (2n+1) exp(i kappa0 z.d).
struct MieCoefficients {
  int n_max = 0;
  std::vector<Complex> scat;
  std::vector<Complex> interior;
  double radius = 0;  // physical sphere radius delta
  double kappa0 = 0, kappa1 = 0;
  double mu0 = 1, mu1 = 1;
  Vec3 center{0, 0, 0};
  Vec3 direction{0, 0, 1};

  // Worst relative residual of the per-mode 2x2 transmission system.
  double max_mode_residual() const;
};

MieCoefficients solve_mie(const ParticleSpec& spec, const Medium& medium,
                          const Vec3& incident_direction);

// Far-field pattern in the exp(i kappa0 |x|)/|x| convention (about the
// coordinate origin, not the sphere center).
Complex mie_far_field(const MieCoefficients& c, const Vec3& xhat);

// Scattered field at an exterior point (|x - z| >= radius).
Complex mie_scattered_field(const MieCoefficients& c, const Vec3& x);
// Total field = incident plane wave + scattered.
Complex mie_total_field(const MieCoefficients& c, const Vec3& x);
// Interior series (|x - z| <= radius).
Complex mie_interior_field(const MieCoefficients& c, const Vec3& x);

// lim_{delta -> 0} u_inf(-d, d) / delta^3 at fixed eps1, by Richardson
// extrapolation of a small-delta ladder started at spec.delta. Requires
// mu1 = mu0 (vanishing dipole term). This is the normalization oracle
// that pins the far-field constant.
Complex mie_monopole_limit(const ParticleSpec& spec, const Medium& medium,
                           const Vec3& incident_direction = Vec3(0, 0, 1));

}  // namespace nanoscat

#endif
