#include "nanoscat/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "nanoscat/surface.hpp"

namespace nanoscat {

double Medium::kappa0_exterior() const {
  return omega * std::sqrt(eps0_exterior * mu0);
}

double Medium::eps0_at(const Vec3& x) const {
  if (!eps0_field) return eps0_exterior;
  const auto& f = *eps0_field;
  const auto& g = f.spec;
  int idx[3];
  for (int a = 0; a < 3; ++a) {
    int i = int(std::lround((x[a] - g.origin[a]) / g.spacing));
    idx[a] = std::clamp(i, 0, g.dims[a] - 1);
  }
  return f.at(idx[0], idx[1], idx[2]);
}

double Medium::kappa0_at(const Vec3& x) const {
  return omega * std::sqrt(eps0_at(x) * mu0);
}

void Medium::validate() const {
  if (mu0 <= 0) throw ConfigError("medium: mu0 must be > 0");
  if (eps0_exterior <= 0) throw ConfigError("medium: eps0_exterior must be > 0");
  if (omega <= 0) throw ConfigError("medium: omega must be > 0");
  if (eps0_field) {
    const auto& f = *eps0_field;
    f.spec.validate();
    for (double v : f.values)
      if (!(v > 0)) throw ConfigError("medium: eps0_field values must be > 0");
    // compact contrast support: boundary layer equals the exterior constant
    const auto& g = f.spec;
    for (int i = 0; i < g.dims[0]; ++i)
      for (int j = 0; j < g.dims[1]; ++j)
        for (int k = 0; k < g.dims[2]; ++k) {
          bool bdry = i == 0 || j == 0 || k == 0 || i == g.dims[0] - 1 ||
                      j == g.dims[1] - 1 || k == g.dims[2] - 1;
          if (bdry && std::abs(f.at(i, j, k) - eps0_exterior) >
                          1e-12 * eps0_exterior)
            throw ConfigError(
                "medium: eps0_field must equal eps0_exterior on the grid "
                "boundary layer");
        }
  }
}

ReferenceBody ReferenceBody::unit_ball() {
  ReferenceBody b;
  b.kind = BodyKind::UnitBall;
  b.volume = 4.0 * pi / 3.0;
  return b;
}

ReferenceBody ReferenceBody::triangulated(
    std::shared_ptr<const SurfaceMesh> mesh) {
  if (!mesh) throw ConfigError("reference body: null mesh");
  ReferenceBody b;
  b.kind = BodyKind::TriangulatedSurface;
  b.mesh = std::move(mesh);
  b.volume = b.mesh->enclosed_volume();
  if (b.volume <= 0)
    throw ConfigError("reference body: mesh encloses non-positive volume");
  return b;
}

void ParticleSpec::validate() const {
  if (!(delta > 0) || !(delta < 1))
    throw ConfigError("particle: delta must lie in (0,1)");
  if (eps1 <= 0) throw ConfigError("particle: eps1 must be > 0");
  if (mu1 <= 0) throw ConfigError("particle: mu1 must be > 0");
  if (body.volume <= 0) throw ConfigError("particle: body volume must be > 0");
}

const char* to_string(ParticleKind k) {
  switch (k) {
    case ParticleKind::Electric: return "electric";
    case ParticleKind::Magnetic: return "magnetic";
    default: return "moderate";
  }
}

ParticleClass classify_particle(const ParticleSpec& spec, const Medium& medium,
                                double ratio_threshold) {
  spec.validate();
  medium.validate();
  double re = spec.eps1 / medium.eps0_exterior;
  double rm = spec.mu1 / medium.mu0;
  bool eps_large = re > ratio_threshold;
  bool mu_large = rm > ratio_threshold;
  if (eps_large && mu_large)
    throw ConfigError(
        "classify_particle: both permittivity and permeability contrasts are "
        "large; the electric and magnetic regimes are handled separately");

  ParticleClass c;
  double log_inv_delta = std::log(1.0 / spec.delta);
  if (eps_large) {
    c.kind = ParticleKind::Electric;
    c.alpha = std::log(re) / log_inv_delta;
    c.beta = 0.0;
  } else if (mu_large) {
    c.kind = ParticleKind::Magnetic;
    c.alpha = std::log(rm) / log_inv_delta;
    c.beta = c.alpha;
  } else {
    c.kind = ParticleKind::Moderate;
    c.alpha = 0.0;
    c.beta = 0.0;
  }
  c.within_expansion_validity = c.alpha < 1.0;
  return c;
}

Wavenumbers wavenumbers(const Medium& medium, const ParticleSpec& spec) {
  medium.validate();
  spec.validate();
  Wavenumbers k;
  k.kappa0 = medium.kappa0_exterior();
  k.kappa1 = medium.omega * std::sqrt(spec.eps1 * spec.mu1);
  return k;
}

}  // namespace nanoscat
