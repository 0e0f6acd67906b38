#ifndef NANOSCAT_SCENARIO_HPP
#define NANOSCAT_SCENARIO_HPP

#include <memory>
#include <optional>

#include "nanoscat/common.hpp"
#include "nanoscat/fields.hpp"

namespace nanoscat {

struct SurfaceMesh;

// Background medium. eps0_field, when present, is a permittivity map on a
// grid over the imaging domain; it must agree with eps0_exterior on the
// boundary layer of that grid (compactly supported contrast).
struct Medium {
  double mu0 = 1.0;
  double eps0_exterior = 1.0;
  double omega = 1.0;
  std::optional<ScalarField> eps0_field;

  bool homogeneous() const { return !eps0_field.has_value(); }
  double kappa0_exterior() const;
  // Local wavenumber at a point (nearest-voxel lookup for the field case).
  double kappa0_at(const Vec3& x) const;
  double eps0_at(const Vec3& x) const;

  void validate() const;
};

enum class BodyKind { UnitBall, TriangulatedSurface };

struct ReferenceBody {
  BodyKind kind = BodyKind::UnitBall;
  double volume = 4.0 * pi / 3.0;
  std::shared_ptr<const SurfaceMesh> mesh;  // TriangulatedSurface only

  static ReferenceBody unit_ball();
  static ReferenceBody triangulated(std::shared_ptr<const SurfaceMesh> mesh);
};

struct ParticleSpec {
  double delta = 1e-2;      // relative radius, 0 < delta << 1
  Vec3 center{0, 0, 0};     // injection point z
  double eps1 = 1.0;
  double mu1 = 1.0;
  ReferenceBody body = ReferenceBody::unit_ball();

  void validate() const;
};

enum class ParticleKind { Electric, Magnetic, Moderate };

// Contrast classification: electric when eps1/eps0 >> 1 with mu moderate,
// magnetic when mu1/mu0 >> 1 with eps moderate. alpha is the contrast
// exponent read off from delta: ratio ~ delta^-alpha.
struct ParticleClass {
  ParticleKind kind = ParticleKind::Moderate;
  double alpha = 0.0;
  double beta = 0.0;
  // alpha < 1 is required by the asymptotic expansions; runs outside that
  // range are accepted but flagged.
  bool within_expansion_validity = true;
};

const char* to_string(ParticleKind k);

ParticleClass classify_particle(const ParticleSpec& spec, const Medium& medium,
                                double ratio_threshold = 10.0);

struct Wavenumbers {
  double kappa0 = 0.0;  // exterior background value
  double kappa1 = 0.0;
};

Wavenumbers wavenumbers(const Medium& medium, const ParticleSpec& spec);

}  // namespace nanoscat

#endif
