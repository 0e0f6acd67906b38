#ifndef NANOSCAT_BACKGROUND_HPP
#define NANOSCAT_BACKGROUND_HPP

#include <vector>

#include "nanoscat/fields.hpp"
#include "nanoscat/scenario.hpp"

namespace nanoscat {

// Far-field normalization between the exp(i k |x|)/|x| convention and the
// volume/layer potential formulas; pinned against the Mie monopole limit.
inline constexpr double far_field_constant = 1.0 / (4.0 * pi);
// (G)^inf(xhat, z) * c_mr = U^t(z, -xhat); fixed on the homogeneous case.
inline constexpr double mixed_reciprocity_constant = 4.0 * pi;

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
  // crude contraction estimate from the first iterations, reported when
  // the iteration fails (contrast too strong at this frequency)
  double spectral_radius_estimate = 0.0;
};

struct GreensEval {
  Vec3 source;
  std::vector<Vec3> points;
  std::vector<Complex> values;      // G(x_j, z)
  std::vector<CVec3> grad_eval;     // gradient in the evaluation point x
  std::vector<CVec3> grad_source;   // gradient in the source point z
};

struct LsOptions {
  double tolerance = 1e-8;
  int restart = 30;
  int max_iterations = 600;
};

// Volume-integral solver for the background total field U^t(.,d), its far
// field and the Green's function G^{kappa0}(.,z) over a voxel grid:
//   U = u^I + omega^2 mu0 Int (eps0(y)-eps0_ext) Phi^{k_ext}(.,y) U(y) dy
// Midpoint voxel quadrature; singular self-voxel by the equivalent-ball
// closed form R^2/2, R = (3 h^3 / 4 pi)^{1/3}. Restarted GMRES on the
// contrast support.
class BackgroundSolver {
 public:
  BackgroundSolver(const Medium& medium, const GridSpec& grid,
                   LsOptions options = {});

  const GridSpec& grid() const { return grid_; }
  const Medium& medium() const { return medium_; }
  bool homogeneous() const { return support_.empty(); }

  FieldGrid solve_total_field(const Vec3& d) const;
  // One Born iterate u^I + A u^I (test oracle for weak contrast).
  FieldGrid born_total_field(const Vec3& d) const;

  // U^inf(xhat, d) from a solved grid; c_ff * w^2 mu0 Int q e^{-ik xhat.y} U.
  Complex far_field(const FieldGrid& U, const Vec3& xhat) const;

  // Evaluate U at an arbitrary point through the representation.
  Complex evaluate(const FieldGrid& U, const Vec3& d, const Vec3& x) const;

  // Gradient of U on the grid by analytic differentiation of the kernel
  // (plane-wave part analytic as well).
  VecFieldGrid gradient_field(const FieldGrid& U, const Vec3& d) const;

  GreensEval greens(const Vec3& z, const std::vector<Vec3>& pts) const;
  Complex greens_far_field(const Vec3& z, const Vec3& xhat) const;

  // | c_mr (G)^inf(xhat,z) - U^t(z,-xhat) | / |U^t(z,-xhat)|
  double mixed_reciprocity_deviation(const Vec3& z, const Vec3& xhat) const;

  // Relative residual of the LS equation on the support.
  double ls_residual(const FieldGrid& U, const Vec3& d) const;

  const SolveStats& last_stats() const { return stats_; }

 private:
  std::vector<Complex> solve_with_rhs(const std::vector<Complex>& rhs) const;
  void apply(const std::vector<Complex>& x, std::vector<Complex>& y) const;
  std::vector<Complex> potential_of(const std::vector<Complex>& su) const;
  Complex kernel_volume(const Vec3& x, const Vec3& y) const;

  Medium medium_;
  GridSpec grid_;
  LsOptions options_;
  double k_ext_ = 0.0;
  double coef_ = 0.0;  // omega^2 mu0
  std::vector<std::size_t> support_;       // flat indices with q != 0
  std::vector<std::array<int, 3>> sijk_;   // their (i,j,k)
  std::vector<double> q_;                  // contrast on support
  std::vector<Complex> table_;             // volume-weighted kernel by offset
  double self_term_ = 0.0;                 // R^2/2
  mutable SolveStats stats_;
};

// eps_ext + amp * (exp(-|x-c|^2/sigma^2) - exp(-R^2/sigma^2))_+ sampled on
// the grid: a smooth bump with compact support radius R.
ScalarField make_gaussian_bump(const GridSpec& grid, double eps_exterior,
                               double amplitude, double sigma,
                               const Vec3& center, double support_radius);

}  // namespace nanoscat

#endif
