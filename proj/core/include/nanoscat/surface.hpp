#ifndef NANOSCAT_SURFACE_HPP
#define NANOSCAT_SURFACE_HPP

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nanoscat/common.hpp"

namespace nanoscat {

// Closed triangulated surface.
struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  double enclosed_volume() const;  // divergence theorem, signed
};

// Icosahedron subdivision with vertex projection onto the unit sphere;
// level k gives 20*4^k panels.
SurfaceMesh make_icosphere(int level);

SurfaceMesh load_off(const std::string& path);
SurfaceMesh load_off_stream(std::istream& is);
void save_off(const std::string& path, const SurfaceMesh& mesh);

// Per-panel centroid/outward-normal/area quadrature of a closed mesh.
struct PanelQuadrature {
  std::vector<Vec3> centroids;
  std::vector<Vec3> normals;
  std::vector<double> areas;

  int size() const { return int(areas.size()); }
  double total_area() const;
  // |sum_i area_i * normal_i| / total_area; ~0 for a closed surface.
  double closure_residual() const;

  static PanelQuadrature from_mesh(const SurfaceMesh& mesh);
};

// Zero-frequency single layer S0: A[i][j] = area_j / (4 pi |c_i - c_j|),
// diagonal by the equivalent-disk rule R/2, R = sqrt(area/pi).
Eigen::MatrixXd assemble_single_layer0(const PanelQuadrature& panels);

// Adjoint double layer (K0)*: kernel d Phi0(x,y)/d nu_x, assembled as the
// area-weighted adjoint of the double layer K0 whose diagonal enforces the
// exact identity K0(1) = -1/2 rowwise.
Eigen::MatrixXd assemble_adjoint_double_layer0(const PanelQuadrature& panels);

struct PolarizationTensor {
  double lambda = 0.0;  // (mu0+mu1) / (2 (mu0-mu1))
  Mat3 matrix = Mat3::Zero();
  double asymmetry = 0.0;  // ||M - M^T|| / ||M|| before symmetrization
};

// M_ij = int_{dB} y_j [lambda Id + (K0)*]^{-1} nu_i ds, dense LU solve.
PolarizationTensor polarization_tensor(const PanelQuadrature& panels,
                                       double mu0, double mu1);

// Closed form for the unit ball: 3 (mu0-mu1) / (mu0+2 mu1) * |B| * Id.
PolarizationTensor ball_polarization_tensor(double mu0, double mu1);

}  // namespace nanoscat

#endif
