#include "nanoscat/surface.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <Eigen/LU>

namespace nanoscat {

double SurfaceMesh::enclosed_volume() const {
  double vol = 0.0;
  for (const auto& t : triangles) {
    const Vec3 &a = vertices[t[0]], &b = vertices[t[1]], &c = vertices[t[2]];
    vol += a.dot(b.cross(c)) / 6.0;
  }
  return vol;
}

SurfaceMesh make_icosphere(int level) {
  if (level < 0 || level > 7)
    throw ConfigError("make_icosphere: level out of range [0,7]");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  SurfaceMesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : m.vertices) v.normalize();
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                 {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                 {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                 {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 v = (m.vertices[a] + m.vertices[b]).normalized();
      m.vertices.push_back(v);
      int idx = int(m.vertices.size()) - 1;
      midpoint[key] = idx;
      return idx;
    };
    std::vector<std::array<int, 3>> out;
    out.reserve(m.triangles.size() * 4);
    for (const auto& f : m.triangles) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      out.push_back({f[0], ab, ca});
      out.push_back({f[1], bc, ab});
      out.push_back({f[2], ca, bc});
      out.push_back({ab, bc, ca});
    }
    m.triangles = std::move(out);
  }
  return m;
}

SurfaceMesh load_off_stream(std::istream& is) {
  std::string tok;
  if (!(is >> tok) || tok != "OFF") throw ConfigError("OFF: missing magic");
  int nv = 0, nf = 0, ne = 0;
  if (!(is >> nv >> nf >> ne)) throw ConfigError("OFF: bad counts");
  if (nv < 3 || nf < 1) throw ConfigError("OFF: degenerate mesh");
  SurfaceMesh m;
  m.vertices.resize(nv);
  for (int i = 0; i < nv; ++i)
    if (!(is >> m.vertices[i][0] >> m.vertices[i][1] >> m.vertices[i][2]))
      throw ConfigError("OFF: bad vertex");
  m.triangles.resize(nf);
  for (int i = 0; i < nf; ++i) {
    int k;
    if (!(is >> k) || k != 3) throw ConfigError("OFF: only triangles supported");
    auto& t = m.triangles[i];
    if (!(is >> t[0] >> t[1] >> t[2])) throw ConfigError("OFF: bad face");
    for (int a = 0; a < 3; ++a)
      if (t[a] < 0 || t[a] >= nv) throw ConfigError("OFF: face index out of range");
  }
  return m;
}

SurfaceMesh load_off(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open: " + path);
  return load_off_stream(is);
}

void save_off(const std::string& path, const SurfaceMesh& mesh) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  os << "OFF\n" << mesh.vertices.size() << " " << mesh.triangles.size() << " 0\n";
  os.precision(17);
  for (const auto& v : mesh.vertices) os << v[0] << " " << v[1] << " " << v[2] << "\n";
  for (const auto& t : mesh.triangles)
    os << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
}

double PanelQuadrature::total_area() const {
  double s = 0.0;
  for (double a : areas) s += a;
  return s;
}

double PanelQuadrature::closure_residual() const {
  Vec3 s = Vec3::Zero();
  for (int i = 0; i < size(); ++i) s += areas[i] * normals[i];
  return s.norm() / total_area();
}

PanelQuadrature PanelQuadrature::from_mesh(const SurfaceMesh& mesh) {
  PanelQuadrature q;
  int n = int(mesh.triangles.size());
  q.centroids.resize(n);
  q.normals.resize(n);
  q.areas.resize(n);
  // interior reference point to orient normals outward
  Vec3 inside = Vec3::Zero();
  for (const auto& v : mesh.vertices) inside += v;
  inside /= double(mesh.vertices.size());
  for (int i = 0; i < n; ++i) {
    const auto& t = mesh.triangles[i];
    const Vec3 &a = mesh.vertices[t[0]], &b = mesh.vertices[t[1]],
               &c = mesh.vertices[t[2]];
    Vec3 cr = (b - a).cross(c - a);
    double nrm = cr.norm();
    if (nrm <= 0) throw ConfigError("mesh: degenerate panel (zero area)");
    q.areas[i] = 0.5 * nrm;
    q.centroids[i] = (a + b + c) / 3.0;
    q.normals[i] = cr / nrm;
    if (q.normals[i].dot(q.centroids[i] - inside) < 0) q.normals[i] *= -1.0;
  }
  return q;
}

Eigen::MatrixXd assemble_single_layer0(const PanelQuadrature& panels) {
  int n = panels.size();
  Eigen::MatrixXd A(n, n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        // integral of 1/(4 pi r) over the equivalent disk: R/2
        A(i, i) = 0.5 * std::sqrt(panels.areas[i] / pi);
      } else {
        double r = (panels.centroids[i] - panels.centroids[j]).norm();
        A(i, j) = panels.areas[j] / (4.0 * pi * r);
      }
    }
  }
  return A;
}

Eigen::MatrixXd assemble_adjoint_double_layer0(const PanelQuadrature& panels) {
  int n = panels.size();
  // Double layer K0 first: K[i][j] = area_j <c_i - c_j, nu_j> / (4 pi r^3),
  // diagonal fixed so each row sums to K0(1) = -1/2 exactly.
  Eigen::MatrixXd K(n, n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Vec3 d = panels.centroids[i] - panels.centroids[j];
      double r = d.norm();
      K(i, j) = panels.areas[j] * d.dot(panels.normals[j]) / (4.0 * pi * r * r * r);
      rowsum += K(i, j);
    }
    K(i, i) = -0.5 - rowsum;
  }
  // (K0)* is the adjoint wrt the area-weighted inner product:
  // K*[i][j] = K[j][i] * area_j / area_i.
  Eigen::MatrixXd Ks(n, n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      Ks(i, j) = K(j, i) * panels.areas[j] / panels.areas[i];
  return Ks;
}

PolarizationTensor polarization_tensor(const PanelQuadrature& panels,
                                       double mu0, double mu1) {
  if (mu0 <= 0 || mu1 <= 0)
    throw ConfigError("polarization_tensor: permeabilities must be > 0");
  if (mu0 == mu1)
    throw ConfigError("polarization_tensor: mu1 == mu0 (lambda undefined)");
  PolarizationTensor out;
  out.lambda = 0.5 * (mu0 + mu1) / (mu0 - mu1);
  if (std::abs(out.lambda) <= 0.5)
    throw NumericalError(
        "polarization_tensor: |lambda| <= 1/2 hits the Neumann-Poincare "
        "spectrum; system may be singular");

  int n = panels.size();
  Eigen::MatrixXd A = assemble_adjoint_double_layer0(panels);
  A.diagonal().array() += out.lambda;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);

  Mat3 M;
  Eigen::MatrixXd rhs(n, 3);
  for (int i = 0; i < 3; ++i)
    for (int p = 0; p < n; ++p) rhs(p, i) = panels.normals[p][i];
  Eigen::MatrixXd rho = lu.solve(rhs);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int p = 0; p < n; ++p)
        s += panels.centroids[p][j] * rho(p, i) * panels.areas[p];
      M(i, j) = s;
    }
  double norm = M.norm();
  out.asymmetry = norm > 0 ? (M - M.transpose()).norm() / norm : 0.0;
  out.matrix = 0.5 * (M + M.transpose());
  return out;
}

PolarizationTensor ball_polarization_tensor(double mu0, double mu1) {
  if (mu0 == mu1)
    throw ConfigError("ball_polarization_tensor: mu1 == mu0");
  PolarizationTensor out;
  out.lambda = 0.5 * (mu0 + mu1) / (mu0 - mu1);
  double vol = 4.0 * pi / 3.0;
  out.matrix = 3.0 * (mu0 - mu1) / (mu0 + 2.0 * mu1) * vol * Mat3::Identity();
  out.asymmetry = 0.0;
  return out;
}

}  // namespace nanoscat
