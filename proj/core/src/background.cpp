#include "nanoscat/background.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace nanoscat {

namespace {

using Vector = std::vector<Complex>;

double norm2(const Vector& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

Complex dot(const Vector& a, const Vector& b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Restarted GMRES with modified Gram-Schmidt and Givens rotations.
SolveStats gmres(const std::function<void(const Vector&, Vector&)>& op,
                 const Vector& b, Vector& x, double tol, int restart,
                 int max_iter) {
  SolveStats st;
  const std::size_t n = b.size();
  double bnorm = norm2(b);
  if (bnorm == 0.0) {
    x.assign(n, 0.0);
    return st;
  }
  x.assign(n, 0.0);
  Vector r = b, w(n);
  double rho = bnorm;
  double rho_prev = rho;
  int total_iters = 0;

  while (total_iters < max_iter && rho > tol * bnorm) {
    std::vector<Vector> V;
    V.reserve(restart + 1);
    std::vector<std::vector<Complex>> H(restart + 1,
                                        std::vector<Complex>(restart, 0.0));
    std::vector<Complex> cs(restart), sn(restart), g(restart + 1, 0.0);
    Vector v0 = r;
    for (auto& e : v0) e /= rho;
    V.push_back(std::move(v0));
    g[0] = rho;

    int k = 0;
    for (; k < restart && total_iters < max_iter; ++k, ++total_iters) {
      op(V[k], w);
      for (int i = 0; i <= k; ++i) {
        H[i][k] = dot(V[i], w);
        for (std::size_t t = 0; t < n; ++t) w[t] -= H[i][k] * V[i][t];
      }
      H[k + 1][k] = norm2(w);
      if (std::abs(H[k + 1][k]) > 0) {
        Vector vk = w;
        for (auto& e : vk) e /= H[k + 1][k];
        V.push_back(std::move(vk));
      }
      for (int i = 0; i < k; ++i) {
        Complex t = cs[i] * H[i][k] + sn[i] * H[i + 1][k];
        H[i + 1][k] = -std::conj(sn[i]) * H[i][k] + cs[i] * H[i + 1][k];
        H[i][k] = t;
      }
      double denom = std::sqrt(std::norm(H[k][k]) + std::norm(H[k + 1][k]));
      if (denom == 0.0) break;
      cs[k] = std::abs(H[k][k]) / denom;
      sn[k] = (std::abs(H[k][k]) > 0)
                  ? (H[k][k] / std::abs(H[k][k])) * std::conj(H[k + 1][k]) / denom
                  : H[k + 1][k] / denom;
      H[k][k] = cs[k] * H[k][k] + sn[k] * H[k + 1][k];
      H[k + 1][k] = 0.0;
      g[k + 1] = -std::conj(sn[k]) * g[k];
      g[k] = cs[k] * g[k];
      rho = std::abs(g[k + 1]);
      if (rho <= tol * bnorm) {
        ++k;
        ++total_iters;
        break;
      }
      if (V.size() == std::size_t(k + 1)) break;  // lucky breakdown
    }
    // back substitution, update x
    std::vector<Complex> ycoef(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
      Complex s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H[i][j] * ycoef[j];
      ycoef[i] = s / H[i][i];
    }
    for (int i = 0; i < k; ++i)
      for (std::size_t t = 0; t < n; ++t) x[t] += ycoef[i] * V[i][t];
    // true residual for the restart
    op(x, w);
    for (std::size_t t = 0; t < n; ++t) r[t] = b[t] - w[t];
    rho = norm2(r);
    st.spectral_radius_estimate = (rho_prev > 0) ? rho / rho_prev : 0.0;
    rho_prev = rho;
  }
  st.iterations = total_iters;
  st.residual = rho / bnorm;
  st.converged = st.residual <= tol;
  return st;
}

}  // namespace

ScalarField make_gaussian_bump(const GridSpec& grid, double eps_exterior,
                               double amplitude, double sigma,
                               const Vec3& center, double support_radius) {
  ScalarField f(grid, eps_exterior);
  double floor = std::exp(-support_radius * support_radius / (sigma * sigma));
  for (int i = 0; i < grid.dims[0]; ++i)
    for (int j = 0; j < grid.dims[1]; ++j)
      for (int k = 0; k < grid.dims[2]; ++k) {
        double r2 = (grid.point(i, j, k) - center).squaredNorm();
        double g = std::exp(-r2 / (sigma * sigma)) - floor;
        if (g > 0) f.at(i, j, k) = eps_exterior + amplitude * g;
      }
  return f;
}

BackgroundSolver::BackgroundSolver(const Medium& medium, const GridSpec& grid,
                                   LsOptions options)
    : medium_(medium), grid_(grid), options_(options) {
  medium_.validate();
  grid_.validate();
  k_ext_ = medium_.kappa0_exterior();
  coef_ = medium_.omega * medium_.omega * medium_.mu0;

  const double h = grid_.spacing;
  const double vol = h * h * h;
  self_term_ = 0.5 * std::pow(3.0 * vol / (4.0 * pi), 2.0 / 3.0);

  for (int i = 0; i < grid_.dims[0]; ++i)
    for (int j = 0; j < grid_.dims[1]; ++j)
      for (int k = 0; k < grid_.dims[2]; ++k) {
        double q = medium_.eps0_at(grid_.point(i, j, k)) - medium_.eps0_exterior;
        if (q != 0.0) {
          support_.push_back(grid_.index(i, j, k));
          sijk_.push_back({i, j, k});
          q_.push_back(q);
        }
      }

  if (!support_.empty()) {
    // volume-weighted kernel by integer offset, h^3 Phi(|d|) off center
    int n0 = 2 * grid_.dims[0] - 1, n1 = 2 * grid_.dims[1] - 1,
        n2 = 2 * grid_.dims[2] - 1;
    table_.resize(std::size_t(n0) * n1 * n2);
    const int c0 = grid_.dims[0] - 1, c1 = grid_.dims[1] - 1,
              c2 = grid_.dims[2] - 1;
#pragma omp parallel for schedule(static)
    for (int a = 0; a < n0; ++a)
      for (int b = 0; b < n1; ++b)
        for (int c = 0; c < n2; ++c) {
          double r = h * std::sqrt(double(a - c0) * (a - c0) +
                                   double(b - c1) * (b - c1) +
                                   double(c - c2) * (c - c2));
          Complex v = (r == 0.0)
                          ? Complex(self_term_, 0.0)
                          : vol * std::exp(iu * k_ext_ * r) / (4.0 * pi * r);
          table_[(std::size_t(a) * n1 + b) * n2 + c] = v;
        }
  }
}

Complex BackgroundSolver::kernel_volume(const Vec3& x, const Vec3& y) const {
  double r = (x - y).norm();
  const double h = grid_.spacing;
  if (r < 0.5 * h) return self_term_;
  return h * h * h * std::exp(iu * k_ext_ * r) / (4.0 * pi * r);
}

void BackgroundSolver::apply(const std::vector<Complex>& x,
                             std::vector<Complex>& y) const {
  // y = x - A x on the support, A = coef * table * diag(q)
  const std::size_t m = support_.size();
  y.resize(m);
  std::vector<Complex> g(m);
  for (std::size_t s = 0; s < m; ++s) g[s] = coef_ * q_[s] * x[s];
  const int n1 = 2 * grid_.dims[1] - 1, n2 = 2 * grid_.dims[2] - 1;
  const int c0 = grid_.dims[0] - 1, c1 = grid_.dims[1] - 1,
            c2 = grid_.dims[2] - 1;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < std::ptrdiff_t(m); ++t) {
    const auto& a = sijk_[t];
    Complex acc = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      const auto& b = sijk_[s];
      std::size_t off =
          (std::size_t(a[0] - b[0] + c0) * n1 + (a[1] - b[1] + c1)) * n2 +
          (a[2] - b[2] + c2);
      acc += table_[off] * g[s];
    }
    y[t] = x[t] - acc;
  }
}

std::vector<Complex> BackgroundSolver::potential_of(
    const std::vector<Complex>& su) const {
  // full-grid A u from support values: coef * sum_j table[i-j] q_j u_j
  std::vector<Complex> out(grid_.size(), Complex(0, 0));
  const std::size_t m = support_.size();
  if (m == 0) return out;
  std::vector<Complex> g(m);
  for (std::size_t s = 0; s < m; ++s) g[s] = coef_ * q_[s] * su[s];
  const int n1 = 2 * grid_.dims[1] - 1, n2 = 2 * grid_.dims[2] - 1;
  const int c0 = grid_.dims[0] - 1, c1 = grid_.dims[1] - 1,
            c2 = grid_.dims[2] - 1;
#pragma omp parallel for schedule(static) collapse(2)
  for (int i = 0; i < grid_.dims[0]; ++i)
    for (int j = 0; j < grid_.dims[1]; ++j)
      for (int k = 0; k < grid_.dims[2]; ++k) {
        Complex acc = 0.0;
        for (std::size_t s = 0; s < m; ++s) {
          const auto& b = sijk_[s];
          std::size_t off =
              (std::size_t(i - b[0] + c0) * n1 + (j - b[1] + c1)) * n2 +
              (k - b[2] + c2);
          acc += table_[off] * g[s];
        }
        out[grid_.index(i, j, k)] = acc;
      }
  return out;
}

std::vector<Complex> BackgroundSolver::solve_with_rhs(
    const std::vector<Complex>& rhs) const {
  std::vector<Complex> x;
  stats_ = gmres([this](const auto& in, auto& out) { apply(in, out); }, rhs, x,
                 options_.tolerance, options_.restart, options_.max_iterations);
  if (!stats_.converged)
    throw NumericalError(
        "ls_solve: GMRES failed to reach residual " +
        std::to_string(options_.tolerance) + " after " +
        std::to_string(stats_.iterations) +
        " iterations; contraction estimate per restart ~" +
        std::to_string(stats_.spectral_radius_estimate) +
        " (contrast too strong; reduce omega or the contrast)");
  return x;
}

FieldGrid BackgroundSolver::solve_total_field(const Vec3& d) const {
  Vec3 dn = d.normalized();
  FieldGrid U(grid_);
  const std::size_t n = grid_.size();
  std::vector<Complex> uI(n);
  for (int i = 0; i < grid_.dims[0]; ++i)
    for (int j = 0; j < grid_.dims[1]; ++j)
      for (int k = 0; k < grid_.dims[2]; ++k) {
        auto idx = grid_.index(i, j, k);
        uI[idx] = std::exp(iu * k_ext_ * grid_.point(i, j, k).dot(dn));
      }
  if (support_.empty()) {
    U.values = std::move(uI);
    stats_ = SolveStats{};
    return U;
  }
  std::vector<Complex> rhs(support_.size());
  for (std::size_t s = 0; s < support_.size(); ++s) rhs[s] = uI[support_[s]];
  std::vector<Complex> us = solve_with_rhs(rhs);
  std::vector<Complex> pot = potential_of(us);
  for (std::size_t i = 0; i < n; ++i) U.values[i] = uI[i] + pot[i];
  return U;
}

FieldGrid BackgroundSolver::born_total_field(const Vec3& d) const {
  Vec3 dn = d.normalized();
  FieldGrid U(grid_);
  std::vector<Complex> uI(grid_.size());
  for (int i = 0; i < grid_.dims[0]; ++i)
    for (int j = 0; j < grid_.dims[1]; ++j)
      for (int k = 0; k < grid_.dims[2]; ++k) {
        auto idx = grid_.index(i, j, k);
        uI[idx] = std::exp(iu * k_ext_ * grid_.point(i, j, k).dot(dn));
      }
  std::vector<Complex> us(support_.size());
  for (std::size_t s = 0; s < support_.size(); ++s) us[s] = uI[support_[s]];
  std::vector<Complex> pot = potential_of(us);
  for (std::size_t i = 0; i < grid_.size(); ++i) U.values[i] = uI[i] + pot[i];
  return U;
}

Complex BackgroundSolver::far_field(const FieldGrid& U, const Vec3& xhat) const {
  Vec3 xh = xhat.normalized();
  const double vol = std::pow(grid_.spacing, 3);
  Complex acc = 0.0;
  for (std::size_t s = 0; s < support_.size(); ++s) {
    const auto& b = sijk_[s];
    Vec3 y = grid_.point(b[0], b[1], b[2]);
    acc += q_[s] * std::exp(-iu * k_ext_ * xh.dot(y)) * U.values[support_[s]];
  }
  return far_field_constant * coef_ * vol * acc;
}

Complex BackgroundSolver::evaluate(const FieldGrid& U, const Vec3& d,
                                   const Vec3& x) const {
  Vec3 dn = d.normalized();
  Complex acc = std::exp(iu * k_ext_ * x.dot(dn));
  for (std::size_t s = 0; s < support_.size(); ++s) {
    const auto& b = sijk_[s];
    Vec3 y = grid_.point(b[0], b[1], b[2]);
    acc += coef_ * q_[s] * kernel_volume(x, y) * U.values[support_[s]];
  }
  return acc;
}

VecFieldGrid BackgroundSolver::gradient_field(const FieldGrid& U,
                                              const Vec3& d) const {
  Vec3 dn = d.normalized();
  VecFieldGrid G(grid_);
  const double h = grid_.spacing;
  const double vol = h * h * h;
#pragma omp parallel for schedule(static) collapse(2)
  for (int i = 0; i < grid_.dims[0]; ++i)
    for (int j = 0; j < grid_.dims[1]; ++j)
      for (int k = 0; k < grid_.dims[2]; ++k) {
        Vec3 x = grid_.point(i, j, k);
        Complex pw = std::exp(iu * k_ext_ * x.dot(dn));
        CVec3 acc = (iu * k_ext_ * pw) * dn.cast<Complex>();
        for (std::size_t s = 0; s < support_.size(); ++s) {
          const auto& b = sijk_[s];
          Vec3 y = grid_.point(b[0], b[1], b[2]);
          Vec3 rv = x - y;
          double r = rv.norm();
          if (r < 0.5 * h) continue;  // self-voxel gradient vanishes by symmetry
          Complex phi = vol * std::exp(iu * k_ext_ * r) / (4.0 * pi * r);
          Complex fac = phi * (iu * k_ext_ - 1.0 / r) / r;
          acc += (coef_ * q_[s] * U.values[support_[s]] * fac) * rv.cast<Complex>();
        }
        G.at(i, j, k) = acc;
      }
  return G;
}

GreensEval BackgroundSolver::greens(const Vec3& z,
                                    const std::vector<Vec3>& pts) const {
  GreensEval out;
  out.source = z;
  out.points = pts;
  out.values.resize(pts.size());
  out.grad_eval.resize(pts.size());
  out.grad_source.resize(pts.size());

  const double h = grid_.spacing;
  auto phi = [&](const Vec3& x, const Vec3& y) {
    double r = (x - y).norm();
    if (r == 0.0)
      throw std::domain_error("greens: evaluation point coincides with source");
    return std::exp(iu * k_ext_ * r) / (4.0 * pi * r);
  };
  auto grad_phi_x = [&](const Vec3& x, const Vec3& y) -> CVec3 {
    Vec3 rv = x - y;
    double r = rv.norm();
    Complex fac =
        std::exp(iu * k_ext_ * r) / (4.0 * pi * r) * (iu * k_ext_ - 1.0 / r) / r;
    return fac * rv.cast<Complex>();
  };

  const std::size_t m = support_.size();
  std::vector<Complex> gz;           // G at support nodes
  std::vector<CVec3> dz_gz;          // d/dz of G at support nodes
  if (m > 0) {
    // phi_z and its z-gradient at support nodes
    std::vector<Complex> phiz(m);
    std::vector<CVec3> dphiz(m);
    for (std::size_t s = 0; s < m; ++s) {
      const auto& b = sijk_[s];
      Vec3 y = grid_.point(b[0], b[1], b[2]);
      double r = (y - z).norm();
      if (r < 0.5 * h) {
        // source sitting in this voxel: averaged value, zero gradient
        phiz[s] = self_term_ / (h * h * h);
        dphiz[s] = CVec3::Zero();
      } else {
        phiz[s] = phi(y, z);
        dphiz[s] = -grad_phi_x(y, z);  // gradient in the second argument
      }
    }
    // correction w solves (I - A) w = A phi_z ; G = phi_z + w at nodes
    std::vector<Complex> rhs(m), w(m);
    apply(phiz, rhs);  // rhs = phi_z - A phi_z
    for (std::size_t s = 0; s < m; ++s) rhs[s] = phiz[s] - rhs[s];
    w = solve_with_rhs(rhs);
    gz.resize(m);
    for (std::size_t s = 0; s < m; ++s) gz[s] = phiz[s] + w[s];

    // z-gradient: d/dz G = d/dz phi_z + (I-A)^{-1} A d/dz phi_z, per component
    dz_gz.assign(m, CVec3::Zero());
    for (int comp = 0; comp < 3; ++comp) {
      std::vector<Complex> dcomp(m), r2(m), w2;
      for (std::size_t s = 0; s < m; ++s) dcomp[s] = dphiz[s][comp];
      apply(dcomp, r2);
      for (std::size_t s = 0; s < m; ++s) r2[s] = dcomp[s] - r2[s];
      w2 = solve_with_rhs(r2);
      for (std::size_t s = 0; s < m; ++s) dz_gz[s][comp] = dcomp[s] + w2[s];
    }
  }

  for (std::size_t p = 0; p < pts.size(); ++p) {
    const Vec3& x = pts[p];
    Complex val = phi(x, z);
    CVec3 ge = grad_phi_x(x, z);
    CVec3 gs = -ge;
    for (std::size_t s = 0; s < m; ++s) {
      const auto& b = sijk_[s];
      Vec3 y = grid_.point(b[0], b[1], b[2]);
      Complex kv = kernel_volume(x, y);
      val += coef_ * q_[s] * kv * gz[s];
      gs += coef_ * q_[s] * kv * dz_gz[s];
      Vec3 rv = x - y;
      double r = rv.norm();
      if (r >= 0.5 * h) {
        double vol = h * h * h;
        Complex fac = vol * std::exp(iu * k_ext_ * r) / (4.0 * pi * r) *
                      (iu * k_ext_ - 1.0 / r) / r;
        ge += (coef_ * q_[s] * gz[s] * fac) * rv.cast<Complex>();
      }
    }
    out.values[p] = val;
    out.grad_eval[p] = ge;
    out.grad_source[p] = gs;
  }
  return out;
}

Complex BackgroundSolver::greens_far_field(const Vec3& z, const Vec3& xhat) const {
  Vec3 xh = xhat.normalized();
  Complex acc = std::exp(-iu * k_ext_ * xh.dot(z)) / (4.0 * pi);
  const std::size_t m = support_.size();
  if (m == 0) return acc;

  const double h = grid_.spacing;
  std::vector<Complex> phiz(m);
  for (std::size_t s = 0; s < m; ++s) {
    const auto& b = sijk_[s];
    Vec3 y = grid_.point(b[0], b[1], b[2]);
    double r = (y - z).norm();
    phiz[s] = (r < 0.5 * h) ? Complex(self_term_ / (h * h * h), 0.0)
                            : std::exp(iu * k_ext_ * r) / (4.0 * pi * r);
  }
  std::vector<Complex> rhs(m);
  apply(phiz, rhs);
  for (std::size_t s = 0; s < m; ++s) rhs[s] = phiz[s] - rhs[s];
  std::vector<Complex> w = solve_with_rhs(rhs);
  const double vol = h * h * h;
  Complex sum = 0.0;
  for (std::size_t s = 0; s < m; ++s) {
    const auto& b = sijk_[s];
    Vec3 y = grid_.point(b[0], b[1], b[2]);
    sum += q_[s] * std::exp(-iu * k_ext_ * xh.dot(y)) * (phiz[s] + w[s]);
  }
  return acc + far_field_constant * coef_ * vol * sum;
}

double BackgroundSolver::mixed_reciprocity_deviation(const Vec3& z,
                                                     const Vec3& xhat) const {
  Vec3 xh = xhat.normalized();
  Complex lhs = mixed_reciprocity_constant * greens_far_field(z, xh);
  FieldGrid U = solve_total_field(-xh);
  Complex rhs = evaluate(U, -xh, z);
  return std::abs(lhs - rhs) / std::abs(rhs);
}

double BackgroundSolver::ls_residual(const FieldGrid& U, const Vec3& d) const {
  Vec3 dn = d.normalized();
  const std::size_t m = support_.size();
  if (m == 0) {
    // zero-contrast exactness: U must equal the plane wave
    double worst = 0.0;
    for (int i = 0; i < grid_.dims[0]; ++i)
      for (int j = 0; j < grid_.dims[1]; ++j)
        for (int k = 0; k < grid_.dims[2]; ++k) {
          Complex pw = std::exp(iu * k_ext_ * grid_.point(i, j, k).dot(dn));
          worst = std::max(worst,
                           std::abs(U.at(i, j, k) - pw));
        }
    return worst;
  }
  std::vector<Complex> us(m), lhs(m);
  double num = 0.0, den = 0.0;
  for (std::size_t s = 0; s < m; ++s) us[s] = U.values[support_[s]];
  apply(us, lhs);
  for (std::size_t s = 0; s < m; ++s) {
    const auto& b = sijk_[s];
    Complex uI = std::exp(iu * k_ext_ * grid_.point(b[0], b[1], b[2]).dot(dn));
    num += std::norm(lhs[s] - uI);
    den += std::norm(uI);
  }
  return std::sqrt(num / den);
}

}  // namespace nanoscat
