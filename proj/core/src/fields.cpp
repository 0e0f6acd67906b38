#include "nanoscat/fields.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace nanoscat {

GridSpec GridSpec::cube(const Vec3& center, double half_width, int n) {
  GridSpec g;
  g.dims = {n, n, n};
  g.spacing = 2.0 * half_width / n;
  // voxel centers: center - half + (i + 1/2) h
  g.origin = center - Vec3::Constant(half_width - 0.5 * g.spacing);
  return g;
}

void GridSpec::validate() const {
  if (spacing <= 0) throw ConfigError("grid: spacing must be > 0");
  for (int a = 0; a < 3; ++a)
    if (dims[a] < 2) throw ConfigError("grid: dims must be >= 2 per axis");
}

std::size_t MaskGrid::count() const {
  return std::accumulate(values.begin(), values.end(), std::size_t(0),
                         [](std::size_t s, std::uint8_t v) { return s + (v != 0); });
}

void write_field_csv(std::ostream& os, const FieldGrid& f) {
  os << "x,y,z,re,im\n";
  char buf[160];
  for (int i = 0; i < f.spec.dims[0]; ++i)
    for (int j = 0; j < f.spec.dims[1]; ++j)
      for (int k = 0; k < f.spec.dims[2]; ++k) {
        Vec3 p = f.spec.point(i, j, k);
        Complex v = f.at(i, j, k);
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      p[0], p[1], p[2], v.real(), v.imag());
        os << buf;
      }
}

void write_field_csv(const std::string& path, const FieldGrid& f) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  write_field_csv(os, f);
}

FieldGrid read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,y,z,re,im", 0) != 0)
    throw ConfigError("field csv: missing header");
  std::vector<Vec3> pts;
  std::vector<Complex> vals;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double x, y, z, re, im;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &x, &y, &z, &re,
                    &im) != 5)
      throw ConfigError("field csv: bad row: " + line);
    pts.emplace_back(x, y, z);
    vals.emplace_back(re, im);
  }
  if (pts.size() < 8) throw ConfigError("field csv: too few rows");

  // Recover dims from the storage order: z fastest, then y, then x.
  GridSpec g;
  std::size_t n = pts.size();
  int nz = 1;
  while (std::size_t(nz) < n && pts[nz][0] == pts[0][0] && pts[nz][1] == pts[0][1]) ++nz;
  int ny = 1;
  while (std::size_t(ny * nz) < n && pts[ny * nz][0] == pts[0][0]) ++ny;
  int nx = int(n / (std::size_t(ny) * nz));
  if (std::size_t(nx) * ny * nz != n)
    throw ConfigError("field csv: rows do not form a full grid");
  g.dims = {nx, ny, nz};
  g.origin = pts[0];
  g.spacing = (nz > 1) ? pts[1][2] - pts[0][2] : pts[nz][1] - pts[0][1];
  g.validate();
  FieldGrid f(g);
  f.values = std::move(vals);
  return f;
}

FieldGrid read_field_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open: " + path);
  return read_field_csv(is);
}

}  // namespace nanoscat
