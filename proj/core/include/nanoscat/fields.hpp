#ifndef NANOSCAT_FIELDS_HPP
#define NANOSCAT_FIELDS_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "nanoscat/common.hpp"

namespace nanoscat {

// Rectilinear voxel grid, uniform spacing. Voxel (i,j,k) is centered at
// origin + spacing*(i,j,k); storage is row-major with k fastest.
struct GridSpec {
  Vec3 origin{0, 0, 0};
  double spacing = 0;
  std::array<int, 3> dims{0, 0, 0};

  std::size_t size() const {
    return std::size_t(dims[0]) * dims[1] * dims[2];
  }
  std::size_t index(int i, int j, int k) const {
    return (std::size_t(i) * dims[1] + j) * dims[2] + k;
  }
  Vec3 point(int i, int j, int k) const {
    return origin + spacing * Vec3(i, j, k);
  }
  bool interior(int i, int j, int k) const {
    return i > 0 && j > 0 && k > 0 && i < dims[0] - 1 && j < dims[1] - 1 &&
           k < dims[2] - 1;
  }
  bool operator==(const GridSpec& o) const {
    return origin == o.origin && spacing == o.spacing && dims == o.dims;
  }

  // Grid of n^3 voxel centers covering the cube [c-half, c+half]^3.
  static GridSpec cube(const Vec3& center, double half_width, int n);

  void validate() const;
};

struct FieldGrid {
  GridSpec spec;
  std::vector<Complex> values;

  FieldGrid() = default;
  explicit FieldGrid(const GridSpec& s) : spec(s), values(s.size()) {}

  Complex& at(int i, int j, int k) { return values[spec.index(i, j, k)]; }
  const Complex& at(int i, int j, int k) const {
    return values[spec.index(i, j, k)];
  }
};

struct ScalarField {
  GridSpec spec;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& s, double fill = 0.0)
      : spec(s), values(s.size(), fill) {}

  double& at(int i, int j, int k) { return values[spec.index(i, j, k)]; }
  double at(int i, int j, int k) const { return values[spec.index(i, j, k)]; }
};

struct VecFieldGrid {
  GridSpec spec;
  std::vector<CVec3> values;

  VecFieldGrid() = default;
  explicit VecFieldGrid(const GridSpec& s) : spec(s), values(s.size(), CVec3::Zero()) {}

  CVec3& at(int i, int j, int k) { return values[spec.index(i, j, k)]; }
  const CVec3& at(int i, int j, int k) const {
    return values[spec.index(i, j, k)];
  }
};

struct MaskGrid {
  GridSpec spec;
  std::vector<std::uint8_t> values;

  MaskGrid() = default;
  explicit MaskGrid(const GridSpec& s, bool fill = false)
      : spec(s), values(s.size(), fill ? 1 : 0) {}

  bool at(int i, int j, int k) const { return values[spec.index(i, j, k)] != 0; }
  void set(int i, int j, int k, bool v) {
    values[spec.index(i, j, k)] = v ? 1 : 0;
  }
  std::size_t count() const;
};

// Field CSV format: header "x,y,z,re,im", one row per voxel in storage order.
void write_field_csv(std::ostream& os, const FieldGrid& f);
void write_field_csv(const std::string& path, const FieldGrid& f);
FieldGrid read_field_csv(std::istream& is);
FieldGrid read_field_csv(const std::string& path);

}  // namespace nanoscat

#endif
