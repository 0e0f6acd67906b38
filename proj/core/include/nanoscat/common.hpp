#ifndef NANOSCAT_COMMON_HPP
#define NANOSCAT_COMMON_HPP

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace nanoscat {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex iu{0.0, 1.0};

// Scattering configuration error (bad parameters, invalid mesh, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical stage failed to meet its contract (non-convergence,
// singular system, inconsistent data).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nanoscat

#endif
