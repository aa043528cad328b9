#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <stdexcept>
#include <string>

namespace convexlab {

// Points live in R^3; planar (ambient_dim == 2) data keeps z == 0.
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition on a parameter range (epsilon, radius, dimension, index).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Body is not smooth-convex at some sampled normal.
class ConvexityViolation : public Error {
 public:
  using Error::Error;
};

class OpenMeshError : public Error {
 public:
  using Error::Error;
};

class OrientationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document, file, or config.
class ParseError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

inline void check_ambient_dim(int dim) {
  if (dim != 2 && dim != 3) {
    throw DomainError("ambient dimension must be 2 or 3, got " +
                      std::to_string(dim));
  }
}

double binomial(int n, int k);

}  // namespace convexlab
