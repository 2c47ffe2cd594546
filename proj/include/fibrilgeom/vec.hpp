#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace fibrilgeom {

/// Cartesian coordinates in Angstrom.
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

}  // namespace fibrilgeom
