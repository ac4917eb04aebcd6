// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace emloc {

using Cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec6c = Eigen::Matrix<Cplx, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

constexpr Cplx kImag{0.0, 1.0};

/// Componentwise cross product of complex vectors. Eigen's cross() returns
/// the conjugated product for complex scalars, which is not what the field
/// formulas need.
inline Vec3c cross_c(const Vec3c& a, const Vec3c& b) {
  return Vec3c(a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(),
               a.x() * b.y() - a.y() * b.x());
}

/// Axis-aligned box, closed on all faces.
struct Box {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();

  bool contains(const Vec3& p, double tol = 0.0) const {
    return (p.array() >= lo.array() - tol).all() &&
           (p.array() <= hi.array() + tol).all();
  }
  Vec3 extent() const { return hi - lo; }
  double diameter() const { return (hi - lo).norm(); }
};

}  // namespace emloc
