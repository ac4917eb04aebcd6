// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "emloc/materials.hpp"

#include <Eigen/Eigenvalues>
#include <limits>
#include <stdexcept>
#include <string>

namespace emloc {

const Mat3& eval_material(const MaterialField& field, const Vec3& point) {
  for (const auto& [box, tensor] : field.regions)
    if (box.contains(point)) return tensor;
  return field.default_tensor;
}

namespace {

void check_one(const Mat3& m, const std::string& where, double& lo, double& hi) {
  const double scale = m.norm();
  if ((m - m.transpose()).norm() > 1e-14 * scale)
    throw std::invalid_argument("check_ellipticity: non-symmetric tensor in " + where);
  Eigen::SelfAdjointEigenSolver<Mat3> eig(m, Eigen::EigenvaluesOnly);
  const double emin = eig.eigenvalues().minCoeff();
  const double emax = eig.eigenvalues().maxCoeff();
  if (emin <= 0.0)
    throw std::invalid_argument("check_ellipticity: ellipticity violated in " + where);
  lo = std::min(lo, emin);
  hi = std::max(hi, emax);
}

}  // namespace

std::pair<double, double> check_ellipticity(const MaterialField& field) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < field.regions.size(); ++i)
    check_one(field.regions[i].second, "region " + std::to_string(i), lo, hi);
  check_one(field.default_tensor, "default", lo, hi);
  return {lo, hi};
}

}  // namespace emloc
