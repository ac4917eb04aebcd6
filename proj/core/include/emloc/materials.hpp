// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "emloc/mesh.hpp"
#include "emloc/types.hpp"

namespace emloc {

/// Piecewise-constant symmetric positive definite 3x3 tensor field.
/// Evaluation returns the tensor of the first region containing the point,
/// falling back to the default tensor. One field instance per coefficient
/// (permittivity or permeability).
struct MaterialField {
  std::vector<std::pair<Box, Mat3>> regions;
  Mat3 default_tensor = Mat3::Identity();

  static MaterialField identity() { return MaterialField{}; }
  static MaterialField constant(const Mat3& m) { return MaterialField{{}, m}; }
};

const Mat3& eval_material(const MaterialField& field, const Vec3& point);

/// Min/max eigenvalue over all region tensors and the default tensor.
/// Throws if any tensor is non-symmetric or not positive definite, naming
/// the offending region.
std::pair<double, double> check_ellipticity(const MaterialField& field);

}  // namespace emloc
