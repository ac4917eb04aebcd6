// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0
//
// The standard small geometry shared by the operator-level tests: vacuum
// unit cube, control patch on the z = 0 face, target slab above the patch,
// shielded box in the far corner.

#pragma once

#include <memory>

#include "emloc/measurement.hpp"

namespace emloc::testing {

struct StandardProblem {
  Mesh mesh;
  MaterialField eps = MaterialField::identity();
  MaterialField mu = MaterialField::identity();
  DofMap dofmap;
  AssembledSystem system;
  std::unique_ptr<Factorization> fact;
  std::vector<int> m_region, d_region;

  MeasurementContext ctx() const {
    return MeasurementContext{mesh, eps, mu, system, *fact};
  }
};

inline StandardProblem standard_problem(int divisions, double k = 1.0,
                                        bool full_boundary = false) {
  StandardProblem p;
  const Box cube{Vec3(0, 0, 0), Vec3(1, 1, 1)};
  p.mesh = build_box_mesh(cube, {divisions, divisions, divisions});
  const Box gamma = full_boundary ? cube : Box{Vec3(0, 0, 0), Vec3(1, 1, 0)};
  const BoundaryPatch patch = tag_boundary_patch(
      p.mesh, RegionSpec{gamma, RegionSpec::Kind::BoundaryPatch});
  p.dofmap = DofMap::build(p.mesh, patch.interior_edges);
  p.system = assemble(p.mesh, p.eps, p.mu, k, p.dofmap);
  p.fact = std::make_unique<Factorization>(p.system);
  p.m_region = select_region(
      p.mesh, RegionSpec{Box{Vec3(0.15, 0.15, 0), Vec3(0.85, 0.85, 0.3)},
                         RegionSpec::Kind::Volume});
  p.d_region = select_region(
      p.mesh, RegionSpec{Box{Vec3(0.35, 0.35, 0.35), Vec3(0.85, 0.85, 0.85)},
                         RegionSpec::Kind::Volume});
  return p;
}

}  // namespace emloc::testing
