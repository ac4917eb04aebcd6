// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <utility>

#include "emloc/fem.hpp"

namespace emloc {

/// Homogeneous-medium plane wave E = p exp(ik d.x), H = (d x p) exp(ik d.x),
/// an exact solution of the vacuum system for any unit d and transverse p.
struct PlaneWave {
  double k = 1.0;
  Vec3 d = Vec3(0, 0, 1);
  Vec3c p = Vec3c(1, 0, 0);

  void validate() const;
};

std::pair<Vec3c, Vec3c> plane_wave_fields(const PlaneWave& pw, const Vec3& x);

/// Smooth field with analytically known curl, for manufactured problems.
struct ManufacturedField {
  std::function<Vec3c(const Vec3&)> value;
  std::function<Vec3c(const Vec3&)> curl;
};

struct ManufacturedSources {
  std::vector<Vec3c> J;  // per tet
  std::vector<Vec3c> K;  // identically zero by construction
};

/// Sources that make E_exact the solution: H is derived from the first
/// Maxwell equation with K = 0, and J = curl H + ik eps E is sampled at tet
/// barycenters, with curl H taken by central differences of relative step
/// fd_step_rel. Finite-difference stencils must not straddle material
/// interfaces; barycenters of box-aligned regions keep clear of them.
ManufacturedSources manufactured_sources(const Mesh& mesh,
                                         const MaterialField& eps,
                                         const MaterialField& mu, double k,
                                         const ManufacturedField& e_exact,
                                         double fd_step_rel = 1e-5);

/// Central-difference curl of a vector field.
Vec3c fd_curl(const std::function<Vec3c(const Vec3&)>& f, const Vec3& x,
              double step);

/// Edge circulations of a field on the control edges (Gauss quadrature
/// along each edge); the discrete tangential trace datum.
Eigen::VectorXcd exact_trace(const Mesh& mesh, const DofMap& dofmap,
                             const std::function<Vec3c(const Vec3&)>& field);

/// Relative L2(Omega) error of the discrete E against a closed-form field,
/// by fifth-order quadrature per tet.
double relative_l2_error(const Mesh& mesh, const Eigen::VectorXcd& e,
                         const std::function<Vec3c(const Vec3&)>& exact);

ManufacturedField plane_wave_field(const PlaneWave& pw);

/// The two-region manufactured solution used by the anisotropic verification:
/// polynomial E whose derived H stays tangentially continuous across the
/// material interface plane x = interface_x.
ManufacturedField anisotropic_manufactured_field(double interface_x);

}  // namespace emloc
