// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emloc/solver.hpp"

namespace emloc {

/// Everything a virtual measurement needs: the mesh, the coefficients, and a
/// factorized forward system over a fixed control set.
struct MeasurementContext {
  const Mesh& mesh;
  const MaterialField& eps;
  const MaterialField& mu;
  const AssembledSystem& system;
  const Factorization& fact;
};

/// Dense matrix of the boundary-to-region map: rows are weighted field
/// observations on the region (six E rows per tet through the Cholesky factor
/// of the local mass block, three H rows scaled by sqrt(V)), columns are the
/// control-edge basis vectors. The plain l2 norm of "matrix * f" equals the
/// L2 energy of the generated field on the region.
struct MeasurementOperator {
  std::vector<int> region;  // tet indices, ascending
  Eigen::MatrixXcd matrix;  // 9 * region.size() rows
  double k = 0.0;

  Eigen::MatrixXcd gram() const { return matrix.adjoint() * matrix; }
};

/// Solution fields restricted to a region: signed local E coefficients and
/// the constant H per tet.
struct RegionFields {
  std::vector<int> tets;
  std::vector<Vec6c> e_local;
  std::vector<Vec3c> h;
};

/// Forward solve for the boundary datum f (zero sources), restricted to the
/// region.
RegionFields apply_L(const MeasurementContext& ctx,
                     const std::vector<int>& region,
                     const Eigen::VectorXcd& f);

/// Observation coordinates of region fields; the squared norm is the region
/// energy.
Eigen::VectorXcd observe(const Mesh& mesh, const RegionFields& fields);

/// Observation coordinates representing per-tet constant densities (J, K) as
/// an element of the dual: pairing any observation vector against it in l2
/// reproduces the L2(O) inner product with (J, K).
Eigen::VectorXcd weighted_observation(const Mesh& mesh,
                                      const std::vector<int>& region,
                                      const std::vector<Vec3c>& J,
                                      const std::vector<Vec3c>& K);

/// Observation coordinates of a per-tet constant target field (e, h); exact,
/// since constant fields lie in the local Whitney space.
Eigen::VectorXcd target_observation(const Mesh& mesh,
                                    const std::vector<int>& region,
                                    const std::vector<Vec3c>& e,
                                    const std::vector<Vec3c>& h);

/// Adjoint via the sign-flipped Maxwell solve: the discrete tangential trace
/// of the adjoint magnetic field on the control edges, evaluated through the
/// weak form as (i/k) times the control-row residual of the adjoint solution.
Eigen::VectorXcd apply_L_adjoint(const MeasurementContext& ctx,
                                 const std::vector<int>& region,
                                 const std::vector<Vec3c>& J,
                                 const std::vector<Vec3c>& K);

/// Adjoint via the assembled matrix: conjugate transpose against the weighted
/// observation of (J, K). Exact in the discrete inner products.
Eigen::VectorXcd apply_L_adjoint(const Mesh& mesh,
                                 const MeasurementOperator& op,
                                 const std::vector<Vec3c>& J,
                                 const std::vector<Vec3c>& K);

/// Assembles measurement matrices for several regions from one set of
/// column solves against the shared factorization. Observation assembly is
/// distributed over EMLOC_THREADS workers.
std::vector<MeasurementOperator> assemble_measurement_matrices(
    const MeasurementContext& ctx, const std::vector<std::vector<int>>& regions);

MeasurementOperator assemble_measurement_matrix(const MeasurementContext& ctx,
                                                const std::vector<int>& region);

/// Worker count: EMLOC_THREADS if set, else the hardware concurrency.
int worker_count();

}  // namespace emloc
