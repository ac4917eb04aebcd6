// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "emloc/materials.hpp"
#include "emloc/mesh.hpp"
#include "emloc/types.hpp"

namespace emloc {

using SpMat = Eigen::SparseMatrix<double>;

/// Affine geometry of one tet: barycentric gradients are constant.
struct TetGeometry {
  std::array<Vec3, 4> x;
  std::array<Vec3, 4> grad_lambda;
  double volume = 0.0;

  static TetGeometry from_vertices(const Vec3& a, const Vec3& b, const Vec3& c,
                                   const Vec3& d);
  static TetGeometry from_mesh(const Mesh& mesh, int tet);

  /// Constant curl of the Whitney function of local edge slot s.
  Vec3 whitney_curl(int s) const {
    const auto [p, q] = Mesh::kLocalEdges[s];
    return 2.0 * grad_lambda[p].cross(grad_lambda[q]);
  }
  /// Integral of the Whitney function of slot s over the tet.
  Vec3 whitney_integral(int s) const {
    const auto [p, q] = Mesh::kLocalEdges[s];
    return (volume / 4.0) * (grad_lambda[q] - grad_lambda[p]);
  }
  /// Whitney function of slot s at barycentric coordinates lambda.
  Vec3 whitney_at(int s, const Eigen::Vector4d& lambda) const {
    const auto [p, q] = Mesh::kLocalEdges[s];
    return lambda[p] * grad_lambda[q] - lambda[q] * grad_lambda[p];
  }
};

struct LocalMatrices {
  Mat6 curl_curl;
  Mat6 mass;
};

/// Exact local matrices on one tet for constant material tensors:
/// curl-curl entry (a,b) = V (mu^{-1} c_a) . c_b with the constant Whitney
/// curls, mass by the closed-form integrals of products of barycentric
/// coordinates.
LocalMatrices local_matrices(const TetGeometry& tet, const Mat3& eps,
                             const Mat3& mu);

/// Partition of the edge DOFs: interior edges are free unknowns, boundary
/// edges inside the control patch carry the datum, remaining boundary edges
/// are constrained to zero.
struct DofMap {
  enum Class : signed char { kFree = 0, kControl = 1, kConstrained = 2 };

  int num_edges = 0;
  std::vector<signed char> edge_class;
  std::vector<int> edge_local;  // index within its class list
  std::vector<int> free_edges, control_edges, constrained_edges;

  static DofMap build(const Mesh& mesh, const std::vector<int>& control_edges);
  /// All boundary edges constrained, no control set (the f = 0 cavity).
  static DofMap cavity(const Mesh& mesh);

  int num_free() const { return static_cast<int>(free_edges.size()); }
  int num_control() const { return static_cast<int>(control_edges.size()); }
};

/// Global curl-curl and permittivity mass matrices over all edge DOFs,
/// with the wavenumber and DOF partition carried along. The system matrix
/// of the variational form is S - k^2 Meps.
struct AssembledSystem {
  SpMat S;
  SpMat M_eps;
  double k = 0.0;
  DofMap dofmap;

  SpMat b_mat() const { return SpMat(S - (k * k) * M_eps); }
};

AssembledSystem assemble(const Mesh& mesh, const MaterialField& eps,
                         const MaterialField& mu, double k,
                         const DofMap& dofmap);

/// Load vector over all edge DOFs for per-tet constant current densities:
/// entries ik (J . int w_e) + V (mu^{-1} K) . curl w_e. A negative k
/// assembles the right-hand side of the sign-flipped adjoint system.
Eigen::VectorXcd assemble_rhs(const Mesh& mesh,
                              const std::vector<Vec3c>& J,
                              const std::vector<Vec3c>& K,
                              const MaterialField& mu, double k);

/// Zero-extends a control-edge coefficient vector to all edge DOFs.
Eigen::VectorXcd trace_lift(const DofMap& dofmap, const Eigen::VectorXcd& f);

/// Electric edge coefficients plus the per-tet constant magnetic field
/// H = -(i/k) mu^{-1} (curl E - K).
struct FieldPair {
  Eigen::VectorXcd e;        // over all edge DOFs
  std::vector<Vec3c> h;      // per tet
};

std::vector<Vec3c> recover_H(const Mesh& mesh, const MaterialField& mu,
                             double k, const Eigen::VectorXcd& e,
                             const std::vector<Vec3c>* K = nullptr);

/// Signed local coefficients of e on one tet.
Vec6c local_coefficients(const Mesh& mesh, int tet, const Eigen::VectorXcd& e);

/// Sum over the region of the exact L2 norms: int |E|^2 + V |H|^2 per tet.
double region_energy(const Mesh& mesh, const std::vector<int>& tets,
                     const FieldPair& fields);

}  // namespace emloc
