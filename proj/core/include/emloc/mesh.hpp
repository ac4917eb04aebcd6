// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "emloc/types.hpp"

namespace emloc {

/// Triangle on the domain boundary, owned by exactly one tet.
struct BoundaryFace {
  std::array<int, 3> v;         // vertex indices, ascending
  std::array<int, 3> edges;     // global edge indices of the triangle
  Vec3 normal;                  // unit outward normal
  int side = -1;                // box side: 0/1 = x lo/hi, 2/3 = y, 4/5 = z
  int tet = -1;                 // owning tet
};

/// Structured tetrahedral mesh of an axis-aligned box.
///
/// Every cell of the (nx, ny, nz) grid is split into six tets sharing the
/// cell diagonal from the low corner to the high corner, so edge counts and
/// orientations are reproducible. Edges are stored as ascending vertex pairs;
/// the pair (i, j) with i < j is oriented from i to j everywhere.
struct Mesh {
  Box bounds;
  std::array<int, 3> divisions{};

  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;               // positive signed volume
  std::vector<std::array<int, 2>> edges;              // ascending pairs, sorted
  std::vector<std::array<int, 6>> tet_edges;          // global edge per local slot
  std::vector<std::array<signed char, 6>> tet_edge_signs;
  std::vector<BoundaryFace> boundary_faces;
  std::vector<char> edge_on_boundary;                 // contained in a boundary face

  std::vector<double> tet_volumes;
  std::vector<Vec3> tet_barycenters;

  long num_faces = 0;  // all faces, interior and boundary

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_tets() const { return static_cast<int>(tets.size()); }

  /// Local edge slots of a tet, as (local vertex, local vertex) pairs.
  static constexpr std::array<std::array<int, 2>, 6> kLocalEdges = {
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
};

/// Axis-aligned region used to carve out subdomains and boundary patches.
struct RegionSpec {
  enum class Kind { Volume, BoundaryPatch };
  Box box;
  Kind kind = Kind::Volume;
};

struct BoundaryPatch {
  std::vector<int> faces;           // indices into mesh.boundary_faces
  std::vector<int> interior_edges;  // boundary edges all of whose faces are tagged
};

Mesh build_box_mesh(const Box& bounds, const std::array<int, 3>& divisions);

/// Tags the boundary faces lying inside the patch box and reports the edges
/// interior to the patch (edges whose every boundary face is tagged). Throws
/// if no face is tagged.
BoundaryPatch tag_boundary_patch(const Mesh& mesh, const RegionSpec& gamma);

/// Tets whose barycenter lies in the region box. Throws if empty.
std::vector<int> select_region(const Mesh& mesh, const RegionSpec& region);

/// Signed volume of the tet spanned by (a, b, c, d).
double tet_signed_volume(const Vec3& a, const Vec3& b, const Vec3& c,
                         const Vec3& d);

}  // namespace emloc
