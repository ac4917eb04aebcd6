// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "emloc/mesh.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace emloc {

double tet_signed_volume(const Vec3& a, const Vec3& b, const Vec3& c,
                         const Vec3& d) {
  Mat3 m;
  m.col(0) = b - a;
  m.col(1) = c - a;
  m.col(2) = d - a;
  return m.determinant() / 6.0;
}

namespace {

// The six axis permutations of the Kuhn subdivision, in a fixed order.
constexpr std::array<std::array<int, 3>, 6> kAxisPerms = {
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

int edge_index(const std::vector<std::array<int, 2>>& edges, int a, int b) {
  std::array<int, 2> key{std::min(a, b), std::max(a, b)};
  auto it = std::lower_bound(edges.begin(), edges.end(), key);
  return static_cast<int>(it - edges.begin());
}

}  // namespace

Mesh build_box_mesh(const Box& bounds, const std::array<int, 3>& divisions) {
  const auto [nx, ny, nz] = divisions;
  if (nx < 1 || ny < 1 || nz < 1)
    throw std::invalid_argument("build_box_mesh: divisions must be >= 1");
  if (!((bounds.hi.array() > bounds.lo.array()).all()))
    throw std::invalid_argument("build_box_mesh: degenerate box");

  Mesh mesh;
  mesh.bounds = bounds;
  mesh.divisions = divisions;

  const Vec3 h = (bounds.hi - bounds.lo).cwiseQuotient(
      Vec3(double(nx), double(ny), double(nz)));

  auto vid = [&](int ix, int iy, int iz) {
    return ix + (nx + 1) * (iy + (ny + 1) * iz);
  };

  mesh.vertices.reserve((nx + 1) * (ny + 1) * (nz + 1));
  for (int iz = 0; iz <= nz; ++iz)
    for (int iy = 0; iy <= ny; ++iy)
      for (int ix = 0; ix <= nx; ++ix)
        mesh.vertices.push_back(bounds.lo +
                                Vec3(ix * h.x(), iy * h.y(), iz * h.z()));

  mesh.tets.reserve(6 * nx * ny * nz);
  for (int cz = 0; cz < nz; ++cz)
    for (int cy = 0; cy < ny; ++cy)
      for (int cx = 0; cx < nx; ++cx)
        for (const auto& perm : kAxisPerms) {
          std::array<int, 3> c{cx, cy, cz};
          std::array<int, 4> tet;
          tet[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[perm[s]];
            tet[s + 1] = vid(c[0], c[1], c[2]);
          }
          const double vol =
              tet_signed_volume(mesh.vertices[tet[0]], mesh.vertices[tet[1]],
                                mesh.vertices[tet[2]], mesh.vertices[tet[3]]);
          if (vol < 0.0) std::swap(tet[1], tet[2]);
          mesh.tets.push_back(tet);
        }

  // Global edge list: unique ascending vertex pairs in lexicographic order.
  std::vector<std::array<int, 2>> pairs;
  pairs.reserve(6 * mesh.tets.size());
  for (const auto& tet : mesh.tets)
    for (const auto& le : Mesh::kLocalEdges) {
      int a = tet[le[0]], b = tet[le[1]];
      pairs.push_back({std::min(a, b), std::max(a, b)});
    }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  mesh.edges = std::move(pairs);

  mesh.tet_edges.resize(mesh.tets.size());
  mesh.tet_edge_signs.resize(mesh.tets.size());
  for (size_t t = 0; t < mesh.tets.size(); ++t) {
    const auto& tet = mesh.tets[t];
    for (int s = 0; s < 6; ++s) {
      int a = tet[Mesh::kLocalEdges[s][0]], b = tet[Mesh::kLocalEdges[s][1]];
      mesh.tet_edges[t][s] = edge_index(mesh.edges, a, b);
      mesh.tet_edge_signs[t][s] = static_cast<signed char>(a < b ? 1 : -1);
    }
  }

  // Face incidence: boundary faces are owned by exactly one tet.
  std::map<std::array<int, 3>, std::pair<int, int>> face_count;  // -> (count, tet)
  for (size_t t = 0; t < mesh.tets.size(); ++t) {
    const auto& tet = mesh.tets[t];
    for (int skip = 0; skip < 4; ++skip) {
      std::array<int, 3> f;
      int m = 0;
      for (int i = 0; i < 4; ++i)
        if (i != skip) f[m++] = tet[i];
      std::sort(f.begin(), f.end());
      auto [it, inserted] = face_count.try_emplace(f, 0, static_cast<int>(t));
      it->second.first += 1;
      if (it->second.first > 2)
        throw std::runtime_error("build_box_mesh: face shared by > 2 tets");
    }
  }
  mesh.num_faces = static_cast<long>(face_count.size());

  const double tol = 1e-12 * bounds.diameter();
  mesh.edge_on_boundary.assign(mesh.edges.size(), 0);
  for (const auto& [f, cnt_tet] : face_count) {
    if (cnt_tet.first != 1) continue;
    BoundaryFace bf;
    bf.v = f;
    bf.tet = cnt_tet.second;

    const auto& tet = mesh.tets[bf.tet];
    int opposite = -1;
    for (int i = 0; i < 4; ++i)
      if (tet[i] != f[0] && tet[i] != f[1] && tet[i] != f[2]) opposite = tet[i];

    const Vec3& a = mesh.vertices[f[0]];
    Vec3 n = (mesh.vertices[f[1]] - a).cross(mesh.vertices[f[2]] - a);
    if (n.dot(a - mesh.vertices[opposite]) < 0.0) n = -n;
    bf.normal = n.normalized();

    for (int axis = 0; axis < 3 && bf.side < 0; ++axis)
      for (int hiside = 0; hiside < 2 && bf.side < 0; ++hiside) {
        const double plane = hiside ? bounds.hi[axis] : bounds.lo[axis];
        bool on = true;
        for (int vi : f) on = on && std::abs(mesh.vertices[vi][axis] - plane) <= tol;
        if (on) bf.side = 2 * axis + hiside;
      }
    if (bf.side < 0)
      throw std::runtime_error("build_box_mesh: boundary face off the box sides");

    bf.edges = {edge_index(mesh.edges, f[0], f[1]),
                edge_index(mesh.edges, f[0], f[2]),
                edge_index(mesh.edges, f[1], f[2])};
    for (int e : bf.edges) mesh.edge_on_boundary[e] = 1;
    mesh.boundary_faces.push_back(bf);
  }

  mesh.tet_volumes.resize(mesh.tets.size());
  mesh.tet_barycenters.resize(mesh.tets.size());
  for (size_t t = 0; t < mesh.tets.size(); ++t) {
    const auto& tet = mesh.tets[t];
    mesh.tet_volumes[t] =
        tet_signed_volume(mesh.vertices[tet[0]], mesh.vertices[tet[1]],
                          mesh.vertices[tet[2]], mesh.vertices[tet[3]]);
    if (mesh.tet_volumes[t] <= 0.0)
      throw std::runtime_error("build_box_mesh: non-positive tet volume");
    mesh.tet_barycenters[t] =
        (mesh.vertices[tet[0]] + mesh.vertices[tet[1]] + mesh.vertices[tet[2]] +
         mesh.vertices[tet[3]]) /
        4.0;
  }

  return mesh;
}

BoundaryPatch tag_boundary_patch(const Mesh& mesh, const RegionSpec& gamma) {
  if (gamma.kind != RegionSpec::Kind::BoundaryPatch)
    throw std::invalid_argument("tag_boundary_patch: spec is not a boundary patch");

  const double tol = 1e-12 * mesh.bounds.diameter();
  BoundaryPatch patch;
  std::vector<char> tagged(mesh.boundary_faces.size(), 0);
  for (size_t i = 0; i < mesh.boundary_faces.size(); ++i) {
    const auto& bf = mesh.boundary_faces[i];
    bool inside = true;
    for (int vi : bf.v) inside = inside && gamma.box.contains(mesh.vertices[vi], tol);
    if (inside) {
      tagged[i] = 1;
      patch.faces.push_back(static_cast<int>(i));
    }
  }
  if (patch.faces.empty())
    throw std::invalid_argument("tag_boundary_patch: empty gamma");

  // An edge is interior to the patch iff no untagged boundary face contains it.
  std::vector<char> excluded(mesh.edges.size(), 0);
  for (size_t i = 0; i < mesh.boundary_faces.size(); ++i)
    if (!tagged[i])
      for (int e : mesh.boundary_faces[i].edges) excluded[e] = 1;

  std::vector<char> seen(mesh.edges.size(), 0);
  for (int fi : patch.faces)
    for (int e : mesh.boundary_faces[fi].edges)
      if (!excluded[e] && !seen[e]) {
        seen[e] = 1;
        patch.interior_edges.push_back(e);
      }
  std::sort(patch.interior_edges.begin(), patch.interior_edges.end());
  return patch;
}

std::vector<int> select_region(const Mesh& mesh, const RegionSpec& region) {
  if (region.kind != RegionSpec::Kind::Volume)
    throw std::invalid_argument("select_region: spec is not volumetric");
  std::vector<int> tets;
  for (int t = 0; t < mesh.num_tets(); ++t)
    if (region.box.contains(mesh.tet_barycenters[t])) tets.push_back(t);
  if (tets.empty()) throw std::invalid_argument("select_region: empty region");
  return tets;
}

}  // namespace emloc
