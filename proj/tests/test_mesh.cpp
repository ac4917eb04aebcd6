// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstring>
#include <map>
#include <set>

#include "emloc/mesh.hpp"

using namespace emloc;

namespace {

const Box kUnitCube{Vec3(0, 0, 0), Vec3(1, 1, 1)};

RegionSpec volume(const Vec3& lo, const Vec3& hi) {
  return RegionSpec{Box{lo, hi}, RegionSpec::Kind::Volume};
}

RegionSpec patch(const Vec3& lo, const Vec3& hi) {
  return RegionSpec{Box{lo, hi}, RegionSpec::Kind::BoundaryPatch};
}

}  // namespace

TEST_SUITE("mesh") {

TEST_CASE("single-cell unit cube has the expected entity counts") {
  const Mesh mesh = build_box_mesh(kUnitCube, {1, 1, 1});
  CHECK(mesh.num_vertices() == 8);
  CHECK(mesh.num_edges() == 19);
  CHECK(mesh.num_tets() == 6);
  CHECK(mesh.boundary_faces.size() == 12);
}

TEST_CASE("2x2x2 cube has the expected counts") {
  const Mesh mesh = build_box_mesh(kUnitCube, {2, 2, 2});
  CHECK(mesh.num_vertices() == 27);
  CHECK(mesh.num_tets() == 48);
}

TEST_CASE("Euler characteristic of the triangulated ball is one") {
  for (auto div : {std::array<int, 3>{1, 1, 1}, {2, 2, 2}, {3, 2, 1}}) {
    const Mesh mesh = build_box_mesh(kUnitCube, div);
    const long v = mesh.num_vertices(), e = mesh.num_edges();
    const long f = mesh.num_faces, t = mesh.num_tets();
    CHECK(v - e + f - t == 1);
  }
}

TEST_CASE("every tet has positive volume, one sixth of its cell") {
  const Box box{Vec3(-1, 0, 2), Vec3(1, 3, 2.5)};
  const Mesh mesh = build_box_mesh(box, {3, 4, 2});
  const double cell_vol = 2.0 / 3.0 * 3.0 / 4.0 * 0.5 / 2.0;
  double total = 0.0;
  for (double v : mesh.tet_volumes) {
    CHECK(v > 0.0);
    CHECK(v == doctest::Approx(cell_vol / 6.0).epsilon(1e-12));
    total += v;
  }
  const double box_vol = box.extent().prod();
  CHECK(std::abs(total - box_vol) <= 1e-12 * box_vol);
}

TEST_CASE("interior faces are shared by exactly two tets") {
  const Mesh mesh = build_box_mesh(kUnitCube, {2, 2, 2});
  std::map<std::array<int, 3>, int> count;
  for (const auto& tet : mesh.tets)
    for (int skip = 0; skip < 4; ++skip) {
      std::array<int, 3> f;
      int m = 0;
      for (int i = 0; i < 4; ++i)
        if (i != skip) f[m++] = tet[i];
      std::sort(f.begin(), f.end());
      ++count[f];
    }
  std::set<std::array<int, 3>> boundary;
  for (const auto& bf : mesh.boundary_faces) boundary.insert(bf.v);
  for (const auto& [f, c] : count) {
    CHECK((c == 1 || c == 2));
    CHECK(boundary.count(f) == size_t(c == 1));
  }
}

TEST_CASE("edge orientation is global and ascending") {
  const Mesh mesh = build_box_mesh(kUnitCube, {2, 1, 1});
  for (const auto& e : mesh.edges) CHECK(e[0] < e[1]);
  for (int t = 0; t < mesh.num_tets(); ++t)
    for (int s = 0; s < 6; ++s) {
      const auto [p, q] = Mesh::kLocalEdges[s];
      const int a = mesh.tets[t][p], b = mesh.tets[t][q];
      const auto& edge = mesh.edges[mesh.tet_edges[t][s]];
      CHECK(edge[0] == std::min(a, b));
      CHECK(edge[1] == std::max(a, b));
      CHECK(mesh.tet_edge_signs[t][s] == (a < b ? 1 : -1));
    }
}

TEST_CASE("rebuilding gives bitwise-identical meshes") {
  const Mesh a = build_box_mesh(kUnitCube, {3, 2, 2});
  const Mesh b = build_box_mesh(kUnitCube, {3, 2, 2});
  REQUIRE(a.vertices.size() == b.vertices.size());
  CHECK(std::memcmp(a.vertices.data(), b.vertices.data(),
                    a.vertices.size() * sizeof(Vec3)) == 0);
  CHECK(a.tets == b.tets);
  CHECK(a.edges == b.edges);
  CHECK(std::memcmp(a.tet_volumes.data(), b.tet_volumes.data(),
                    a.tet_volumes.size() * sizeof(double)) == 0);
}

TEST_CASE("halving the mesh width multiplies the tet count by eight") {
  for (int n : {1, 2, 3}) {
    const Mesh coarse = build_box_mesh(kUnitCube, {n, n, n});
    const Mesh fine = build_box_mesh(kUnitCube, {2 * n, 2 * n, 2 * n});
    CHECK(fine.num_tets() == 8 * coarse.num_tets());
  }
}

TEST_CASE("degenerate input is rejected") {
  CHECK_THROWS_AS(build_box_mesh(kUnitCube, {0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(build_box_mesh(Box{Vec3(0, 0, 0), Vec3(1, 0, 1)}, {1, 1, 1}),
                  std::invalid_argument);
}

TEST_CASE("boundary normals point outward") {
  const Mesh mesh = build_box_mesh(kUnitCube, {2, 2, 2});
  for (const auto& bf : mesh.boundary_faces) {
    Vec3 centroid = Vec3::Zero();
    for (int v : bf.v) centroid += mesh.vertices[v] / 3.0;
    const Vec3 outward = centroid - Vec3(0.5, 0.5, 0.5);
    CHECK(bf.normal.dot(outward) > 0.0);
    CHECK(bf.normal.norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("tagging a full cube face selects 2 n^2 triangles") {
  const Mesh mesh = build_box_mesh(kUnitCube, {2, 2, 2});
  const BoundaryPatch p =
      tag_boundary_patch(mesh, patch(Vec3(0, 0, 0), Vec3(1, 1, 0)));
  CHECK(p.faces.size() == 8);
  for (int fi : p.faces) CHECK(mesh.boundary_faces[fi].side == 4);
  // The rim of the face belongs to the side walls too, so only the 2 + 2
  // inner axis edges and the 4 diagonals survive.
  CHECK(p.interior_edges.size() == 8);
  for (int e : p.interior_edges)
    for (int v : mesh.edges[e]) CHECK(mesh.vertices[v].z() == 0.0);
}

TEST_CASE("patch touching no boundary vertex raises empty gamma") {
  const Mesh mesh = build_box_mesh(kUnitCube, {2, 2, 2});
  CHECK_THROWS_WITH_AS(
      tag_boundary_patch(mesh, patch(Vec3(0.1, 0.1, 0.9), Vec3(0.2, 0.2, 0.95))),
      doctest::Contains("empty gamma"), std::invalid_argument);
}

TEST_CASE("tagging the whole boundary makes every boundary edge interior") {
  const Mesh mesh = build_box_mesh(kUnitCube, {2, 2, 2});
  const BoundaryPatch p =
      tag_boundary_patch(mesh, patch(Vec3(0, 0, 0), Vec3(1, 1, 1)));
  CHECK(p.faces.size() == mesh.boundary_faces.size());
  size_t boundary_edges = 0;
  for (char b : mesh.edge_on_boundary) boundary_edges += b;
  CHECK(p.interior_edges.size() == boundary_edges);
}

TEST_CASE("select_region by barycenter") {
  const Mesh mesh = build_box_mesh(kUnitCube, {2, 2, 2});
  CHECK(select_region(mesh, volume(Vec3(0, 0, 0), Vec3(1, 1, 1))).size() ==
        size_t(mesh.num_tets()));
  CHECK(select_region(mesh, volume(Vec3(0, 0, 0), Vec3(0.5, 0.5, 0.5))).size() ==
        6);
  CHECK_THROWS_WITH_AS(
      select_region(mesh, volume(Vec3(-1, -1, -1), Vec3(-0.5, -0.5, -0.5))),
      doctest::Contains("empty region"), std::invalid_argument);
}

TEST_CASE("region selection is deterministic and sorted") {
  const Mesh mesh = build_box_mesh(kUnitCube, {3, 3, 3});
  const auto a = select_region(mesh, volume(Vec3(0, 0, 0), Vec3(0.7, 1, 1)));
  const auto b = select_region(mesh, volume(Vec3(0, 0, 0), Vec3(0.7, 1, 1)));
  CHECK(a == b);
  CHECK(std::is_sorted(a.begin(), a.end()));
}

}  // TEST_SUITE
