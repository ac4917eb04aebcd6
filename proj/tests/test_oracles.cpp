// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "emloc/oracles.hpp"
#include "support/test_oracles.hpp"

using namespace emloc;

namespace {
const Box kUnitCube{Vec3(0, 0, 0), Vec3(1, 1, 1)};
}

TEST_SUITE("oracles") {

TEST_CASE("plane wave at the origin") {
  const PlaneWave pw{1.0, Vec3(0, 0, 1), Vec3c(1, 0, 0)};
  const auto [e, h] = plane_wave_fields(pw, Vec3::Zero());
  CHECK((e - Vec3c(1, 0, 0)).norm() == 0.0);
  CHECK((h - Vec3c(0, 1, 0)).norm() == 0.0);
}

TEST_CASE("plane wave invariants are enforced") {
  CHECK_THROWS_AS((PlaneWave{1.0, Vec3(0, 0, 2), Vec3c(1, 0, 0)}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((PlaneWave{1.0, Vec3(0, 0, 1), Vec3c(0, 0.5, 1)}.validate()),
                  std::invalid_argument);
  CHECK_NOTHROW((PlaneWave{2.5, Vec3(1, 2, 2).normalized(),
                           Vec3c(Cplx(2, -2), Cplx(-1, 1), Cplx(0, 0))}
                     .validate()));
}

TEST_CASE("plane wave satisfies both Maxwell equations by finite differences") {
  const PlaneWave pw{1.7, Vec3(1, -2, 0.5).normalized(),
                     Vec3c(Cplx(0.5, 1.0), Cplx(0.25, 0.5), Cplx(0, 0))};
  // Make the polarization transverse before use.
  Vec3c p = pw.p;
  p -= pw.d.cast<Cplx>() * pw.d.cast<Cplx>().dot(p);
  const PlaneWave wave{pw.k, pw.d, p};
  wave.validate();

  auto gen = testing::rng(51);
  const double h = 1e-5;
  auto e_func = [&](const Vec3& x) { return plane_wave_fields(wave, x).first; };
  auto h_func = [&](const Vec3& x) { return plane_wave_fields(wave, x).second; };
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 x = testing::random_point(gen, kUnitCube);
    const auto [e, hh] = plane_wave_fields(wave, x);
    const Vec3c r1 = testing::central_curl(e_func, x, h) - kImag * wave.k * hh;
    const Vec3c r2 = testing::central_curl(h_func, x, h) + kImag * wave.k * e;
    CHECK(r1.norm() <= 1e-6);
    CHECK(r2.norm() <= 1e-6);
  }
}

TEST_CASE("plane wave is periodic along the propagation direction") {
  const PlaneWave pw{2.2, Vec3(0, 1, 0), Vec3c(0, 0, 1)};
  const Vec3 x(0.3, 0.1, 0.9);
  const Vec3 shifted = x + (2.0 * M_PI / pw.k) * pw.d;
  const auto [e0, h0] = plane_wave_fields(pw, x);
  const auto [e1, h1] = plane_wave_fields(pw, shifted);
  CHECK((e1 - e0).norm() <= 1e-12 * e0.norm());
  CHECK((h1 - h0).norm() <= 1e-12 * h0.norm());
}

TEST_CASE("a plane wave generates vanishing manufactured sources in vacuum") {
  const Mesh mesh = build_box_mesh(kUnitCube, {2, 2, 2});
  const PlaneWave pw{1.0, Vec3(0, 0, 1), Vec3c(1, 0, 0)};
  const ManufacturedSources src =
      manufactured_sources(mesh, MaterialField::identity(),
                           MaterialField::identity(), pw.k, plane_wave_field(pw));
  for (const auto& j : src.J) CHECK(j.norm() <= 1e-8);
  for (const auto& k : src.K) CHECK(k.norm() == 0.0);
}

TEST_CASE("manufactured sources of E = (z^2, 0, 0) match the symbolic value") {
  const Mesh mesh = build_box_mesh(kUnitCube, {2, 2, 2});
  const double k = 1.0;
  ManufacturedField field;
  field.value = [](const Vec3& x) { return Vec3c(Cplx(x.z() * x.z(), 0), 0, 0); };
  field.curl = [](const Vec3& x) { return Vec3c(0, Cplx(2.0 * x.z(), 0), 0); };
  const ManufacturedSources src = manufactured_sources(
      mesh, MaterialField::identity(), MaterialField::identity(), k, field);
  // H = -(i/k)(0, 2z, 0), curl H = (2i/k, 0, 0), J = curl H + ik E.
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const double z = mesh.tet_barycenters[t].z();
    const Vec3c expected(2.0 * kImag / k + kImag * k * z * z, 0, 0);
    CHECK((src.J[t] - expected).norm() <= 1e-6);
  }
}

TEST_CASE("manufactured sources are linear in the field") {
  const Mesh mesh = build_box_mesh(kUnitCube, {1, 1, 1});
  const double k = 1.4;
  ManufacturedField a;
  a.value = [](const Vec3& x) { return Vec3c(Cplx(x.y(), 0), 0, Cplx(0, x.x())); };
  a.curl = [](const Vec3&) { return Vec3c(0, Cplx(0, -1), Cplx(-1, 0)); };
  ManufacturedField b;
  b.value = [](const Vec3& x) { return Vec3c(0, Cplx(x.z() * x.z(), 0), 0); };
  b.curl = [](const Vec3& x) { return Vec3c(Cplx(-2.0 * x.z(), 0), 0, 0); };
  ManufacturedField sum;
  sum.value = [&](const Vec3& x) { return Vec3c(a.value(x) + b.value(x)); };
  sum.curl = [&](const Vec3& x) { return Vec3c(a.curl(x) + b.curl(x)); };

  const MaterialField id = MaterialField::identity();
  const auto sa = manufactured_sources(mesh, id, id, k, a);
  const auto sb = manufactured_sources(mesh, id, id, k, b);
  const auto ss = manufactured_sources(mesh, id, id, k, sum);
  for (size_t t = 0; t < mesh.tets.size(); ++t)
    CHECK((ss.J[t] - sa.J[t] - sb.J[t]).norm() <=
          1e-12 * (1.0 + ss.J[t].norm()));
}

TEST_CASE("library curl helper agrees with the independent stencil") {
  auto field = [](const Vec3& x) {
    return Vec3c(Cplx(std::sin(x.y()), 0), Cplx(0, x.z() * x.x()),
                 Cplx(x.x() * x.x(), -x.y()));
  };
  auto gen = testing::rng(61);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec3 x = testing::random_point(gen, kUnitCube);
    const Vec3c lib = fd_curl(field, x, 1e-5);
    const Vec3c ind = testing::central_curl(field, x, 2e-6);
    CHECK((lib - ind).norm() <= 1e-7);
  }
}

}  // TEST_SUITE
