// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "emloc/measurement.hpp"

using namespace emloc;

namespace {

const Box kUnitCube{Vec3(0, 0, 0), Vec3(1, 1, 1)};

static void BM_BuildBoxMesh(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Mesh mesh = build_box_mesh(kUnitCube, {n, n, n});
    benchmark::DoNotOptimize(mesh.edges.data());
  }
}
BENCHMARK(BM_BuildBoxMesh)->Arg(4)->Arg(8)->Arg(12);

static void BM_Assemble(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Mesh mesh = build_box_mesh(kUnitCube, {n, n, n});
  const MaterialField id = MaterialField::identity();
  const DofMap dm = DofMap::cavity(mesh);
  for (auto _ : state) {
    AssembledSystem sys = assemble(mesh, id, id, 1.0, dm);
    benchmark::DoNotOptimize(sys.S.valuePtr());
  }
}
BENCHMARK(BM_Assemble)->Arg(4)->Arg(8);

static void BM_FactorizeAndSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Mesh mesh = build_box_mesh(kUnitCube, {n, n, n});
  const MaterialField id = MaterialField::identity();
  const BoundaryPatch patch = tag_boundary_patch(
      mesh, RegionSpec{kUnitCube, RegionSpec::Kind::BoundaryPatch});
  const DofMap dm = DofMap::build(mesh, patch.interior_edges);
  const AssembledSystem sys = assemble(mesh, id, id, 1.0, dm);
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(dm.num_control());
  f[0] = 1.0;
  for (auto _ : state) {
    Factorization fact(sys);
    FieldPair sol = solve(mesh, id, sys, fact, f);
    benchmark::DoNotOptimize(sol.e.data());
  }
}
BENCHMARK(BM_FactorizeAndSolve)->Arg(4)->Arg(6);

static void BM_MeasurementMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Mesh mesh = build_box_mesh(kUnitCube, {n, n, n});
  const MaterialField id = MaterialField::identity();
  const BoundaryPatch patch = tag_boundary_patch(
      mesh, RegionSpec{Box{Vec3(0, 0, 0), Vec3(1, 1, 0)},
                       RegionSpec::Kind::BoundaryPatch});
  const DofMap dm = DofMap::build(mesh, patch.interior_edges);
  const AssembledSystem sys = assemble(mesh, id, id, 1.0, dm);
  const Factorization fact(sys);
  const MeasurementContext ctx{mesh, id, id, sys, fact};
  const auto region = select_region(
      mesh, RegionSpec{Box{Vec3(0.55, 0.55, 0.55), Vec3(1, 1, 1)},
                       RegionSpec::Kind::Volume});
  for (auto _ : state) {
    MeasurementOperator op = assemble_measurement_matrix(ctx, region);
    benchmark::DoNotOptimize(op.matrix.data());
  }
}
BENCHMARK(BM_MeasurementMatrix)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
