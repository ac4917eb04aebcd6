// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/SVD>

#include "emloc/measurement.hpp"
#include "emloc/oracles.hpp"
#include "support/test_oracles.hpp"
#include "support/test_setup.hpp"

using namespace emloc;

namespace {

std::vector<Vec3c> random_densities(std::mt19937_64& gen, size_t n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec3c> v(n);
  for (auto& x : v)
    for (int m = 0; m < 3; ++m) x[m] = Cplx(gauss(gen), gauss(gen));
  return v;
}

}  // namespace

TEST_SUITE("measurement") {

TEST_CASE("zero datum maps to zero region fields") {
  auto p = testing::standard_problem(2);
  const RegionFields rf =
      apply_L(p.ctx(), p.m_region, Eigen::VectorXcd::Zero(p.dofmap.num_control()));
  for (const auto& e : rf.e_local) CHECK(e.norm() == 0.0);
  for (const auto& h : rf.h) CHECK(h.norm() == 0.0);
}

TEST_CASE("apply_L is linear") {
  auto p = testing::standard_problem(2);
  auto gen = testing::rng(71);
  const int nc = p.dofmap.num_control();
  const Eigen::VectorXcd f = testing::random_complex_vector(gen, nc);
  const Eigen::VectorXcd g = testing::random_complex_vector(gen, nc);
  const Cplx alpha(0.7, -1.3);

  const auto ctx = p.ctx();
  const Eigen::VectorXcd lhs =
      observe(p.mesh, apply_L(ctx, p.m_region, alpha * f + g));
  const Eigen::VectorXcd rhs =
      alpha * observe(p.mesh, apply_L(ctx, p.m_region, f)) +
      observe(p.mesh, apply_L(ctx, p.m_region, g));
  CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
}

TEST_CASE("full-boundary plane-wave datum reproduces the wave on the region") {
  const PlaneWave pw{1.0, Vec3(0, 0, 1), Vec3c(1, 0, 0)};
  auto error_at = [&](int n) {
    auto p = testing::standard_problem(n, pw.k, /*full_boundary=*/true);
    const Eigen::VectorXcd f = exact_trace(
        p.mesh, p.dofmap,
        [&](const Vec3& x) { return plane_wave_fields(pw, x).first; });
    const FieldPair sol = solve(p.mesh, p.mu, p.system, *p.fact, f);
    // Relative error of (E, H) on the shielded-corner region.
    double err2 = 0.0, ref2 = 0.0;
    for (int t : p.d_region) {
      const auto [ew, hw] = plane_wave_fields(pw, p.mesh.tet_barycenters[t]);
      err2 += p.mesh.tet_volumes[t] * (sol.h[t] - hw).squaredNorm();
      ref2 += p.mesh.tet_volumes[t] * hw.squaredNorm();
    }
    FieldPair diff = sol;
    return std::sqrt(err2 / ref2) +
           relative_l2_error(p.mesh, diff.e, [&](const Vec3& x) {
             return plane_wave_fields(pw, x).first;
           });
  };
  const double e2 = error_at(2), e4 = error_at(4);
  CHECK(e4 <= 0.75 * e2);
}

TEST_CASE("the operator norm reproduces the region energy") {
  auto p = testing::standard_problem(3);
  const MeasurementOperator op = assemble_measurement_matrix(p.ctx(), p.m_region);
  auto gen = testing::rng(73);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXcd f =
        testing::random_complex_vector(gen, p.dofmap.num_control());
    const double via_matrix = (op.matrix * f).squaredNorm();
    const FieldPair sol = solve(p.mesh, p.mu, p.system, *p.fact, f);
    const double via_energy = region_energy(p.mesh, p.m_region, sol);
    CHECK(via_matrix == doctest::Approx(via_energy).epsilon(1e-10));
  }
}

TEST_CASE("columns equal observed unit solves") {
  auto p = testing::standard_problem(2);
  const auto ctx = p.ctx();
  const MeasurementOperator op = assemble_measurement_matrix(ctx, p.d_region);
  for (int j : {0, p.dofmap.num_control() / 2, p.dofmap.num_control() - 1}) {
    Eigen::VectorXcd ej = Eigen::VectorXcd::Zero(p.dofmap.num_control());
    ej[j] = 1.0;
    const Eigen::VectorXcd col = observe(p.mesh, apply_L(ctx, p.d_region, ej));
    CHECK((op.matrix.col(j) - col).norm() <= 1e-12 * (1.0 + col.norm()));
  }
}

TEST_CASE("the Gram matrix is Hermitian positive semidefinite") {
  auto p = testing::standard_problem(2);
  const MeasurementOperator op = assemble_measurement_matrix(p.ctx(), p.m_region);
  const Eigen::MatrixXcd g = op.gram();
  CHECK((g - g.adjoint()).norm() <= 1e-12 * g.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g, Eigen::EigenvaluesOnly);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * g.norm());
}

TEST_CASE("adjoint identity holds for random data") {
  auto p = testing::standard_problem(3);
  const auto ctx = p.ctx();
  const MeasurementOperator op = assemble_measurement_matrix(ctx, p.d_region);
  auto gen = testing::rng(79);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXcd f =
        testing::random_complex_vector(gen, p.dofmap.num_control());
    const auto J = random_densities(gen, p.d_region.size());
    const auto K = random_densities(gen, p.d_region.size());

    const Eigen::VectorXcd w = weighted_observation(p.mesh, p.d_region, J, K);
    const Cplx lhs = w.dot(op.matrix * f);  // <L f, (J,K)> in L2(O)
    const Eigen::VectorXcd g = apply_L_adjoint(ctx, p.d_region, J, K);
    const Cplx rhs = g.dot(f);              // <f, L*(J,K)> on the control set
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
  }
}

TEST_CASE("adjoint through the PDE equals the matrix transpose route") {
  auto p = testing::standard_problem(3);
  const auto ctx = p.ctx();
  const MeasurementOperator op = assemble_measurement_matrix(ctx, p.m_region);
  auto gen = testing::rng(83);
  for (int trial = 0; trial < 3; ++trial) {
    const auto J = random_densities(gen, p.m_region.size());
    const auto K = random_densities(gen, p.m_region.size());
    const Eigen::VectorXcd pde = apply_L_adjoint(ctx, p.m_region, J, K);
    const Eigen::VectorXcd mat = apply_L_adjoint(p.mesh, op, J, K);
    CHECK((pde - mat).norm() <= 1e-8 * mat.norm());
  }
}

TEST_CASE("zero densities give the zero adjoint") {
  auto p = testing::standard_problem(2);
  const std::vector<Vec3c> zero(p.m_region.size(), Vec3c::Zero());
  const Eigen::VectorXcd g = apply_L_adjoint(p.ctx(), p.m_region, zero, zero);
  CHECK(g.norm() == 0.0);
}

TEST_CASE("weighted observation represents the L2 pairing") {
  auto p = testing::standard_problem(2);
  auto gen = testing::rng(89);
  const auto J = random_densities(gen, p.m_region.size());
  const auto K = random_densities(gen, p.m_region.size());
  const Eigen::VectorXcd f =
      testing::random_complex_vector(gen, p.dofmap.num_control());
  const FieldPair sol = solve(p.mesh, p.mu, p.system, *p.fact, f);

  // Direct quadrature of int_O E . conj(J) + H . conj(K).
  Cplx direct = 0.0;
  for (size_t i = 0; i < p.m_region.size(); ++i) {
    const int t = p.m_region[i];
    const TetGeometry g = TetGeometry::from_mesh(p.mesh, t);
    const Vec6c loc = local_coefficients(p.mesh, t, sol.e);
    for (int s = 0; s < 6; ++s) {
      // int_t w_s dx . conj(J)
      Cplx v = 0.0;
      for (int m = 0; m < 3; ++m)
        v += g.whitney_integral(s)[m] * std::conj(J[i][m]);
      direct += loc[s] * v;
    }
    for (int m = 0; m < 3; ++m)
      direct += g.volume * sol.h[t][m] * std::conj(K[i][m]);
  }

  RegionFields rf;
  rf.tets = p.m_region;
  for (int t : p.m_region) {
    rf.e_local.push_back(local_coefficients(p.mesh, t, sol.e));
    rf.h.push_back(sol.h[t]);
  }
  const Eigen::VectorXcd w = weighted_observation(p.mesh, p.m_region, J, K);
  const Cplx via_obs = w.dot(observe(p.mesh, rf));
  CHECK(std::abs(via_obs - direct) <= 1e-12 * std::abs(direct));
}

TEST_CASE("smallest singular value stays positive (injectivity shadow)") {
  for (int n : {2, 3}) {
    auto p = testing::standard_problem(n);
    const MeasurementOperator op = assemble_measurement_matrix(p.ctx(), p.d_region);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op.matrix);
    const double smin = svd.singularValues().minCoeff();
    INFO("divisions ", n, ": sigma_min = ", smin);
    CHECK(smin > 0.0);
  }
}

TEST_CASE("nested regions give nested energies") {
  auto p = testing::standard_problem(3);
  const std::vector<int> small = select_region(
      p.mesh, RegionSpec{Box{Vec3(0.15, 0.15, 0), Vec3(0.85, 0.85, 0.2)},
                         RegionSpec::Kind::Volume});
  const auto ops = assemble_measurement_matrices(p.ctx(), {small, p.m_region});
  auto gen = testing::rng(97);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXcd f =
        testing::random_complex_vector(gen, p.dofmap.num_control());
    CHECK((ops[0].matrix * f).norm() <=
          (ops[1].matrix * f).norm() * (1.0 + 1e-12));
  }
}

TEST_CASE("column assembly is independent of the worker count") {
  auto p = testing::standard_problem(2);
#ifdef _WIN32
  return;
#else
  setenv("EMLOC_THREADS", "1", 1);
  const MeasurementOperator serial = assemble_measurement_matrix(p.ctx(), p.m_region);
  setenv("EMLOC_THREADS", "4", 1);
  const MeasurementOperator parallel = assemble_measurement_matrix(p.ctx(), p.m_region);
  unsetenv("EMLOC_THREADS");
  CHECK((serial.matrix - parallel.matrix).norm() == 0.0);
#endif
}

}  // TEST_SUITE
