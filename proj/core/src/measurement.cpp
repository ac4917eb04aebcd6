// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "emloc/measurement.hpp"

#include <Eigen/Cholesky>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace emloc {

namespace {

using Mat6c = Eigen::Matrix<Cplx, 6, 6>;

struct TetObserver {
  TetGeometry geom;
  Mat6 chol_l;  // lower Cholesky factor of the local unit mass block
  double sqrt_volume = 0.0;
  Mat3 mu_inv;
};

TetObserver make_observer(const Mesh& mesh, const MaterialField& mu, int tet) {
  TetObserver ob;
  ob.geom = TetGeometry::from_mesh(mesh, tet);
  const Mat3 id = Mat3::Identity();
  const Mat6 mass = local_matrices(ob.geom, id, id).mass;
  Eigen::LLT<Mat6> llt(mass);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("observation: local mass Cholesky failed");
  ob.chol_l = llt.matrixL();
  ob.sqrt_volume = std::sqrt(ob.geom.volume);
  ob.mu_inv = eval_material(mu, mesh.tet_barycenters[tet]).inverse();
  return ob;
}

std::vector<TetObserver> make_observers(const Mesh& mesh,
                                        const MaterialField& mu,
                                        const std::vector<int>& region) {
  std::vector<TetObserver> obs;
  obs.reserve(region.size());
  for (int t : region) obs.push_back(make_observer(mesh, mu, t));
  return obs;
}

void check_sources(const std::vector<int>& region, const std::vector<Vec3c>& J,
                   const std::vector<Vec3c>& K) {
  if (J.size() != region.size() || K.size() != region.size())
    throw std::invalid_argument("measurement: source size must match region");
}

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("EMLOC_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

RegionFields apply_L(const MeasurementContext& ctx,
                     const std::vector<int>& region,
                     const Eigen::VectorXcd& f) {
  const FieldPair fields =
      solve(ctx.mesh, ctx.mu, ctx.system, ctx.fact, f);
  RegionFields out;
  out.tets = region;
  out.e_local.reserve(region.size());
  out.h.reserve(region.size());
  for (int t : region) {
    out.e_local.push_back(local_coefficients(ctx.mesh, t, fields.e));
    out.h.push_back(fields.h[t]);
  }
  return out;
}

Eigen::VectorXcd observe(const Mesh& mesh, const RegionFields& fields) {
  Eigen::VectorXcd obs(9 * fields.tets.size());
  for (size_t i = 0; i < fields.tets.size(); ++i) {
    const TetGeometry g = TetGeometry::from_mesh(mesh, fields.tets[i]);
    const Mat3 id = Mat3::Identity();
    Eigen::LLT<Mat6> llt(local_matrices(g, id, id).mass);
    const Mat6 lt = Mat6(llt.matrixL()).transpose();
    obs.segment<6>(9 * i) = lt.cast<Cplx>() * fields.e_local[i];
    obs.segment<3>(9 * i + 6) = std::sqrt(g.volume) * fields.h[i];
  }
  return obs;
}

Eigen::VectorXcd weighted_observation(const Mesh& mesh,
                                      const std::vector<int>& region,
                                      const std::vector<Vec3c>& J,
                                      const std::vector<Vec3c>& K) {
  check_sources(region, J, K);
  Eigen::VectorXcd w(9 * region.size());
  for (size_t i = 0; i < region.size(); ++i) {
    const TetGeometry g = TetGeometry::from_mesh(mesh, region[i]);
    const Mat3 id = Mat3::Identity();
    Eigen::LLT<Mat6> llt(local_matrices(g, id, id).mass);
    // v_s = int_t w_s . J, so that pairing obs(E) against w gives the L2
    // product of E with conj(J).
    Vec6c v;
    for (int s = 0; s < 6; ++s)
      v[s] = g.whitney_integral(s).cast<Cplx>().dot(J[i]);
    const Mat6c l = Mat6(llt.matrixL()).cast<Cplx>();
    w.segment<6>(9 * i) = l.triangularView<Eigen::Lower>().solve(v);
    w.segment<3>(9 * i + 6) = std::sqrt(g.volume) * K[i];
  }
  return w;
}

Eigen::VectorXcd target_observation(const Mesh& mesh,
                                    const std::vector<int>& region,
                                    const std::vector<Vec3c>& e,
                                    const std::vector<Vec3c>& h) {
  check_sources(region, e, h);
  Eigen::VectorXcd t(9 * region.size());
  for (size_t i = 0; i < region.size(); ++i) {
    const TetGeometry g = TetGeometry::from_mesh(mesh, region[i]);
    const Mat3 id = Mat3::Identity();
    Eigen::LLT<Mat6> llt(local_matrices(g, id, id).mass);
    // Constant fields lie in the local space; coefficients are circulations.
    Vec6c c;
    for (int s = 0; s < 6; ++s) {
      const auto [p, q] = Mesh::kLocalEdges[s];
      c[s] = (g.x[q] - g.x[p]).cast<Cplx>().dot(e[i]);
    }
    t.segment<6>(9 * i) = Mat6(llt.matrixL()).transpose().cast<Cplx>() * c;
    t.segment<3>(9 * i + 6) = std::sqrt(g.volume) * h[i];
  }
  return t;
}

Eigen::VectorXcd apply_L_adjoint(const MeasurementContext& ctx,
                                 const std::vector<int>& region,
                                 const std::vector<Vec3c>& J,
                                 const std::vector<Vec3c>& K) {
  check_sources(region, J, K);
  const double k = ctx.system.k;

  std::vector<Vec3c> j_ext(ctx.mesh.tets.size(), Vec3c::Zero());
  std::vector<Vec3c> k_ext(ctx.mesh.tets.size(), Vec3c::Zero());
  for (size_t i = 0; i < region.size(); ++i) {
    j_ext[region[i]] = J[i];
    k_ext[region[i]] = K[i];
  }

  // Sign-flipped adjoint system: the load is assembled with wavenumber -k;
  // the system matrix is even in k, so the forward factorization is reused.
  // The returned datum is the weak-form tangential trace of the adjoint H.
  const Eigen::VectorXcd rho = assemble_rhs(ctx.mesh, j_ext, k_ext, ctx.mu, -k);
  const Eigen::VectorXcd e0 = ctx.fact.solve_free(ctx.fact.restrict_free(rho));

  const Eigen::VectorXcd rho_c = ctx.fact.restrict_control(rho);
  return (kImag / k) * (rho_c - ctx.fact.b_control_free() * e0);
}

Eigen::VectorXcd apply_L_adjoint(const Mesh& mesh,
                                 const MeasurementOperator& op,
                                 const std::vector<Vec3c>& J,
                                 const std::vector<Vec3c>& K) {
  return op.matrix.adjoint() * weighted_observation(mesh, op.region, J, K);
}

std::vector<MeasurementOperator> assemble_measurement_matrices(
    const MeasurementContext& ctx,
    const std::vector<std::vector<int>>& regions) {
  const DofMap& dm = ctx.fact.dofmap();
  const int nc = dm.num_control();
  if (nc == 0)
    throw std::invalid_argument("measurement: control set is empty");

  // One blocked solve serves every column: the control basis is real, so
  // the free responses are real as well.
  const Eigen::MatrixXd rhs = -Eigen::MatrixXd(ctx.fact.b_free_control());
  const Eigen::MatrixXd e_free = ctx.fact.solve_free_many(rhs);

  std::vector<MeasurementOperator> ops(regions.size());
  std::vector<std::vector<TetObserver>> observers(regions.size());
  for (size_t r = 0; r < regions.size(); ++r) {
    ops[r].region = regions[r];
    ops[r].matrix.resize(9 * regions[r].size(), nc);
    ops[r].k = ctx.system.k;
    observers[r] = make_observers(ctx.mesh, ctx.mu, regions[r]);
  }

  const Cplx h_factor = -kImag / ctx.system.k;
  auto fill_columns = [&](int begin, int end) {
    Eigen::VectorXcd e_full(dm.num_edges);
    for (int j = begin; j < end; ++j) {
      e_full.setZero();
      for (int i = 0; i < dm.num_free(); ++i)
        e_full[dm.free_edges[i]] = e_free(i, j);
      e_full[dm.control_edges[j]] = 1.0;
      for (size_t r = 0; r < regions.size(); ++r) {
        auto col = ops[r].matrix.col(j);
        for (size_t i = 0; i < regions[r].size(); ++i) {
          const int t = regions[r][i];
          const TetObserver& ob = observers[r][i];
          const Vec6c loc = local_coefficients(ctx.mesh, t, e_full);
          col.segment<6>(9 * i) = ob.chol_l.transpose().cast<Cplx>() * loc;
          Vec3c curl = Vec3c::Zero();
          for (int s = 0; s < 6; ++s)
            curl += loc[s] * ob.geom.whitney_curl(s).cast<Cplx>();
          col.segment<3>(9 * i + 6) =
              ob.sqrt_volume * (h_factor * (ob.mu_inv.cast<Cplx>() * curl));
        }
      }
    }
  };

  const int workers = std::min(worker_count(), nc);
  if (workers <= 1) {
    fill_columns(0, nc);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (nc + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(nc, begin + chunk);
      if (begin < end) pool.emplace_back(fill_columns, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return ops;
}

MeasurementOperator assemble_measurement_matrix(const MeasurementContext& ctx,
                                                const std::vector<int>& region) {
  return assemble_measurement_matrices(ctx, {region})[0];
}

}  // namespace emloc
