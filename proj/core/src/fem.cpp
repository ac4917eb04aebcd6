// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "emloc/fem.hpp"

#include <stdexcept>

namespace emloc {

TetGeometry TetGeometry::from_vertices(const Vec3& a, const Vec3& b,
                                       const Vec3& c, const Vec3& d) {
  TetGeometry g;
  g.x = {a, b, c, d};
  Mat3 m;
  m.col(0) = b - a;
  m.col(1) = c - a;
  m.col(2) = d - a;
  const double det = m.determinant();
  if (!(det > 0.0))
    throw std::invalid_argument("TetGeometry: degenerate or inverted tet");
  g.volume = det / 6.0;
  const Mat3 inv = m.inverse();
  for (int i = 1; i <= 3; ++i) g.grad_lambda[i] = inv.row(i - 1);
  g.grad_lambda[0] = -(g.grad_lambda[1] + g.grad_lambda[2] + g.grad_lambda[3]);
  return g;
}

TetGeometry TetGeometry::from_mesh(const Mesh& mesh, int tet) {
  const auto& t = mesh.tets[tet];
  return from_vertices(mesh.vertices[t[0]], mesh.vertices[t[1]],
                       mesh.vertices[t[2]], mesh.vertices[t[3]]);
}

LocalMatrices local_matrices(const TetGeometry& tet, const Mat3& eps,
                             const Mat3& mu) {
  LocalMatrices out;
  const Mat3 mu_inv = mu.inverse();
  std::array<Vec3, 6> curls;
  for (int s = 0; s < 6; ++s) curls[s] = tet.whitney_curl(s);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      out.curl_curl(a, b) = tet.volume * (mu_inv * curls[a]).dot(curls[b]);

  // int lambda_p lambda_q = V (1 + delta_pq) / 20, and
  // w_a . eps w_b expands into four such products.
  Eigen::Matrix4d g;  // g(p,q) = grad lambda_p . eps grad lambda_q
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      g(p, q) = (eps * tet.grad_lambda[p]).dot(tet.grad_lambda[q]);
  auto ill = [&](int p, int q) {
    return tet.volume * (p == q ? 2.0 : 1.0) / 20.0;
  };
  for (int a = 0; a < 6; ++a) {
    const auto [i, j] = Mesh::kLocalEdges[a];
    for (int b = 0; b < 6; ++b) {
      const auto [s, t] = Mesh::kLocalEdges[b];
      out.mass(a, b) = g(j, t) * ill(i, s) - g(j, s) * ill(i, t) -
                       g(i, t) * ill(j, s) + g(i, s) * ill(j, t);
    }
  }
  return out;
}

DofMap DofMap::build(const Mesh& mesh, const std::vector<int>& control_edges) {
  DofMap dm;
  dm.num_edges = mesh.num_edges();
  dm.edge_class.assign(dm.num_edges, kFree);
  for (int e = 0; e < dm.num_edges; ++e)
    if (mesh.edge_on_boundary[e]) dm.edge_class[e] = kConstrained;
  for (int e : control_edges) {
    if (e < 0 || e >= dm.num_edges || !mesh.edge_on_boundary[e])
      throw std::invalid_argument("DofMap: control edge is not a boundary edge");
    dm.edge_class[e] = kControl;
  }
  dm.edge_local.assign(dm.num_edges, -1);
  for (int e = 0; e < dm.num_edges; ++e) {
    switch (dm.edge_class[e]) {
      case kFree:
        dm.edge_local[e] = static_cast<int>(dm.free_edges.size());
        dm.free_edges.push_back(e);
        break;
      case kControl:
        dm.edge_local[e] = static_cast<int>(dm.control_edges.size());
        dm.control_edges.push_back(e);
        break;
      default:
        dm.edge_local[e] = static_cast<int>(dm.constrained_edges.size());
        dm.constrained_edges.push_back(e);
    }
  }
  return dm;
}

DofMap DofMap::cavity(const Mesh& mesh) { return build(mesh, {}); }

AssembledSystem assemble(const Mesh& mesh, const MaterialField& eps,
                         const MaterialField& mu, double k,
                         const DofMap& dofmap) {
  if (!(k > 0.0)) throw std::invalid_argument("assemble: wavenumber must be > 0");
  check_ellipticity(eps);
  check_ellipticity(mu);

  const int n = mesh.num_edges();
  std::vector<Eigen::Triplet<double>> ts, tm;
  ts.reserve(36 * mesh.num_tets());
  tm.reserve(36 * mesh.num_tets());

  for (int t = 0; t < mesh.num_tets(); ++t) {
    const TetGeometry g = TetGeometry::from_mesh(mesh, t);
    const Vec3& bc = mesh.tet_barycenters[t];
    const LocalMatrices loc =
        local_matrices(g, eval_material(eps, bc), eval_material(mu, bc));
    const auto& ge = mesh.tet_edges[t];
    const auto& sg = mesh.tet_edge_signs[t];
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        const double s = double(sg[a]) * double(sg[b]);
        ts.emplace_back(ge[a], ge[b], s * loc.curl_curl(a, b));
        tm.emplace_back(ge[a], ge[b], s * loc.mass(a, b));
      }
  }

  AssembledSystem sys;
  sys.S.resize(n, n);
  sys.M_eps.resize(n, n);
  sys.S.setFromTriplets(ts.begin(), ts.end());
  sys.M_eps.setFromTriplets(tm.begin(), tm.end());
  sys.k = k;
  sys.dofmap = dofmap;
  return sys;
}

Eigen::VectorXcd assemble_rhs(const Mesh& mesh, const std::vector<Vec3c>& J,
                              const std::vector<Vec3c>& K,
                              const MaterialField& mu, double k) {
  const size_t nt = mesh.tets.size();
  if ((!J.empty() && J.size() != nt) || (!K.empty() && K.size() != nt))
    throw std::invalid_argument("assemble_rhs: source size mismatch");

  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(mesh.num_edges());
  const Cplx ik = kImag * k;
  for (size_t t = 0; t < nt; ++t) {
    const bool has_j = !J.empty() && J[t].squaredNorm() > 0.0;
    const bool has_k = !K.empty() && K[t].squaredNorm() > 0.0;
    if (!has_j && !has_k) continue;
    const TetGeometry g = TetGeometry::from_mesh(mesh, static_cast<int>(t));
    Vec3c mu_inv_k = Vec3c::Zero();
    if (has_k) {
      const Mat3 mu_inv = eval_material(mu, mesh.tet_barycenters[t]).inverse();
      mu_inv_k = mu_inv.cast<Cplx>() * K[t];
    }
    const auto& ge = mesh.tet_edges[t];
    const auto& sg = mesh.tet_edge_signs[t];
    for (int s = 0; s < 6; ++s) {
      Cplx v = 0.0;
      // Real-valued test functions, so no conjugation enters the load terms.
      if (has_j) v += ik * g.whitney_integral(s).cast<Cplx>().dot(J[t]);
      if (has_k) v += g.volume * g.whitney_curl(s).cast<Cplx>().dot(mu_inv_k);
      rhs[ge[s]] += double(sg[s]) * v;
    }
  }
  return rhs;
}

Eigen::VectorXcd trace_lift(const DofMap& dofmap, const Eigen::VectorXcd& f) {
  if (f.size() != dofmap.num_control())
    throw std::invalid_argument("trace_lift: datum size mismatch");
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(dofmap.num_edges);
  for (int j = 0; j < f.size(); ++j) full[dofmap.control_edges[j]] = f[j];
  return full;
}

std::vector<Vec3c> recover_H(const Mesh& mesh, const MaterialField& mu,
                             double k, const Eigen::VectorXcd& e,
                             const std::vector<Vec3c>* K) {
  std::vector<Vec3c> h(mesh.tets.size());
  const Cplx factor = -kImag / k;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const TetGeometry g = TetGeometry::from_mesh(mesh, t);
    const auto& ge = mesh.tet_edges[t];
    const auto& sg = mesh.tet_edge_signs[t];
    Vec3c curl = Vec3c::Zero();
    for (int s = 0; s < 6; ++s)
      curl += double(sg[s]) * e[ge[s]] * g.whitney_curl(s).cast<Cplx>();
    if (K) curl -= (*K)[t];
    const Mat3 mu_inv = eval_material(mu, mesh.tet_barycenters[t]).inverse();
    h[t] = factor * (mu_inv.cast<Cplx>() * curl);
  }
  return h;
}

Vec6c local_coefficients(const Mesh& mesh, int tet, const Eigen::VectorXcd& e) {
  Vec6c loc;
  const auto& ge = mesh.tet_edges[tet];
  const auto& sg = mesh.tet_edge_signs[tet];
  for (int s = 0; s < 6; ++s) loc[s] = double(sg[s]) * e[ge[s]];
  return loc;
}

double region_energy(const Mesh& mesh, const std::vector<int>& tets,
                     const FieldPair& fields) {
  if (tets.empty()) throw std::invalid_argument("region_energy: empty tet set");
  double energy = 0.0;
  const Mat3 id = Mat3::Identity();
  for (int t : tets) {
    const TetGeometry g = TetGeometry::from_mesh(mesh, t);
    const Mat6 mass = local_matrices(g, id, id).mass;
    const Vec6c loc = local_coefficients(mesh, t, fields.e);
    energy += loc.dot(mass.cast<Cplx>() * loc).real();
    if (!fields.h.empty()) energy += g.volume * fields.h[t].squaredNorm();
  }
  return energy;
}

}  // namespace emloc
