// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "emloc/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace emloc {

namespace {

// 4-point Gauss-Legendre nodes/weights on [0, 1].
constexpr std::array<double, 4> kGauss4X = {
    0.06943184420297371, 0.33000947820757187, 0.6699905217924281,
    0.9305681557970262};
constexpr std::array<double, 4> kGauss4W = {
    0.17392742256872693, 0.3260725774312731, 0.3260725774312731,
    0.17392742256872693};

// Keast 14-point rule, degree 5, positive weights; weights sum to one.
struct TetRulePoint {
  Eigen::Vector4d lambda;
  double weight;
};

std::vector<TetRulePoint> keast_degree5() {
  std::vector<TetRulePoint> pts;
  auto add_sym4 = [&](double a, double b, double w) {
    for (int i = 0; i < 4; ++i) {
      Eigen::Vector4d l = Eigen::Vector4d::Constant(b);
      l[i] = a;
      pts.push_back({l, w});
    }
  };
  auto add_sym6 = [&](double c, double d, double w) {
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        Eigen::Vector4d l = Eigen::Vector4d::Constant(d);
        l[i] = c;
        l[j] = c;
        pts.push_back({l, w});
      }
  };
  add_sym4(0.0673422422100983, 0.3108859192633005, 0.1126879257180162);
  add_sym4(0.7217942490673264, 0.0927352503108912, 0.0734930431163619);
  add_sym6(0.4544962958743506, 0.0455037041256494, 0.0425460207770812);
  return pts;
}

const std::vector<TetRulePoint>& tet_rule() {
  static const std::vector<TetRulePoint> rule = keast_degree5();
  return rule;
}

}  // namespace

void PlaneWave::validate() const {
  if (std::abs(d.norm() - 1.0) > 1e-14)
    throw std::invalid_argument("PlaneWave: direction must be a unit vector");
  const Cplx pd = d.cast<Cplx>().dot(p);  // d real, so this is sum d_i p_i
  if (std::abs(pd) > 1e-14 * p.norm())
    throw std::invalid_argument("PlaneWave: polarization must be transverse");
  if (!(k > 0.0)) throw std::invalid_argument("PlaneWave: k must be > 0");
}

std::pair<Vec3c, Vec3c> plane_wave_fields(const PlaneWave& pw, const Vec3& x) {
  const Cplx phase = std::exp(kImag * pw.k * pw.d.dot(x));
  const Vec3c e = pw.p * phase;
  const Vec3c h = cross_c(pw.d.cast<Cplx>(), pw.p) * phase;
  return {e, h};
}

ManufacturedField plane_wave_field(const PlaneWave& pw) {
  pw.validate();
  ManufacturedField f;
  f.value = [pw](const Vec3& x) { return plane_wave_fields(pw, x).first; };
  f.curl = [pw](const Vec3& x) {
    // curl E = ik d x p exp(ik d.x)
    const Cplx phase = std::exp(kImag * pw.k * pw.d.dot(x));
    return Vec3c(kImag * pw.k * phase * cross_c(pw.d.cast<Cplx>(), pw.p));
  };
  return f;
}

ManufacturedField anisotropic_manufactured_field(double interface_x) {
  // E = (y^2 z, 0, y^2 x + y (x - x0)^2). The y-component of curl E is
  // -2 y (x - x0), vanishing on the interface plane, so the derived H has a
  // continuous tangential trace there and no sheet current arises.
  const double x0 = interface_x;
  ManufacturedField f;
  f.value = [x0](const Vec3& p) {
    const double x = p.x(), y = p.y(), z = p.z();
    return Vec3c(Cplx(y * y * z, 0), Cplx(0, 0),
                 Cplx(y * y * x + y * (x - x0) * (x - x0), 0));
  };
  f.curl = [x0](const Vec3& p) {
    const double x = p.x(), y = p.y();
    return Vec3c(Cplx(2.0 * y * x + (x - x0) * (x - x0), 0),
                 Cplx(-2.0 * y * (x - x0), 0), Cplx(-2.0 * y * p.z(), 0));
  };
  return f;
}

Vec3c fd_curl(const std::function<Vec3c(const Vec3&)>& f, const Vec3& x,
              double step) {
  std::array<Vec3c, 3> dfx;  // dfx[j] = d f / d x_j
  for (int j = 0; j < 3; ++j) {
    Vec3 xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    dfx[j] = (f(xp) - f(xm)) / (2.0 * step);
  }
  return Vec3c(dfx[1].z() - dfx[2].y(), dfx[2].x() - dfx[0].z(),
               dfx[0].y() - dfx[1].x());
}

ManufacturedSources manufactured_sources(const Mesh& mesh,
                                         const MaterialField& eps,
                                         const MaterialField& mu, double k,
                                         const ManufacturedField& e_exact,
                                         double fd_step_rel) {
  const double step = fd_step_rel * mesh.bounds.diameter();
  auto h_exact = [&](const Vec3& x) {
    const Mat3 mu_inv = eval_material(mu, x).inverse();
    return Vec3c((-kImag / k) * (mu_inv.cast<Cplx>() * e_exact.curl(x)));
  };

  ManufacturedSources src;
  src.J.resize(mesh.tets.size());
  src.K.assign(mesh.tets.size(), Vec3c::Zero());
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const Vec3& bc = mesh.tet_barycenters[t];
    const Mat3 eps_t = eval_material(eps, bc);
    src.J[t] = fd_curl(h_exact, bc, step) +
               kImag * k * (eps_t.cast<Cplx>() * e_exact.value(bc));
  }
  return src;
}

Eigen::VectorXcd exact_trace(const Mesh& mesh, const DofMap& dofmap,
                             const std::function<Vec3c(const Vec3&)>& field) {
  Eigen::VectorXcd f(dofmap.num_control());
  for (int j = 0; j < dofmap.num_control(); ++j) {
    const auto& edge = mesh.edges[dofmap.control_edges[j]];
    const Vec3& a = mesh.vertices[edge[0]];
    const Vec3& b = mesh.vertices[edge[1]];
    const Vec3 tangent = b - a;  // circulation from lower to higher index
    Cplx circ = 0.0;
    for (int q = 0; q < 4; ++q) {
      const Vec3 x = a + kGauss4X[q] * tangent;
      circ += kGauss4W[q] * tangent.cast<Cplx>().dot(field(x));
    }
    f[j] = circ;
  }
  return f;
}

double relative_l2_error(const Mesh& mesh, const Eigen::VectorXcd& e,
                         const std::function<Vec3c(const Vec3&)>& exact) {
  double err2 = 0.0, ref2 = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const TetGeometry g = TetGeometry::from_mesh(mesh, t);
    const Vec6c loc = local_coefficients(mesh, t, e);
    for (const auto& pt : tet_rule()) {
      Vec3 x = Vec3::Zero();
      for (int i = 0; i < 4; ++i) x += pt.lambda[i] * g.x[i];
      Vec3c eh = Vec3c::Zero();
      for (int s = 0; s < 6; ++s)
        eh += loc[s] * g.whitney_at(s, pt.lambda).cast<Cplx>();
      const Vec3c ex = exact(x);
      err2 += pt.weight * g.volume * (eh - ex).squaredNorm();
      ref2 += pt.weight * g.volume * ex.squaredNorm();
    }
  }
  return std::sqrt(err2 / ref2);
}

}  // namespace emloc
