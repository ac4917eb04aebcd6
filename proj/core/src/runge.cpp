// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "emloc/runge.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace emloc {

namespace {

RungeFit fit_with_gram(const MeasurementOperator& op,
                       const Eigen::MatrixXcd& gram,
                       const Eigen::VectorXcd& rhs,
                       const Eigen::VectorXcd& target, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("runge_fit: alpha must be > 0");
  const int n = static_cast<int>(gram.rows());
  const Eigen::MatrixXcd a =
      gram + alpha * Eigen::MatrixXcd::Identity(n, n);
  RungeFit fit;
  fit.alpha = alpha;
  fit.f = Eigen::LDLT<Eigen::MatrixXcd>(a).solve(rhs);
  fit.f_norm = fit.f.norm();
  const double t_norm = target.norm();
  fit.residual = t_norm > 0.0 ? (op.matrix * fit.f - target).norm() / t_norm : 0.0;
  return fit;
}

}  // namespace

RungeFit runge_fit(const MeasurementOperator& op, const Eigen::VectorXcd& target,
                   double alpha) {
  if (target.size() != op.matrix.rows())
    throw std::invalid_argument("runge_fit: target size mismatch");
  return fit_with_gram(op, op.gram(), op.matrix.adjoint() * target, target,
                       alpha);
}

RungeSweep runge_sweep(const MeasurementOperator& op,
                       const Eigen::VectorXcd& target,
                       const std::vector<double>& alphas) {
  if (alphas.empty()) throw std::invalid_argument("runge_sweep: empty alpha list");
  for (size_t i = 0; i + 1 < alphas.size(); ++i)
    if (!(alphas[i] > alphas[i + 1]))
      throw std::invalid_argument("runge_sweep: alphas must be strictly decreasing");
  if (target.size() != op.matrix.rows())
    throw std::invalid_argument("runge_sweep: target size mismatch");

  const Eigen::MatrixXcd gram = op.gram();
  const Eigen::VectorXcd rhs = op.matrix.adjoint() * target;

  RungeSweep sweep;
  sweep.fits.reserve(alphas.size());
  for (double a : alphas)
    sweep.fits.push_back(fit_with_gram(op, gram, rhs, target, a));

  sweep.selected = 0;
  for (size_t i = 1; i < sweep.fits.size(); ++i) {
    const double prev = sweep.fits[i - 1].residual;
    if (prev > 0.0 && (prev - sweep.fits[i].residual) / prev >= 0.01)
      sweep.selected = static_cast<int>(i);
  }
  return sweep;
}

std::vector<double> geometric_alphas(double first, double last, int count) {
  if (!(first > 0.0) || !(last > 0.0) || !(first > last) || count < 2)
    throw std::invalid_argument("geometric_alphas: need first > last > 0, count >= 2");
  std::vector<double> alphas(count);
  const double q = std::pow(last / first, 1.0 / (count - 1));
  double a = first;
  for (int i = 0; i < count; ++i, a *= q) alphas[i] = a;
  alphas.back() = last;
  return alphas;
}

RungeLocalizationReport runge_implies_localization(
    const MeasurementContext& ctx, const std::vector<int>& m_region,
    const std::vector<int>& d_region, int length,
    const std::vector<double>& alphas, const PlaneWave& wave) {
  wave.validate();
  {
    std::vector<int> overlap;
    std::set_intersection(m_region.begin(), m_region.end(), d_region.begin(),
                          d_region.end(), std::back_inserter(overlap));
    if (!overlap.empty())
      throw std::invalid_argument("runge_implies_localization: M and D overlap");
  }

  RungeLocalizationReport rep;
  rep.o_region.reserve(m_region.size() + d_region.size());
  std::merge(m_region.begin(), m_region.end(), d_region.begin(), d_region.end(),
             std::back_inserter(rep.o_region));

  const auto ops = assemble_measurement_matrices(
      ctx, {rep.o_region, m_region, d_region});
  const MeasurementOperator& m_o = ops[0];
  const MeasurementOperator& m_m = ops[1];
  const MeasurementOperator& m_d = ops[2];

  // Target: the plane wave on M, zero on the interior of D.
  std::vector<char> in_m(ctx.mesh.num_tets(), 0);
  for (int t : m_region) in_m[t] = 1;
  std::vector<Vec3c> e(rep.o_region.size(), Vec3c::Zero());
  std::vector<Vec3c> h(rep.o_region.size(), Vec3c::Zero());
  for (size_t i = 0; i < rep.o_region.size(); ++i)
    if (in_m[rep.o_region[i]]) {
      const auto [ew, hw] =
          plane_wave_fields(wave, ctx.mesh.tet_barycenters[rep.o_region[i]]);
      e[i] = ew;
      h[i] = hw;
    }
  rep.target = target_observation(ctx.mesh, rep.o_region, e, h);

  rep.sweep = runge_sweep(m_o, rep.target, alphas);
  const Eigen::VectorXcd& best = rep.sweep.fits[rep.sweep.selected].f;

  const Eigen::VectorXcd ym = m_m.matrix * best;
  const Eigen::VectorXcd yd = m_d.matrix * best;
  const double em = ym.squaredNorm();
  const double ed = yd.squaredNorm();
  rep.ratio = ed > 0.0 ? em / ed : std::numeric_limits<double>::infinity();

  const Eigen::MatrixXcd g_m = m_m.gram();
  const Eigen::MatrixXcd g_d = m_d.gram();
  const RatioResult eigen_top = max_ratio(g_m, g_d, default_gram_shift(g_d));
  const double em_top = (m_m.matrix * eigen_top.f).squaredNorm();
  const double ed_top = (m_d.matrix * eigen_top.f).squaredNorm();
  rep.lambda_eigen = ed_top > 0.0 ? em_top / ed_top
                                  : std::numeric_limits<double>::infinity();

  rep.sequence = localized_sequence(best, m_d.matrix, length);
  for (int l = 1; l <= length; ++l) {
    const double scale2 = ed > 0.0 ? 1.0 / (double(l) * l * ed)
                                   : double(l) * l;
    rep.energy_m_matrix.push_back(em * scale2);
    rep.energy_d_matrix.push_back(ed * scale2);
    const Eigen::VectorXcd& f = rep.sequence[l - 1];
    const FieldPair fields =
        solve(ctx.mesh, ctx.mu, ctx.system, ctx.fact, f);
    rep.energy_m.push_back(region_energy(ctx.mesh, m_region, fields));
    rep.energy_d.push_back(region_energy(ctx.mesh, d_region, fields));
  }
  return rep;
}

}  // namespace emloc
