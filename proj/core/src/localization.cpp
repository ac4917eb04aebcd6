// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "emloc/localization.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <random>
#include <stdexcept>

namespace emloc {

namespace {

void require_hermitian(const Eigen::MatrixXcd& g, const char* name) {
  const double scale = std::max(g.norm(), 1e-300);
  if ((g - g.adjoint()).norm() > 1e-10 * scale)
    throw std::invalid_argument(std::string("max_ratio: ") + name +
                                " is not Hermitian");
}

void fix_phase(Eigen::VectorXcd& v) {
  int imax = 0;
  double best = -1.0;
  for (int i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      imax = i;
    }
  if (best > 0.0) v *= std::conj(v[imax]) / std::abs(v[imax]);
  v.normalize();
}

}  // namespace

RatioResult max_ratio(const Eigen::MatrixXcd& g_m, const Eigen::MatrixXcd& g_d,
                      double delta) {
  if (g_m.rows() != g_m.cols() || g_d.rows() != g_d.cols() ||
      g_m.rows() != g_d.rows())
    throw std::invalid_argument("max_ratio: Gram matrices must be square and equal-sized");
  require_hermitian(g_m, "G_M");
  require_hermitian(g_d, "G_D");
  if (delta < 0.0) throw std::invalid_argument("max_ratio: negative shift");

  const Eigen::MatrixXcd b =
      g_d + delta * Eigen::MatrixXcd::Identity(g_d.rows(), g_d.cols());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
      g_m, b, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error(
        "max_ratio: generalized eigensolver failed (is G_D + delta I positive "
        "definite?)");

  RatioResult out;
  const int top = static_cast<int>(eig.eigenvalues().size()) - 1;
  out.lambda = eig.eigenvalues()[top];
  out.f = eig.eigenvectors().col(top);
  fix_phase(out.f);
  return out;
}

std::vector<Eigen::VectorXcd> localized_sequence(const Eigen::VectorXcd& f_opt,
                                                 const Eigen::MatrixXcd& m_d,
                                                 int length) {
  if (length < 1) throw std::invalid_argument("localized_sequence: length < 1");
  const double d_norm = (m_d * f_opt).norm();
  std::vector<Eigen::VectorXcd> seq;
  seq.reserve(length);
  for (int l = 1; l <= length; ++l) {
    if (d_norm > 0.0)
      seq.push_back(f_opt / (double(l) * d_norm));
    else
      seq.push_back(double(l) * f_opt);  // shielded energy identically zero
  }
  return seq;
}

RangeInclusionResult verify_range_lemma(const Eigen::MatrixXcd& a1,
                                        const Eigen::MatrixXcd& a2, int trials,
                                        unsigned seed) {
  if (a1.cols() != a2.cols())
    throw std::invalid_argument("verify_range_lemma: column count mismatch");
  const int n = static_cast<int>(a1.cols());

  Eigen::MatrixXcd stacked(a2.rows() + a1.rows(), n);
  stacked.topRows(a2.rows()) = a2;
  stacked.bottomRows(a1.rows()) = a1;

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd_stacked(stacked);
  const double sigma_max = svd_stacked.singularValues().size()
                               ? svd_stacked.singularValues()[0]
                               : 0.0;
  const double tol = 1e-10 * sigma_max;

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd_a2(a2, Eigen::ComputeFullV);
  auto rank_at = [tol](const Eigen::VectorXd& sv) {
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv[i] > tol) ++r;
    return r;
  };
  const int rank_stacked = rank_at(svd_stacked.singularValues());
  const int rank_a2 = rank_at(svd_a2.singularValues());

  RangeInclusionResult out;
  out.bounded = (rank_stacked == rank_a2);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd x(n);
    for (int i = 0; i < n; ++i) x[i] = Cplx(gauss(rng), gauss(rng));
    x.normalize();
    const double n2 = (a2 * x).norm();
    if (n2 > 0.0)
      out.max_probed_ratio = std::max(out.max_probed_ratio, (a1 * x).norm() / n2);
  }

  if (out.bounded) {
    // A feasible constant: the spectral norm of A1 pinv(A2).
    const auto& sv = svd_a2.singularValues();
    Eigen::JacobiSVD<Eigen::MatrixXcd> full(a2, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXcd pinv = Eigen::MatrixXcd::Zero(n, a2.rows());
    for (int i = 0; i < sv.size(); ++i)
      if (sv[i] > tol)
        pinv += (1.0 / sv[i]) * full.matrixV().col(i) *
                full.matrixU().col(i).adjoint();
    out.constant = (a1 * pinv).jacobiSvd().singularValues()[0];
    return out;
  }

  // Witness from the null-space gap: the direction in ker(A2) that A1 sees
  // most strongly.
  const int rank2 = rank_a2;
  const Eigen::MatrixXcd null_basis = svd_a2.matrixV().rightCols(n - rank2);
  const Eigen::MatrixXcd a1n = a1 * null_basis;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd_gap(a1n, Eigen::ComputeFullV);
  Eigen::VectorXcd x = null_basis * svd_gap.matrixV().col(0);
  x.normalize();
  double a1x = (a1 * x).norm();
  if (a1x < 0.1 && a1x > 0.0) x *= 0.1 / a1x * (1.0 + 1e-9);
  out.witness = x;
  out.witness_a1_norm = (a1 * x).norm();
  out.witness_a2_norm = (a2 * x).norm();
  return out;
}

double default_gram_shift(const Eigen::MatrixXcd& g_d) {
  const double n = static_cast<double>(g_d.rows());
  return 1e-12 * g_d.trace().real() / std::max(n, 1.0);
}

LocalizationResult run_localization(const MeasurementContext& ctx,
                                    const std::vector<int>& m_region,
                                    const std::vector<int>& d_region,
                                    int length, double delta) {
  {
    std::vector<int> overlap;
    std::set_intersection(m_region.begin(), m_region.end(), d_region.begin(),
                          d_region.end(), std::back_inserter(overlap));
    if (!overlap.empty() && m_region != d_region)
      throw std::invalid_argument("run_localization: M and D regions overlap");
  }

  const auto ops = assemble_measurement_matrices(ctx, {m_region, d_region});
  const MeasurementOperator& m_m = ops[0];
  const MeasurementOperator& m_d = ops[1];

  const Eigen::MatrixXcd g_m = m_m.gram();
  const Eigen::MatrixXcd g_d = m_d.gram();

  LocalizationResult out;
  out.delta = delta >= 0.0 ? delta : default_gram_shift(g_d);

  const RatioResult top = max_ratio(g_m, g_d, out.delta);
  out.lambda_shifted = top.lambda;
  out.f_opt = top.f;

  const Eigen::VectorXcd ym = m_m.matrix * top.f;
  const Eigen::VectorXcd yd = m_d.matrix * top.f;
  const double em = ym.squaredNorm();
  const double ed = yd.squaredNorm();
  out.lambda = ed > 0.0 ? em / ed : std::numeric_limits<double>::infinity();

  out.sequence = localized_sequence(top.f, m_d.matrix, length);
  for (int l = 1; l <= length; ++l) {
    // Matrix route by exact homogeneity: the sequence member is a scalar
    // multiple of the optimizer, so one operator application serves all l.
    const double scale2 = ed > 0.0 ? 1.0 / (double(l) * l * ed)
                                   : double(l) * l;
    out.energy_m_matrix.push_back(em * scale2);
    out.energy_d_matrix.push_back(ed * scale2);
    const Eigen::VectorXcd& f = out.sequence[l - 1];
    const FieldPair fields =
        solve(ctx.mesh, ctx.mu, ctx.system, ctx.fact, f);
    out.energy_m.push_back(region_energy(ctx.mesh, m_region, fields));
    out.energy_d.push_back(region_energy(ctx.mesh, d_region, fields));
  }
  return out;
}

}  // namespace emloc
