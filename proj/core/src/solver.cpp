// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "emloc/solver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace emloc {

namespace {

SpMat extract_block(const SpMat& full, const std::vector<int>& rows,
                    const std::vector<int>& cols) {
  std::vector<int> row_of(full.rows(), -1), col_of(full.cols(), -1);
  for (size_t i = 0; i < rows.size(); ++i) row_of[rows[i]] = static_cast<int>(i);
  for (size_t j = 0; j < cols.size(); ++j) col_of[cols[j]] = static_cast<int>(j);
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < full.outerSize(); ++k)
    for (SpMat::InnerIterator it(full, k); it; ++it) {
      const int r = row_of[it.row()], c = col_of[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  SpMat out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Eigen::VectorXd deterministic_seed(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.37 * std::sin(1.0 + i);
  v.normalize();
  return v;
}

}  // namespace

Factorization::Factorization(const AssembledSystem& system, SolveOptions options)
    : dofmap_(system.dofmap), options_(options), k_(system.k) {
  const SpMat b = system.b_mat();
  b_ff_ = extract_block(b, dofmap_.free_edges, dofmap_.free_edges);
  b_fc_ = extract_block(b, dofmap_.free_edges, dofmap_.control_edges);
  b_cf_ = extract_block(b, dofmap_.control_edges, dofmap_.free_edges);
  b_cc_ = extract_block(b, dofmap_.control_edges, dofmap_.control_edges);

  lu_ = std::make_unique<Eigen::SparseLU<SpMat>>();
  lu_->compute(b_ff_);
  if (lu_->info() != Eigen::Success) throw NearResonanceError(0.0);

  const int n = static_cast<int>(b_ff_.rows());
  if (n > 0) {
    // Power iteration for |lambda|_max, inverse iteration for |lambda|_min;
    // the free block is symmetric so these estimate the singular values.
    Eigen::VectorXd x = deterministic_seed(n);
    for (int it = 0; it < 30; ++it) {
      x = b_ff_ * x;
      const double nrm = x.norm();
      if (nrm == 0.0) break;
      x /= nrm;
    }
    sigma_max_ = (b_ff_ * x).norm();

    Eigen::VectorXd y = deterministic_seed(n);
    double nu = 0.0;
    for (int it = 0; it < 30; ++it) {
      y = lu_->solve(y);
      nu = y.norm();
      if (!(nu > 0.0) || !std::isfinite(nu)) {
        throw NearResonanceError(0.0);
      }
      y /= nu;
    }
    sigma_min_ = 1.0 / nu;
    if (sigma_max_ > 0.0 && sigma_min_ / sigma_max_ < options_.sv_threshold)
      throw NearResonanceError(sigma_min_ / sigma_max_);
  }
}

Eigen::VectorXcd Factorization::solve_free(const Eigen::VectorXcd& rhs_free) const {
  const Eigen::VectorXd re = lu_->solve(rhs_free.real());
  const Eigen::VectorXd im = lu_->solve(rhs_free.imag());
  Eigen::VectorXcd x(rhs_free.size());
  x.real() = re;
  x.imag() = im;

  const double rhs_norm = rhs_free.norm();
  if (rhs_norm > 0.0) {
    const double resid = (b_ff_ * x - rhs_free).norm() / rhs_norm;
    if (!(resid <= options_.residual_tol))
      throw NearResonanceError(sigma_min_rel());
  }
  return x;
}

Eigen::MatrixXd Factorization::solve_free_many(const Eigen::MatrixXd& rhs_free) const {
  return lu_->solve(rhs_free);
}

Eigen::VectorXcd Factorization::restrict_free(const Eigen::VectorXcd& full) const {
  Eigen::VectorXcd out(dofmap_.num_free());
  for (int i = 0; i < dofmap_.num_free(); ++i) out[i] = full[dofmap_.free_edges[i]];
  return out;
}

Eigen::VectorXcd Factorization::restrict_control(const Eigen::VectorXcd& full) const {
  Eigen::VectorXcd out(dofmap_.num_control());
  for (int i = 0; i < dofmap_.num_control(); ++i)
    out[i] = full[dofmap_.control_edges[i]];
  return out;
}

Eigen::VectorXcd Factorization::control_residual(const Eigen::VectorXcd& e_full) const {
  const Eigen::VectorXcd e_f = restrict_free(e_full);
  const Eigen::VectorXcd e_c = restrict_control(e_full);
  return b_cf_ * e_f + b_cc_ * e_c;
}

FieldPair solve(const Mesh& mesh, const MaterialField& mu,
                const AssembledSystem& system, const Factorization& fact,
                const Eigen::VectorXcd& f, const std::vector<Vec3c>& J,
                const std::vector<Vec3c>& K) {
  const DofMap& dm = fact.dofmap();
  Eigen::VectorXcd full = trace_lift(dm, f);

  Eigen::VectorXcd rhs_f = Eigen::VectorXcd::Zero(dm.num_free());
  if (!J.empty() || !K.empty()) {
    const Eigen::VectorXcd rhs = assemble_rhs(mesh, J, K, mu, system.k);
    rhs_f = fact.restrict_free(rhs);
  }
  if (f.size() > 0) rhs_f -= fact.b_free_control() * f;

  const Eigen::VectorXcd e0 = fact.solve_free(rhs_f);
  for (int i = 0; i < dm.num_free(); ++i) full[dm.free_edges[i]] = e0[i];

  FieldPair out;
  out.e = std::move(full);
  out.h = recover_H(mesh, mu, system.k, out.e, K.empty() ? nullptr : &K);
  return out;
}

ResonanceResult find_resonances(const AssembledSystem& system, double k_max,
                                double kernel_tol_factor) {
  if (!(k_max > 0.0))
    throw std::invalid_argument("find_resonances: k_max must be > 0");
  // Free edges of any dofmap are exactly the interior edges, which is the
  // f = 0 cavity constraint set.
  const auto& interior = system.dofmap.free_edges;
  const Eigen::MatrixXd s =
      Eigen::MatrixXd(extract_block(system.S, interior, interior));
  const Eigen::MatrixXd m =
      Eigen::MatrixXd(extract_block(system.M_eps, interior, interior));

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      s, m, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("find_resonances: eigensolver failed");

  ResonanceResult out;
  const double kernel_tol = kernel_tol_factor * k_max * k_max;
  for (int i = 0; i < eig.eigenvalues().size(); ++i) {
    const double lambda = eig.eigenvalues()[i];
    if (lambda <= kernel_tol) {
      ++out.kernel_dim;
      continue;
    }
    const double k = std::sqrt(lambda);
    if (k <= k_max) out.k.push_back(k);
  }
  std::sort(out.k.begin(), out.k.end());
  return out;
}

ResonanceResult find_resonances(const Mesh& mesh, const MaterialField& eps,
                                const MaterialField& mu, double k_max,
                                double kernel_tol_factor) {
  const DofMap dm = DofMap::cavity(mesh);
  // Assembly needs some positive k; the eigenproblem uses S and Meps only.
  const AssembledSystem sys = assemble(mesh, eps, mu, 1.0, dm);
  return find_resonances(sys, k_max, kernel_tol_factor);
}

NonresonanceReport check_nonresonance(const AssembledSystem& system, double k,
                                      double search_k_max, SolveOptions options) {
  NonresonanceReport rep;
  rep.search_k_max = search_k_max > 0.0 ? search_k_max : 2.0 * k;

  const ResonanceResult res = find_resonances(system, rep.search_k_max);
  double margin = rep.search_k_max - k;
  for (double kr : res.k)
    if (std::abs(k - kr) < margin) {
      margin = std::abs(k - kr);
      rep.nearest_resonance = kr;
    }
  rep.k_margin_rel = margin / k;

  try {
    Factorization fact(system, options);
    rep.sigma_min_rel = fact.sigma_min_rel();
  } catch (const NearResonanceError& err) {
    rep.sigma_min_rel = err.sigma_min_rel;
  }

  rep.pass = rep.k_margin_rel > options.resonance_margin &&
             rep.sigma_min_rel > options.sv_threshold;
  return rep;
}

}  // namespace emloc
