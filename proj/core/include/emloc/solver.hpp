// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/SparseLU>
#include <memory>
#include <stdexcept>

#include "emloc/fem.hpp"

namespace emloc {

/// Raised when the system matrix is singular or nearly so at the given k.
struct NearResonanceError : std::runtime_error {
  double sigma_min_rel;
  explicit NearResonanceError(double s)
      : std::runtime_error(
            "resonant or near-resonant wavenumber (relative smallest singular "
            "value estimate " +
            std::to_string(s) + ")"),
        sigma_min_rel(s) {}
};

struct SolveOptions {
  double residual_tol = 1e-10;
  double sv_threshold = 1e-8;        // relative smallest-singular-value gate
  double resonance_margin = 1e-3;    // relative |k - k_res| gate
};

/// Sparse LU of the free-free block of S - k^2 Meps, with the coupling
/// blocks to the control DOFs, reusable for many right-hand sides.
/// Immutable after construction; safe for concurrent solves.
class Factorization {
 public:
  Factorization(const AssembledSystem& system, SolveOptions options = {});

  const DofMap& dofmap() const { return dofmap_; }
  const SolveOptions& options() const { return options_; }
  double k() const { return k_; }

  /// Relative smallest/largest singular value estimates of the free block.
  double sigma_min_rel() const { return sigma_min_ / sigma_max_; }
  double sigma_max() const { return sigma_max_; }

  /// Solves the free block for a complex right-hand side (residual-checked).
  Eigen::VectorXcd solve_free(const Eigen::VectorXcd& rhs_free) const;
  /// Same, for many real right-hand sides at once.
  Eigen::MatrixXd solve_free_many(const Eigen::MatrixXd& rhs_free) const;

  const SpMat& b_free_free() const { return b_ff_; }
  const SpMat& b_free_control() const { return b_fc_; }
  const SpMat& b_control_free() const { return b_cf_; }
  const SpMat& b_control_control() const { return b_cc_; }

  Eigen::VectorXcd restrict_free(const Eigen::VectorXcd& full) const;
  Eigen::VectorXcd restrict_control(const Eigen::VectorXcd& full) const;

  /// Variationally consistent trace at the control rows: (B E)|_control.
  /// E is given over all edge DOFs.
  Eigen::VectorXcd control_residual(const Eigen::VectorXcd& e_full) const;

 private:
  DofMap dofmap_;
  SolveOptions options_;
  double k_;
  SpMat b_ff_, b_fc_, b_cf_, b_cc_;
  std::unique_ptr<Eigen::SparseLU<SpMat>> lu_;  // SparseLU is not movable
  double sigma_min_ = 0.0, sigma_max_ = 0.0;
};

/// Solves the discrete Maxwell system for boundary datum f on the control
/// edges and per-tet constant sources (J, K). E splits into the zero-extended
/// lift of f plus the free-DOF solution; H is recovered per tet.
FieldPair solve(const Mesh& mesh, const MaterialField& mu,
                const AssembledSystem& system, const Factorization& fact,
                const Eigen::VectorXcd& f, const std::vector<Vec3c>& J = {},
                const std::vector<Vec3c>& K = {});

struct ResonanceResult {
  std::vector<double> k;  // ascending, kernel modes discarded
  int kernel_dim = 0;     // eigenvalues below the gradient-kernel threshold
};

/// Cavity resonances up to k_max: generalized eigenvalues S x = k^2 Meps x
/// on the interior edges, with the discrete-gradient kernel discarded at
/// threshold kernel_tol_factor * k_max^2.
ResonanceResult find_resonances(const AssembledSystem& system, double k_max,
                                double kernel_tol_factor = 1e-8);
ResonanceResult find_resonances(const Mesh& mesh, const MaterialField& eps,
                                const MaterialField& mu, double k_max,
                                double kernel_tol_factor = 1e-8);

struct NonresonanceReport {
  double nearest_resonance = 0.0;  // 0 if none detected below search_k_max
  double k_margin_rel = 0.0;       // min |k - k_res| / k, or (k_max-k)/k floor
  double sigma_min_rel = 0.0;
  double search_k_max = 0.0;
  bool pass = false;
};

/// Certifies a wavenumber against the detected resonances and the
/// conditioning of the factorized system. Report only, never throws for
/// a failing margin.
NonresonanceReport check_nonresonance(const AssembledSystem& system, double k,
                                      double search_k_max = 0.0,
                                      SolveOptions options = {});

}  // namespace emloc
