// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emloc/measurement.hpp"

namespace emloc {

struct RatioResult {
  double lambda = 0.0;      // top generalized eigenvalue
  Eigen::VectorXcd f;       // unit-norm optimizer, phase-fixed
};

/// Maximizes ||M_M f||^2 / (||M_D f||^2 + delta ||f||^2) as the top
/// generalized eigenpair of G_M f = lambda (G_D + delta I) f. The optimizer
/// is normalized and its largest-magnitude entry made real positive.
RatioResult max_ratio(const Eigen::MatrixXcd& g_m, const Eigen::MatrixXcd& g_d,
                      double delta);

/// Scaled sequence f^(l) = f_opt / (l ||M_D f_opt||), so the shielded energy
/// is exactly 1/l^2. A vanishing ||M_D f_opt|| degenerates to f^(l) = l f_opt
/// (shielded energy identically zero, target energy growing).
std::vector<Eigen::VectorXcd> localized_sequence(const Eigen::VectorXcd& f_opt,
                                                 const Eigen::MatrixXcd& m_d,
                                                 int length);

struct RangeInclusionResult {
  bool bounded = false;
  double constant = 0.0;           // feasible C when bounded
  Eigen::VectorXcd witness;        // when unbounded: small ||A2 x||, large ||A1 x||
  double witness_a1_norm = 0.0;
  double witness_a2_norm = 0.0;
  double max_probed_ratio = 0.0;   // largest ||A1 x|| / ||A2 x|| over the trials
};

/// Decides whether ||A1 x|| <= C ||A2 x|| can hold for some C, i.e. whether
/// range(A1^H) is contained in range(A2^H), by an SVD rank test on the
/// stacked matrix with threshold 1e-10 sigma_max. Random trials probe the
/// ratio for the report.
RangeInclusionResult verify_range_lemma(const Eigen::MatrixXcd& a1,
                                        const Eigen::MatrixXcd& a2, int trials,
                                        unsigned seed = 13u);

struct LocalizationResult {
  double lambda = 0.0;           // achieved energy ratio of the optimizer
  double lambda_shifted = 0.0;   // generalized eigenvalue with the delta shift
  double delta = 0.0;
  Eigen::VectorXcd f_opt;
  std::vector<Eigen::VectorXcd> sequence;
  std::vector<double> energy_m, energy_d;                // full solves
  std::vector<double> energy_m_matrix, energy_d_matrix;  // matrix route
};

/// Default Tikhonov shift regularizing a possibly singular shielded Gram
/// matrix.
double default_gram_shift(const Eigen::MatrixXcd& g_d);

/// End-to-end localization: assembles the measurement matrices of the target
/// and shielded regions, maximizes the energy ratio, emits the scaled
/// sequence, and evaluates the per-step energies both through the matrices
/// and through full solves.
LocalizationResult run_localization(const MeasurementContext& ctx,
                                    const std::vector<int>& m_region,
                                    const std::vector<int>& d_region,
                                    int length, double delta = -1.0);

}  // namespace emloc
