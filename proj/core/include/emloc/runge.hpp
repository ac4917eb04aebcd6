// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emloc/localization.hpp"
#include "emloc/oracles.hpp"

namespace emloc {

struct RungeFit {
  double alpha = 0.0;
  Eigen::VectorXcd f;
  double residual = 0.0;  // ||M f - t|| / ||t||
  double f_norm = 0.0;
};

/// Tikhonov fit of a boundary datum to a target observation vector:
/// f = argmin ||M f - t||^2 + alpha ||f||^2 via the regularized normal
/// equations.
RungeFit runge_fit(const MeasurementOperator& op, const Eigen::VectorXcd& target,
                   double alpha);

struct RungeSweep {
  std::vector<RungeFit> fits;   // in the order of the alpha list
  int selected = 0;             // discrepancy-style pick
};

/// Fits every alpha of a strictly decreasing positive list. The selected fit
/// is the smallest alpha whose residual still improved by at least one
/// percent over the previous step (the first alpha when none qualifies).
RungeSweep runge_sweep(const MeasurementOperator& op,
                       const Eigen::VectorXcd& target,
                       const std::vector<double>& alphas);

std::vector<double> geometric_alphas(double first, double last, int count);

struct RungeLocalizationReport {
  RungeSweep sweep;
  std::vector<int> o_region;           // target region union shielded region
  Eigen::VectorXcd target;             // observation coordinates on O
  double lambda_eigen = 0.0;           // ratio of the eigen-based optimizer
  double ratio = 0.0;                  // M/D energy ratio of the best fit
  std::vector<Eigen::VectorXcd> sequence;
  std::vector<double> energy_m, energy_d;                // full solves
  std::vector<double> energy_m_matrix, energy_d_matrix;  // matrix route
};

/// Localization through the Runge route: fit the target that is a plane wave
/// on M and zero on the interior of D, then rescale the fitted datum by the
/// shielded norm, step by step. Cross-checks the eigen-based ratio.
RungeLocalizationReport runge_implies_localization(
    const MeasurementContext& ctx, const std::vector<int>& m_region,
    const std::vector<int>& d_region, int length,
    const std::vector<double>& alphas, const PlaneWave& wave);

}  // namespace emloc
