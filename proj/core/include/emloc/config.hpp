// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "emloc/materials.hpp"
#include "emloc/solver.hpp"

namespace emloc {

enum class ExperimentKind { Verify, Resonances, Localize, Runge, RungeLocalize };

const char* to_string(ExperimentKind kind);

struct MaterialRegionConfig {
  Box box;
  Mat3 eps = Mat3::Identity();
  Mat3 mu = Mat3::Identity();
};

/// One experiment, fully described. Every field except the kind has a
/// default, so a minimal configuration is a single "kind = ..." line.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Verify;
  std::string output = "out";
  unsigned seed = 0;
  bool vtk = false;

  Box mesh_bounds{Vec3(0, 0, 0), Vec3(1, 1, 1)};
  std::array<int, 3> divisions{4, 4, 4};

  Mat3 default_eps = Mat3::Identity();
  Mat3 default_mu = Mat3::Identity();
  std::vector<MaterialRegionConfig> material_regions;

  double k = 1.0;
  SolveOptions solver;
  double resonance_kmax = 10.0;

  Box gamma{Vec3(0, 0, 0), Vec3(1, 1, 0)};                 // boundary patch
  Box m_box{Vec3(0.15, 0.15, 0), Vec3(0.85, 0.85, 0.3)};   // target region
  Box d_box{Vec3(0.35, 0.35, 0.35), Vec3(0.85, 0.85, 0.85)};  // shielded region
  Box o_box{Vec3(0.2, 0.2, 0.2), Vec3(0.8, 0.8, 0.8)};

  int localize_length = 10;
  double localize_delta = -1.0;  // negative selects the automatic shift

  double alpha_first = 1e-2;
  double alpha_last = 1e-10;
  int alpha_count = 9;
  std::string runge_target = "plane_wave";  // or "in_range"
  Vec3 pw_direction{0, 0, 1};
  Vec3 pw_polarization{1, 0, 0};

  std::string verify_case = "plane_wave";  // or "anisotropic"
  std::vector<int> verify_divisions{2, 4, 8};
  double verify_max_ratio = 0.6;

  MaterialField eps_field() const;
  MaterialField mu_field() const;
};

struct ParseError {
  int line = 0;  // 0 for errors without a definite location
  std::string message;
};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<ParseError> errors;

  bool ok() const { return config.has_value(); }
};

/// Parses the key = value configuration text. Overrides are "section.key"
/// paths applied on top of the text and validated the same way.
ParseResult parse_config(
    const std::string& text,
    const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Canonical text form; parse(serialize(parse(x))) reproduces parse(x).
std::string serialize_config(const ExperimentConfig& config);

}  // namespace emloc
