// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "emloc/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

#include "emloc/oracles.hpp"
#include "emloc/runge.hpp"
#include "emloc/vtk_io.hpp"

namespace emloc {

namespace {

constexpr int kCsvSchemaVersion = 1;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// RFC 4180 writer: CRLF records, plain numeric fields.
class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path) : os_(path, std::ios::binary) {
    if (!os_) throw std::runtime_error("cannot open " + path.string());
  }
  void row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i)
      os_ << (i ? "," : "") << fields[i];
    os_ << "\r\n";
  }

 private:
  std::ofstream os_;
};

struct Checks {
  std::ostream& log;
  int failures = 0;

  void check(bool ok, const std::string& what) {
    log << (ok ? "[ok]   " : "[FAIL] ") << what << "\n";
    if (!ok) ++failures;
  }
};

struct Problem {
  Mesh mesh;
  MaterialField eps;
  MaterialField mu;
  DofMap dofmap;
  AssembledSystem system;
  Factorization fact;
};

Problem make_problem(const ExperimentConfig& cfg,
                     const std::array<int, 3>& divisions) {
  Mesh mesh = build_box_mesh(cfg.mesh_bounds, divisions);
  MaterialField eps = cfg.eps_field();
  MaterialField mu = cfg.mu_field();
  const BoundaryPatch gamma = tag_boundary_patch(
      mesh, RegionSpec{cfg.gamma, RegionSpec::Kind::BoundaryPatch});
  DofMap dofmap = DofMap::build(mesh, gamma.interior_edges);
  AssembledSystem system = assemble(mesh, eps, mu, cfg.k, dofmap);
  Factorization fact(system, cfg.solver);
  return Problem{std::move(mesh), std::move(eps), std::move(mu),
                 std::move(dofmap), std::move(system), std::move(fact)};
}

void write_run_info(const std::filesystem::path& dir,
                    const ExperimentConfig& cfg,
                    const std::vector<std::pair<std::string, std::string>>& extra) {
  CsvFile csv(dir / "run_info.csv");
  csv.row({"key", "value"});
  csv.row({"schema_version", std::to_string(kCsvSchemaVersion)});
  csv.row({"kind", to_string(cfg.kind)});
  csv.row({"k", num(cfg.k)});
  csv.row({"divisions", std::to_string(cfg.divisions[0]) + "x" +
                            std::to_string(cfg.divisions[1]) + "x" +
                            std::to_string(cfg.divisions[2])});
  csv.row({"seed", std::to_string(cfg.seed)});
  for (const auto& [k, v] : extra) csv.row({k, v});
}

int run_verify(const ExperimentConfig& cfg, std::ostream& log,
               const std::filesystem::path& out) {
  Checks checks{log};

  ExperimentConfig local = cfg;
  ManufacturedField exact;
  bool with_sources = false;
  if (cfg.verify_case == "plane_wave") {
    PlaneWave pw{cfg.k, cfg.pw_direction.normalized(),
                 cfg.pw_polarization.cast<Cplx>()};
    exact = plane_wave_field(pw);
  } else {
    // Built-in two-region medium; the manufactured field is tied to the
    // interface at the middle of the x extent.
    const double x0 = 0.5 * (cfg.mesh_bounds.lo.x() + cfg.mesh_bounds.hi.x());
    local.material_regions.clear();
    MaterialRegionConfig right;
    right.box = Box{Vec3(x0, cfg.mesh_bounds.lo.y(), cfg.mesh_bounds.lo.z()),
                    cfg.mesh_bounds.hi};
    right.eps = Vec3(2, 1, 1).asDiagonal();
    right.mu = Vec3(1, 3, 1).asDiagonal();
    local.material_regions = {right};
    local.default_eps = Mat3::Identity();
    local.default_mu = Mat3::Identity();
    exact = anisotropic_manufactured_field(x0);
    with_sources = true;
  }
  // The whole boundary carries the trace of the exact solution.
  local.gamma = Box{local.mesh_bounds.lo, local.mesh_bounds.hi};

  CsvFile csv(out / "verify.csv");
  csv.row({"divisions", "rel_l2_error", "ratio"});

  std::vector<double> errors;
  for (int d : cfg.verify_divisions) {
    Problem prob = make_problem(local, {d, d, d});
    std::vector<Vec3c> J, K;
    if (with_sources) {
      ManufacturedSources src =
          manufactured_sources(prob.mesh, prob.eps, prob.mu, cfg.k, exact);
      J = std::move(src.J);
      K = std::move(src.K);
    }
    const Eigen::VectorXcd f = exact_trace(prob.mesh, prob.dofmap, exact.value);
    const FieldPair fields =
        solve(prob.mesh, prob.mu, prob.system, prob.fact, f, J, K);
    const double err = relative_l2_error(prob.mesh, fields.e, exact.value);
    errors.push_back(err);
    const bool first = errors.size() == 1;
    const double ratio = first ? 0.0 : err / errors[errors.size() - 2];
    csv.row({std::to_string(d), num(err), first ? "" : num(ratio)});
    log << "divisions " << d << ": rel L2 error " << err << "\n";
    if (!first)
      checks.check(ratio <= cfg.verify_max_ratio,
                   "error ratio " + num(ratio) + " <= " + num(cfg.verify_max_ratio));
    if (cfg.vtk && d == cfg.verify_divisions.back())
      export_vtk(prob.mesh, fields, (out / "verify_field.vtk").string());
  }

  write_run_info(out, cfg, {{"case", cfg.verify_case}});
  return checks.failures ? 1 : 0;
}

int run_resonances(const ExperimentConfig& cfg, std::ostream& log,
                   const std::filesystem::path& out) {
  const Mesh mesh = build_box_mesh(cfg.mesh_bounds, cfg.divisions);
  const ResonanceResult res = find_resonances(mesh, cfg.eps_field(),
                                              cfg.mu_field(), cfg.resonance_kmax);
  CsvFile csv(out / "resonances.csv");
  csv.row({"index", "k"});
  for (size_t i = 0; i < res.k.size(); ++i)
    csv.row({std::to_string(i), num(res.k[i])});
  log << res.k.size() << " resonances below k_max = " << cfg.resonance_kmax
      << ", gradient kernel dimension " << res.kernel_dim << "\n";

  double margin = cfg.resonance_kmax - cfg.k;
  for (double kr : res.k) margin = std::min(margin, std::abs(cfg.k - kr));
  log << "margin of configured k = " << cfg.k << ": " << margin << "\n";

  write_run_info(out, cfg,
                 {{"kernel_dim", std::to_string(res.kernel_dim)},
                  {"k_margin", num(margin)}});
  return 0;
}

int run_localize(const ExperimentConfig& cfg, std::ostream& log,
                 const std::filesystem::path& out) {
  Checks checks{log};
  Problem prob = make_problem(cfg, cfg.divisions);
  const auto m_region =
      select_region(prob.mesh, RegionSpec{cfg.m_box, RegionSpec::Kind::Volume});
  const auto d_region =
      select_region(prob.mesh, RegionSpec{cfg.d_box, RegionSpec::Kind::Volume});

  MeasurementContext ctx{prob.mesh, prob.eps, prob.mu, prob.system, prob.fact};
  const LocalizationResult res = run_localization(
      ctx, m_region, d_region, cfg.localize_length, cfg.localize_delta);
  log << "ratio lambda = " << res.lambda << " (shifted eigenvalue "
      << res.lambda_shifted << ", delta " << res.delta << ")\n";

  CsvFile csv(out / "localize.csv");
  csv.row({"l", "energy_M", "energy_D", "ratio"});
  CsvFile routes(out / "localize_routes.csv");
  routes.row({"l", "energy_M_solve", "energy_D_solve", "energy_M_matrix",
              "energy_D_matrix"});
  for (size_t i = 0; i < res.sequence.size(); ++i) {
    const double l = double(i + 1);
    csv.row({std::to_string(i + 1), num(res.energy_m[i]), num(res.energy_d[i]),
             num(res.energy_m[i] / res.energy_d[i])});
    routes.row({std::to_string(i + 1), num(res.energy_m[i]), num(res.energy_d[i]),
                num(res.energy_m_matrix[i]), num(res.energy_d_matrix[i])});

    checks.check(std::abs(res.energy_d_matrix[i] * l * l - 1.0) <= 1e-10,
                 "shielded energy at l=" + std::to_string(i + 1) +
                     " follows 1/l^2 (got " + num(res.energy_d_matrix[i]) + ")");
    checks.check(
        std::abs(res.energy_m_matrix[i] * l * l / res.lambda - 1.0) <= 1e-8,
        "target energy at l=" + std::to_string(i + 1) + " follows lambda/l^2");
    const double dm = std::abs(res.energy_m[i] - res.energy_m_matrix[i]) /
                      res.energy_m_matrix[i];
    const double dd = std::abs(res.energy_d[i] - res.energy_d_matrix[i]) /
                      res.energy_d_matrix[i];
    checks.check(dm <= 1e-8 && dd <= 1e-8,
                 "solve and matrix energies agree at l=" + std::to_string(i + 1));
  }

  if (cfg.vtk) {
    const FieldPair fields = solve(prob.mesh, prob.mu, prob.system,
                                   prob.fact, res.sequence.front());
    export_vtk(prob.mesh, fields, (out / "localize_field_l1.vtk").string());
  }

  write_run_info(out, cfg,
                 {{"lambda", num(res.lambda)},
                  {"lambda_shifted", num(res.lambda_shifted)},
                  {"delta", num(res.delta)},
                  {"control_edges", std::to_string(prob.dofmap.num_control())}});
  return checks.failures ? 1 : 0;
}

int run_runge(const ExperimentConfig& cfg, std::ostream& log,
              const std::filesystem::path& out) {
  Checks checks{log};
  Problem prob = make_problem(cfg, cfg.divisions);
  const auto o_region =
      select_region(prob.mesh, RegionSpec{cfg.o_box, RegionSpec::Kind::Volume});
  MeasurementContext ctx{prob.mesh, prob.eps, prob.mu, prob.system, prob.fact};
  const MeasurementOperator m_o = assemble_measurement_matrix(ctx, o_region);

  Eigen::VectorXcd target;
  if (cfg.runge_target == "plane_wave") {
    PlaneWave pw{cfg.k, cfg.pw_direction.normalized(),
                 cfg.pw_polarization.cast<Cplx>()};
    pw.validate();
    std::vector<Vec3c> e(o_region.size()), h(o_region.size());
    for (size_t i = 0; i < o_region.size(); ++i)
      std::tie(e[i], h[i]) =
          plane_wave_fields(pw, prob.mesh.tet_barycenters[o_region[i]]);
    target = target_observation(prob.mesh, o_region, e, h);
  } else {
    // In-range target from a smoothed random datum.
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd y(m_o.matrix.rows());
    for (int i = 0; i < y.size(); ++i) y[i] = Cplx(gauss(rng), gauss(rng));
    Eigen::VectorXcd f0 = m_o.matrix.adjoint() * y;
    f0.normalize();
    target = m_o.matrix * f0;
  }

  const std::vector<double> alphas =
      geometric_alphas(cfg.alpha_first, cfg.alpha_last, cfg.alpha_count);
  const RungeSweep sweep = runge_sweep(m_o, target, alphas);

  CsvFile csv(out / "runge.csv");
  csv.row({"alpha", "residual", "f_norm"});
  for (const auto& fit : sweep.fits)
    csv.row({num(fit.alpha), num(fit.residual), num(fit.f_norm)});

  for (size_t i = 1; i < sweep.fits.size(); ++i) {
    checks.check(
        sweep.fits[i].residual <= sweep.fits[i - 1].residual + 1e-12,
        "residual non-increasing at alpha " + num(sweep.fits[i].alpha));
    checks.check(sweep.fits[i].f_norm + 1e-12 >= sweep.fits[i - 1].f_norm,
                 "datum norm non-decreasing at alpha " + num(sweep.fits[i].alpha));
  }
  const RungeFit& sel = sweep.fits[sweep.selected];
  log << "selected alpha = " << sel.alpha << ", residual " << sel.residual
      << "\n";

  if (cfg.vtk) {
    const FieldPair fields =
        solve(prob.mesh, prob.mu, prob.system, prob.fact, sel.f);
    export_vtk(prob.mesh, fields, (out / "runge_field.vtk").string());
  }

  write_run_info(out, cfg,
                 {{"selected_alpha", num(sel.alpha)},
                  {"selected_residual", num(sel.residual)},
                  {"target", cfg.runge_target},
                  {"control_edges", std::to_string(prob.dofmap.num_control())}});
  return checks.failures ? 1 : 0;
}

int run_runge_localize(const ExperimentConfig& cfg, std::ostream& log,
                       const std::filesystem::path& out) {
  Checks checks{log};
  Problem prob = make_problem(cfg, cfg.divisions);
  const auto m_region =
      select_region(prob.mesh, RegionSpec{cfg.m_box, RegionSpec::Kind::Volume});
  const auto d_region =
      select_region(prob.mesh, RegionSpec{cfg.d_box, RegionSpec::Kind::Volume});
  MeasurementContext ctx{prob.mesh, prob.eps, prob.mu, prob.system, prob.fact};

  PlaneWave pw{cfg.k, cfg.pw_direction.normalized(),
               cfg.pw_polarization.cast<Cplx>()};
  const std::vector<double> alphas =
      geometric_alphas(cfg.alpha_first, cfg.alpha_last, cfg.alpha_count);
  const RungeLocalizationReport rep = runge_implies_localization(
      ctx, m_region, d_region, cfg.localize_length, alphas, pw);

  log << "Runge-route M/D ratio = " << rep.ratio
      << ", eigen-route lambda = " << rep.lambda_eigen << "\n";

  CsvFile csv(out / "runge_localize.csv");
  csv.row({"l", "energy_M", "energy_D", "ratio"});
  for (size_t i = 0; i < rep.sequence.size(); ++i) {
    const double l = double(i + 1);
    csv.row({std::to_string(i + 1), num(rep.energy_m[i]), num(rep.energy_d[i]),
             num(rep.energy_m[i] / rep.energy_d[i])});
    checks.check(std::abs(rep.energy_d_matrix[i] * l * l - 1.0) <= 1e-12,
                 "rescaled shielded energy at l=" + std::to_string(i + 1) +
                     " follows 1/l^2");
  }

  write_run_info(out, cfg,
                 {{"ratio", num(rep.ratio)},
                  {"lambda_eigen", num(rep.lambda_eigen)},
                  {"selected_alpha",
                   num(rep.sweep.fits[rep.sweep.selected].alpha)}});
  return checks.failures ? 1 : 0;
}

}  // namespace

int run_experiment(const ExperimentConfig& config, std::ostream& log,
                   const std::string& out_dir_override) {
  try {
    const std::filesystem::path out =
        out_dir_override.empty() ? config.output : out_dir_override;
    std::filesystem::create_directories(out);
    switch (config.kind) {
      case ExperimentKind::Verify: return run_verify(config, log, out);
      case ExperimentKind::Resonances: return run_resonances(config, log, out);
      case ExperimentKind::Localize: return run_localize(config, log, out);
      case ExperimentKind::Runge: return run_runge(config, log, out);
      case ExperimentKind::RungeLocalize:
        return run_runge_localize(config, log, out);
    }
    return 2;
  } catch (const std::exception& err) {
    log << "error: " << err.what() << "\n";
    return 1;
  }
}

}  // namespace emloc
