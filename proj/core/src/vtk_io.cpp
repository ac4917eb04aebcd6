// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "emloc/vtk_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace emloc {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_vectors(std::ofstream& os, const char* name,
                   const std::vector<Vec3>& values) {
  os << "VECTORS " << name << " double\n";
  for (const auto& v : values)
    os << num(v.x()) << " " << num(v.y()) << " " << num(v.z()) << "\n";
}

}  // namespace

void export_vtk(const Mesh& mesh, const FieldPair& fields,
                const std::string& path) {
  if (fields.e.size() != mesh.num_edges())
    throw std::invalid_argument("export_vtk: field size mismatch");
  if (!fields.h.empty() && fields.h.size() != mesh.tets.size())
    throw std::invalid_argument("export_vtk: H size mismatch");

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("export_vtk: cannot open " + path);

  os << "# vtk DataFile Version 2.0\n";
  os << "emloc fields\n";
  os << "ASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& v : mesh.vertices)
    os << num(v.x()) << " " << num(v.y()) << " " << num(v.z()) << "\n";

  os << "CELLS " << mesh.num_tets() << " " << 5 * mesh.num_tets() << "\n";
  for (const auto& t : mesh.tets)
    os << "4 " << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
  os << "CELL_TYPES " << mesh.num_tets() << "\n";
  for (int t = 0; t < mesh.num_tets(); ++t) os << "10\n";

  // Barycentric evaluation of E per cell.
  std::vector<Vec3> e_re(mesh.num_tets()), e_im(mesh.num_tets());
  std::vector<Vec3> h_re(mesh.num_tets(), Vec3::Zero());
  std::vector<Vec3> h_im(mesh.num_tets(), Vec3::Zero());
  const Eigen::Vector4d center = Eigen::Vector4d::Constant(0.25);
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const TetGeometry g = TetGeometry::from_mesh(mesh, t);
    const Vec6c loc = local_coefficients(mesh, t, fields.e);
    Vec3c e = Vec3c::Zero();
    for (int s = 0; s < 6; ++s)
      e += loc[s] * g.whitney_at(s, center).cast<Cplx>();
    e_re[t] = e.real();
    e_im[t] = e.imag();
    if (!fields.h.empty()) {
      h_re[t] = fields.h[t].real();
      h_im[t] = fields.h[t].imag();
    }
  }

  os << "CELL_DATA " << mesh.num_tets() << "\n";
  write_vectors(os, "E_re", e_re);
  write_vectors(os, "E_im", e_im);
  write_vectors(os, "H_re", h_re);
  write_vectors(os, "H_im", h_im);

  if (!os) throw std::runtime_error("export_vtk: write failed for " + path);
}

}  // namespace emloc
