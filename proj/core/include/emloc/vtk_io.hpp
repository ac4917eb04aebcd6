// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "emloc/fem.hpp"

namespace emloc {

/// Writes a legacy ASCII VTK v2.0 unstructured grid: points, tet cells, and
/// cell-data vectors for the real and imaginary parts of E (evaluated at tet
/// barycenters) and H. Values are printed with 17 significant digits, so the
/// file is byte-stable and numerically round-trips.
void export_vtk(const Mesh& mesh, const FieldPair& fields,
                const std::string& path);

}  // namespace emloc
