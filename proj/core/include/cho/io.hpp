#pragma once

#include <string>
#include <vector>

#include "cho/common.hpp"
#include "cho/forward.hpp"

namespace cho {

/// Column name plus unit, written as "name [unit]".
struct Column {
  std::string name;
  std::string unit;
};

/// Comma-separated file with one header row; values use '.' decimals and
/// round-trip precision.
void write_csv(const std::string& path, const std::vector<Column>& columns,
               const std::vector<std::vector<double>>& rows);

/// Reads the column named `value` (or the last column) of a CSV with a
/// header row.
Vector read_field_csv(const std::string& path);

/// Rows of a headered CSV as numbers.
std::vector<std::vector<double>> read_csv_rows(const std::string& path);

/// `{dir}/{kind}_{index}.{ext}`
std::string artifact_path(const std::string& dir, const std::string& kind, int index,
                          const std::string& ext = "csv");

/// Nodal phi and mu of one snapshot. 1D meshes get CSV with coordinates, 2D
/// meshes legacy-VTK ASCII point data.
void write_snapshot(const std::string& path, const BulkSurfaceMesh& mesh,
                    const StateSnapshot& snapshot, double t);

}  // namespace cho
