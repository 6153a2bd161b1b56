#include "cho/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cho {

namespace {

std::string format(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return cells;
}

double parse_number(const std::string& s, const std::string& path, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InvalidArgument(path + ":" + std::to_string(line) + ": not a number: '" + s + "'");
  }
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  return out;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<Column>& columns,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (std::size_t k = 0; k < columns.size(); ++k) {
    out << (k ? "," : "") << columns[k].name << " [" << columns[k].unit << "]";
  }
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw InvalidArgument("CSV row width mismatch in " + path);
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format(row[k]);
    out << "\n";
  }
}

std::vector<std::vector<double>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    for (const auto& cell : split(line)) row.push_back(parse_number(cell, path, number));
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw InvalidArgument(path + " is empty");
  const auto names = split(header);
  std::size_t column = names.size() - 1;
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] == "value" || names[k].rfind("value [", 0) == 0) column = k;
  }
  std::vector<double> values;
  for (const auto& row : read_csv_rows(path)) {
    if (row.size() != names.size()) throw InvalidArgument(path + ": ragged row");
    values.push_back(row[column]);
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string artifact_path(const std::string& dir, const std::string& kind, int index,
                          const std::string& ext) {
  return dir + "/" + kind + "_" + std::to_string(index) + "." + ext;
}

void write_snapshot(const std::string& path, const BulkSurfaceMesh& mesh,
                    const StateSnapshot& s, double t) {
  if (mesh.dim() == 1) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
      rows.push_back({static_cast<double>(i), mesh.nodes()[i][0], s.phi.bulk[i], s.mu.bulk[i]});
    }
    write_csv(path, {{"node", "-"}, {"x", "length"}, {"phi", "-"}, {"mu", "energy"}}, rows);
    return;
  }
  auto out = open_out(path);
  out << "# vtk DataFile Version 3.0\nphi and mu at t = " << format(t)
      << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (const auto& p : mesh.nodes()) out << format(p[0]) << " " << format(p[1]) << " 0\n";
  out << "CELLS " << mesh.cells().size() << " " << 4 * mesh.cells().size() << "\n";
  for (const auto& c : mesh.cells()) out << "3 " << c[0] << " " << c[1] << " " << c[2] << "\n";
  out << "CELL_TYPES " << mesh.cells().size() << "\n";
  for (std::size_t k = 0; k < mesh.cells().size(); ++k) out << "5\n";
  out << "POINT_DATA " << mesh.num_nodes() << "\n";
  for (const auto& [name, field] : {std::pair{"phi", &s.phi.bulk}, std::pair{"mu", &s.mu.bulk}}) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (Eigen::Index i = 0; i < field->size(); ++i) out << format((*field)[i]) << "\n";
  }
}

}  // namespace cho
