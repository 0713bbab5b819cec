#include "bifluid/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "bifluid/entropy.hpp"
#include "bifluid/state.hpp"

namespace bifluid {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot create '" + path + "'");
  return out;
}

}  // namespace

void write_frame_csv(const std::string& path, const Grid1D& grid, const SimulationFrame& frame,
                     const ModelParams& p) {
  auto out = open_out(path);
  out << "x,rho_n,rho_s,u_n,u_s,p,E\n";
  for (std::size_t j = 0; j < frame.primitive.size(); ++j) {
    const PrimitiveState& u = frame.primitive[j];
    out << format_double(grid.center(static_cast<int>(j))) << ',' << format_double(u.rho_n)
        << ',' << format_double(u.rho_s) << ',' << format_double(u.u_n) << ','
        << format_double(u.u_s) << ',' << format_double(pressure(u.rho_n, p)) << ','
        << format_double(entropy_E(u, p)) << '\n';
  }
}

void write_monitors_csv(const std::string& path, const std::vector<SimulationFrame>& frames) {
  auto out = open_out(path);
  out << "t,mass_n,mass_s,momentum,energy,min_density,hyperbolic\n";
  for (const SimulationFrame& f : frames) {
    out << format_double(f.t) << ',' << format_double(f.total_mass_n) << ','
        << format_double(f.total_mass_s) << ',' << format_double(f.total_momentum) << ','
        << format_double(f.total_energy) << ',' << format_double(f.min_density) << ','
        << (f.hyperbolic_everywhere ? 1 : 0) << '\n';
  }
}

void write_shock_csv(const std::string& path, const std::vector<ShockCurve>& halves,
                     const ModelParams& p) {
  struct Row {
    double sigma;
    const ShockPoint* point;
    const PrimitiveState* u_minus;
  };
  std::vector<Row> rows;
  for (const ShockCurve& curve : halves)
    for (const ShockPoint& pt : curve.points) rows.push_back({pt.sigma, &pt, &curve.u_minus});
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.sigma < b.sigma; });
  // Drop duplicated seed points where both halves start.
  rows.erase(std::unique(rows.begin(), rows.end(),
                         [](const Row& a, const Row& b) { return a.sigma == b.sigma; }),
             rows.end());

  auto out = open_out(path);
  out << "sigma,rho_n,rho_s,u_n,u_s,residual,dissipation,family,lax_ok\n";
  for (const Row& row : rows) {
    const ShockClassification cls = classify_shock(*row.point, *row.u_minus, p);
    const PrimitiveState& u = row.point->u_plus;
    out << format_double(row.sigma) << ',' << format_double(u.rho_n) << ','
        << format_double(u.rho_s) << ',' << format_double(u.u_n) << ','
        << format_double(u.u_s) << ',' << format_double(row.point->residual_norm) << ','
        << format_double(row.point->dissipation) << ',' << cls.family << ','
        << (cls.lax_ok ? 1 : 0) << '\n';
  }
}

int CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  throw Error("csv: no column named '" + name + "'");
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const int idx = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[idx]);
  return out;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error("csv: '" + path + "' is empty");
  std::stringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) table.columns.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row_in(line);
    std::vector<double> row;
    while (std::getline(row_in, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != table.columns.size())
      throw Error("csv: ragged row in '" + path + "'");
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace bifluid
