#pragma once

#include <string>
#include <vector>

#include "bifluid/fvm.hpp"
#include "bifluid/rankine_hugoniot.hpp"
#include "bifluid/types.hpp"

namespace bifluid {

/// Shortest decimal that round-trips to the same double (via to_chars), so
/// identical runs produce byte-identical files.
std::string format_double(double v);

void write_frame_csv(const std::string& path, const Grid1D& grid, const SimulationFrame& frame,
                     const ModelParams& p);

void write_monitors_csv(const std::string& path, const std::vector<SimulationFrame>& frames);

/// sigma,rho_n,rho_s,u_n,u_s,residual,dissipation,family,lax_ok rows, sorted
/// by sigma (family 0 means unclassified).
void write_shock_csv(const std::string& path, const std::vector<ShockCurve>& halves,
                     const ModelParams& p);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace bifluid
