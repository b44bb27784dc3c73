#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gamble/equilibrium.hpp"
#include "gamble/simulation.hpp"
#include "gamble/verification.hpp"

namespace gamble::io {

/// %.12g, with inf and nan spelled out.
std::string format_number(double v);

/// One row of a solution table. M is NaN where the maximum is random.
struct TableRow {
  double x = 0.0;
  double G = 0.0;
  double g = 0.0;
  double M = 0.0;
};

/// Uniform grid on [0, r] with x0 inserted.
std::vector<TableRow> solution_table(const Equilibrium& eq, std::size_t points);

/// Header "x,G,g,M" then one row per point.
void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows);
/// Throws ValidationError on a malformed table.
std::vector<TableRow> read_table_csv(std::istream& in);

/// Quantile table p -> G^{-1}(p) on a uniform p grid.
void write_quantile_csv(std::ostream& out, const Equilibrium& eq,
                        std::size_t points);

/// Stopped value and the three maxima, at most max_rows rows.
void write_samples_csv(std::ostream& out, const std::vector<PathResult>& rows,
                       std::size_t max_rows = 1'000'000);

nlohmann::json to_json(const ContestSpec& spec);
ContestSpec spec_from_json(const nlohmann::json& j);

/// Spec, r, value and, in past mode, z*, u*, psi(x0) and G(x0-).
nlohmann::json solution_header(const Equilibrium& eq);

nlohmann::json to_json(const LagrangianCertificate& cert);
nlohmann::json to_json(const SimulationReport& report);

/// A stored solution checked against a fresh solve: the table must match
/// and the certificate is run at the stored endpoint.
struct SolutionCheck {
  bool passed = false;
  double endpoint_error = 0.0;
  double table_error = 0.0;
  TableRow worst_row;
  LagrangianCertificate certificate;
  std::string failure;
};

SolutionCheck check_solution(const nlohmann::json& header,
                             const std::vector<TableRow>& rows,
                             const CertifyOptions& options = {},
                             double table_tolerance = 1e-9);

}  // namespace gamble::io
