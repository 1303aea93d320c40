#pragma once

// Data tables behind the rate plots: Gauss-Markov bounds versus rho or D,
// multi-burst guard sweeps, and the sliding-window baseline comparison.

#include <string>
#include <string_view>
#include <vector>

#include "streamrate/gm_analysis.hpp"

namespace streamrate {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Header line plus one line per row; shortest round-trip decimal form
  /// with '.' separators, independent of locale.
  std::string to_csv() const;
};

/// Shortest decimal string that round-trips to x.
std::string format_number(double x);

/// Known ids: fig2, fig3, fig4, fig5, fig9. Throws ValidationError otherwise.
CsvTable figure_table(std::string_view id);
const std::vector<std::string>& figure_ids();

/// Cartesian sweep over rho and D at fixed B and L.
struct GmSweep {
  std::vector<double> rho;
  int B = 1;
  int L = 1;
  std::vector<double> D;

  /// Reads {"rho": [...], "B": b, "L": l, "D": [...]}; scalars are accepted
  /// for rho and D.
  static GmSweep from_json(std::string_view text);
};

/// Rows (rho, B, L, D, lower, upper_single, upper_multi, high_res, nwz).
CsvTable gm_sweep_table(const GmSweep& sweep);
/// One row of the table above.
std::vector<double> gm_row(const GmConfig& cfg);

}  // namespace streamrate
