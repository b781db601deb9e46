#pragma once

// Application layer behind the command-line runner: configuration, the
// per-iteration CSV writer, the SVG trajectory plot, and the run driver that
// ties scenario construction, iteration, and analysis together. Everything
// here is concrete in double; the templated library lives underneath.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "splitfix/scenarios.hpp"

namespace splitfix {

struct RunConfig {
  std::string scenario;
  double lambda = 0.5;
  Vector<double> x0;  // empty: use the scenario default
  std::size_t maxIters = 100000;
  double shadowTol = 1e-10;
  // Base path for outputs (".csv", ".summary.txt"/".summary.json", ".svg" are
  // appended). Empty: the scenario name, placed in $SPLITFIX_OUT_DIR if that
  // is set and the working directory otherwise.
  std::string outPath;
  std::string format = "csv";  // summary flavor: "csv" = key=value lines, "json"
  bool plot = false;
  std::size_t thin = 1;  // CSV keeps rows with n % thin == 0, plus the last row
  std::map<std::string, double> overrides;
};

/// Write the trace as CSV: a version comment, a column-name header, then one
/// row per kept iterate with 17 significant digits (doubles survive the round
/// trip bit for bit). The trailing distance column is present only when a
/// reference point is supplied; the final row's step difference is empty
/// because no step leaves it.
void write_trace_csv(const IterationTrace<double>& trace, const std::optional<Vector<double>>& xbar,
                     std::size_t thin, std::ostream& os);

/// Constraint sets and the reference solution drawn behind the trajectories.
struct PlotReference {
  std::vector<PrimitiveSet<double>> sets;
  std::optional<Vector<double>> xbar;
};

/// Standalone 800x800 SVG: governing iterates and shadow iterates as two
/// point series over the constraint-set outlines, with a marker at the
/// reference solution. World coordinates come from the trace bounding box
/// padded by 10%, same scale on both axes. Output is a pure function of the
/// inputs. Plots are strictly two-dimensional.
void emit_plot(const IterationTrace<double>& trace, const PlotReference& reference,
               const std::string& path);

/// Outlines to draw for a preset scenario, reconstructed from its parameters.
PlotReference plot_reference_for(const Scenario<double>& scenario);

/// Run a prebuilt scenario: iterate, estimate the displacement, attempt the
/// normal solution, and write the CSV/summary/plot files. The summary also
/// goes to `out`; problems are reported on `err`. Returns the process exit
/// code: 0 on success, 2 for configuration errors, 3 for numerical failure.
int run_scenario(const Scenario<double>& scenario, const RunConfig& config, std::ostream& out,
                 std::ostream& err);

/// Build the named scenario from the config (applying overrides) and run it.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace splitfix
