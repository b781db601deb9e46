#include <cerrno>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "splitfix/run.hpp"

namespace {

// Parse "a,b" (any positive number of comma-separated coordinates).
bool parse_point(const std::string& text, splitfix::Vector<double>& out, std::string& error) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string piece =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(piece.c_str(), &end);
    if (piece.empty() || end == nullptr || *end != '\0' || errno != 0) {
      error = "cannot parse coordinate '" + piece + "' in --x0";
      return false;
    }
    values.push_back(value);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (values.empty()) {
    error = "--x0 needs at least one coordinate";
    return false;
  }
  out.resize(static_cast<Eigen::Index>(values.size()));
  for (std::size_t j = 0; j < values.size(); ++j) out[static_cast<Eigen::Index>(j)] = values[j];
  return true;
}

bool parse_override(const std::string& text, std::map<std::string, double>& overrides,
                    std::string& error) {
  const std::size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    error = "--set expects name=value, got '" + text + "'";
    return false;
  }
  const std::string key = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(rest.c_str(), &end);
  if (rest.empty() || end == nullptr || *end != '\0' || errno != 0) {
    error = "cannot parse value '" + rest + "' for --set " + key;
    return false;
  }
  overrides[key] = value;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relaxed splitting runner: iterate a preset scenario, estimate the "
               "displacement vector, solve for a normal solution, and write the trace"};

  splitfix::RunConfig config;
  std::string x0Text;
  std::vector<std::string> setTexts;

  app.add_option("--scenario", config.scenario, "scenario name (two_balls or line_box)")
      ->required();
  app.add_option("--lambda", config.lambda, "relaxation parameter in (0, 1]")
      ->capture_default_str();
  app.add_option("--x0", x0Text, "starting point as comma-separated coordinates, e.g. \"1,-2\"");
  app.add_option("--iters", config.maxIters, "iteration cap")->capture_default_str();
  app.add_option("--tol", config.shadowTol, "shadow step tolerance for the stop rule")
      ->capture_default_str();
  app.add_option("--thin", config.thin, "keep every k-th row in the CSV trace")
      ->capture_default_str();
  app.add_option("--out", config.outPath,
                 "output base path (default: scenario name under $SPLITFIX_OUT_DIR)");
  app.add_option("--format", config.format, "summary format: csv (key=value lines) or json")
      ->capture_default_str();
  app.add_flag("--plot", config.plot, "also write an SVG plot of the trajectories");
  app.add_option("--set", setTexts, "override a scenario parameter, name=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string error;
  if (!x0Text.empty() && !parse_point(x0Text, config.x0, error)) {
    std::cerr << "error: " << error << "\n";
    return 2;
  }
  for (const auto& text : setTexts) {
    if (!parse_override(text, config.overrides, error)) {
      std::cerr << "error: " << error << "\n";
      return 2;
    }
  }

  return splitfix::run(config, std::cout, std::cerr);
}
