#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bubblefem::cli {

enum class Command { coeff, steady, transient, tables, convergence, selftest };
enum class Format { table, csv, json };

struct BoundarySpec {
  bool dirichlet = true;
  double value = 0.0;
};

/// Everything a run needs. Unset optionals take the per-command defaults
/// listed in `bubblefem --help` (the benchmark problems).
struct RunConfig {
  Command command = Command::selftest;
  Format format = Format::table;
  std::string out;  ///< empty: write to stdout

  std::optional<double> epsilon;
  std::optional<double> kappa;
  std::optional<double> lambda;
  std::optional<double> domain_start;
  std::optional<double> domain_end;
  std::optional<BoundarySpec> left_bc;
  std::optional<BoundarySpec> right_bc;

  std::optional<int> elements;
  std::optional<std::string> enrichment;
  std::optional<int> quad_points;
  std::optional<int> samples;  ///< sample points per element, >= 1

  // coeff
  std::optional<double> length;
  std::optional<int> order;
  std::optional<double> u0;
  std::optional<double> ul;

  // transient
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<int> stride;
  std::optional<std::string> profile;  ///< "sine" or "hat"
  std::optional<bool> sign_compat;

  // convergence
  std::optional<std::vector<int>> counts;
  std::optional<std::vector<std::string>> enrichments;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitAcceptance = 3;

/// Parses a JSON config document into `config`, leaving unmentioned fields
/// untouched. Throws ArgumentError naming the line and field on bad input.
void apply_config_text(const std::string& text, const std::string& source, RunConfig& config);
void apply_config_file(const std::string& path, RunConfig& config);

/// Runs a fully populated config. Data goes to `out` (or config.out),
/// diagnostics to `err`. Returns one of the kExit codes.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Command-line entry point: flags override values from --config.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bubblefem::cli
