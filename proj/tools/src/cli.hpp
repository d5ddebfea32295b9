#pragma once

// Command-line front end. parse_args turns argv (and an optional --config
// file) into a RunConfig; run executes it and writes the data files.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cohprobe/ed.hpp"
#include "cohprobe/quadrature.hpp"
#include "cohprobe/tfim.hpp"
#include "output.hpp"

namespace cohprobe::cli {

enum class Command { Scan, Point, Locus, Discord, Oracle, Figures };
enum class ModelName { Tfim, Xx, Kitaev };
enum class Format { Csv, Json };

const char* to_string(Command c) noexcept;
const char* to_string(ModelName m) noexcept;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "min:max:step", "a,b,c" or a single number.
std::vector<double> parse_values(const std::string& text);

struct RunConfig {
  Command command = Command::Scan;
  ModelName model = ModelName::Tfim;
  std::optional<tfim::StateKind> state;        // tfim only; unset: thermal_ground
  std::optional<tfim::Convention> convention;  // unset: the state's own
  std::string lambda;     // empty: command default
  std::string kbt;        // empty: command default
  std::string couplings;  // kitaev point "jx,jy,jz"
  double diff_step = 1e-4;
  bool richardson = false;
  bool refine = false;
  bool xx_no_yy = false;
  quad::QuadratureSpec quadrature{};
  int n_sites = 12;
  ed::Boundary boundary = ed::Boundary::Periodic;
  std::string which = "all";
  bool discord_locus = false;
  bool verify = false;
  bool fit = true;
  int angle_grid = 721;
  std::string output = "-";
  Format format = Format::Csv;

  /// Cross-flag consistency. Throws UsageError.
  void validate() const;

  std::string lambda_or_default() const;
  std::string kbt_or_default() const;
  tfim::StateKind state_or_default() const;
  tfim::Convention convention_or_default() const;
};

/// Returns nullopt when help or version text was printed instead.
/// Throws UsageError on bad flags or a bad config file.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// key=value pairs (flag names) that reproduce the run when fed back through
/// --config.
Metadata config_entries(const RunConfig& c);

/// Executes the run. Returns the process exit code: 0 success, 1 numerical
/// failure, 2 usage error.
int run(const RunConfig& c, std::ostream& out, std::ostream& err);

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cohprobe::cli
