#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "supercoherence/result_table.hpp"

namespace supercoherence::cli {

inline constexpr const char* kToolName = "supercoherent";
inline constexpr const char* kToolVersion = "1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Subcommand { spectrum, paths, selection, lindblad, fidelity };

const char* subcommand_name(Subcommand s);

struct ExperimentConfig {
  Subcommand subcommand = Subcommand::spectrum;
  /// Effective parameters (defaults, then config file, then flags).
  nlohmann::json parameters = nlohmann::json::object();
  std::optional<std::string> out;
  OutputFormat format = OutputFormat::csv;
  bool verbose = false;

  /// Flat object: every parameter plus "subcommand" and "format". Accepted
  /// back by --config.
  nlohmann::json echo() const;
};

/// Parses arguments (without the program name). Throws UsageError naming the
/// offending subcommand, key or value.
ExperimentConfig parse_config(const std::vector<std::string>& args);

/// Runs the experiment. Module precondition failures surface as
/// std::invalid_argument; numerical failures as IntegrationError,
/// EstimationError or std::logic_error.
ResultTable run_experiment(const ExperimentConfig& config);

/// Full command-line entry point; returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace supercoherence::cli
