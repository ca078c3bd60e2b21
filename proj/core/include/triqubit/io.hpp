#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "triqubit/classifier.hpp"
#include "triqubit/optimizer.hpp"
#include "triqubit/slocc.hpp"
#include "triqubit/state.hpp"

namespace triqubit {

/// Parse failure with a 1-based source position. what() reads
/// "source:line:column: message".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, int line, int column, const std::string& message);

  [[nodiscard]] int line() const noexcept { return line_; }
  [[nodiscard]] int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// State files. Two forms, '#' starts a comment:
//
//   qubits 3                 W1     0.7071067811865476  0
//   000 0.70710678 0.0       W1bar  0.7071067811865476  0
//   111 0.70710678 0.0
//
// The left form lists (bit string, real part, imaginary part) after a
// "qubits N" header; the right lists (term label, modulus, phase in radians)
// for a triqubit state. Missing kets have amplitude zero and the result is
// normalized.
[[nodiscard]] PureState parse_state(std::string_view text, std::string_view source = "<state>");
[[nodiscard]] PureState load_state_file(const std::filesystem::path& path);
[[nodiscard]] std::string format_state_file(const PureState& state);

// Optimizer configuration as key=value lines.
[[nodiscard]] OptConfig parse_config(std::string_view text, std::string_view source = "<config>");
[[nodiscard]] OptConfig load_config_file(const std::filesystem::path& path);
[[nodiscard]] std::map<std::string, std::string> config_snapshot(const OptConfig& config);
[[nodiscard]] std::string format_config(const OptConfig& config);

/// Embedded in every report so a run can be repeated from the report alone.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> arguments;
  std::map<std::string, std::string> config;
  std::uint64_t rng_seed = 0;
  std::string version;
  std::string started_at;
  std::string finished_at;

  static RunManifest begin(std::string command, const OptConfig& config);
  void finish();
};

/// The manifest as a JSON object.
[[nodiscard]] std::string manifest_to_json(const RunManifest& manifest);

[[nodiscard]] std::string library_version();
[[nodiscard]] std::string utc_timestamp();

/// Shortest decimal text that reads back to the same double.
[[nodiscard]] std::string format_double(double value);

[[nodiscard]] std::string extrema_to_json(const TermCombination& combination, const Extrema& extrema,
                                          const RunManifest& manifest);
[[nodiscard]] std::string survey_to_json(const SurveyReport& report, const RunManifest& manifest);
/// Columns: k, type, count, extremal_E_values, interior_flags,
/// witness_coefficients. List-valued cells are ';'-separated. The manifest is
/// written as leading "# key=value" lines.
[[nodiscard]] std::string survey_to_csv(const SurveyReport& report, const RunManifest& manifest);
/// Columns: sample, operator_seed, E_before, E_after, ranks_before,
/// ranks_after, ranks_preserved.
[[nodiscard]] std::string scan_to_csv(const std::vector<ScanSample>& samples, const RunManifest& manifest);

}  // namespace triqubit
