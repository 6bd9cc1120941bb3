#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "linlab/claims.hpp"

namespace linlab::cli {

enum ExitCode : int { kExitPass = 0, kExitVerdictFailed = 1, kExitUsage = 2, kExitData = 3 };

// Output file could not be written; maps to kExitData.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;  // every TrainConfig field, as text
  std::uint64_t seed = 0;
  std::optional<std::string> timestamp;       // omitted under --no-timestamp
  std::vector<std::string> outputs;           // file names relative to the output dir
};

/// Shortest round-trip text for a double, 17 significant digits max; "nan"/"inf" for non-finite.
std::string format_double(double v);

/// One row per (step, layer); layers are numbered from 1.
void write_metrics_csv(std::span<const StepRecord> records, const std::filesystem::path& path);

/// Velocity structure of momentum runs, same layout as the metrics file.
void write_velocity_csv(std::span<const StepRecord> records, const std::filesystem::path& path);

void write_reduction_csv(const ReductionReport& rep, const std::filesystem::path& path);

void write_verdicts_json(std::span<const ClaimVerdict> verdicts, const RunManifest& manifest,
                         const std::filesystem::path& path);

/// Text form of every TrainConfig field, used for the manifest echo.
std::map<std::string, std::string> describe(const TrainConfig& cfg);

/// Parses and runs one command line. Returns the process exit code.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linlab::cli
