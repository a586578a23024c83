#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>

#include "config.hpp"

namespace lambda_mixer::cli {

enum class Command { kEigen, kSimulate, kSweep, kValidate };

[[nodiscard]] std::optional<Command> parse_command(std::string_view name);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitValidation = 4;

/// Runs `cmd`, writing its artifact to `out`. Library errors are caught and
/// reported on `err` as a one-line JSON record; the return value is the exit
/// status. `validate` writes its report even when checks fail (status 4).
int run_command(Command cmd, const RunConfig& config, std::ostream& out, std::ostream& err);

/// One-line JSON error record: {"error": kind, "message": ..., plus key or
/// line/column for config errors}.
void write_error_record(std::ostream& err, const std::exception& e);

/// Sweep worker count: LAMBDA_MIXER_THREADS when set (minimum 1), otherwise
/// the hardware concurrency.
[[nodiscard]] unsigned sweep_threads();

}  // namespace lambda_mixer::cli
