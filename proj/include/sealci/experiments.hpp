#pragma once

#include <string>
#include <vector>

#include "sealci/config.hpp"

namespace sealci {

/// "%.6f" formatting; every CSV float goes through this so reruns are
/// byte-comparable.
std::string format_fixed(double v);

double median(std::vector<double> values);

/// similarity-after-i-iterations for i = 0..max_iterations (the trace plus
/// the final score).
std::vector<double> full_curve(const RunRecord& rec);

/// Pattern-text frame ('0'/'1'/'A') to portable graymap, P2, levels
/// 0/128/255.
std::string frame_to_pgm(const std::string& frame_text);

// The experiment recipes. All validate inputs before creating any output,
// write per-run files first, and finish with manifest.json. Throw
// ConfigError / InvariantViolation / IoError; run_cli maps those to exit
// codes.
void cmd_seal_run(const RunConfig& cfg, int jobs);
void cmd_noise_sweep(const RunConfig& cfg, int jobs);
void cmd_baseline_compare(const RunConfig& cfg, int jobs);
void cmd_auit_eval(const RunConfig& cfg);
void cmd_render(const std::string& frame_path, const std::string& out_dir);

/// Full command-line driver (args without the program name). Returns the
/// process exit code: 0 ok, 2 config, 3 invariant, 4 I/O.
int run_cli(std::vector<std::string> args);

}  // namespace sealci
