#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sealci/auit.hpp"
#include "sealci/baselines.hpp"
#include "sealci/seal.hpp"

namespace sealci {

struct AuitExperiment {
  int team_size = 5;
  AuitPolicy policy = AuitPolicy::GreedyGood;
  std::vector<CommMode> comm_modes{CommMode::Direct, CommMode::Indirect,
                                   CommMode::Imitation};
  double bias_std = 1.0;
  int range = 3;
  int sense_radius = 3;
  int episodes = 10;
  int steps_per_episode = 100;
  std::vector<int> prefix_checkpoints{25, 50, 100};
  // (pattern_id, resolved file path)
  std::vector<std::pair<std::string, std::string>> patterns;
  std::vector<std::pair<int, int>> space_sizes{{9, 9}, {15, 15}};
};

/// Everything the experiment commands consume. One file can drive several
/// commands; each command reads its own slice.
struct RunConfig {
  std::string pattern_path;
  int agent_count = 119;
  std::uint64_t base_seed = 1;
  int seed_count = 10;
  std::string output_dir = "out";
  SealConfig seal;
  std::vector<double> noise_levels{0.0, 0.5, 1.0, 2.0};
  BaselineParams baseline;
  AuitExperiment auit;
  std::string config_hash;  // filled on load
};

/// FNV-1a 64 over the canonical serialization, 16 hex digits.
std::string config_hash_hex(const std::string& canonical);

/// Parses and validates a config file. Relative paths inside the file
/// resolve against the file's own directory. Unknown keys are rejected so a
/// typo cannot silently fall back to a default. Throws ConfigError.
RunConfig load_run_config(const std::string& path);

/// Same, from already-loaded text; `base_dir` anchors relative paths.
RunConfig parse_run_config(const std::string& text,
                           const std::string& base_dir);

}  // namespace sealci
