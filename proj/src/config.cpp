#include "sealci/config.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "sealci/errors.hpp"

namespace sealci {

using nlohmann::json;

std::string config_hash_hex(const std::string& canonical) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

namespace {

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const char* where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigError(std::string("config: unknown key '") + item.key() +
                        "' in " + where);
    }
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ConfigError(std::string("config: '") + key + "' must be a number");
  }
  return v.get<double>();
}

int get_int(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError(std::string("config: '") + key +
                      "' must be an integer");
  }
  return v.get<int>();
}

std::string get_string(const json& obj, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) {
    throw ConfigError(std::string("config: '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::string resolve_path(const std::string& base_dir, const std::string& p) {
  std::filesystem::path path(p);
  if (p.empty() || path.is_absolute() || base_dir.empty()) return p;
  return (std::filesystem::path(base_dir) / path).lexically_normal().string();
}

void parse_reward_table(const json& obj, RewardTable& table) {
  require_keys(obj, {"labeled", "unlabeled"}, "reward_table");
  for (const char* key : {"unlabeled", "labeled"}) {
    if (!obj.contains(key)) {
      throw ConfigError(std::string("config: reward_table needs '") + key +
                        "'");
    }
    const json& arr = obj.at(key);
    if (!arr.is_array() || arr.size() != 5) {
      throw ConfigError(std::string("config: reward_table '") + key +
                        "' must list 5 numbers (neighbor counts 0..4)");
    }
    for (int n = 0; n < 5; ++n) {
      if (!arr[n].is_number()) {
        throw ConfigError("config: reward_table entries must be numbers");
      }
      table.set(key[0] == 'l', n, arr[n].get<double>());
    }
  }
}

void parse_seal(const json& obj, SealConfig& seal) {
  require_keys(obj,
               {"active_fraction", "sense_radius", "response_sigma",
                "max_iterations", "priority_min", "priority_max", "noise_std",
                "pheromone", "reward_table"},
               "seal");
  seal.active_fraction =
      get_number(obj, "active_fraction", seal.active_fraction);
  seal.sense_radius = get_int(obj, "sense_radius", seal.sense_radius);
  seal.response_sigma = get_number(obj, "response_sigma", seal.response_sigma);
  seal.max_iterations = get_int(obj, "max_iterations", seal.max_iterations);
  seal.priority_min = get_number(obj, "priority_min", seal.priority_min);
  seal.priority_max = get_number(obj, "priority_max", seal.priority_max);
  seal.noise.std = get_number(obj, "noise_std", seal.noise.std);
  if (obj.contains("pheromone")) {
    const json& ph = obj.at("pheromone");
    require_keys(ph, {"decay_factor", "deposit_inc", "deposit_dec",
                      "amount_cap", "floor"},
                 "pheromone");
    seal.pheromone.decay_factor =
        get_number(ph, "decay_factor", seal.pheromone.decay_factor);
    seal.pheromone.deposit_inc =
        get_number(ph, "deposit_inc", seal.pheromone.deposit_inc);
    seal.pheromone.deposit_dec =
        get_number(ph, "deposit_dec", seal.pheromone.deposit_dec);
    seal.pheromone.amount_cap =
        get_number(ph, "amount_cap", seal.pheromone.amount_cap);
    seal.pheromone.floor = get_number(ph, "floor", seal.pheromone.floor);
  }
  if (obj.contains("reward_table")) {
    parse_reward_table(obj.at("reward_table"), seal.reward_table);
  }
}

void parse_baseline(const json& obj, BaselineParams& p) {
  require_keys(obj,
               {"alpha", "beta", "gamma", "epsilon_start", "epsilon_end",
                "t0", "kappa", "k"},
               "baseline");
  p.alpha = get_number(obj, "alpha", p.alpha);
  p.beta = get_number(obj, "beta", p.beta);
  p.gamma = get_number(obj, "gamma", p.gamma);
  p.epsilon_start = get_number(obj, "epsilon_start", p.epsilon_start);
  p.epsilon_end = get_number(obj, "epsilon_end", p.epsilon_end);
  p.t0 = get_number(obj, "t0", p.t0);
  p.kappa = get_number(obj, "kappa", p.kappa);
  p.k = get_number(obj, "k", p.k);
}

CommMode parse_comm_mode(const std::string& name) {
  if (name == "DIRECT") return CommMode::Direct;
  if (name == "INDIRECT") return CommMode::Indirect;
  if (name == "IMITATION") return CommMode::Imitation;
  throw ConfigError("config: unknown comm mode '" + name + "'");
}

AuitPolicy parse_policy(const std::string& name) {
  if (name == "STAY") return AuitPolicy::Stay;
  if (name == "RANDOM") return AuitPolicy::Random;
  if (name == "GREEDY_GOOD") return AuitPolicy::GreedyGood;
  throw ConfigError("config: unknown policy '" + name + "'");
}

void parse_auit(const json& obj, AuitExperiment& auit,
                const std::string& base_dir) {
  require_keys(obj,
               {"team_size", "policy", "comm_modes", "bias_std", "range",
                "sense_radius", "episodes", "steps_per_episode",
                "prefix_checkpoints", "patterns", "space_sizes"},
               "auit");
  auit.team_size = get_int(obj, "team_size", auit.team_size);
  auit.policy = parse_policy(get_string(obj, "policy", "GREEDY_GOOD"));
  auit.bias_std = get_number(obj, "bias_std", auit.bias_std);
  auit.range = get_int(obj, "range", auit.range);
  auit.sense_radius = get_int(obj, "sense_radius", auit.sense_radius);
  auit.episodes = get_int(obj, "episodes", auit.episodes);
  auit.steps_per_episode =
      get_int(obj, "steps_per_episode", auit.steps_per_episode);
  if (obj.contains("comm_modes")) {
    auit.comm_modes.clear();
    for (const json& m : obj.at("comm_modes")) {
      if (!m.is_string()) throw ConfigError("config: comm_modes are strings");
      auit.comm_modes.push_back(parse_comm_mode(m.get<std::string>()));
    }
    if (auit.comm_modes.empty()) {
      throw ConfigError("config: comm_modes must be non-empty");
    }
  }
  if (obj.contains("prefix_checkpoints")) {
    auit.prefix_checkpoints.clear();
    for (const json& n : obj.at("prefix_checkpoints")) {
      if (!n.is_number_integer()) {
        throw ConfigError("config: prefix_checkpoints are integers");
      }
      auit.prefix_checkpoints.push_back(n.get<int>());
    }
  }
  if (obj.contains("patterns")) {
    auit.patterns.clear();
    for (const json& entry : obj.at("patterns")) {
      if (!entry.is_object()) {
        throw ConfigError("config: auit patterns are {id, file} objects");
      }
      require_keys(entry, {"id", "file"}, "auit pattern");
      std::string id = get_string(entry, "id", "");
      std::string file = get_string(entry, "file", "");
      if (id.empty() || file.empty()) {
        throw ConfigError("config: auit pattern needs id and file");
      }
      auit.patterns.emplace_back(id, resolve_path(base_dir, file));
    }
  }
  if (obj.contains("space_sizes")) {
    auit.space_sizes.clear();
    for (const json& s : obj.at("space_sizes")) {
      if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() ||
          !s[1].is_number_integer()) {
        throw ConfigError("config: space_sizes entries are [w, h]");
      }
      auit.space_sizes.emplace_back(s[0].get<int>(), s[1].get<int>());
    }
    if (auit.space_sizes.empty()) {
      throw ConfigError("config: space_sizes must be non-empty");
    }
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& text,
                           const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: parse failed: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  require_keys(j,
               {"pattern", "agent_count", "base_seed", "seed_count",
                "output_dir", "seal", "noise_levels", "baseline", "auit"},
               "top level");

  RunConfig cfg;
  cfg.pattern_path = resolve_path(base_dir, get_string(j, "pattern", ""));
  cfg.agent_count = get_int(j, "agent_count", cfg.agent_count);
  if (cfg.agent_count < 1) {
    throw ConfigError("config: agent_count must be >= 1");
  }
  if (j.contains("base_seed")) {
    const json& v = j.at("base_seed");
    if (!v.is_number_unsigned() && !v.is_number_integer()) {
      throw ConfigError("config: 'base_seed' must be an integer");
    }
    cfg.base_seed = v.get<std::uint64_t>();
  }
  cfg.seed_count = get_int(j, "seed_count", cfg.seed_count);
  if (cfg.seed_count < 1) throw ConfigError("config: seed_count must be >= 1");
  cfg.output_dir = get_string(j, "output_dir", cfg.output_dir);
  if (j.contains("seal")) parse_seal(j.at("seal"), cfg.seal);
  if (j.contains("noise_levels")) {
    cfg.noise_levels.clear();
    for (const json& n : j.at("noise_levels")) {
      if (!n.is_number()) {
        throw ConfigError("config: noise_levels are numbers");
      }
      double v = n.get<double>();
      if (v < 0.0) throw ConfigError("config: noise levels must be >= 0");
      cfg.noise_levels.push_back(v);
    }
    if (cfg.noise_levels.empty()) {
      throw ConfigError("config: noise_levels must be non-empty");
    }
  }
  if (j.contains("baseline")) parse_baseline(j.at("baseline"), cfg.baseline);
  if (j.contains("auit")) parse_auit(j.at("auit"), cfg.auit, base_dir);

  // Canonical form: nlohmann keeps object keys sorted, so a re-dump of the
  // parsed tree is whitespace- and order-insensitive.
  cfg.config_hash = config_hash_hex(j.dump());
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string base_dir = std::filesystem::path(path).parent_path().string();
  return parse_run_config(buf.str(), base_dir);
}

}  // namespace sealci
