#include "sealci/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "sealci/baselines.hpp"
#include "sealci/errors.hpp"
#include "sealci/version.hpp"

namespace sealci {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of nothing");
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<double> full_curve(const RunRecord& rec) {
  std::vector<double> curve = rec.similarity;
  curve.push_back(rec.final_similarity);
  return curve;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

fs::path ensure_out_dir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("output directory is empty");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "'");
  return fs::path(dir);
}

Pattern load_pattern_file(const std::string& path) {
  return load_pattern(read_file(path));
}

/// Runs fn(0..n-1) on up to `jobs` threads; rethrows the first failure.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    while (true) {
      int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct RunTiming {
  std::string label;
  double seconds = 0.0;
};

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const RunConfig& cfg,
                    const std::vector<std::uint64_t>& seeds,
                    const std::vector<std::string>& outputs,
                    const std::vector<RunTiming>& timings) {
  json m;
  m["command"] = command;
  m["config_hash"] = cfg.config_hash;
  m["tool_version"] = kToolVersion;
  m["seeds"] = seeds;
  m["outputs"] = outputs;
  json runs = json::array();
  for (const RunTiming& t : timings) {
    runs.push_back({{"label", t.label}, {"seconds", t.seconds}});
  }
  m["runs"] = runs;
  write_file(out_dir / "manifest.json", m.dump(2) + "\n");
}

std::vector<std::uint64_t> seed_list(const RunConfig& cfg) {
  std::vector<std::uint64_t> seeds(cfg.seed_count);
  for (int i = 0; i < cfg.seed_count; ++i) {
    seeds[i] = cfg.base_seed + static_cast<std::uint64_t>(i);
  }
  return seeds;
}

double run_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string similarity_csv(const std::vector<double>& curve) {
  std::string out = "iteration,similarity\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out += std::to_string(i) + "," + format_fixed(curve[i]) + "\n";
  }
  return out;
}

}  // namespace

void cmd_seal_run(const RunConfig& cfg, int jobs) {
  Pattern pattern = load_pattern_file(cfg.pattern_path);
  validate_seal_config(cfg.seal, pattern, cfg.agent_count);
  std::vector<std::uint64_t> seeds = seed_list(cfg);

  std::vector<RunRecord> records(seeds.size());
  std::vector<RunTiming> timings(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), jobs, [&](int i) {
    auto t0 = std::chrono::steady_clock::now();
    SealConfig c = cfg.seal;
    c.seed = seeds[i];
    records[i] = run_seal(c, pattern, cfg.agent_count);
    timings[i] = {"seed=" + std::to_string(seeds[i]), run_seconds(t0)};
  });

  fs::path out_dir = ensure_out_dir(cfg.output_dir);
  std::vector<std::string> outputs;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    std::string csv_name = "similarity_seed" + std::to_string(seeds[i]) +
                           ".csv";
    std::string frame_name = "frame_seed" + std::to_string(seeds[i]) + ".txt";
    write_file(out_dir / csv_name, similarity_csv(full_curve(records[i])));
    write_file(out_dir / frame_name,
               frame_to_text(records[i].final_occupancy, pattern.mask));
    outputs.push_back(csv_name);
    outputs.push_back(frame_name);
  }
  write_manifest(out_dir, "seal-run", cfg, seeds, outputs, timings);
  std::cout << "seal-run: " << outputs.size() << " files in "
            << out_dir.string() << "\n";
}

void cmd_noise_sweep(const RunConfig& cfg, int jobs) {
  Pattern pattern = load_pattern_file(cfg.pattern_path);
  validate_seal_config(cfg.seal, pattern, cfg.agent_count);
  if (cfg.noise_levels.empty()) {
    throw ConfigError("noise-sweep: noise_levels must be non-empty");
  }
  std::vector<std::uint64_t> seeds = seed_list(cfg);
  const int levels = static_cast<int>(cfg.noise_levels.size());
  const int runs = levels * cfg.seed_count;

  std::vector<double> finals(runs);
  std::vector<RunTiming> timings(runs);
  parallel_for(runs, jobs, [&](int idx) {
    auto t0 = std::chrono::steady_clock::now();
    int level = idx / cfg.seed_count;
    int s = idx % cfg.seed_count;
    SealConfig c = cfg.seal;
    c.noise.std = cfg.noise_levels[level];
    c.seed = seeds[s];
    finals[idx] = run_seal(c, pattern, cfg.agent_count).final_similarity;
    timings[idx] = {"N0=" + format_fixed(cfg.noise_levels[level]) +
                        ",seed=" + std::to_string(seeds[s]),
                    run_seconds(t0)};
  });

  std::string csv = "N0,seed,final_similarity,median_flag\n";
  for (int level = 0; level < levels; ++level) {
    for (int s = 0; s < cfg.seed_count; ++s) {
      csv += format_fixed(cfg.noise_levels[level]) + "," +
             std::to_string(seeds[s]) + "," +
             format_fixed(finals[level * cfg.seed_count + s]) + ",0\n";
    }
  }
  for (int level = 0; level < levels; ++level) {
    std::vector<double> per_level(
        finals.begin() + level * cfg.seed_count,
        finals.begin() + (level + 1) * cfg.seed_count);
    csv += format_fixed(cfg.noise_levels[level]) + ",-1," +
           format_fixed(median(std::move(per_level))) + ",1\n";
  }

  fs::path out_dir = ensure_out_dir(cfg.output_dir);
  write_file(out_dir / "noise_sweep.csv", csv);
  write_manifest(out_dir, "noise-sweep", cfg, seeds, {"noise_sweep.csv"},
                 timings);
  std::cout << "noise-sweep: " << runs << " runs in " << out_dir.string()
            << "\n";
}

void cmd_baseline_compare(const RunConfig& cfg, int jobs) {
  Pattern pattern = load_pattern_file(cfg.pattern_path);
  validate_seal_config(cfg.seal, pattern, cfg.agent_count);
  validate_baseline_params(cfg.baseline);
  if (cfg.seal.max_iterations < 150) {
    throw ConfigError(
        "baseline-compare: max_iterations must be >= 150 for the "
        "at-150 column");
  }
  std::vector<std::uint64_t> seeds = seed_list(cfg);
  const std::vector<std::string> algos{"SEAL", "IQL", "HQL", "LMRL"};
  const int runs = static_cast<int>(algos.size()) * cfg.seed_count;

  std::vector<double> at150(runs), finals(runs);
  std::vector<RunTiming> timings(runs);
  parallel_for(runs, jobs, [&](int idx) {
    auto t0 = std::chrono::steady_clock::now();
    int a = idx / cfg.seed_count;
    int s = idx % cfg.seed_count;
    SealConfig c = cfg.seal;
    c.seed = seeds[s];
    RunRecord rec;
    if (a == 0) {
      rec = run_seal(c, pattern, cfg.agent_count);
    } else {
      BaselineAlgo algo = a == 1 ? BaselineAlgo::Iql
                          : a == 2 ? BaselineAlgo::Hql
                                   : BaselineAlgo::Lmrl;
      rec = run_baseline(algo, c, pattern, cfg.agent_count, cfg.baseline);
    }
    std::vector<double> curve = full_curve(rec);
    at150[idx] = curve[150];
    finals[idx] = rec.final_similarity;
    timings[idx] = {algos[a] + ",seed=" + std::to_string(seeds[s]),
                    run_seconds(t0)};
  });

  std::string csv = "algo,seed,similarity_at_150,final_similarity\n";
  for (std::size_t a = 0; a < algos.size(); ++a) {
    for (int s = 0; s < cfg.seed_count; ++s) {
      int idx = static_cast<int>(a) * cfg.seed_count + s;
      csv += algos[a] + "," + std::to_string(seeds[s]) + "," +
             format_fixed(at150[idx]) + "," + format_fixed(finals[idx]) +
             "\n";
    }
  }
  for (std::size_t a = 0; a < algos.size(); ++a) {
    std::vector<double> m150(at150.begin() + a * cfg.seed_count,
                             at150.begin() + (a + 1) * cfg.seed_count);
    std::vector<double> mfin(finals.begin() + a * cfg.seed_count,
                             finals.begin() + (a + 1) * cfg.seed_count);
    csv += algos[a] + ",-1," + format_fixed(median(std::move(m150))) + "," +
           format_fixed(median(std::move(mfin))) + "\n";
  }

  fs::path out_dir = ensure_out_dir(cfg.output_dir);
  write_file(out_dir / "baseline_compare.csv", csv);
  write_manifest(out_dir, "baseline-compare", cfg, seeds,
                 {"baseline_compare.csv"}, timings);
  std::cout << "baseline-compare: " << runs << " runs in " << out_dir.string()
            << "\n";
}

void cmd_auit_eval(const RunConfig& cfg) {
  const AuitExperiment& ax = cfg.auit;
  if (ax.patterns.empty()) {
    throw ConfigError("auit-eval: config lists no patterns");
  }
  std::vector<std::pair<std::string, MovementPattern>> patterns;
  for (const auto& [id, file] : ax.patterns) {
    patterns.emplace_back(id, parse_movement_pattern(read_file(file)));
  }
  std::vector<AuitCell> grid;
  for (const auto& [id, mp] : patterns) {
    for (const auto& [w, h] : ax.space_sizes) {
      grid.push_back({id, mp, mp, GridSpec{w, h, Boundary::Toroidal}});
    }
  }

  AuitEvalConfig eval;
  eval.team_size = ax.team_size;
  eval.policy = ax.policy;
  eval.sense_radius = ax.sense_radius;
  eval.episodes = ax.episodes;
  eval.steps_per_episode = ax.steps_per_episode;
  eval.prefix_checkpoints = ax.prefix_checkpoints;
  eval.seed = cfg.base_seed;
  for (CommMode mode : ax.comm_modes) {
    eval.comm = {mode, ax.bias_std, ax.range};
    validate_auit_config(eval, grid);
  }

  std::string csv =
      "pattern_id,space_w,space_h,comm_mode,episode,prefix_steps,"
      "anytime_score\n";
  std::vector<RunTiming> timings;
  for (CommMode mode : ax.comm_modes) {
    auto t0 = std::chrono::steady_clock::now();
    eval.comm = {mode, ax.bias_std, ax.range};
    for (const AuitScoreRow& row : evaluate_ci(eval, grid)) {
      csv += row.pattern_id + "," + std::to_string(row.space_w) + "," +
             std::to_string(row.space_h) + "," + comm_mode_name(mode) + "," +
             std::to_string(row.episode) + "," +
             std::to_string(row.prefix_steps) + "," +
             format_fixed(row.anytime_score) + "\n";
    }
    timings.push_back({std::string("comm=") + comm_mode_name(mode),
                       run_seconds(t0)});
  }

  fs::path out_dir = ensure_out_dir(cfg.output_dir);
  write_file(out_dir / "auit_scores.csv", csv);
  write_manifest(out_dir, "auit-eval", cfg, {cfg.base_seed},
                 {"auit_scores.csv"}, timings);
  std::cout << "auit-eval: " << grid.size() * ax.comm_modes.size()
            << " cells in " << out_dir.string() << "\n";
}

std::string frame_to_pgm(const std::string& frame_text) {
  std::istringstream in(frame_text);
  std::string header;
  int w = 0, h = 0;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("frame: empty file");
  {
    std::istringstream hs(line);
    if (!(hs >> header >> w >> h) || header != "P-PAT" || w < 1 || h < 1) {
      throw ConfigError("frame: bad header '" + line + "'");
    }
  }
  std::string pgm = "P2\n" + std::to_string(w) + " " + std::to_string(h) +
                    "\n255\n";
  for (int y = 0; y < h; ++y) {
    if (!std::getline(in, line) || static_cast<int>(line.size()) != w) {
      throw ConfigError("frame: row " + std::to_string(y) + " malformed");
    }
    for (int x = 0; x < w; ++x) {
      int level = line[x] == 'A' ? 255 : line[x] == '1' ? 128 : 0;
      if (line[x] != 'A' && line[x] != '1' && line[x] != '0') {
        throw ConfigError("frame: unexpected character");
      }
      pgm += std::to_string(level);
      pgm += x + 1 == w ? '\n' : ' ';
    }
  }
  return pgm;
}

void cmd_render(const std::string& frame_path, const std::string& out_dir) {
  std::string pgm = frame_to_pgm(read_file(frame_path));
  fs::path in(frame_path);
  fs::path dir = out_dir.empty() ? in.parent_path() : ensure_out_dir(out_dir);
  fs::path target = dir / in.stem();
  target += ".pgm";
  write_file(target, pgm);
  std::cout << "render: " << target.string() << "\n";
}

int run_cli(std::vector<std::string> args) {
  CLI::App app{"Stigmergic pattern-formation and collective-intelligence "
               "experiment driver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  int seeds_override = -1;
  int jobs = 1;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Experiment config (JSON)")
        ->required();
    sub->add_option("--out", out_override, "Output directory override");
    sub->add_option("--seeds", seeds_override, "Seed count override");
    sub->add_option("--jobs", jobs, "Concurrent runs");
  };

  CLI::App* seal = app.add_subcommand(
      "seal-run", "Pattern formation: one similarity CSV and final frame "
                  "per seed");
  add_common(seal);
  CLI::App* noise = app.add_subcommand(
      "noise-sweep", "Final similarity across sensing-noise levels");
  add_common(noise);
  CLI::App* compare = app.add_subcommand(
      "baseline-compare", "SEAL against IQL, HQL, and LMRL");
  add_common(compare);
  CLI::App* auit = app.add_subcommand(
      "auit-eval", "Anytime intelligence scores over the complexity grid");
  add_common(auit);

  std::string frame_path;
  CLI::App* render = app.add_subcommand(
      "render", "Convert a frame dump to a portable graymap");
  render->add_option("frame", frame_path, "Frame text file")->required();
  render->add_option("--out", out_override, "Output directory");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (render->parsed()) {
      cmd_render(frame_path, out_override);
      return 0;
    }
    if (jobs < 1) throw ConfigError("--jobs must be >= 1");
    if (seeds_override != -1 && seeds_override < 1) {
      throw ConfigError("--seeds must be >= 1");
    }
    RunConfig cfg = load_run_config(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    if (seeds_override != -1) cfg.seed_count = seeds_override;
    if (seal->parsed()) {
      cmd_seal_run(cfg, jobs);
    } else if (noise->parsed()) {
      cmd_noise_sweep(cfg, jobs);
    } else if (compare->parsed()) {
      cmd_baseline_compare(cfg, jobs);
    } else if (auit->parsed()) {
      cmd_auit_eval(cfg);
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace sealci
