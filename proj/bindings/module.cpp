#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "sealci/auit.hpp"
#include "sealci/baselines.hpp"
#include "sealci/errors.hpp"
#include "sealci/experiments.hpp"
#include "sealci/federated.hpp"
#include "sealci/version.hpp"

namespace py = pybind11;

namespace {

using namespace sealci;

SealConfig make_seal_config(int iterations, std::uint64_t seed,
                            double noise_std, double active_fraction,
                            int sense_radius, double response_sigma) {
  SealConfig cfg;
  cfg.max_iterations = iterations;
  cfg.seed = seed;
  cfg.noise.std = noise_std;
  cfg.active_fraction = active_fraction;
  cfg.sense_radius = sense_radius;
  cfg.response_sigma = response_sigma;
  return cfg;
}

void apply_extras(SealConfig& cfg, double decay_factor, double deposit_inc,
                  double deposit_dec, double amount_cap, double priority_min,
                  double priority_max,
                  const std::vector<double>& labeled_deltas,
                  const std::vector<double>& unlabeled_deltas) {
  cfg.pheromone.decay_factor = decay_factor;
  cfg.pheromone.deposit_inc = deposit_inc;
  cfg.pheromone.deposit_dec = deposit_dec;
  cfg.pheromone.amount_cap = amount_cap;
  cfg.priority_min = priority_min;
  cfg.priority_max = priority_max;
  if (labeled_deltas.size() != 5 || unlabeled_deltas.size() != 5) {
    throw ConfigError("reward delta lists must have 5 entries");
  }
  for (int n = 0; n < 5; ++n) {
    cfg.reward_table.set(true, n, labeled_deltas[n]);
    cfg.reward_table.set(false, n, unlabeled_deltas[n]);
  }
}

py::dict record_to_dict(const RunRecord& rec, const LabeledMask& mask) {
  py::dict out;
  out["similarity"] = full_curve(rec);
  out["final_similarity"] = rec.final_similarity;
  out["frame"] = frame_to_text(rec.final_occupancy, mask);
  out["seed"] = rec.seed;
  return out;
}

BaselineAlgo algo_from_name(const std::string& name) {
  if (name == "IQL") return BaselineAlgo::Iql;
  if (name == "HQL") return BaselineAlgo::Hql;
  if (name == "LMRL") return BaselineAlgo::Lmrl;
  throw ConfigError("unknown baseline algo '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stigmergic pattern formation, tabular learners, and the "
            "anytime intelligence harness";
  m.attr("__version__") = kToolVersion;

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const IoError& e) {
      PyErr_SetString(PyExc_OSError, e.what());
    } catch (const InvariantViolation& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  m.def(
      "run_seal",
      [](const std::string& pattern_text, int agent_count, std::uint64_t seed,
         int iterations, double noise_std, double active_fraction,
         int sense_radius, double response_sigma, double decay_factor,
         double deposit_inc, double deposit_dec, double amount_cap,
         double priority_min, double priority_max,
         const std::vector<double>& labeled_deltas,
         const std::vector<double>& unlabeled_deltas) {
        Pattern pattern = load_pattern(pattern_text);
        SealConfig cfg =
            make_seal_config(iterations, seed, noise_std, active_fraction,
                             sense_radius, response_sigma);
        apply_extras(cfg, decay_factor, deposit_inc, deposit_dec, amount_cap,
                     priority_min, priority_max, labeled_deltas,
                     unlabeled_deltas);
        RunRecord rec = run_seal(cfg, pattern, agent_count);
        return record_to_dict(rec, pattern.mask);
      },
      py::arg("pattern"), py::arg("agent_count"), py::arg("seed") = 1,
      py::arg("iterations") = 300, py::arg("noise_std") = 0.0,
      py::arg("active_fraction") = 0.11, py::arg("sense_radius") = 10,
      py::arg("response_sigma") = 2.0, py::arg("decay_factor") = 0.98,
      py::arg("deposit_inc") = 1.0, py::arg("deposit_dec") = 1.0,
      py::arg("amount_cap") = 1.0, py::arg("priority_min") = -10.0,
      py::arg("priority_max") = 10.0,
      py::arg("labeled_deltas") =
          std::vector<double>{0.3, 0.15, 0.0, -0.4, -0.8},
      py::arg("unlabeled_deltas") =
          std::vector<double>{0.3, 0.3, 0.3, 0.3, 0.3},
      "Run the cooperative engine on a pattern given as text; returns the "
      "similarity curve (entry i = score after i iterations), the final "
      "score, and the final frame.");

  m.def(
      "run_baseline",
      [](const std::string& algo, const std::string& pattern_text,
         int agent_count, std::uint64_t seed, int iterations,
         int sense_radius) {
        Pattern pattern = load_pattern(pattern_text);
        SealConfig cfg = make_seal_config(iterations, seed, 0.0, 0.11,
                                          sense_radius, 2.0);
        RunRecord rec = run_baseline(algo_from_name(algo), cfg, pattern,
                                     agent_count, BaselineParams{});
        return record_to_dict(rec, pattern.mask);
      },
      py::arg("algo"), py::arg("pattern"), py::arg("agent_count"),
      py::arg("seed") = 1, py::arg("iterations") = 150,
      py::arg("sense_radius") = 10,
      "Run IQL, HQL, or LMRL on the same task and return the same record "
      "shape as run_seal.");

  m.def(
      "run_seal_learned",
      [](const std::string& pattern_text, int agent_count, std::uint64_t seed,
         int iterations, double gamma, double learning_rate,
         int sense_radius) {
        Pattern pattern = load_pattern(pattern_text);
        SealConfig cfg = make_seal_config(iterations, seed, 0.0, 0.11,
                                          sense_radius, 2.0);
        LearnedSealResult res = run_seal_learned(cfg, pattern, agent_count,
                                                 gamma, learning_rate);
        py::dict out;
        out["similarity"] = res.similarity;
        out["params"] = res.params;
        return out;
      },
      py::arg("pattern"), py::arg("agent_count"), py::arg("seed") = 1,
      py::arg("iterations") = 150, py::arg("gamma") = 0.9,
      py::arg("learning_rate") = 0.05, py::arg("sense_radius") = 10,
      "Cooperative engine with the federated value learner driving the "
      "priorities.");

  m.def(
      "similarity_of_frame",
      [](const std::string& pattern_text, const std::string& frame_text) {
        Pattern pattern = load_pattern(pattern_text);
        std::istringstream check(frame_text);
        Occupancy occ(pattern.spec);
        std::string line;
        std::getline(check, line);  // header
        std::uint32_t id = 0;
        for (int y = 0; y < pattern.spec.height; ++y) {
          if (!std::getline(check, line) ||
              static_cast<int>(line.size()) != pattern.spec.width) {
            throw ConfigError("frame does not match the pattern grid");
          }
          for (int x = 0; x < pattern.spec.width; ++x) {
            if (line[x] == 'A') occ.place(id++, {x, y});
          }
        }
        return similarity(occ, pattern.mask);
      },
      py::arg("pattern"), py::arg("frame"),
      "Score a frame dump against a pattern.");

  m.def("torus_distance",
        [](int ax, int ay, int bx, int by, int w, int h, bool toroidal) {
          GridSpec spec{w, h,
                        toroidal ? Boundary::Toroidal : Boundary::Bounded};
          return torus_distance({ax, ay}, {bx, by}, spec);
        },
        py::arg("ax"), py::arg("ay"), py::arg("bx"), py::arg("by"),
        py::arg("w"), py::arg("h"), py::arg("toroidal") = true);

  m.def("response_amplitude", &response_amplitude, py::arg("distance"),
        py::arg("sigma"));

  m.def("env_entropy",
        [](int w, int h) {
          return env_entropy(GridSpec{w, h, Boundary::Toroidal});
        },
        py::arg("w"), py::arg("h"),
        "log2(w*h), the position entropy of the space.");

  m.def(
      "pattern_complexity",
      [](const std::string& pattern_text, std::size_t length) {
        return pattern_complexity(parse_movement_pattern(pattern_text),
                                  length);
      },
      py::arg("pattern"), py::arg("length") = 1024,
      "Compressed size in bits of a movement pattern expanded to `length` "
      "symbols.");

  m.def(
      "random_movement_pattern",
      [](std::size_t length, std::uint64_t seed) {
        return movement_pattern_text(random_movement_pattern(length, seed));
      },
      py::arg("length"), py::arg("seed"),
      "Seeded uniform action string, as comma-separated mnemonics.");

  m.def(
      "evaluate_ci",
      [](const std::string& pattern_text, int w, int h,
         const std::string& comm_mode, const std::string& policy,
         int team_size, int episodes, int steps, std::uint64_t seed) {
        AuitEvalConfig cfg;
        cfg.team_size = team_size;
        cfg.episodes = episodes;
        cfg.steps_per_episode = steps;
        cfg.seed = seed;
        if (policy == "STAY") {
          cfg.policy = AuitPolicy::Stay;
        } else if (policy == "RANDOM") {
          cfg.policy = AuitPolicy::Random;
        } else if (policy == "GREEDY_GOOD") {
          cfg.policy = AuitPolicy::GreedyGood;
        } else {
          throw ConfigError("unknown policy '" + policy + "'");
        }
        if (comm_mode == "DIRECT") {
          cfg.comm.mode = CommMode::Direct;
        } else if (comm_mode == "INDIRECT") {
          cfg.comm.mode = CommMode::Indirect;
          cfg.comm.bias_std = 1.0;
        } else if (comm_mode == "IMITATION") {
          cfg.comm.mode = CommMode::Imitation;
          cfg.comm.range = 3;
        } else {
          throw ConfigError("unknown comm mode '" + comm_mode + "'");
        }
        MovementPattern mp = parse_movement_pattern(pattern_text);
        std::vector<AuitCell> grid{
            {"cell", mp, mp, GridSpec{w, h, Boundary::Toroidal}}};
        std::vector<py::dict> rows;
        for (const AuitScoreRow& row : evaluate_ci(cfg, grid)) {
          py::dict d;
          d["episode"] = row.episode;
          d["prefix_steps"] = row.prefix_steps;
          d["anytime_score"] = row.anytime_score;
          rows.push_back(d);
        }
        return rows;
      },
      py::arg("pattern"), py::arg("w"), py::arg("h"),
      py::arg("comm_mode") = "DIRECT", py::arg("policy") = "GREEDY_GOOD",
      py::arg("team_size") = 5, py::arg("episodes") = 10,
      py::arg("steps") = 100, py::arg("seed") = 1,
      "Anytime intelligence scores for one complexity cell.");

  m.def("run_cli", &run_cli, py::arg("args"),
        "Invoke the experiment driver in-process; returns the exit code.");
}
