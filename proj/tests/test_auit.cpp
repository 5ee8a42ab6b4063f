#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sealci/auit.hpp"
#include "sealci/errors.hpp"

using namespace sealci;

namespace {

const GridSpec kTorus{9, 9, Boundary::Toroidal};

bool rows_equal(const AuitScoreRow& a, const AuitScoreRow& b) {
  return a.pattern_id == b.pattern_id && a.space_w == b.space_w &&
         a.space_h == b.space_h && a.comm_mode == b.comm_mode &&
         a.episode == b.episode && a.prefix_steps == b.prefix_steps &&
         a.anytime_score == b.anytime_score;
}

AuitCell cell_with(const std::string& id, const std::string& good,
                   const std::string& evil, GridSpec spec = kTorus) {
  return {id, parse_movement_pattern(good), parse_movement_pattern(evil), spec};
}

double mean_score(const std::vector<AuitScoreRow>& rows) {
  double sum = 0.0;
  for (const AuitScoreRow& r : rows) sum += r.anytime_score;
  return sum / static_cast<double>(rows.size());
}

}  // namespace

TEST_CASE("auit_move wraps every cell and every action inverts") {
  GridSpec spec{5, 4, Boundary::Toroidal};
  const AuitAction inverse[kAuitActionCount] = {
      AuitAction::Right,    AuitAction::Left,     AuitAction::Down,
      AuitAction::Up,       AuitAction::DownRight, AuitAction::DownLeft,
      AuitAction::UpRight,  AuitAction::UpLeft,   AuitAction::Stay};
  for (int x = 0; x < spec.width; ++x) {
    for (int y = 0; y < spec.height; ++y) {
      for (int a = 0; a < kAuitActionCount; ++a) {
        Position from{x, y};
        Position to = auit_move(from, static_cast<AuitAction>(a), spec);
        CHECK(to.x >= 0);
        CHECK(to.x < spec.width);
        CHECK(to.y >= 0);
        CHECK(to.y < spec.height);
        CHECK(auit_move(to, inverse[a], spec) == from);
      }
    }
  }
  CHECK(auit_move({0, 0}, AuitAction::Left, spec) == Position{4, 0});
  CHECK(auit_move({4, 3}, AuitAction::DownRight, spec) == Position{0, 0});
}

TEST_CASE("movement patterns parse, print, and reject junk") {
  MovementPattern all = parse_movement_pattern("L,R,U,D,UL,UR,DL,DR,S");
  REQUIRE(all.actions.size() == 9);
  for (int i = 0; i < 9; ++i) {
    CHECK(all.actions[i] == static_cast<AuitAction>(i));
  }
  CHECK(movement_pattern_text(all) == "L,R,U,D,UL,UR,DL,DR,S");

  MovementPattern padded = parse_movement_pattern("  L ,\tR ");
  CHECK(movement_pattern_text(padded) == "L,R");

  CHECK_THROWS_AS(parse_movement_pattern(""), ConfigError);
  CHECK_THROWS_AS(parse_movement_pattern("   "), ConfigError);
  CHECK_THROWS_AS(parse_movement_pattern("L,X"), ConfigError);
  CHECK_THROWS_AS(parse_movement_pattern("L,,R"), ConfigError);
}

TEST_CASE("random patterns are seed-stable") {
  MovementPattern a = random_movement_pattern(50, 7);
  MovementPattern b = random_movement_pattern(50, 7);
  MovementPattern c = random_movement_pattern(50, 8);
  REQUIRE(a.actions.size() == 50);
  CHECK(a.actions == b.actions);
  CHECK(a.actions != c.actions);
}

TEST_CASE("expansion and cursors walk the pattern cyclically") {
  MovementPattern p = parse_movement_pattern("L,R");
  auto five = expand_pattern(p, 5);
  CHECK(five == std::vector<AuitAction>{AuitAction::Left, AuitAction::Right,
                                        AuitAction::Left, AuitAction::Right,
                                        AuitAction::Left});
  CHECK(expand_pattern(p, 0).empty());
  CHECK_THROWS_AS(expand_pattern(MovementPattern{}, 4), std::invalid_argument);

  PatternCursor cursor{&p, 0};
  CHECK(cursor.advance() == AuitAction::Left);
  CHECK(cursor.advance() == AuitAction::Right);
  CHECK(cursor.advance() == AuitAction::Left);
  CHECK(cursor.index == 3);
  PatternCursor dangling{nullptr, 0};
  CHECK_THROWS_AS(dangling.advance(), std::invalid_argument);
}

TEST_CASE("max torus distance spans opposite half-diagonals") {
  CHECK(max_torus_distance(kTorus) == std::sqrt(32.0));
  CHECK(max_torus_distance({8, 8, Boundary::Toroidal}) == std::sqrt(32.0));
  CHECK(max_torus_distance({15, 15, Boundary::Toroidal}) ==
        doctest::Approx(std::hypot(7.0, 7.0)));
}

TEST_CASE("auit_reward is the normalized distance gap between the objects") {
  // Equidistant placements score exactly zero.
  CHECK(auit_reward({4, 4}, {4, 6}, {4, 2}, kTorus) == 0.0);

  double d = std::sqrt(32.0);
  CHECK(auit_reward({0, 0}, {1, 0}, {4, 4}, kTorus) ==
        doctest::Approx((d - 1.0) / d));
  CHECK(auit_reward({0, 0}, {0, 0}, {4, 4}, kTorus) == 1.0);

  Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    GridSpec spec{3 + static_cast<int>(rng.uniform_below(12)),
                  3 + static_cast<int>(rng.uniform_below(12)),
                  Boundary::Toroidal};
    auto cell = [&] {
      return Position{static_cast<int>(rng.uniform_below(spec.width)),
                      static_cast<int>(rng.uniform_below(spec.height))};
    };
    Position agent = cell(), good = cell(), evil = cell();
    double r = auit_reward(agent, good, evil, spec);
    CHECK(r >= -1.0);
    CHECK(r <= 1.0);
    CHECK(r == -auit_reward(agent, evil, good, spec));
  }
}

TEST_CASE("step_auit moves agents, advances both objects, then scores") {
  AuitSpace space{kTorus, {{4, 4}}, {0, 0}, {0, 4}};
  MovementPattern right = parse_movement_pattern("R");
  MovementPattern stay = parse_movement_pattern("S");
  PatternCursor good_cursor{&right, 0};
  PatternCursor evil_cursor{&stay, 0};

  auto rewards = step_auit(space, {AuitAction::Stay}, good_cursor, evil_cursor);
  REQUIRE(rewards.size() == 1);
  CHECK(space.agents[0] == Position{4, 4});
  CHECK(space.good == Position{1, 0});
  CHECK(space.evil == Position{0, 4});
  CHECK(good_cursor.index == 1);
  CHECK(evil_cursor.index == 1);
  // Post-move distances: to Good hypot(3, 4) = 5, to Evil 4.
  CHECK(rewards[0] == doctest::Approx((4.0 - 5.0) / std::sqrt(32.0)));

  auto second = step_auit(space, {AuitAction::Right}, good_cursor, evil_cursor);
  CHECK(space.agents[0] == Position{5, 4});
  CHECK(space.good == Position{2, 0});

  CHECK_THROWS_AS(
      step_auit(space, {AuitAction::Stay, AuitAction::Stay}, good_cursor,
                evil_cursor),
      std::invalid_argument);
}

TEST_CASE("observe_objects uses a wrapped Chebyshev disc") {
  AuitSpace space{kTorus, {{4, 4}, {0, 0}}, {5, 5}, {0, 0}};
  auto near = observe_objects(space, 1);
  CHECK(near[0].good == Sighting{true, {5, 5}});
  CHECK(!near[0].evil.seen);
  CHECK(near[1].evil == Sighting{true, {0, 0}});

  auto wide = observe_objects(space, 4);
  CHECK(wide[0].evil == Sighting{true, {0, 0}});  // wrapped distance 4

  AuitSpace corner{kTorus, {{0, 0}}, {8, 8}, {4, 4}};
  auto wrapped = observe_objects(corner, 1);
  CHECK(wrapped[0].good == Sighting{true, {8, 8}});  // diagonal wrap
  CHECK(!wrapped[0].evil.seen);
}

TEST_CASE("share_observations honors the three channel shapes") {
  AuitSpace space{kTorus, {{2, 2}, {2, 2}, {5, 5}}, {1, 1}, {7, 7}};
  std::vector<Observation> obs(3);
  obs[0].good = {true, {1, 1}};
  obs[1].evil = {true, {7, 7}};
  std::vector<AuitAction> last{AuitAction::Left, AuitAction::Right,
                               AuitAction::Up};

  SUBCASE("direct mode pools every report verbatim") {
    Rng rng(1);
    auto beliefs = share_observations(space, obs, last, {CommMode::Direct},
                                      rng);
    REQUIRE(beliefs.size() == 3);
    CHECK(beliefs[0] == beliefs[1]);
    CHECK(beliefs[1] == beliefs[2]);
    REQUIRE(beliefs[0].reports.size() == 3);
    for (std::uint32_t j = 0; j < 3; ++j) {
      CHECK(beliefs[0].reports[j].reporter == j);
      CHECK(beliefs[0].reports[j].obs == obs[j]);
    }
    CHECK(beliefs[0].observed_actions.empty());
  }

  SUBCASE("indirect with zero bias degenerates to direct, rng untouched") {
    Rng direct_rng(2), indirect_rng(2), twin(2);
    auto direct = share_observations(space, obs, last, {CommMode::Direct},
                                     direct_rng);
    auto indirect = share_observations(
        space, obs, last, {CommMode::Indirect, 0.0, 0}, indirect_rng);
    CHECK(direct == indirect);
    CHECK(indirect_rng.next_u64() == twin.next_u64());
  }

  SUBCASE("indirect bias keeps own reports exact and stays on the grid") {
    CommParams comm{CommMode::Indirect, 2.5, 0};
    Rng rng(3), rng2(3);
    auto beliefs = share_observations(space, obs, last, comm, rng);
    auto again = share_observations(space, obs, last, comm, rng2);
    CHECK(beliefs == again);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(beliefs[i].reports[i].obs == obs[i]);
      for (const Report& rep : beliefs[i].reports) {
        for (const Sighting& s : {rep.obs.good, rep.obs.evil}) {
          if (!s.seen) continue;
          CHECK(s.pos.x >= 0);
          CHECK(s.pos.x < 9);
          CHECK(s.pos.y >= 0);
          CHECK(s.pos.y < 9);
        }
      }
      // Unseen sightings never become seen.
      CHECK(!beliefs[i].reports[2].obs.good.seen);
    }
  }

  SUBCASE("imitation shares actions, not observations") {
    CommParams comm{CommMode::Imitation, 0.0, 0};
    Rng rng(4);
    auto beliefs = share_observations(space, obs, last, comm, rng);
    REQUIRE(beliefs[0].reports.size() == 1);
    CHECK(beliefs[0].reports[0].reporter == 0);
    CHECK(beliefs[0].reports[0].obs == obs[0]);
    // Agents 0 and 1 share a cell; range 0 still connects them.
    REQUIRE(beliefs[0].observed_actions.size() == 1);
    CHECK(beliefs[0].observed_actions[0] ==
          std::pair<std::uint32_t, AuitAction>{1, AuitAction::Right});
    REQUIRE(beliefs[1].observed_actions.size() == 1);
    CHECK(beliefs[1].observed_actions[0].first == 0);
    CHECK(beliefs[2].observed_actions.empty());
  }

  SUBCASE("size mismatches throw") {
    Rng rng(5);
    CHECK_THROWS_AS(share_observations(space, {obs[0]}, last,
                                       {CommMode::Direct}, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("pattern complexity orders constant below random") {
  MovementPattern constant = parse_movement_pattern("S");
  int c = pattern_complexity(constant);
  CHECK(c > 0);
  CHECK(c == pattern_complexity(constant));
  CHECK(c % 8 == 0);

  MovementPattern two = parse_movement_pattern("L,R");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    MovementPattern noisy = random_movement_pattern(64, seed);
    CHECK(c < pattern_complexity(noisy));
    CHECK(pattern_complexity(two) <= pattern_complexity(noisy));
  }
}

TEST_CASE("environment entropy is the log of the cell count") {
  CHECK(env_entropy({2, 2, Boundary::Toroidal}) == 2.0);
  CHECK(env_entropy({8, 8, Boundary::Toroidal}) == 6.0);
  CHECK(env_entropy({1, 1, Boundary::Toroidal}) == 0.0);
  CHECK(env_entropy({28, 28, Boundary::Toroidal}) ==
        doctest::Approx(std::log2(784.0)));
}

TEST_CASE("validate_auit_config rejects malformed setups") {
  AuitEvalConfig ok;
  ok.prefix_checkpoints = {25, 50, 100};
  std::vector<AuitCell> grid{cell_with("c", "S", "L,R")};
  CHECK_NOTHROW(validate_auit_config(ok, grid));

  auto expect_reject = [&](auto mutate) {
    AuitEvalConfig bad = ok;
    auto g = grid;
    mutate(bad, g);
    CHECK_THROWS_AS(validate_auit_config(bad, g), ConfigError);
  };
  expect_reject([](AuitEvalConfig& c, auto&) { c.team_size = 0; });
  expect_reject([](AuitEvalConfig& c, auto&) { c.sense_radius = -1; });
  expect_reject([](AuitEvalConfig& c, auto&) { c.episodes = -1; });
  expect_reject([](AuitEvalConfig& c, auto&) { c.steps_per_episode = 0; });
  expect_reject([](AuitEvalConfig& c, auto&) { c.comm.bias_std = -0.5; });
  expect_reject([](AuitEvalConfig& c, auto&) { c.comm.range = -1; });
  expect_reject([](AuitEvalConfig& c, auto&) {
    c.prefix_checkpoints = {50, 25};
  });
  expect_reject([](AuitEvalConfig& c, auto&) {
    c.prefix_checkpoints = {10, 10};
  });
  expect_reject([](AuitEvalConfig& c, auto&) {
    c.prefix_checkpoints = {200};
  });
  expect_reject([](AuitEvalConfig& c, auto&) { c.prefix_checkpoints = {0}; });
  expect_reject([](auto&, std::vector<AuitCell>& g) {
    g[0].space.boundary = Boundary::Bounded;
  });
  expect_reject([](auto&, std::vector<AuitCell>& g) { g[0].space.width = 0; });
  expect_reject([](auto&, std::vector<AuitCell>& g) {
    g[0].good_pattern.actions.clear();
  });
}

TEST_CASE("evaluate_ci emits one reproducible row per checkpoint") {
  AuitEvalConfig cfg;
  cfg.team_size = 3;
  cfg.episodes = 3;
  cfg.steps_per_episode = 5;
  cfg.prefix_checkpoints = {2, 5};
  cfg.sense_radius = 3;
  std::vector<AuitCell> grid{cell_with("steady", "S", "L,R"),
                             cell_with("loop", "R,D,L,U", "S")};

  auto rows = evaluate_ci(cfg, grid);
  REQUIRE(rows.size() == 2 * 3 * 2);
  auto again = evaluate_ci(cfg, grid);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows_equal(rows[i], again[i]));
  }
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    CHECK(rows[i].prefix_steps == 2);
    CHECK(rows[i + 1].prefix_steps == 5);
    CHECK(rows[i].pattern_id == rows[i + 1].pattern_id);
    CHECK(rows[i].episode == rows[i + 1].episode);
    CHECK(rows[i].space_w == 9);
    CHECK(rows[i].anytime_score >= -1.0);
    CHECK(rows[i].anytime_score <= 1.0);
  }

  SUBCASE("an empty checkpoint list means the full episode") {
    AuitEvalConfig full = cfg;
    full.prefix_checkpoints.clear();
    AuitEvalConfig last_only = cfg;
    last_only.prefix_checkpoints = {5};
    auto full_rows = evaluate_ci(full, grid);
    auto last_rows = evaluate_ci(last_only, grid);
    REQUIRE(full_rows.size() == last_rows.size());
    for (std::size_t i = 0; i < full_rows.size(); ++i) {
      CHECK(rows_equal(full_rows[i], last_rows[i]));
    }
  }

  SUBCASE("episodes replay independently of how many follow") {
    AuitEvalConfig one = cfg;
    one.episodes = 1;
    auto first = evaluate_ci(one, grid);
    std::vector<AuitScoreRow> prefix;
    for (const AuitScoreRow& r : rows) {
      if (r.episode == 0) prefix.push_back(r);
    }
    REQUIRE(first.size() == prefix.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
      CHECK(rows_equal(first[i], prefix[i]));
    }
  }

  SUBCASE("zero episodes yield no rows") {
    AuitEvalConfig none = cfg;
    none.episodes = 0;
    CHECK(evaluate_ci(none, grid).empty());
  }
}

TEST_CASE("an idle team scores zero on average by symmetry") {
  AuitEvalConfig cfg;
  cfg.team_size = 2;
  cfg.policy = AuitPolicy::Stay;
  cfg.episodes = 1500;
  cfg.steps_per_episode = 4;
  cfg.seed = 99;
  std::vector<AuitCell> grid{cell_with("still", "S", "S")};
  auto rows = evaluate_ci(cfg, grid);
  CHECK(mean_score(rows) == doctest::Approx(0.0).epsilon(0.04));
  CHECK(std::abs(mean_score(rows)) < 0.04);
}

TEST_CASE("chasing the good object beats wandering") {
  AuitEvalConfig cfg;
  cfg.team_size = 3;
  cfg.episodes = 100;
  cfg.steps_per_episode = 20;
  cfg.sense_radius = 4;
  cfg.seed = 7;
  std::vector<AuitCell> grid{cell_with("still", "S", "S")};

  cfg.policy = AuitPolicy::GreedyGood;
  double greedy = mean_score(evaluate_ci(cfg, grid));
  cfg.policy = AuitPolicy::Random;
  double random = mean_score(evaluate_ci(cfg, grid));
  CHECK(greedy > random + 0.1);
}

TEST_CASE("reporting names are stable") {
  CHECK(std::string(comm_mode_name(CommMode::Direct)) == "DIRECT");
  CHECK(std::string(comm_mode_name(CommMode::Indirect)) == "INDIRECT");
  CHECK(std::string(comm_mode_name(CommMode::Imitation)) == "IMITATION");
  CHECK(std::string(auit_policy_name(AuitPolicy::Stay)) == "STAY");
  CHECK(std::string(auit_policy_name(AuitPolicy::Random)) == "RANDOM");
  CHECK(std::string(auit_policy_name(AuitPolicy::GreedyGood)) ==
        "GREEDY_GOOD");
  CHECK(std::string(auit_action_mnemonic(AuitAction::UpLeft)) == "UL");
  CHECK(std::string(auit_action_mnemonic(AuitAction::Stay)) == "S");
}
