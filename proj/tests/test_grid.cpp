#include <doctest.h>

#include <cmath>
#include <set>
#include <string>

#include "sealci/errors.hpp"
#include "sealci/grid.hpp"
#include "sealci/rng.hpp"

using namespace sealci;

namespace {

const GridSpec kBounded5{5, 5, Boundary::Bounded};
const GridSpec kTorus5{5, 5, Boundary::Toroidal};

Pattern tiny_pattern() {
  return load_pattern("P-PAT 3 3\n000\n010\n000\n");
}

}  // namespace

TEST_CASE("load_pattern parses a single-center mask") {
  Pattern p = tiny_pattern();
  CHECK(p.spec.width == 3);
  CHECK(p.spec.height == 3);
  CHECK(p.spec.boundary == Boundary::Bounded);
  CHECK(p.mask.labeled_count() == 1);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 3; ++x) {
      CHECK(p.mask.at({x, y}) == (x == 1 && y == 1));
    }
  }
}

TEST_CASE("load_pattern rejects malformed input") {
  CHECK_THROWS_AS(load_pattern("P-PAT 2 2\n00\n00\n"), PatternParseError);
  CHECK_THROWS_AS(load_pattern(""), PatternParseError);
  CHECK_THROWS_AS(load_pattern("P-XXX 2 2\n01\n10\n"), PatternParseError);
  CHECK_THROWS_AS(load_pattern("P-PAT 0 2\n\n\n"), PatternParseError);
  CHECK_THROWS_AS(load_pattern("P-PAT 2 2 junk\n01\n10\n"), PatternParseError);
  CHECK_THROWS_AS(load_pattern("P-PAT 2 2\n011\n10\n"), PatternParseError);
  CHECK_THROWS_AS(load_pattern("P-PAT 2 2\n01\n"), PatternParseError);
  CHECK_THROWS_AS(load_pattern("P-PAT 2 2\n01\n1x\n"), PatternParseError);
  CHECK_THROWS_AS(load_pattern("P-PAT 2 2\n01\n10\nextra\n"),
                  PatternParseError);
}

TEST_CASE("pattern round-trips through its text form") {
  std::string text = "P-PAT 4 2\n0110\n1001\n";
  Pattern p = load_pattern(text);
  CHECK(pattern_to_text(p) == text);
  Pattern again = load_pattern(pattern_to_text(p));
  CHECK(again.mask == p.mask);
}

TEST_CASE("neighbor respects boundary semantics") {
  CHECK(!neighbor({0, 3}, Dir::Left, kBounded5).has_value());
  CHECK(neighbor({0, 3}, Dir::Left, kTorus5) == Position{4, 3});
  CHECK(neighbor({2, 2}, Dir::Up, kBounded5) == Position{2, 1});
  CHECK(neighbor({2, 2}, Dir::Down, kBounded5) == Position{2, 3});
  CHECK(!neighbor({4, 0}, Dir::Up, kBounded5).has_value());
  CHECK(neighbor({4, 0}, Dir::Up, kTorus5) == Position{4, 4});
}

TEST_CASE("toroidal neighbor is a per-direction bijection") {
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 5; ++x) {
      Position p{x, y};
      Position left = *neighbor(p, Dir::Left, kTorus5);
      CHECK(*neighbor(left, Dir::Right, kTorus5) == p);
      Position up = *neighbor(p, Dir::Up, kTorus5);
      CHECK(*neighbor(up, Dir::Down, kTorus5) == p);
    }
  }
}

TEST_CASE("torus_distance handles wrap and plain metrics") {
  CHECK(torus_distance({2, 2}, {2, 2}, kTorus5) == 0.0);
  CHECK(torus_distance({0, 0}, {4, 0}, kTorus5) == 1.0);
  CHECK(torus_distance({0, 0}, {3, 4}, kBounded5) == 5.0);
  CHECK(torus_distance({0, 0}, {3, 4}, kTorus5) ==
        doctest::Approx(std::sqrt(4.0 + 1.0)));
}

TEST_CASE("torus_distance is symmetric and zero only at equality") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Position a{rng.uniform_int(0, 4), rng.uniform_int(0, 4)};
    Position b{rng.uniform_int(0, 4), rng.uniform_int(0, 4)};
    for (const GridSpec& spec : {kBounded5, kTorus5}) {
      CHECK(torus_distance(a, b, spec) == torus_distance(b, a, spec));
      if (a == b) {
        CHECK(torus_distance(a, b, spec) == 0.0);
      } else {
        CHECK(torus_distance(a, b, spec) > 0.0);
      }
    }
  }
}

TEST_CASE("occupancy moves preserve exclusivity") {
  Occupancy occ(kBounded5);
  occ.place(1, {1, 1});
  occ.place(2, {2, 1});

  SUBCASE("free adjacent cell") {
    CHECK(occ.move_agent(1, {1, 2}) == MoveResult::Ok);
    CHECK(!occ.occupied({1, 1}));
    CHECK(occ.agent_at({1, 2}) == 1u);
  }
  SUBCASE("move onto own cell is a no-op success") {
    CHECK(occ.move_agent(1, {1, 1}) == MoveResult::Ok);
    CHECK(occ.agent_at({1, 1}) == 1u);
  }
  SUBCASE("occupied destination leaves the map unchanged") {
    CHECK(occ.move_agent(1, {2, 1}) == MoveResult::Occupied);
    CHECK(occ.agent_at({1, 1}) == 1u);
    CHECK(occ.agent_at({2, 1}) == 2u);
  }
  SUBCASE("unknown agent throws") {
    CHECK_THROWS_AS(occ.move_agent(9, {0, 0}), std::invalid_argument);
  }
  SUBCASE("placement collisions throw") {
    CHECK_THROWS_AS(occ.place(1, {3, 3}), std::invalid_argument);
    CHECK_THROWS_AS(occ.place(3, {2, 1}), std::invalid_argument);
  }
  occ.check_consistency();
}

TEST_CASE("occupancy conserves agents across random walks") {
  Occupancy occ(kBounded5);
  for (std::uint32_t id = 0; id < 6; ++id) {
    occ.place(id, {static_cast<int>(id % 5), static_cast<int>(id / 5)});
  }
  Rng rng(11);
  for (int step = 0; step < 500; ++step) {
    std::uint32_t id = static_cast<std::uint32_t>(rng.uniform_below(6));
    auto cell = neighbor(occ.position_of(id),
                         kDirs[rng.uniform_below(4)], kBounded5);
    if (cell) occ.move_agent(id, *cell);
    occ.check_consistency();
    CHECK(occ.agent_count() == 6);
  }
}

TEST_CASE("neighbor_count treats the grid edge as free") {
  Occupancy occ(kBounded5);
  occ.place(0, {0, 0});
  occ.place(1, {1, 0});
  occ.place(2, {0, 1});
  CHECK(occ.neighbor_count({0, 0}) == 2);
  CHECK(occ.neighbor_count({1, 1}) == 2);
  CHECK(occ.neighbor_count({4, 4}) == 0);
}

TEST_CASE("similarity counts occupied labeled cells") {
  // 28x28 mask whose first 119 row-major cells are labeled, mirroring the
  // reference shape's cell count without depending on a file.
  std::vector<std::uint8_t> cells(28 * 28, 0);
  for (int i = 0; i < 119; ++i) cells[i] = 1;
  LabeledMask mask(28, 28, cells);
  REQUIRE(mask.labeled_count() == 119);

  GridSpec spec{28, 28, Boundary::Bounded};
  Occupancy occ(spec);

  SUBCASE("empty grid scores zero") { CHECK(similarity(occ, mask) == 0.0); }

  SUBCASE("filling all labeled cells scores one") {
    for (int i = 0; i < 119; ++i) {
      occ.place(static_cast<std::uint32_t>(i), {i % 28, i / 28});
    }
    CHECK(similarity(occ, mask) == 1.0);
  }

  SUBCASE("100 of 119 labeled cells occupied") {
    for (int i = 0; i < 100; ++i) {
      occ.place(static_cast<std::uint32_t>(i), {i % 28, i / 28});
    }
    // 19 more agents parked on unlabeled cells must not change the score.
    for (int i = 0; i < 19; ++i) {
      occ.place(static_cast<std::uint32_t>(100 + i), {i, 27});
    }
    CHECK(similarity(occ, mask) == doctest::Approx(100.0 / 119.0).epsilon(1e-12));
  }
}

TEST_CASE("similarity never drops when a labeled cell gains an agent") {
  Pattern p = load_pattern("P-PAT 4 4\n1100\n0110\n0011\n1001\n");
  Occupancy occ(p.spec);
  Rng rng(3);
  double prev = similarity(occ, p.mask);
  std::uint32_t id = 0;
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      if (!p.mask.at({x, y}) || rng.uniform01() < 0.3) continue;
      occ.place(id++, {x, y});
      double now = similarity(occ, p.mask);
      CHECK(now >= prev);
      prev = now;
    }
  }
}
