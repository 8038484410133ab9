#include "frozenlake/core.hpp"

#include <gtest/gtest.h>

#include "frozenlake/rng.hpp"
#include "test_support.hpp"

using namespace frozenlake;

TEST(Step, MovesTowardFreeCell) {
  const Map m = fltest::golden_map();
  const auto [pos, outcome] = step(m, {7, 5}, Move::Up);
  EXPECT_EQ(pos, (Pos{6, 5}));
  EXPECT_EQ(outcome, StepOutcome::Ok);
}

TEST(Step, ClampsAtBorder) {
  const Map m = make_map(3, 3, {}, {0, 0}, {2, 2});
  const auto [pos, outcome] = step(m, {0, 0}, Move::Up);
  EXPECT_EQ(pos, (Pos{0, 0}));
  EXPECT_EQ(outcome, StepOutcome::OffGrid);
}

TEST(Step, ReportsHoleEntry) {
  const Map m = fltest::golden_map();
  const auto [pos, outcome] = step(m, {1, 0}, Move::Right);
  EXPECT_EQ(pos, (Pos{1, 1}));
  EXPECT_EQ(outcome, StepOutcome::Hole);
}

TEST(Step, DeterministicAndPure) {
  const Map m = fltest::golden_map();
  for (int i = 0; i < 3; ++i) {
    const auto r = step(m, {6, 5}, Move::Left);
    EXPECT_EQ(r, step(m, {6, 5}, Move::Left));
  }
  EXPECT_EQ(m.player, (Pos{7, 5}));  // inputs never mutated
}

TEST(Rollout, GoldenAnswerSucceeds) {
  const Map m = fltest::golden_map();
  const auto r = rollout(m, fltest::golden_answer());
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.end_pos, (Pos{4, 6}));
  EXPECT_FALSE(r.fell_in_hole);
  EXPECT_EQ(r.off_grid_moves, 0);
  EXPECT_EQ(r.steps_executed, 4);
}

TEST(Rollout, StoppingShortFails) {
  const Map m = fltest::golden_map();
  const auto r = rollout(m, {Move::Up, Move::Up, Move::Up});
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.end_pos, (Pos{4, 5}));
}

TEST(Rollout, WrongDirectionFails) {
  const Map m = fltest::golden_map();
  const auto r = rollout(m, {Move::Right, Move::Right});
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.off_grid_moves, 0);
  EXPECT_FALSE(r.fell_in_hole);
}

TEST(Rollout, HoleStopsReplay) {
  const Map m = fltest::golden_map();
  // (7,5) -> DOWN clamps, LEFT LEFT LEFT reaches (7,2) which is a hole
  const auto r = rollout(m, {Move::Down, Move::Left, Move::Left, Move::Left, Move::Up});
  EXPECT_FALSE(r.success);
  EXPECT_TRUE(r.fell_in_hole);
  EXPECT_EQ(r.hole_pos, (Pos{7, 2}));
  EXPECT_EQ(r.off_grid_moves, 1);
  EXPECT_EQ(r.steps_executed, 4);  // the move after the hole never runs
}

TEST(Rollout, PassingOverGoalDoesNotCount) {
  const Map m = make_map(3, 3, {}, {2, 0}, {1, 0});
  const auto r = rollout(m, {Move::Up, Move::Up});
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.end_pos, (Pos{0, 0}));
}

TEST(Rollout, TruncatesAtStepCap) {
  const Map m = make_map(3, 3, {}, {0, 0}, {2, 2});
  MoveSequence moves(100, Move::Down);
  const auto r = rollout(m, moves, 5);
  EXPECT_TRUE(r.truncated);
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.steps_executed, 5);
}

TEST(Rollout, CapBoundaryIsExact) {
  const Map m = make_map(3, 3, {}, {0, 0}, {2, 2});
  const MoveSequence path = {Move::Down, Move::Down, Move::Right, Move::Right};
  EXPECT_TRUE(rollout(m, path, 4).success);
  EXPECT_FALSE(rollout(m, path, 3).success);
  EXPECT_TRUE(rollout(m, path, 3).truncated);
}

TEST(DInf, KnownValues) {
  EXPECT_EQ(d_inf({7, 5}, {4, 6}), 3);
  EXPECT_EQ(d_inf({3, 4}, {3, 4}), 0);
  EXPECT_EQ(d_inf({2, 0}, {0, 1}), 2);
}

TEST(DInf, IsAMetric) {
  SplitRng rng(2024);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto p = [&] {
      return Pos{static_cast<int>(rng.below(64)), static_cast<int>(rng.below(64))};
    };
    const Pos a = p(), b = p(), c = p();
    EXPECT_EQ(d_inf(a, b), d_inf(b, a));
    EXPECT_EQ(d_inf(a, b) == 0, a == b);
    EXPECT_LE(d_inf(a, c), d_inf(a, b) + d_inf(b, c));
  }
}

TEST(DInf, BoundedByMapSize) {
  const auto corpus = fltest::sample_corpus({3, 5, 8}, 50, 91);
  for (const auto& m : corpus) {
    EXPECT_LE(d_inf(m.player, m.goal), m.rows - 1);
  }
}

TEST(MapValidation, RejectsBrokenMaps) {
  EXPECT_THROW(make_map(1, 3, {}, {0, 0}, {0, 1}), std::invalid_argument);
  EXPECT_THROW(make_map(3, 3, {}, {0, 0}, {0, 0}), std::invalid_argument);
  EXPECT_THROW(make_map(3, 3, {{0, 0}}, {0, 0}, {2, 2}), std::invalid_argument);
  EXPECT_THROW(make_map(3, 3, {{3, 0}}, {0, 0}, {2, 2}), std::invalid_argument);
  EXPECT_THROW(make_map(3, 3, {{1, 1}, {1, 1}}, {0, 0}, {2, 2}),
               std::invalid_argument);
}

TEST(MapJson, RoundTripsWithSeed) {
  Map m = fltest::golden_map();
  m.seed = 0xFFFFFFFFFFFFFFFFULL;  // full 64-bit range survives JSON
  const Map back = map_from_json(map_to_json(m));
  EXPECT_TRUE(back.same_board(m));
  EXPECT_EQ(back.id, m.id);
  EXPECT_EQ(back.seed, m.seed);
}

TEST(MapJson, CanonicalShape) {
  const json j = map_to_json(fltest::golden_map());
  EXPECT_EQ(j.at("rows"), 8);
  EXPECT_EQ(j.at("holes")[0], json::array({0, 5}));
  EXPECT_TRUE(j.at("seed").is_null());
  EXPECT_TRUE(std::is_sorted(j.at("holes").begin(), j.at("holes").end()));
}

TEST(MapJson, SortsImportedHoles) {
  const json j = {{"id", "x"},
                  {"rows", 3},
                  {"cols", 3},
                  {"holes", {{2, 2}, {0, 1}}},
                  {"player", {0, 0}},
                  {"goal", {2, 0}},
                  {"seed", nullptr}};
  const Map m = map_from_json(j);
  EXPECT_EQ(m.holes.front(), (Pos{0, 1}));
}
