#include "frozenlake/traces.hpp"

#include <gtest/gtest.h>

#include "frozenlake/pathfinding.hpp"
#include "test_support.hpp"

using namespace frozenlake;

TEST(PreferredDirections, TwoWayListsVerticalFirst) {
  const Map m = fltest::golden_map();
  const auto order = preferred_directions(m, {7, 5});
  const std::vector<Move> expected = {Move::Up, Move::Right, Move::Down, Move::Left};
  EXPECT_EQ(order, expected);
  EXPECT_EQ(direct_direction_count(m, {7, 5}), 2u);
}

TEST(PreferredDirections, SingleDirectMove) {
  const Map m = fltest::golden_map();
  const auto order = preferred_directions(m, {4, 5});
  EXPECT_EQ(order.front(), Move::Right);
  EXPECT_EQ(direct_direction_count(m, {4, 5}), 1u);
  // remaining directions keep the fixed order
  const std::vector<Move> expected = {Move::Right, Move::Up, Move::Down, Move::Left};
  EXPECT_EQ(order, expected);
}

TEST(PreferredDirections, DirectlyBelowGoal) {
  const Map m = make_map(3, 3, {}, {2, 1}, {0, 1});
  EXPECT_EQ(preferred_directions(m, {2, 1}).front(), Move::Up);
  EXPECT_EQ(direct_direction_count(m, {2, 1}), 1u);
}

TEST(NarrateStep, GoldenFirstStep) {
  const Map m = fltest::golden_map();
  EXPECT_EQ(narrate_step(m, Move::Up),
            "The direct path to the goal is moving UP or RIGHT. \n"
            "Thus, I will move UP.");
}

TEST(NarrateStep, BlockedDirectionGetsASentence) {
  // hole directly between player and goal forces a detour
  const Map m = make_map(3, 3, {{1, 0}}, {2, 0}, {0, 0});
  const auto path = astar_shortest(m);
  ASSERT_TRUE(path.has_value());
  const std::string narration = narrate_step(m, path->moves.front());
  EXPECT_EQ(narration,
            "The direct path to the goal is moving UP. \n"
            "Moving UP is blocked by a hole.\n"
            "Thus, I will move RIGHT.");
  const auto decided = fltest::decided_moves(narration);
  ASSERT_EQ(decided.size(), 1u);
  EXPECT_EQ(decided.front(), path->moves.front());
}

TEST(NarrateStep, RejectsCorruptTargets) {
  const Map m = make_map(3, 3, {{1, 0}}, {2, 0}, {0, 0});
  EXPECT_THROW(narrate_step(m, Move::Up), InconsistentTarget);    // into a hole
  EXPECT_THROW(narrate_step(m, Move::Down), InconsistentTarget);  // off the grid
}

TEST(NarrateStep, ConsistencyBeatsPreference) {
  // both direct moves are free but the canonical move is the second one:
  // the narration still lists both and decides the target
  const Map m = make_map(3, 3, {}, {2, 0}, {0, 1});
  const std::string narration = narrate_step(m, Move::Right);
  EXPECT_EQ(narration,
            "The direct path to the goal is moving UP or RIGHT. \n"
            "Thus, I will move RIGHT.");
}

TEST(SynthesizeTrace, GoldenTranscriptByteForByte) {
  const Map m = fltest::golden_map();
  const auto trace =
      synthesize_trace(m, fltest::golden_answer(), TraceFormat::GridDescription);
  EXPECT_EQ(trace.text, fltest::fixture_text("golden_8x8_grid_description.txt"));
}

TEST(SynthesizeTrace, AnswerOnlyFormat) {
  const Map m = fltest::golden_map();
  const auto trace = synthesize_trace(m, fltest::golden_answer(), TraceFormat::None);
  EXPECT_EQ(trace.text, "Final answer: \\boxed{UP, UP, UP, RIGHT}");
  EXPECT_TRUE(trace.steps.empty());
}

TEST(SynthesizeTrace, RejectsNonSolvingPaths) {
  const Map m = fltest::golden_map();
  EXPECT_THROW(synthesize_trace(m, {Move::Up}, TraceFormat::Grid),
               std::invalid_argument);
}

TEST(SynthesizeTrace, StateBlocksMatchSimulation) {
  const auto corpus = fltest::sample_corpus({3, 5, 8}, 60, 5150);
  for (const auto& m : corpus) {
    const auto path = astar_shortest(m);
    ASSERT_TRUE(path.has_value());
    for (const TraceFormat fmt :
         {TraceFormat::Grid, TraceFormat::Table, TraceFormat::GridDescription,
          TraceFormat::TableDescription}) {
      const auto trace = synthesize_trace(m, path->moves, fmt);
      ASSERT_EQ(trace.steps.size(), path->moves.size());
      Pos pos = m.player;
      for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        pos = moved(pos, trace.steps[k].move);
        ASSERT_TRUE(trace.steps[k].state_block.has_value());
        const bool table =
            fmt == TraceFormat::Table || fmt == TraceFormat::TableDescription;
        const GridState state = table
                                    ? parse_table_state(*trace.steps[k].state_block)
                                    : parse_grid_state(*trace.steps[k].state_block);
        EXPECT_EQ(state.player, pos);
        EXPECT_EQ(state.rows, m.rows);
        EXPECT_EQ(state.holes, m.holes);
        if (pos == m.goal) {
          EXPECT_FALSE(state.goal.has_value());  // player covers the goal
        } else {
          EXPECT_EQ(state.goal, m.goal);
        }
      }
    }
  }
}

TEST(SynthesizeTrace, SelfConsistency) {
  const auto corpus = fltest::sample_corpus({4, 6}, 80, 5151);
  for (const auto& m : corpus) {
    const auto path = astar_shortest(m);
    ASSERT_TRUE(path.has_value());

    // decided moves in the narrations reproduce the final answer
    const auto described =
        synthesize_trace(m, path->moves, TraceFormat::Description);
    EXPECT_EQ(fltest::decided_moves(described.text), path->moves);
    EXPECT_EQ(described.final_answer, path->moves);
    EXPECT_TRUE(rollout(m, described.final_answer).success);

    // diffing consecutive state blocks reproduces it as well
    const auto grid = synthesize_trace(m, path->moves, TraceFormat::Grid);
    Pos prev = m.player;
    MoveSequence recovered;
    for (const auto& step : grid.steps) {
      const auto state = parse_grid_state(*step.state_block);
      for (const Move mv : {Move::Up, Move::Down, Move::Left, Move::Right}) {
        if (moved(prev, mv) == state.player) recovered.push_back(mv);
      }
      prev = state.player;
    }
    EXPECT_EQ(recovered, path->moves);
  }
}

TEST(SynthesizeTrace, SidecarOffsetsLocateStateBlocks) {
  const Map m = fltest::golden_map();
  for (const TraceFormat fmt : {TraceFormat::Grid, TraceFormat::TableDescription}) {
    const auto trace = synthesize_trace(m, fltest::golden_answer(), fmt);
    ASSERT_EQ(trace.state_spans.size(), trace.steps.size());
    for (std::size_t k = 0; k < trace.state_spans.size(); ++k) {
      const auto& span = trace.state_spans[k];
      EXPECT_EQ(trace.text.substr(span.offset, span.length),
                *trace.steps[k].state_block);
    }
    const json sidecar = trace_sidecar_json(trace, fmt);
    EXPECT_EQ(sidecar.at("state_blocks").size(), trace.steps.size());
    EXPECT_EQ(sidecar.at("moves").size(), trace.final_answer.size());
  }
}

// Transcript character counts per format follow the documented ordering on
// sizes where the state blocks dominate the narration worst case.
TEST(SynthesizeTrace, FormatLengthOrderingOnLargeMaps) {
  const auto corpus = fltest::sample_corpus({8, 9, 10, 11, 12}, 40, 5152);
  for (const auto& m : corpus) {
    const auto path = astar_shortest(m);
    ASSERT_TRUE(path.has_value());
    auto chars = [&](TraceFormat fmt) {
      return synthesize_trace(m, path->moves, fmt).text.size();
    };
    const auto description = chars(TraceFormat::Description);
    const auto grid = chars(TraceFormat::Grid);
    const auto grid_description = chars(TraceFormat::GridDescription);
    const auto table = chars(TraceFormat::Table);
    const auto table_description = chars(TraceFormat::TableDescription);
    EXPECT_GT(table_description, table) << m.id;
    EXPECT_GT(table, grid_description) << m.id;
    EXPECT_GT(grid_description, grid) << m.id;
    EXPECT_GT(grid, description) << m.id;
  }
}

// These pairs hold on every map regardless of size: adding a component can
// only grow the transcript.
TEST(SynthesizeTrace, CombinedFormatsAlwaysLonger) {
  const auto corpus = fltest::sample_corpus({3, 4, 5, 6, 7}, 40, 5153);
  for (const auto& m : corpus) {
    const auto path = astar_shortest(m);
    ASSERT_TRUE(path.has_value());
    auto chars = [&](TraceFormat fmt) {
      return synthesize_trace(m, path->moves, fmt).text.size();
    };
    EXPECT_GT(chars(TraceFormat::GridDescription), chars(TraceFormat::Grid));
    EXPECT_GT(chars(TraceFormat::GridDescription), chars(TraceFormat::Description));
    EXPECT_GT(chars(TraceFormat::TableDescription), chars(TraceFormat::Table));
    EXPECT_GT(chars(TraceFormat::Table), chars(TraceFormat::Grid));
  }
}
