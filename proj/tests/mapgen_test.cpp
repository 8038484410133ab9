#include "frozenlake/mapgen.hpp"

#include <gtest/gtest.h>

#include <set>

#include "frozenlake/pathfinding.hpp"
#include "test_support.hpp"

using namespace frozenlake;

TEST(GenerateMap, HonorsDistanceFloor) {
  GenConstraints c;
  c.size = 7;
  c.d_inf_min = 6;
  SplitRng rng(600);
  for (int i = 0; i < 200; ++i) {
    const Map m = generate_map(c, rng);
    EXPECT_EQ(d_inf(m.player, m.goal), 6);  // 7x7 maximum is 6
  }
}

TEST(GenerateMap, InfeasibleConstraintsExhaust) {
  GenConstraints c;
  c.size = 3;
  c.d_inf_min = 5;
  c.max_rejections = 2000;
  SplitRng rng(601);
  try {
    generate_map(c, rng);
    FAIL() << "expected ExhaustedRejections";
  } catch (const ExhaustedRejections& e) {
    EXPECT_EQ(e.attempts(), 2000);
  }
}

TEST(GenerateMap, ConstraintsHoldPostHoc) {
  GenConstraints c;
  c.size = 8;
  c.d_inf_min = 2;
  c.d_inf_max = 5;
  SplitRng rng(602);
  for (int i = 0; i < 300; ++i) {
    const Map m = generate_map(c, rng);
    const int d = d_inf(m.player, m.goal);  // independent recomputation
    EXPECT_GE(d, 2);
    EXPECT_LE(d, 5);
    EXPECT_TRUE(is_solvable(m));
    EXPECT_NO_THROW({
      Map copy = m;
      validate_map(copy);
    });
  }
}

TEST(GenerateMap, HoleRateMatchesProbability) {
  GenConstraints c;
  c.size = 8;
  SplitRng rng(603);
  std::size_t holes = 0, cells = 0;
  for (int i = 0; i < 3000; ++i) {
    const Map m = generate_map(c, rng);
    holes += m.holes.size();
    cells += static_cast<std::size_t>(m.rows) * m.cols;
  }
  EXPECT_NEAR(holes / static_cast<double>(cells), 0.1, 0.01);
}

TEST(GenerateMap, ValidatesConstraints) {
  GenConstraints c;
  c.size = 70;
  SplitRng rng(604);
  EXPECT_THROW(generate_map(c, rng), ConfigError);
  c.size = 5;
  c.hole_prob = 1.0;
  EXPECT_THROW(generate_map(c, rng), ConfigError);
  c.hole_prob = 0.1;
  c.d_inf_min = 4;
  c.d_inf_max = 2;
  EXPECT_THROW(generate_map(c, rng), ConfigError);
}

TEST(EmbedMap, SourceSolutionStillSucceeds) {
  SplitRng rng(605);
  GenConstraints c;
  for (int i = 0; i < 300; ++i) {
    c.size = 3 + static_cast<int>(rng.below(4));  // training sizes 3..6
    const Map source = generate_map(c, rng);
    const auto path = astar_shortest(source);
    ASSERT_TRUE(path.has_value());
    const Map embedded = embed_map({10, source}, rng);
    EXPECT_EQ(embedded.rows, 10);
    const auto replay = rollout(embedded, path->moves);
    EXPECT_TRUE(replay.success);
    EXPECT_FALSE(replay.fell_in_hole);
    EXPECT_EQ(replay.off_grid_moves, 0);
    // start-goal distance is inherited from the source
    EXPECT_EQ(d_inf(embedded.player, embedded.goal),
              d_inf(source.player, source.goal));
  }
}

TEST(EmbedMap, OffsetsCoverTheWholeRange) {
  SplitRng source_rng(606);
  GenConstraints c;
  c.size = 6;
  const Map source = generate_map(c, source_rng);
  std::set<Pos> offsets;
  SplitRng rng(607);
  for (int i = 0; i < 4000; ++i) {
    const Map embedded = embed_map({10, source}, rng);
    offsets.insert({embedded.player.row - source.player.row,
                    embedded.player.col - source.player.col});
  }
  EXPECT_EQ(offsets.size(), 25u);  // all 5x5 placements of a 6x6 in a 10x10
}

TEST(EmbedMap, EqualSizeIsIdentityPlacement) {
  SplitRng rng(608);
  GenConstraints c;
  c.size = 5;
  const Map source = generate_map(c, rng);
  const Map embedded = embed_map({5, source}, rng);
  EXPECT_TRUE(embedded.same_board(source));
}

TEST(EmbedMap, CannotShrink) {
  SplitRng rng(609);
  GenConstraints c;
  c.size = 6;
  const Map source = generate_map(c, rng);
  EXPECT_THROW(embed_map({5, source}, rng), std::invalid_argument);
}

TEST(EmbedMap, OptimalLengthNeverGrows) {
  SplitRng rng(610);
  GenConstraints c;
  for (int i = 0; i < 200; ++i) {
    c.size = 3 + static_cast<int>(rng.below(4));
    const Map source = generate_map(c, rng);
    const Map embedded = embed_map({10, source}, rng);
    const auto src_len = bfs_shortest(source);
    const auto emb_len = bfs_shortest(embedded);
    ASSERT_TRUE(src_len.has_value());
    ASSERT_TRUE(emb_len.has_value());
    EXPECT_LE(emb_len->length, src_len->length);
  }
}

TEST(BuildSplit, DeterministicAcrossRuns) {
  SplitSpec spec;
  spec.name = "det";
  spec.seed = 20240817;
  SplitEntry entry;
  entry.constraints.size = 6;
  entry.count = 50;
  spec.entries.push_back(entry);
  entry.constraints.size = 9;
  entry.constraints.d_inf_min = 6;
  entry.count = 20;
  spec.entries.push_back(entry);

  const auto first = build_split(spec);
  const auto second = build_split(spec);
  ASSERT_EQ(first.size(), 70u);
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(map_to_json(first[i]).dump(), map_to_json(second[i]).dump());
  }
  EXPECT_EQ(first[0].id, "det-00000");
  EXPECT_EQ(first[69].id, "det-00069");

  SplitSpec reseeded = spec;
  reseeded.seed = 1;
  const auto other = build_split(reseeded);
  EXPECT_FALSE(other[0].same_board(first[0]));
}

TEST(BuildSplit, EmbeddedEntries) {
  SplitSpec spec;
  spec.name = "emb";
  spec.seed = 11;
  SplitEntry entry;
  entry.constraints.size = 4;
  entry.count = 30;
  entry.embed_into = 10;
  spec.entries.push_back(entry);
  const auto maps = build_split(spec);
  for (const auto& m : maps) {
    EXPECT_EQ(m.rows, 10);
    EXPECT_TRUE(is_solvable(m));
    EXPECT_LE(d_inf(m.player, m.goal), 3);
  }
}

TEST(BuildSplit, PropagatesExhaustion) {
  SplitSpec spec;
  spec.name = "bad";
  spec.seed = 5;
  SplitEntry entry;
  entry.constraints.size = 3;
  entry.constraints.d_inf_min = 5;
  entry.constraints.max_rejections = 500;
  entry.count = 2;
  spec.entries.push_back(entry);
  EXPECT_THROW(build_split(spec), ExhaustedRejections);
}

TEST(SplitSpecJson, RoundTripAndDefaults) {
  const json j = json::parse(R"({
    "name": "mix",
    "seed": 17,
    "entries": [
      {"count": 2, "size": 3},
      {"count": 1, "size": 8, "d_inf_min": 6, "embed_into": 10,
       "hole_prob": 0.2, "require_solvable": false, "max_rejections": 50}
    ]
  })");
  const SplitSpec spec = split_spec_from_json(j);
  EXPECT_EQ(spec.name, "mix");
  EXPECT_EQ(spec.seed, 17u);
  ASSERT_EQ(spec.entries.size(), 2u);
  EXPECT_DOUBLE_EQ(spec.entries[0].constraints.hole_prob, 0.1);
  EXPECT_TRUE(spec.entries[0].constraints.require_solvable);
  EXPECT_EQ(spec.entries[1].constraints.d_inf_min, 6);
  EXPECT_EQ(spec.entries[1].embed_into, 10);
  EXPECT_FALSE(spec.entries[1].constraints.require_solvable);

  const SplitSpec back = split_spec_from_json(split_spec_to_json(spec));
  EXPECT_EQ(back.entries[1].constraints.max_rejections, 50);
}

TEST(SplitSpecJson, CollectsEveryViolation) {
  const json j = json::parse(R"({
    "seed": -1,
    "typo": true,
    "entries": [
      {"count": 0, "size": 99, "hole_prob": 1.5},
      {"count": 1, "size": 6, "embed_into": 4}
    ]
  })");
  try {
    split_spec_from_json(j);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const auto& v = e.violations();
    EXPECT_GE(v.size(), 6u);  // name, seed, typo, count, size, hole_prob, embed_into
    const std::string all = e.what();
    EXPECT_NE(all.find("unknown key 'typo'"), std::string::npos);
    EXPECT_NE(all.find("entries[1]: embed_into"), std::string::npos);
  }
}
