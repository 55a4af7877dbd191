// Copyright 2026 The qwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "test_util.hpp"

#include <gtest/gtest.h>

namespace qwalk {
namespace {

TEST(Qii, ByHand) {
    const StepDistributions pq{{0.5, 0.5}, {0.8, 0.2}};
    const StepDistributions pc{{0.5, 0.5}, {0.6, 0.4}};
    const auto s = qii(pq, pc);
    EXPECT_DOUBLE_EQ(s.index[0][0], 0.0);
    EXPECT_NEAR(s.collision[1], 0.68, 1e-15);
    EXPECT_NEAR(s.index[1][0], 0.2 / 0.68, 1e-15);
    EXPECT_NEAR(s.index[1][1], 0.2 / 0.68, 1e-15);
}

TEST(Qii, VanishesAtStepsZeroAndOne) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = testing::random_connected_graph(rng, 7, 8);
        const DirectedEdgeIndex idx(g);
        const NodeIndex seed = static_cast<NodeIndex>(trial % 7);
        const double alpha = 0.5;
        const auto s = qii(distributions_of(run_walk(g, idx, seed, alpha, 2)),
                           distributions_of(classical_walk(g, seed, alpha, 2)));
        for (auto x : s.index[0]) {
            EXPECT_EQ(x, 0.0);
        }
        for (auto x : s.index[1]) {
            EXPECT_LE(x, 1e-9);
        }
    }
}

TEST(Qii, RejectsMismatchedInputs) {
    EXPECT_THROW(qii({{1.0}}, {{1.0}, {1.0}}), ValidationError);
    EXPECT_THROW(qii({{0.5, 0.5}}, {{1.0}}), ValidationError);
    EXPECT_THROW(qii({{0.5, 0.4}}, {{0.5, 0.5}}), ValidationError);
}

TEST(Score, MaximumOverWindow) {
    QiiSeries s;
    s.index = {{0, 0, 0}, {0, 0, 0}, {0.1, 0.5, 0.2}, {0.4, 0.1, 0.2}, {9, 9, 9}};
    s.collision.assign(5, 1.0);
    const auto t = score(s, 2, 3);
    EXPECT_EQ(t.scores, (std::vector<double>{0.4, 0.5, 0.2}));
    EXPECT_EQ(t.ranking, (std::vector<std::size_t>{1, 0, 2}));
    EXPECT_EQ(score(s).scores, (std::vector<double>{9, 9, 9}));
    EXPECT_EQ(score(s).ranking, (std::vector<std::size_t>{0, 1, 2})); // ties keep node order
    EXPECT_THROW(score(s, 4, 3), ValidationError);
    EXPECT_THROW(score(s, 2, 5), ValidationError);
}

TEST(Score, IdenticalInputsScoreZero) {
    const StepDistributions p{{1, 0}, {0.5, 0.5}, {0.3, 0.7}};
    const auto t = score(qii(p, p));
    for (auto x : t.scores) {
        EXPECT_EQ(x, 0.0);
    }
}

TEST(RankReport, LabelsSeedAndExclusion) {
    ScoreTable s;
    s.scores = {0.3, 0.9, 0.5};
    s.ranking = rank_descending(s.scores);
    const std::vector<std::string> ids{"a", "b", "c"};
    const std::vector<std::string> labels{"A", "", "C"};
    RankOptions o;
    o.seed = 1;
    auto rows = rank_report(s, ids, labels, o);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].id, "b");
    EXPECT_EQ(rows[0].label, "b"); // empty label falls back to the id
    EXPECT_TRUE(rows[0].is_seed);
    EXPECT_EQ(rows[1].label, "C");
    o.exclude_seed = true;
    rows = rank_report(s, ids, labels, o);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].id, "c");
    EXPECT_EQ(rows[0].rank, 1u);
}

TEST(Prioritize, BundledGraphTopFourWithSeedExcluded) {
    const auto g = testing::load_graph_file("graphs/asthma11.tsv");
    const DirectedEdgeIndex idx(g);
    const auto seed = g.index_of("7");
    const auto t = score(qii(distributions_of(run_walk(g, idx, seed, 0.5, 9)),
                             distributions_of(classical_walk(g, seed, 0.5, 9))));
    RankOptions o;
    o.seed = seed;
    o.exclude_seed = true;
    const auto rows = rank_report(t, g.ids(), g.labels(), o);
    std::vector<std::string> top;
    for (std::size_t i = 0; i < 4; ++i) {
        top.push_back(rows[i].label);
    }
    EXPECT_EQ(top, (std::vector<std::string>{"HLA-C", "PON2", "HLA-G", "FLVCR1"}));
}

} // namespace
} // namespace qwalk
