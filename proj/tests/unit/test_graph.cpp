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

TEST(EdgeList, SkipsHeaderCommentsAndBlankLines) {
    const auto g = load_edge_list("# comment\nsource\ttarget\n\na\tb\nb,c\n");
    EXPECT_EQ(g.node_count(), 3u);
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(g.id(0), "a");
    EXPECT_TRUE(g.adjacent(g.index_of("b"), g.index_of("c")));
}

TEST(EdgeList, LabelColumns) {
    const auto g = load_edge_list("1\t2\tPON2\tHLA-C\n2\t3\n");
    EXPECT_EQ(g.label(g.index_of("1")), "PON2");
    EXPECT_EQ(g.label(g.index_of("2")), "HLA-C");
    EXPECT_EQ(g.label(g.index_of("3")), "3");
}

TEST(EdgeList, ConflictingLabelsAreAParseError) {
    EXPECT_THROW(load_edge_list("1\t2\tA\tB\n1\t3\tC\tD\n"), ParseError);
}

TEST(EdgeList, RejectsSelfLoopsDuplicatesAndDisconnectedInput) {
    EXPECT_THROW(load_edge_list("a\ta\n"), ValidationError);
    EXPECT_THROW(load_edge_list("a\tb\nb\ta\n"), ValidationError);
    EXPECT_THROW(load_edge_list("a\tb\nc\td\n"), ValidationError);
    EXPECT_THROW(load_edge_list("# nothing\n"), ParseError);
    EXPECT_THROW(load_edge_list("a\n"), ParseError);
}

TEST(EdgeList, RoundTripsThroughText) {
    const auto g = testing::load_graph_file("graphs/asthma11.tsv");
    const auto h = load_edge_list(to_edge_list(g));
    ASSERT_EQ(h.node_count(), g.node_count());
    ASSERT_EQ(h.edge_count(), g.edge_count());
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        const auto j = h.index_of(g.id(i));
        EXPECT_EQ(h.label(j), g.label(i));
        EXPECT_EQ(h.degree(j), g.degree(i));
    }
}

TEST(EdgeList, LabelSidecar) {
    auto g = testing::paw();
    apply_label_sidecar(g, "1\tALPHA\n# c\n3\tGAMMA\n");
    EXPECT_EQ(g.label(g.index_of("1")), "ALPHA");
    EXPECT_EQ(g.label(g.index_of("3")), "GAMMA");
    EXPECT_THROW(apply_label_sidecar(g, "99\tX\n"), ValidationError);
    EXPECT_THROW(apply_label_sidecar(g, "1\tX\tY\n"), ParseError);
}

TEST(Graph, BundledGraphShapes) {
    struct Row {
        const char *file;
        std::size_t nodes, edges, diameter;
    };
    for (const auto &r : {Row{"graphs/asthma11.tsv", 11, 12, 6}, Row{"graphs/rbp15.tsv", 15, 18, 8},
                          Row{"graphs/tf17.tsv", 17, 20, 8}, Row{"graphs/ref8.tsv", 8, 8, 0}}) {
        const auto g = testing::load_graph_file(r.file);
        EXPECT_EQ(g.node_count(), r.nodes) << r.file;
        EXPECT_EQ(g.edge_count(), r.edges) << r.file;
        EXPECT_LE(g.max_degree(), 3u) << r.file;
        if (r.diameter > 0) {
            EXPECT_EQ(g.diameter(), r.diameter) << r.file;
        }
    }
}

TEST(Graph, DistancesAndDensity) {
    const auto g = testing::paw();
    const auto d = g.distances_from(g.index_of("1"));
    EXPECT_EQ(d[g.index_of("1")], 0u);
    EXPECT_EQ(d[g.index_of("2")], 1u);
    EXPECT_EQ(d[g.index_of("3")], 2u);
    EXPECT_EQ(g.diameter(), 2u);
    EXPECT_DOUBLE_EQ(g.density(), 4.0 / 6.0);
}

TEST(DirectedEdgeIndex, IsABijectionWithContiguousBlocks) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = testing::random_connected_graph(rng, 7, 8);
        const DirectedEdgeIndex idx(g);
        ASSERT_EQ(idx.size(), 2 * g.edge_count());
        std::set<std::pair<NodeIndex, NodeIndex>> seen;
        for (EdgeIndex q = 0; q < idx.size(); ++q) {
            EXPECT_TRUE(seen.insert({idx.source(q), idx.target(q)}).second);
            EXPECT_EQ(idx.at(idx.source(q), idx.target(q)), q);
            EXPECT_EQ(idx.reverse(idx.reverse(q)), q);
            EXPECT_EQ(idx.source(idx.reverse(q)), idx.target(q));
        }
        for (NodeIndex i = 0; i < g.node_count(); ++i) {
            EXPECT_EQ(idx.block_size(i), g.degree(i));
            for (auto q = idx.block_begin(i); q < idx.block_end(i); ++q) {
                EXPECT_EQ(idx.source(q), i);
            }
        }
    }
    const auto g = testing::paw();
    EXPECT_THROW((void)DirectedEdgeIndex(g).at(g.index_of("1"), g.index_of("3")), ValidationError);
}

TEST(Sampling, RespectsCapsAndContainsSeed) {
    const auto g = testing::load_graph_file("graphs/tf17.tsv");
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SampleOptions o;
        o.max_degree = 2;
        o.max_edges = 6;
        o.rng_seed = seed;
        const auto s = sample_subgraph(g, {"1", "5", "9"}, o);
        EXPECT_LE(s.graph.max_degree(), 2u);
        EXPECT_LE(s.graph.edge_count(), 6u);
        EXPECT_TRUE(s.graph.find(s.seed).has_value());
        EXPECT_TRUE(s.seed == "1" || s.seed == "5" || s.seed == "9");
        // Induced: every original edge between chosen nodes is present.
        for (const auto &[u, v] : g.edges()) {
            const auto a = s.graph.find(g.id(u));
            const auto b = s.graph.find(g.id(v));
            if (a && b) {
                EXPECT_TRUE(s.graph.adjacent(*a, *b));
            }
        }
    }
}

TEST(Sampling, DeterministicGivenSeed) {
    const auto g = testing::load_graph_file("graphs/rbp15.tsv");
    SampleOptions o;
    o.rng_seed = 42;
    o.max_edges = 10;
    const auto a = sample_subgraph(g, {"2"}, o);
    const auto b = sample_subgraph(g, {"2"}, o);
    EXPECT_EQ(to_edge_list(a.graph), to_edge_list(b.graph));
    EXPECT_EQ(a.trials, b.trials);
}

TEST(Sampling, ExhaustedBudgetIsInfeasible) {
    const auto g = testing::load_graph_file("graphs/tf17.tsv");
    SampleOptions o;
    o.max_edges = 1;
    o.trial_budget = 1;
    o.rng_seed = 1;
    EXPECT_THROW(sample_subgraph(g, {"1"}, o), InfeasibleError);
    EXPECT_THROW(sample_subgraph(g, {}, o), ValidationError);
    EXPECT_THROW(sample_subgraph(g, {"nope"}, o), ValidationError);
}

} // namespace
} // namespace qwalk
