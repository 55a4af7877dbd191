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

TEST(Walk, StepZeroIsAPointMassOnTheSeed) {
    const auto g = testing::paw();
    const DirectedEdgeIndex idx(g);
    const auto w = run_walk(g, idx, g.index_of("2"), 0.5, 0);
    ASSERT_EQ(w.size(), 1u);
    const auto &p = w[0].distribution.probabilities;
    EXPECT_DOUBLE_EQ(p[g.index_of("2")], 1.0);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-15);
}

// Seed 1 has the single edge 1->2. The shift gives sqrt(1/2)|2->1> +
// i sqrt(1/2)|1->2>; the degree-1 coin of node 1 is the identity and node
// 2's coin permutes within its block, so half the mass sits on each node.
TEST(Walk, PawOneStepByHand) {
    const auto g = testing::paw();
    const DirectedEdgeIndex idx(g);
    const auto w = run_walk(g, idx, g.index_of("1"), 0.5, 1);
    const auto &p = w[1].distribution.probabilities;
    EXPECT_NEAR(p[g.index_of("1")], 0.5, 1e-15);
    EXPECT_NEAR(p[g.index_of("2")], 0.5, 1e-15);
    EXPECT_NEAR(p[g.index_of("3")], 0.0, 1e-15);
    EXPECT_NEAR(p[g.index_of("4")], 0.0, 1e-15);
}

TEST(Walk, MatchesExplicitMatrixReference) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 15; ++trial) {
        const auto g = testing::random_connected_graph(rng, 6, 7);
        const DirectedEdgeIndex idx(g);
        for (double alpha : {0.0, 0.3, 0.5, 1.0}) {
            const NodeIndex seed = static_cast<NodeIndex>(trial % 6);
            const auto w = run_walk(g, idx, seed, alpha, 6);
            const auto ref = testing::reference_walk(g, seed, alpha, 6);
            for (int t = 0; t <= 6; ++t) {
                EXPECT_LT(testing::max_abs_diff(w[static_cast<std::size_t>(t)].distribution.probabilities,
                                                ref[static_cast<std::size_t>(t)]),
                          1e-12);
                EXPECT_NEAR(w[static_cast<std::size_t>(t)].state.norm(), 1.0, 1e-12);
            }
        }
    }
}

TEST(Walk, AlphaOneFreezesTheWalker) {
    // S = i I at alpha = 1, and the Grover coin fixes the uniform block state.
    const auto g = testing::load_graph_file("graphs/asthma11.tsv");
    const DirectedEdgeIndex idx(g);
    const auto seed = g.index_of("7");
    for (const auto &s : run_walk(g, idx, seed, 1.0, 5)) {
        EXPECT_NEAR(s.distribution.probabilities[seed], 1.0, 1e-12);
    }
}

TEST(Walk, RejectsBadParameters) {
    const auto g = testing::paw();
    const DirectedEdgeIndex idx(g);
    EXPECT_THROW(run_walk(g, idx, 0, 1.5, 1), ValidationError);
    EXPECT_THROW(run_walk(g, idx, 0, -0.1, 1), ValidationError);
    EXPECT_THROW(run_walk(g, idx, 0, 0.5, -1), ValidationError);
    EXPECT_THROW(run_walk(g, idx, 17, 0.5, 1), ValidationError);
}

TEST(ClassicalWalk, LazyTransitionRowsAreStochastic) {
    const auto g = testing::load_graph_file("graphs/rbp15.tsv");
    const auto n = g.node_count();
    const auto m = lazy_transition_matrix(g, 0.5);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            EXPECT_GE(m[i * n + j], 0.0);
            s += m[i * n + j];
        }
        EXPECT_NEAR(s, 1.0, 1e-15);
        EXPECT_DOUBLE_EQ(m[i * n + i], 0.5);
    }
}

TEST(ClassicalWalk, PawByHand) {
    const auto g = testing::paw();
    const auto w = classical_walk(g, g.index_of("1"), 0.5, 2);
    // t=1: stay 1/2, move to 2 with 1/2. t=2: node 1 gets 1/4 + 1/2 * 1/6.
    EXPECT_NEAR(w[1].probabilities[g.index_of("1")], 0.5, 1e-15);
    EXPECT_NEAR(w[1].probabilities[g.index_of("2")], 0.5, 1e-15);
    EXPECT_NEAR(w[2].probabilities[g.index_of("1")], 0.25 + 0.5 / 6.0, 1e-15);
    EXPECT_NEAR(w[2].probabilities[g.index_of("2")], 0.25 + 0.25, 1e-15);
    EXPECT_NEAR(w[2].probabilities[g.index_of("3")], 0.5 / 6.0, 1e-15);
}

TEST(ClassicalWalk, ConvergesToDegreeStationaryDistribution) {
    const auto g = testing::load_graph_file("graphs/asthma11.tsv");
    const auto r = stationary_distribution(g).probabilities;
    double total_degree = 0.0;
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        total_degree += static_cast<double>(g.degree(i));
    }
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        EXPECT_NEAR(r[i], static_cast<double>(g.degree(i)) / total_degree, 1e-15);
    }
    const auto w = classical_walk(g, 0, 0.5, 2000);
    EXPECT_LT(testing::max_abs_diff(w.back().probabilities, r), 1e-9);
    // R is invariant under M.
    const auto n = g.node_count();
    const auto m = lazy_transition_matrix(g, 0.5);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += m[i * n + j] * r[i];
        }
        EXPECT_NEAR(s, r[j], 1e-15);
    }
}

} // namespace
} // namespace qwalk
