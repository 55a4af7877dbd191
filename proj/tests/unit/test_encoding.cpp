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

std::vector<Qubit> first_qubits(int k) {
    std::vector<Qubit> q(static_cast<std::size_t>(k));
    std::iota(q.begin(), q.end(), 0);
    return q;
}

/// Block of the coin circuit on the k single-excitation states.
Matrix bracelet_block(const Matrix &u, int k) {
    Matrix b(k, k);
    for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
            b(r, c) = u(Eigen::Index{1} << r, Eigen::Index{1} << c);
        }
    }
    return b;
}

TEST(Coin, GroverMatrixByHand) {
    const auto c3 = grover_matrix(3);
    EXPECT_NEAR(std::abs(c3(0, 0) - Complex(-1.0 / 3.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c3(0, 1) - Complex(2.0 / 3.0)), 0.0, 1e-15);
    const auto c2 = grover_matrix(2);
    EXPECT_NEAR(std::abs(c2(0, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c2(0, 1) - Complex(1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(grover_matrix(1)(0, 0) - Complex(1.0)), 0.0, 1e-15);
}

TEST(Coin, SynthesizedBlockIsGroverOnBracelets) {
    for (int k = 1; k <= 5; ++k) {
        auto p = build_coin_block(first_qubits(k), k);
        p.qubit_count = k;
        const auto u = testing::program_matrix(p);
        const auto block = bracelet_block(u, k);
        // Explicit 2/k J - I, written out here rather than taken from the library.
        Matrix grover(k, k);
        for (int r = 0; r < k; ++r) {
            for (int c = 0; c < k; ++c) {
                grover(r, c) = 2.0 / k - (r == c ? 1.0 : 0.0);
            }
        }
        EXPECT_LT((block - grover).cwiseAbs().maxCoeff(), 1e-10) << "k=" << k;
        // Involution, on the bracelets and on the whole register.
        EXPECT_LT((block * block - Matrix::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-10) << "k=" << k;
        const auto dim = Eigen::Index{1} << k;
        EXPECT_LT((u * u - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff(), 1e-10) << "k=" << k;
        // Fixes the uniform superposition |s>.
        Eigen::VectorXcd s = Eigen::VectorXcd::Constant(k, 1.0 / std::sqrt(static_cast<double>(k)));
        EXPECT_LT((block * s - s).cwiseAbs().maxCoeff(), 1e-10) << "k=" << k;
        // Bracelets do not leak out of the weight-1 sector.
        for (int c = 0; c < k; ++c) {
            double inside = 0.0;
            for (int r = 0; r < k; ++r) {
                inside += std::norm(u(Eigen::Index{1} << r, Eigen::Index{1} << c));
            }
            EXPECT_NEAR(inside, 1.0, 1e-10);
        }
    }
}

TEST(Coin, ReflectionConstructionAgreesForSmallDegrees) {
    for (int k = 2; k <= 3; ++k) {
        auto p = build_coin_block_reflection(first_qubits(k), k);
        p.qubit_count = k;
        const auto block = bracelet_block(testing::program_matrix(p), k);
        EXPECT_LT((block - grover_matrix(k)).cwiseAbs().maxCoeff(), 1e-10);
    }
    EXPECT_THROW(build_coin_block_small(first_qubits(4), 4), ValidationError);
}

TEST(Coin, DomainWallPermutationMapsBraceletsToWalls) {
    for (int k = 2; k <= 4; ++k) {
        const auto p = domain_wall_permutation(k);
        for (int n = 0; n < k; ++n) {
            const Eigen::Index wall = (Eigen::Index{1} << (n + 1)) - 1;
            EXPECT_NEAR(std::abs(p(wall, Eigen::Index{1} << n)), 1.0, 1e-15);
        }
    }
}

TEST(Shift, PartialSwapOnBracelets) {
    const auto m = gates::partial_swap(0.5);
    // |01> -> sqrt(1/2) |10> + i sqrt(1/2) |01>; |00> and |11> fixed.
    EXPECT_NEAR(std::abs(m(2, 1) - Complex(std::sqrt(0.5))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m(1, 1) - Complex(0.0, std::sqrt(0.5))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m(0, 0) - Complex(1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m(3, 3) - Complex(1.0)), 0.0, 1e-15);
    EXPECT_TRUE(is_unitary(m));
    for (double a : {0.0, 0.2, 1.0}) {
        EXPECT_TRUE(is_unitary(gates::partial_swap(a)));
    }
}

TEST(WState, PreparesUniformSuperposition) {
    for (int k = 1; k <= 4; ++k) {
        auto p = build_wstate_prep(first_qubits(k), k);
        const auto s = simulate_dense(p);
        for (Bits b = 0; b < (Bits{1} << k); ++b) {
            const double expect = popcount(b) == 1 ? 1.0 / k : 0.0;
            EXPECT_NEAR(std::norm(s.amplitude(b)), expect, 1e-12) << "k=" << k << " b=" << b;
        }
    }
}

TEST(Compile, QubitCountsOfBundledGraphs) {
    const std::pair<const char *, int> rows[] = {{"graphs/asthma11.tsv", 24},
                                                 {"graphs/rbp15.tsv", 36},
                                                 {"graphs/tf17.tsv", 40},
                                                 {"graphs/ref8.tsv", 16}};
    for (const auto &[file, qubits] : rows) {
        const auto g = testing::load_graph_file(file);
        const auto p = compile_walk(g, 0, 0.5, 2);
        EXPECT_EQ(p.qubit_count, qubits) << file;
        EXPECT_NO_THROW(validate(p));
        EXPECT_TRUE(is_measure(p.gates.back()));
    }
}

TEST(Compile, SegmentsFollowPrepShiftCoinMeasure) {
    const auto g = testing::paw();
    const auto p = compile_walk(g, 0, 0.5, 3);
    ASSERT_FALSE(p.segments.empty());
    EXPECT_EQ(p.segments.front().kind, SegmentKind::Prep);
    EXPECT_EQ(p.segments.back().kind, SegmentKind::Measure);
    int shifts = 0;
    int coins = 0;
    for (const auto &s : p.segments) {
        shifts += s.kind == SegmentKind::Shift;
        coins += s.kind == SegmentKind::Coin;
    }
    EXPECT_EQ(shifts, 3);
    EXPECT_EQ(coins, 3);
    EXPECT_EQ(entangling_layers_by_step(p).size(), 3u);
}

TEST(Compile, DenseSimulationMatchesReference) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 6; ++trial) {
        const auto g = testing::random_connected_graph(rng, 5, 5);
        const NodeIndex seed = static_cast<NodeIndex>(trial % 5);
        const auto ref = testing::reference_walk(g, seed, 0.5, 4);
        const DirectedEdgeIndex idx(g);
        for (int t = 0; t <= 4; ++t) {
            const auto s = simulate_dense(compile_walk(g, seed, 0.5, t));
            const auto edge = single_excitation_probabilities(s);
            std::vector<double> node(g.node_count(), 0.0);
            for (EdgeIndex q = 0; q < idx.size(); ++q) {
                node[idx.source(q)] += edge[q];
            }
            EXPECT_LT(testing::max_abs_diff(node, ref[static_cast<std::size_t>(t)]), 1e-10);
        }
    }
}

TEST(Compile, CustomAssignmentPermutesQubits) {
    const auto g = testing::paw();
    const DirectedEdgeIndex idx(g);
    QubitAssignment a = QubitAssignment::identity(idx);
    std::reverse(a.qubit_of_edge.begin(), a.qubit_of_edge.end());
    const auto p = compile_walk(g, idx, a, 0, 0.5, 2);
    const auto edge = single_excitation_probabilities(simulate_dense(p));
    const auto ref = run_walk(g, idx, 0, 0.5, 2)[2].state.amplitudes;
    for (EdgeIndex q = 0; q < idx.size(); ++q) {
        EXPECT_NEAR(edge[a[q]], std::norm(ref[q]), 1e-12);
    }
}

} // namespace
} // namespace qwalk
