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

#include <queue>

namespace qwalk {
namespace {

TEST(HeavyHex, StructuralProperties) {
    const auto cm = heavy_hex(8);
    EXPECT_EQ(cm.qubit_count(), 156);
    EXPECT_EQ(cm.edges().size(), 176u);
    EXPECT_LE(cm.max_degree(), 3);
    // Bipartite: BFS two-colouring never conflicts.
    std::vector<int> colour(static_cast<std::size_t>(cm.qubit_count()), -1);
    std::queue<int> q;
    colour[0] = 0;
    q.push(0);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v : cm.neighbors(u)) {
            if (colour[static_cast<std::size_t>(v)] < 0) {
                colour[static_cast<std::size_t>(v)] = 1 - colour[static_cast<std::size_t>(u)];
                q.push(v);
            } else {
                EXPECT_NE(colour[static_cast<std::size_t>(v)], colour[static_cast<std::size_t>(u)]);
            }
        }
    }
    int degree3 = 0;
    int degree1 = 0;
    for (int v = 0; v < cm.qubit_count(); ++v) {
        EXPECT_GE(cm.degree(v), 1);
        degree3 += cm.degree(v) == 3;
        degree1 += cm.degree(v) == 1;
    }
    EXPECT_GT(degree3, 0);
    // Only row ends without a bridge qubit are leaves: at most two per row.
    EXPECT_LE(degree1, 16);
}

TEST(CouplingMap, DistancesAndPaths) {
    const auto line = CouplingMap::line(5);
    EXPECT_EQ(line.distance(0, 4), 4);
    EXPECT_TRUE(line.adjacent(2, 3));
    EXPECT_EQ(line.shortest_path(4, 1), (std::vector<int>{4, 3, 2, 1}));
    const auto all = CouplingMap::all_to_all(4);
    EXPECT_EQ(all.distance(0, 3), 1);
    EXPECT_THROW(CouplingMap(3, {{0, 1}}), ValidationError);
    EXPECT_THROW(CouplingMap(2, {{0, 0}}), ValidationError);
}

GateProgram two_qubit_program(int n, int a, int b) {
    GateProgram p;
    p.qubit_count = n;
    p.append(PartialSwap{a, b, 0.5});
    return p;
}

TEST(Routing, AdjacentOperandsNeedNoSwaps) {
    const auto cm = CouplingMap::line(4);
    const auto rp = route(two_qubit_program(2, 0, 1), Layout{{1, 2}}, cm);
    EXPECT_EQ(rp.swap_count, 0);
    EXPECT_EQ(rp.program.gates.size(), 1u);
}

TEST(Routing, DistanceTwoNeedsOneSwap) {
    const auto cm = CouplingMap::line(4);
    const auto track = route(two_qubit_program(2, 0, 1), Layout{{0, 2}}, cm, RoutingPolicy::Track);
    EXPECT_EQ(track.swap_count, 1);
    EXPECT_EQ(track.final_layout.physical, (std::vector<int>{1, 2}));
    const auto restore =
        route(two_qubit_program(2, 0, 1), Layout{{0, 2}}, cm, RoutingPolicy::Restore);
    EXPECT_EQ(restore.swap_count, 2);
    EXPECT_EQ(restore.final_layout.physical, (std::vector<int>{0, 2}));
}

TEST(Routing, EveryRoutedEntanglingGateIsCoupled) {
    const auto g = testing::load_graph_file("graphs/asthma11.tsv");
    const auto p = compile_walk(g, g.index_of("7"), 0.5, 3);
    const auto cm = heavy_hex(8);
    LayoutOptions o;
    o.trials = 20;
    const auto lr = layout_search(p, cm, o);
    for (auto policy : {RoutingPolicy::Track, RoutingPolicy::Restore}) {
        const auto rp = route(p, lr.layout, cm, policy);
        for (const auto &gate : rp.program.gates) {
            if (!is_entangling(gate)) {
                continue;
            }
            const auto ops = operands(gate, rp.program.qubit_count);
            // Operands form a connected set on the device.
            std::set<int> reached{ops[0]};
            for (bool grew = true; grew;) {
                grew = false;
                for (int q : ops) {
                    if (reached.count(q)) {
                        continue;
                    }
                    for (int r : reached) {
                        if (cm.adjacent(q, r)) {
                            reached.insert(q);
                            grew = true;
                            break;
                        }
                    }
                }
            }
            EXPECT_EQ(reached.size(), ops.size());
        }
        if (policy == RoutingPolicy::Restore) {
            EXPECT_EQ(rp.final_layout.physical, lr.layout.physical);
        }
    }
}

TEST(Routing, RoutedProgramPreservesTheWalk) {
    const auto g = testing::paw();
    const DirectedEdgeIndex idx(g);
    const auto p = compile_walk(g, 0, 0.5, 3);
    const auto cm = CouplingMap::line(10);
    const auto lr = layout_search(p, cm, {});
    const auto ideal = run_walk(g, idx, 0, 0.5, 3)[3].state.amplitudes;
    for (auto policy : {RoutingPolicy::Track, RoutingPolicy::Restore}) {
        const auto cp = compact(route(p, lr.layout, cm, policy));
        const auto probs = single_excitation_probabilities(simulate_dense(cp.program));
        for (EdgeIndex q = 0; q < idx.size(); ++q) {
            EXPECT_NEAR(probs[static_cast<std::size_t>(cp.final_compact[q])], std::norm(ideal[q]), 1e-10);
        }
    }
}

TEST(Layout, DeterministicAndRespectsPairDistance) {
    const auto g = testing::load_graph_file("graphs/asthma11.tsv");
    const auto p = compile_walk(g, 0, 0.5, 1);
    const auto cm = heavy_hex(8);
    LayoutOptions o;
    o.trials = 30;
    o.rng_seed = 9;
    const auto a = layout_search(p, cm, o);
    const auto b = layout_search(p, cm, o);
    EXPECT_EQ(a.layout.physical, b.layout.physical);
    EXPECT_LE(a.worst_pair_distance, o.max_pair_distance);
    std::set<int> used(a.layout.physical.begin(), a.layout.physical.end());
    EXPECT_EQ(used.size(), a.layout.physical.size());
    o.max_pair_distance = 0;
    EXPECT_THROW(layout_search(p, cm, o), InfeasibleError);
}

TEST(Layout, ReadoutThresholdExcludesBadQubits) {
    auto cm = CouplingMap::line(6);
    CalibrationData cal;
    cal.readout_error = {0.5, 0.0, 0.0, 0.0, 0.0, 0.5};
    cm.calibration = cal;
    LayoutOptions o;
    o.readout_threshold = 0.1;
    const auto lr = layout_search(two_qubit_program(2, 0, 1), cm, o);
    for (int q : lr.layout.physical) {
        EXPECT_TRUE(q >= 1 && q <= 4);
    }
    o.readout_threshold = -1.0;
    EXPECT_THROW(layout_search(two_qubit_program(2, 0, 1), cm, o), InfeasibleError);
}

TEST(LayerCounts, ReferenceInstanceOneStep) {
    const auto g = testing::load_graph_file("graphs/ref8.tsv");
    const auto p = compile_walk(g, 0, 0.5, 1);
    EXPECT_EQ(p.qubit_count, 16);
    const auto layers = count_logical_layers(p).entangling;
    EXPECT_GT(layers, 0);
    EXPECT_LE(layers, 22);
}

TEST(LayerCounts, HandProgram) {
    GateProgram p;
    p.qubit_count = 4;
    p.append(Cnot{0, 1});
    p.append(Cnot{2, 3});                       // same layer
    p.append(OneQubitGate{1, gates::x(), "x"}); // not entangling
    p.append(Cnot{1, 2});                       // layer 2
    p.append(MeasureAll{});
    EXPECT_EQ(count_logical_layers(p).entangling, 2);
    EXPECT_EQ(count_logical_layers(p).total, 3);
    EXPECT_EQ(native_entangling_depth(p), 2);
}

TEST(Compact, KeepsOnlyTouchedQubits) {
    const auto cm = CouplingMap::line(12);
    const auto rp = route(two_qubit_program(2, 0, 1), Layout{{3, 6}}, cm, RoutingPolicy::Track);
    const auto cp = compact(rp);
    EXPECT_EQ(cp.program.qubit_count, 4); // 3, 4, 5, 6
    EXPECT_EQ(cp.final_compact.size(), 2u);
    EXPECT_EQ(cp.physical_of[static_cast<std::size_t>(cp.final_compact[0])], rp.final_layout.physical[0]);
}

} // namespace
} // namespace qwalk
