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
/**
 * @file
 * Compiles a walk into a gate program over 2|E| qubits, one qubit per
 * directed edge. The walker lives in the Hamming-weight-1 (bracelet)
 * subspace: basis state e_q means "walker on directed edge q".
 *
 * Coin synthesis:
 *   - degree 1: nothing (the coin is the scalar 1);
 *   - degree 2, 3: CNOT cascade from bracelet to domain-wall states, one
 *     dense k-qubit unitary, inverse cascade;
 *   - degree > 3: un-spread the node's uniform superposition onto its first
 *     qubit with an excitation-preserving Givens cascade, reflect about that
 *     qubit with Z gates on the others, spread again.
 */
#pragma once

#include "qwalk/circuit.hpp"
#include "qwalk/core.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/walk.hpp"

#include <cmath>
#include <vector>

namespace qwalk {

/// Directed edge -> logical qubit. Identity unless overridden; per-node
/// groups follow the contiguous edge blocks of DirectedEdgeIndex.
struct QubitAssignment {
    std::vector<Qubit> qubit_of_edge;

    static QubitAssignment identity(const DirectedEdgeIndex &idx) {
        QubitAssignment a;
        a.qubit_of_edge.resize(idx.size());
        for (std::size_t q = 0; q < idx.size(); ++q) {
            a.qubit_of_edge[q] = static_cast<Qubit>(q);
        }
        return a;
    }

    [[nodiscard]] Qubit operator[](EdgeIndex q) const { return qubit_of_edge.at(q); }

    [[nodiscard]] std::vector<Qubit> group(const DirectedEdgeIndex &idx, NodeIndex i) const {
        std::vector<Qubit> out;
        for (auto q = idx.block_begin(i); q < idx.block_end(i); ++q) {
            out.push_back(qubit_of_edge.at(q));
        }
        return out;
    }
};

namespace detail {

inline GateProgram fragment(int qubit_count) {
    GateProgram p;
    p.qubit_count = qubit_count;
    return p;
}

/// Unitary of a CNOT cascade on k local qubits as a 2^k permutation matrix.
inline Matrix cascade_matrix(int k, bool inverse) {
    const auto dim = Eigen::Index{1} << k;
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        auto s = static_cast<Bits>(b);
        auto apply = [&s](int control, int target) {
            if ((s >> control) & 1U) {
                s ^= Bits{1} << target;
            }
        };
        if (!inverse) {
            for (int j = k - 2; j >= 0; --j) {
                apply(j + 1, j);
            }
        } else {
            for (int j = 0; j <= k - 2; ++j) {
                apply(j + 1, j);
            }
        }
        m(static_cast<Eigen::Index>(s), b) = 1.0;
    }
    return m;
}

} // namespace detail

/// k x k Grover matrix 2/k J - I.
inline Matrix grover_matrix(int k) {
    Matrix c = Matrix::Constant(k, k, Complex{2.0 / k, 0.0});
    c -= Matrix::Identity(k, k);
    return c;
}

/// Embeds a k x k matrix acting on edge states into k qubits: identity off
/// the bracelet span, (C)_nm on |e_n><e_m|.
inline Matrix embed_in_bracelets(const Matrix &edge_matrix) {
    const auto k = static_cast<int>(edge_matrix.rows());
    const auto dim = Eigen::Index{1} << k;
    Matrix m = Matrix::Identity(dim, dim);
    for (int n = 0; n < k; ++n) {
        for (int c = 0; c < k; ++c) {
            m(Eigen::Index{1} << n, Eigen::Index{1} << c) = edge_matrix(n, c);
        }
    }
    return m;
}

/// Bracelet -> domain-wall permutation P on k qubits: e_n -> bits 0..n set.
inline Matrix domain_wall_permutation(int k) { return detail::cascade_matrix(k, false); }

/// Dense coin in the domain-wall basis, P C^qubits P^dagger.
inline Matrix domain_wall_coin(int k) {
    const auto p = domain_wall_permutation(k);
    return p * embed_in_bracelets(grover_matrix(k)) * p.adjoint();
}

/**
 * Prepares the W state (1/sqrt(k)) sum_n e_n on `group` from |0...0>: X on
 * the first qubit, then per neighbour pair a controlled RY followed by a
 * CNOT that moves the excitation along.
 */
inline GateProgram build_wstate_prep(const std::vector<Qubit> &group, int qubit_count) {
    detail::require(!group.empty(), "W-state group is empty");
    auto p = detail::fragment(qubit_count);
    const auto k = static_cast<int>(group.size());
    p.append(OneQubitGate{group[0], gates::x(), "x"});
    for (int m = 0; m + 1 < k; ++m) {
        const double theta = 2.0 * std::acos(1.0 / std::sqrt(static_cast<double>(k - m)));
        p.append(SmallUnitary{{group[static_cast<std::size_t>(m)], group[static_cast<std::size_t>(m + 1)]},
                              gates::controlled_ry(theta), "cry"});
        p.append(Cnot{group[static_cast<std::size_t>(m + 1)], group[static_cast<std::size_t>(m)]});
    }
    return p;
}

inline GateProgram build_wstate_prep(const Graph &g, const DirectedEdgeIndex &idx,
                                     const QubitAssignment &a, NodeIndex seed) {
    detail::require(seed < g.node_count(), "seed node out of range");
    return build_wstate_prep(a.group(idx, seed), static_cast<int>(idx.size()));
}

/// One partial swap per undirected edge; the gates are mutually disjoint.
inline GateProgram build_shift_layer(const Graph &g, const DirectedEdgeIndex &idx,
                                     const QubitAssignment &a, double alpha) {
    check_alpha(alpha);
    auto p = detail::fragment(static_cast<int>(idx.size()));
    for (const auto &[u, v] : g.edges()) {
        p.append(PartialSwap{a[idx.at(u, v)], a[idx.at(v, u)], alpha});
    }
    return p;
}

/// Domain-wall coin for a node of degree 1..3.
inline GateProgram build_coin_block_small(const std::vector<Qubit> &group, int qubit_count) {
    const auto k = static_cast<int>(group.size());
    if (k < 1 || k > 3) {
        throw ValidationError("domain-wall coin supports degree 1..3, got " +
                              std::to_string(k));
    }
    auto p = detail::fragment(qubit_count);
    if (k == 1) {
        return p;
    }
    auto at = [&group](int j) { return group[static_cast<std::size_t>(j)]; };
    for (int j = k - 2; j >= 0; --j) {
        p.append(Cnot{at(j + 1), at(j)});
    }
    p.append(SmallUnitary{group, domain_wall_coin(k), "coin_dw" + std::to_string(k)});
    for (int j = 0; j <= k - 2; ++j) {
        p.append(Cnot{at(j + 1), at(j)});
    }
    return p;
}

/// Reflection coin for a node of degree >= 4 (valid for any degree >= 2).
inline GateProgram build_coin_block_reflection(const std::vector<Qubit> &group,
                                               int qubit_count) {
    const auto k = static_cast<int>(group.size());
    detail::require(k >= 2, "reflection coin needs degree >= 2");
    auto p = detail::fragment(qubit_count);
    auto at = [&group](int j) { return group[static_cast<std::size_t>(j)]; };
    auto angle = [k](int m) { return std::acos(1.0 / std::sqrt(static_cast<double>(k - m))); };
    // Un-spread: |s> -> e_0.
    for (int m = k - 2; m >= 0; --m) {
        p.append(SmallUnitary{{at(m), at(m + 1)}, gates::givens(-angle(m)), "givens"});
    }
    // Reflect about e_0 inside the weight <= 1 sector; |0...0> is fixed.
    for (int j = 1; j < k; ++j) {
        p.append(OneQubitGate{at(j), gates::z(), "z"});
    }
    for (int m = 0; m <= k - 2; ++m) {
        p.append(SmallUnitary{{at(m), at(m + 1)}, gates::givens(angle(m)), "givens"});
    }
    return p;
}

/// Coin block for any degree, choosing the construction by degree.
inline GateProgram build_coin_block(const std::vector<Qubit> &group, int qubit_count) {
    return group.size() <= 3 ? build_coin_block_small(group, qubit_count)
                             : build_coin_block_reflection(group, qubit_count);
}

/**
 * Full walk circuit: W-state prep on `seed`, `steps` repetitions of
 * (shift layer, coin blocks of every node), then measure_all. Each block is
 * recorded as a segment.
 */
inline GateProgram compile_walk(const Graph &g, const DirectedEdgeIndex &idx,
                                const QubitAssignment &a, NodeIndex seed, double alpha,
                                int steps) {
    detail::require(steps >= 0, "step count must be >= 0");
    check_alpha(alpha);
    GateProgram p;
    p.qubit_count = static_cast<int>(idx.size());
    p.append_segment(SegmentKind::Prep, 0, build_wstate_prep(g, idx, a, seed));
    const auto shift = build_shift_layer(g, idx, a, alpha);
    auto coins = detail::fragment(p.qubit_count);
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        const auto block = build_coin_block(a.group(idx, i), p.qubit_count);
        coins.gates.insert(coins.gates.end(), block.gates.begin(), block.gates.end());
    }
    for (int t = 1; t <= steps; ++t) {
        p.append_segment(SegmentKind::Shift, t, shift);
        p.append_segment(SegmentKind::Coin, t, coins);
    }
    auto measure = detail::fragment(p.qubit_count);
    measure.append(MeasureAll{});
    p.append_segment(SegmentKind::Measure, steps, measure);
    return p;
}

inline GateProgram compile_walk(const Graph &g, NodeIndex seed, double alpha, int steps) {
    const DirectedEdgeIndex idx(g);
    return compile_walk(g, idx, QubitAssignment::identity(idx), seed, alpha, steps);
}

} // namespace qwalk
