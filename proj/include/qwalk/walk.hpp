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
 * Reference coined walk in the directed-edge basis, plus the lazy classical
 * random walk used as the interference baseline.
 *
 * One step is U = C S: the partial-swap shift S followed by the Grover coin C.
 * For a directed edge pair {(i,j),(j,i)} the shift acts as
 *
 *     S |i->j> = sqrt(1 - alpha) |j->i> + i sqrt(alpha) |i->j>
 *
 * so alpha = 0 is a full exchange of the pair and alpha = 1 multiplies every
 * amplitude by i (the walker stays put). alpha = 1/2 is the square root of
 * iSWAP in the qubit encoding.
 */
#pragma once

#include "qwalk/core.hpp"
#include "qwalk/graph.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace qwalk {

/// Walker amplitudes over the directed-edge basis.
struct EdgeState {
    std::vector<Complex> amplitudes;
    int step = 0;

    [[nodiscard]] double norm() const {
        double s = 0.0;
        for (const auto &a : amplitudes) {
            s += std::norm(a);
        }
        return std::sqrt(s);
    }
};

/// Probability of the walker on each node.
struct NodeDistribution {
    std::vector<double> probabilities;
    int step = 0;

    [[nodiscard]] std::size_t size() const { return probabilities.size(); }
    double operator[](std::size_t i) const { return probabilities[i]; }
};

struct ClassicalWalkState {
    std::vector<double> probabilities;
    double alpha = 0.5;
    int step = 0;
};

struct WalkStep {
    EdgeState state;
    NodeDistribution distribution;
};

inline constexpr double kDefaultAlpha = 0.5;

inline void check_alpha(double alpha) {
    detail::require(alpha >= 0.0 && alpha <= 1.0 && !std::isnan(alpha),
                    "alpha must lie in [0, 1], got " + std::to_string(alpha));
}

/// Uniform superposition over the edges leaving `seed`.
inline EdgeState initial_state(const Graph &g, const DirectedEdgeIndex &idx,
                               NodeIndex seed) {
    detail::require(seed < g.node_count(), "seed node out of range");
    EdgeState s{std::vector<Complex>(idx.size(), Complex{}), 0};
    const double amp = 1.0 / std::sqrt(static_cast<double>(g.degree(seed)));
    for (auto q = idx.block_begin(seed); q < idx.block_end(seed); ++q) {
        s.amplitudes[q] = amp;
    }
    return s;
}

inline EdgeState initial_state(const Graph &g, const DirectedEdgeIndex &idx,
                               std::string_view seed_id) {
    return initial_state(g, idx, g.index_of(seed_id));
}

inline EdgeState apply_shift(const EdgeState &s, const DirectedEdgeIndex &idx,
                             double alpha) {
    check_alpha(alpha);
    const Complex stay{0.0, std::sqrt(alpha)};
    const double hop = std::sqrt(1.0 - alpha);
    EdgeState out{std::vector<Complex>(s.amplitudes.size()), s.step};
    for (EdgeIndex q = 0; q < idx.size(); ++q) {
        out.amplitudes[q] = stay * s.amplitudes[q] + hop * s.amplitudes[idx.reverse(q)];
    }
    return out;
}

/// Grover coin 2|s_i><s_i| - I applied to every node block.
inline EdgeState apply_coin(const EdgeState &s, const Graph &g,
                            const DirectedEdgeIndex &idx) {
    EdgeState out{s.amplitudes, s.step};
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        const auto b = idx.block_begin(i);
        const auto e = idx.block_end(i);
        Complex sum{};
        for (auto q = b; q < e; ++q) {
            sum += s.amplitudes[q];
        }
        const Complex mean = 2.0 * sum / static_cast<double>(e - b);
        for (auto q = b; q < e; ++q) {
            out.amplitudes[q] = mean - s.amplitudes[q];
        }
    }
    return out;
}

/// Node marginals: P_i = sum over edges leaving i of |psi_ij|^2.
inline NodeDistribution node_distribution(const EdgeState &s,
                                          const DirectedEdgeIndex &idx) {
    NodeDistribution d{std::vector<double>(idx.node_count(), 0.0), s.step};
    for (EdgeIndex q = 0; q < idx.size(); ++q) {
        d.probabilities[idx.source(q)] += std::norm(s.amplitudes[q]);
    }
    return d;
}

/// States and node distributions for t = 0..steps under U = C S.
inline std::vector<WalkStep> run_walk(const Graph &g, const DirectedEdgeIndex &idx,
                                      NodeIndex seed, double alpha, int steps) {
    check_alpha(alpha);
    detail::require(steps >= 0, "step count must be >= 0");
    std::vector<WalkStep> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    auto s = initial_state(g, idx, seed);
    // The W state lives entirely on the seed's block: an exact point mass,
    // not a sum of k rounded 1/k terms.
    auto d0 = node_distribution(s, idx);
    std::fill(d0.probabilities.begin(), d0.probabilities.end(), 0.0);
    d0.probabilities[seed] = 1.0;
    out.push_back({s, d0});
    for (int t = 1; t <= steps; ++t) {
        s = apply_coin(apply_shift(s, idx, alpha), g, idx);
        s.step = t;
        out.push_back({s, node_distribution(s, idx)});
    }
    return out;
}

/// Row-stochastic lazy walk matrix M_ij = alpha delta_ij + (1-alpha) A_ij / k_i,
/// stored row-major.
inline std::vector<double> lazy_transition_matrix(const Graph &g, double alpha) {
    check_alpha(alpha);
    const auto n = g.node_count();
    std::vector<double> m(n * n, 0.0);
    for (NodeIndex i = 0; i < n; ++i) {
        m[i * n + i] += alpha;
        const double w = (1.0 - alpha) / static_cast<double>(g.degree(i));
        for (auto j : g.neighbors(i)) {
            m[i * n + j] += w;
        }
    }
    return m;
}

/// Lazy classical walk from a point mass on `seed`: P(t+1)_j = sum_i M_ij P(t)_i.
inline std::vector<ClassicalWalkState> classical_walk(const Graph &g, NodeIndex seed,
                                                      double alpha, int steps) {
    detail::require(seed < g.node_count(), "seed node out of range");
    detail::require(steps >= 0, "step count must be >= 0");
    const auto n = g.node_count();
    const auto m = lazy_transition_matrix(g, alpha);
    std::vector<ClassicalWalkState> out;
    std::vector<double> p(n, 0.0);
    p[seed] = 1.0;
    out.push_back({p, alpha, 0});
    for (int t = 1; t <= steps; ++t) {
        std::vector<double> next(n, 0.0);
        for (NodeIndex i = 0; i < n; ++i) {
            if (p[i] == 0.0) {
                continue;
            }
            for (NodeIndex j = 0; j < n; ++j) {
                next[j] += m[i * n + j] * p[i];
            }
        }
        p = std::move(next);
        out.push_back({p, alpha, t});
    }
    return out;
}

/// R_i = k_i / sum_j k_j, the long-time limit of the classical walk.
inline NodeDistribution stationary_distribution(const Graph &g) {
    NodeDistribution d{std::vector<double>(g.node_count()), 0};
    const double total = 2.0 * static_cast<double>(g.edge_count());
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        d.probabilities[i] = static_cast<double>(g.degree(i)) / total;
    }
    return d;
}

inline std::vector<std::vector<double>>
distributions_of(const std::vector<WalkStep> &walk) {
    std::vector<std::vector<double>> out;
    out.reserve(walk.size());
    for (const auto &w : walk) {
        out.push_back(w.distribution.probabilities);
    }
    return out;
}

inline std::vector<std::vector<double>>
distributions_of(const std::vector<ClassicalWalkState> &walk) {
    std::vector<std::vector<double>> out;
    out.reserve(walk.size());
    for (const auto &w : walk) {
        out.push_back(w.probabilities);
    }
    return out;
}

} // namespace qwalk
