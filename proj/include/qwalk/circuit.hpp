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
 * Hardware-agnostic gate program representation.
 *
 * Matrix convention: a gate acting on operands (q_0, q_1, ..., q_{k-1}) has a
 * 2^k x 2^k matrix whose basis index carries q_0 in bit 0 (least
 * significant). Qubit 0 of a program is bit 0 of a basis state.
 */
#pragma once

#include "qwalk/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

namespace qwalk {

using Matrix = Eigen::MatrixXcd;
using Qubit = int;

struct OneQubitGate {
    Qubit qubit;
    Matrix matrix; ///< 2x2
    std::string name = "u";
};

struct Cnot {
    Qubit control;
    Qubit target;
};

/// Excitation-preserving partial swap: identity on |00>, |11> and the block
/// [[i sqrt(a), sqrt(1-a)], [sqrt(1-a), i sqrt(a)]] on {|01>, |10>}.
struct PartialSwap {
    Qubit a;
    Qubit b;
    double alpha;
};

/// Full SWAP inserted by routing.
struct Swap {
    Qubit a;
    Qubit b;
};

struct SmallUnitary {
    std::vector<Qubit> qubits;
    Matrix matrix; ///< 2^k x 2^k, qubits[0] is bit 0
    std::string name = "unitary";
};

struct MeasureAll {};

using Gate = std::variant<OneQubitGate, Cnot, PartialSwap, Swap, SmallUnitary, MeasureAll>;

enum class SegmentKind { Prep, Shift, Coin, Measure };

inline const char *to_string(SegmentKind k) {
    switch (k) {
    case SegmentKind::Prep:
        return "prep";
    case SegmentKind::Shift:
        return "shift";
    case SegmentKind::Coin:
        return "coin";
    case SegmentKind::Measure:
        return "measure";
    }
    return "?";
}

/// Half-open range [begin, end) of gate positions forming one logical block.
struct Segment {
    SegmentKind kind;
    int step; ///< walk step the block belongs to; 0 for prep
    std::size_t begin;
    std::size_t end;
};

struct GateProgram {
    int qubit_count = 0;
    std::vector<Gate> gates;
    std::vector<Segment> segments;

    void append(Gate g) { gates.push_back(std::move(g)); }

    /// Appends `fragment` (which must not carry segments) as one segment.
    void append_segment(SegmentKind kind, int step, const GateProgram &fragment) {
        const auto begin = gates.size();
        gates.insert(gates.end(), fragment.gates.begin(), fragment.gates.end());
        segments.push_back({kind, step, begin, gates.size()});
    }
};

namespace gates {

inline Matrix x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline Matrix ry(double theta) {
    Matrix m(2, 2);
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    m << c, -s, s, c;
    return m;
}

inline Matrix partial_swap(double alpha) {
    Matrix m = Matrix::Identity(4, 4);
    const Complex stay{0.0, std::sqrt(alpha)};
    const double hop = std::sqrt(1.0 - alpha);
    m(1, 1) = stay;
    m(2, 2) = stay;
    m(1, 2) = hop;
    m(2, 1) = hop;
    return m;
}

inline Matrix swap() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 2) = 1;
    m(2, 1) = 1;
    m(3, 3) = 1;
    return m;
}

/// CNOT with the control on bit 0 and target on bit 1.
inline Matrix cnot() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1;
    m(3, 1) = 1;
    m(2, 2) = 1;
    m(1, 3) = 1;
    return m;
}

/// Controlled RY with the control on bit 0 and target on bit 1.
inline Matrix controlled_ry(double theta) {
    Matrix m = Matrix::Identity(4, 4);
    const auto r = ry(theta);
    m(1, 1) = r(0, 0);
    m(1, 3) = r(0, 1);
    m(3, 1) = r(1, 0);
    m(3, 3) = r(1, 1);
    return m;
}

/// Real rotation by theta inside span{|01>, |10>}: |01> -> cos|01> + sin|10>.
/// Identity on |00> and |11>.
inline Matrix givens(double theta) {
    Matrix m = Matrix::Identity(4, 4);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    m(1, 1) = c;
    m(2, 1) = s;
    m(1, 2) = -s;
    m(2, 2) = c;
    return m;
}

} // namespace gates

inline std::vector<Qubit> operands(const Gate &g, int qubit_count) {
    return std::visit(
        [qubit_count](const auto &x) -> std::vector<Qubit> {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, OneQubitGate>) {
                return {x.qubit};
            } else if constexpr (std::is_same_v<T, Cnot>) {
                return {x.control, x.target};
            } else if constexpr (std::is_same_v<T, PartialSwap> || std::is_same_v<T, Swap>) {
                return {x.a, x.b};
            } else if constexpr (std::is_same_v<T, SmallUnitary>) {
                return x.qubits;
            } else {
                std::vector<Qubit> all(static_cast<std::size_t>(qubit_count));
                for (int q = 0; q < qubit_count; ++q) {
                    all[static_cast<std::size_t>(q)] = q;
                }
                return all;
            }
        },
        g);
}

inline bool is_measure(const Gate &g) { return std::holds_alternative<MeasureAll>(g); }

/// True for unitary gates acting on two or more qubits.
inline bool is_entangling(const Gate &g) {
    return std::visit(
        [](const auto &x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, SmallUnitary>) {
                return x.qubits.size() >= 2;
            } else {
                return std::is_same_v<T, Cnot> || std::is_same_v<T, PartialSwap> ||
                       std::is_same_v<T, Swap>;
            }
        },
        g);
}

/// Matrix of a unitary gate in operand order. MeasureAll has none.
inline Matrix gate_matrix(const Gate &g) {
    return std::visit(
        [](const auto &x) -> Matrix {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, OneQubitGate>) {
                return x.matrix;
            } else if constexpr (std::is_same_v<T, Cnot>) {
                return gates::cnot();
            } else if constexpr (std::is_same_v<T, PartialSwap>) {
                return gates::partial_swap(x.alpha);
            } else if constexpr (std::is_same_v<T, Swap>) {
                return gates::swap();
            } else if constexpr (std::is_same_v<T, SmallUnitary>) {
                return x.matrix;
            } else {
                throw ValidationError("measure_all has no matrix");
            }
        },
        g);
}

/**
 * Native two-qubit gate count used for CZ-equivalent accounting: CNOT 1,
 * SWAP and partial swap 3, dense two-qubit unitary 3, dense k-qubit unitary
 * ceil((4^k - 3k - 1) / 4) (the generic CNOT lower bound, 14 for k = 3).
 */
inline int native_two_qubit_cost(const Gate &g) {
    return std::visit(
        [](const auto &x) -> int {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Cnot>) {
                return 1;
            } else if constexpr (std::is_same_v<T, PartialSwap> || std::is_same_v<T, Swap>) {
                return 3;
            } else if constexpr (std::is_same_v<T, SmallUnitary>) {
                const auto k = static_cast<int>(x.qubits.size());
                if (k < 2) {
                    return 0;
                }
                if (k == 2) {
                    return 3;
                }
                const long four_k = 1L << (2 * k);
                return static_cast<int>((four_k - 3L * k - 1 + 3) / 4);
            } else {
                return 0;
            }
        },
        g);
}

inline bool is_unitary(const Matrix &m, double tol = Tolerance::unitarity) {
    if (m.rows() != m.cols()) {
        return false;
    }
    return ((m.adjoint() * m) - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

/// Checks operand ranges and distinctness, matrix shapes and unitarity, and
/// that segments are ordered, disjoint and cover the gate list.
inline void validate(const GateProgram &p) {
    for (std::size_t k = 0; k < p.gates.size(); ++k) {
        const auto &g = p.gates[k];
        auto ops = operands(g, p.qubit_count);
        auto sorted = ops;
        std::sort(sorted.begin(), sorted.end());
        detail::require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                        "gate " + std::to_string(k) + " repeats an operand");
        for (auto q : ops) {
            detail::require(q >= 0 && q < p.qubit_count,
                            "gate " + std::to_string(k) + " operand out of range");
        }
        if (!is_measure(g)) {
            const auto m = gate_matrix(g);
            const auto dim = Eigen::Index{1} << ops.size();
            detail::require(m.rows() == dim && m.cols() == dim,
                            "gate " + std::to_string(k) + " matrix has wrong dimension");
            detail::require(is_unitary(m),
                            "gate " + std::to_string(k) + " matrix is not unitary");
        }
    }
    std::size_t cursor = 0;
    for (const auto &s : p.segments) {
        detail::require(s.begin == cursor && s.end >= s.begin,
                        "segments must partition the gate list");
        cursor = s.end;
    }
    detail::require(p.segments.empty() || cursor == p.gates.size(),
                    "segments must partition the gate list");
}

/// Per-gate layer index under greedy as-soon-as-possible scheduling. When
/// `entangling_only` is set, non-entangling gates are ignored (layer -1).
inline std::vector<int> asap_layers(const GateProgram &p, bool entangling_only) {
    std::vector<int> frontier(static_cast<std::size_t>(p.qubit_count), 0);
    std::vector<int> layer(p.gates.size(), -1);
    for (std::size_t k = 0; k < p.gates.size(); ++k) {
        const auto &g = p.gates[k];
        if (is_measure(g) || (entangling_only && !is_entangling(g))) {
            continue;
        }
        int l = 0;
        auto ops = operands(g, p.qubit_count);
        for (auto q : ops) {
            l = std::max(l, frontier[static_cast<std::size_t>(q)]);
        }
        layer[k] = l;
        for (auto q : ops) {
            frontier[static_cast<std::size_t>(q)] = l + 1;
        }
    }
    return layer;
}

struct LayerCounts {
    int total = 0;      ///< all unitary gates
    int entangling = 0; ///< gates on two or more qubits only
};

/// Greedy earliest-possible layer counts. Measurement is not counted.
inline LayerCounts count_logical_layers(const GateProgram &p) {
    LayerCounts c;
    for (auto l : asap_layers(p, false)) {
        c.total = std::max(c.total, l + 1);
    }
    for (auto l : asap_layers(p, true)) {
        c.entangling = std::max(c.entangling, l + 1);
    }
    return c;
}

/// Entangling-layer depth of the prefix ending with each walk step, for
/// steps 1..T. Entry t-1 is the depth after step t's coin segment.
inline std::vector<int> entangling_layers_by_step(const GateProgram &p) {
    const auto layer = asap_layers(p, true);
    std::vector<int> out;
    int depth = 0;
    std::size_t cursor = 0;
    for (const auto &s : p.segments) {
        for (; cursor < s.end; ++cursor) {
            depth = std::max(depth, layer[cursor] + 1);
        }
        if (s.kind == SegmentKind::Coin) {
            out.push_back(depth);
        }
    }
    return out;
}

/// Entangling depth when each gate is expanded into its native two-qubit
/// count of consecutive layers (coarse gates no longer count as one layer).
inline int native_entangling_depth(const GateProgram &p) {
    std::vector<int> frontier(static_cast<std::size_t>(p.qubit_count), 0);
    int depth = 0;
    for (const auto &g : p.gates) {
        const int cost = native_two_qubit_cost(g);
        if (cost == 0) {
            continue;
        }
        const auto ops = operands(g, p.qubit_count);
        int start = 0;
        for (auto q : ops) {
            start = std::max(start, frontier[static_cast<std::size_t>(q)]);
        }
        for (auto q : ops) {
            frontier[static_cast<std::size_t>(q)] = start + cost;
        }
        depth = std::max(depth, start + cost);
    }
    return depth;
}

inline int total_native_two_qubit_cost(const GateProgram &p) {
    int c = 0;
    for (const auto &g : p.gates) {
        c += native_two_qubit_cost(g);
    }
    return c;
}

} // namespace qwalk
