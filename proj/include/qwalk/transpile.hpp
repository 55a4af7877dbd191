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
 * Mapping logical programs onto a physical coupling graph: heavy-hex
 * lattices, randomized layout search and SWAP-insertion routing.
 */
#pragma once

#include "qwalk/circuit.hpp"
#include "qwalk/core.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace qwalk {

struct CalibrationData {
    std::vector<double> readout_error;                 ///< per physical qubit
    std::map<std::pair<int, int>, double> two_qubit_error; ///< key (min, max)
};

/// Undirected physical connectivity with all-pairs hop distances.
class CouplingMap {
  public:
    CouplingMap() = default;

    CouplingMap(int qubits, const std::vector<std::pair<int, int>> &edges)
        : n_(qubits), adj_(static_cast<std::size_t>(qubits)) {
        detail::require(qubits >= 1, "coupling map needs at least one qubit");
        for (const auto &[a, b] : edges) {
            detail::require(a >= 0 && b >= 0 && a < qubits && b < qubits && a != b,
                            "invalid coupling edge");
            auto &la = adj_[static_cast<std::size_t>(a)];
            if (std::find(la.begin(), la.end(), b) == la.end()) {
                la.push_back(b);
                adj_[static_cast<std::size_t>(b)].push_back(a);
                edges_.emplace_back(std::min(a, b), std::max(a, b));
            }
        }
        for (auto &l : adj_) {
            std::sort(l.begin(), l.end());
        }
        dist_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), kUnreachable);
        for (int s = 0; s < n_; ++s) {
            bfs(s);
        }
        for (int b = 0; b < n_; ++b) {
            detail::require(distance(0, b) != kUnreachable, "coupling map is disconnected");
        }
    }

    static CouplingMap all_to_all(int qubits) {
        std::vector<std::pair<int, int>> e;
        for (int a = 0; a < qubits; ++a) {
            for (int b = a + 1; b < qubits; ++b) {
                e.emplace_back(a, b);
            }
        }
        return {qubits, e};
    }

    static CouplingMap line(int qubits) {
        std::vector<std::pair<int, int>> e;
        for (int a = 0; a + 1 < qubits; ++a) {
            e.emplace_back(a, a + 1);
        }
        return {qubits, e};
    }

    [[nodiscard]] int qubit_count() const { return n_; }
    [[nodiscard]] const std::vector<std::pair<int, int>> &edges() const { return edges_; }
    [[nodiscard]] const std::vector<int> &neighbors(int q) const {
        return adj_.at(static_cast<std::size_t>(q));
    }
    [[nodiscard]] int degree(int q) const { return static_cast<int>(neighbors(q).size()); }
    [[nodiscard]] int max_degree() const {
        int k = 0;
        for (int q = 0; q < n_; ++q) {
            k = std::max(k, degree(q));
        }
        return k;
    }
    [[nodiscard]] int distance(int a, int b) const {
        return dist_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) +
                     static_cast<std::size_t>(b)];
    }
    [[nodiscard]] bool adjacent(int a, int b) const { return distance(a, b) == 1; }

    /// Vertices of one shortest path from a to b, inclusive; smallest-index
    /// neighbour wins ties so paths are deterministic.
    [[nodiscard]] std::vector<int> shortest_path(int a, int b) const {
        std::vector<int> path{a};
        while (a != b) {
            for (int n : neighbors(a)) {
                if (distance(n, b) == distance(a, b) - 1) {
                    a = n;
                    break;
                }
            }
            path.push_back(a);
        }
        return path;
    }

    std::optional<CalibrationData> calibration;

    [[nodiscard]] double readout_error(int q) const {
        if (!calibration || calibration->readout_error.empty()) {
            return 0.0;
        }
        return calibration->readout_error.at(static_cast<std::size_t>(q));
    }

    static constexpr int kUnreachable = std::numeric_limits<int>::max();

  private:
    void bfs(int s) {
        auto *row = &dist_[static_cast<std::size_t>(s) * static_cast<std::size_t>(n_)];
        std::queue<int> q;
        row[s] = 0;
        q.push(s);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int v : adj_[static_cast<std::size_t>(u)]) {
                if (row[v] == kUnreachable) {
                    row[v] = row[u] + 1;
                    q.push(v);
                }
            }
        }
    }

    int n_ = 0;
    std::vector<std::vector<int>> adj_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<int> dist_;
};

/**
 * Heavy-hex lattice of `rows` rows with `row_length` qubits each. Rows are
 * joined by bridge qubits at columns 3, 7, 11, ... below even rows and at
 * columns 1, 5, 9, ... below odd rows. Numbering runs row by row with each
 * gap's bridges between the rows they join.
 */
inline CouplingMap heavy_hex_lattice(int rows, int row_length) {
    detail::require(rows >= 1 && row_length >= 2, "heavy-hex needs rows >= 1, row_length >= 2");
    detail::require(rows == 1 || row_length >= 4, "multi-row heavy-hex needs row_length >= 4");
    std::vector<std::pair<int, int>> edges;
    int next = 0;
    std::vector<std::pair<int, int>> pending; // (bridge qubit, column)
    for (int r = 0; r < rows; ++r) {
        const int start = next;
        next += row_length;
        for (int c = 0; c + 1 < row_length; ++c) {
            edges.emplace_back(start + c, start + c + 1);
        }
        for (const auto &[bridge, col] : pending) {
            edges.emplace_back(bridge, start + col);
        }
        pending.clear();
        if (r + 1 < rows) {
            const int offset = r % 2 == 0 ? 3 : 1;
            for (int c = offset; c < row_length; c += 4) {
                const int bridge = next++;
                edges.emplace_back(start + c, bridge);
                pending.emplace_back(bridge, c);
            }
        }
    }
    return {next, edges};
}

/// Heavy-hex family indexed by `distance`: `distance` rows of 2*distance
/// qubits. Distance 8 is the 156-qubit layout.
inline CouplingMap heavy_hex(int distance) {
    detail::require(distance >= 1, "heavy-hex distance must be >= 1");
    return heavy_hex_lattice(distance, 2 * distance);
}

/// Injective logical -> physical map.
struct Layout {
    std::vector<int> physical; ///< indexed by logical qubit

    [[nodiscard]] int operator[](int logical) const {
        return physical.at(static_cast<std::size_t>(logical));
    }
};

struct LayoutOptions {
    int trials = 100;
    int max_pair_distance = 8;
    double readout_threshold = std::numeric_limits<double>::infinity();
    std::uint64_t rng_seed = 0;
};

struct LayoutScore {
    long swap_estimate = 0;
    double readout_sum = 0.0;

    friend bool operator<(const LayoutScore &a, const LayoutScore &b) {
        return std::tie(a.swap_estimate, a.readout_sum) < std::tie(b.swap_estimate, b.readout_sum);
    }
};

struct LayoutResult {
    Layout layout;
    LayoutScore score;
    int best_trial = -1;
    int feasible_trials = 0;
    int rejected_pair_distance = 0;
    int rejected_readout = 0;
    int worst_pair_distance = 0; ///< of the chosen layout
};

namespace detail {

struct Interaction {
    std::vector<std::vector<std::pair<int, int>>> weighted; ///< per logical: (neighbour, weight)
    std::vector<std::pair<int, int>> swap_pairs;            ///< partial-swap operands
};

inline Interaction interaction_graph(const GateProgram &p) {
    std::map<std::pair<int, int>, int> w;
    Interaction out;
    out.weighted.resize(static_cast<std::size_t>(p.qubit_count));
    std::set<std::pair<int, int>> swaps;
    for (const auto &g : p.gates) {
        if (!is_entangling(g)) {
            continue;
        }
        const auto ops = operands(g, p.qubit_count);
        for (std::size_t j = 0; j + 1 < ops.size(); ++j) {
            ++w[std::minmax(ops[j], ops[j + 1])];
        }
        if (const auto *ps = std::get_if<PartialSwap>(&g)) {
            swaps.insert(std::minmax(ps->a, ps->b));
        }
    }
    for (const auto &[e, c] : w) {
        out.weighted[static_cast<std::size_t>(e.first)].emplace_back(e.second, c);
        out.weighted[static_cast<std::size_t>(e.second)].emplace_back(e.first, c);
    }
    out.swap_pairs.assign(swaps.begin(), swaps.end());
    return out;
}

/// SWAPs needed to bring each gate's operands together, summed over gates,
/// for a fixed placement.
inline long estimate_swaps(const GateProgram &p, const CouplingMap &cm, const Layout &l) {
    long total = 0;
    for (const auto &g : p.gates) {
        if (!is_entangling(g)) {
            continue;
        }
        const auto ops = operands(g, p.qubit_count);
        for (std::size_t j = 1; j < ops.size(); ++j) {
            int best = std::numeric_limits<int>::max();
            for (std::size_t i = 0; i < j; ++i) {
                best = std::min(best, cm.distance(l[ops[i]], l[ops[j]]));
            }
            total += best - 1;
        }
    }
    return total;
}

inline Layout random_greedy_placement(const Interaction &ig, const CouplingMap &cm,
                                      int logical_count, double readout_threshold,
                                      std::mt19937_64 &rng) {
    const auto n_log = static_cast<std::size_t>(logical_count);
    std::vector<int> order;
    std::vector<bool> queued(n_log, false);
    std::vector<int> starts(n_log);
    std::iota(starts.begin(), starts.end(), 0);
    std::shuffle(starts.begin(), starts.end(), rng);
    for (int s : starts) {
        if (queued[static_cast<std::size_t>(s)]) {
            continue;
        }
        std::queue<int> q;
        q.push(s);
        queued[static_cast<std::size_t>(s)] = true;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            order.push_back(u);
            auto nbrs = ig.weighted[static_cast<std::size_t>(u)];
            std::shuffle(nbrs.begin(), nbrs.end(), rng);
            for (const auto &[v, w] : nbrs) {
                if (!queued[static_cast<std::size_t>(v)]) {
                    queued[static_cast<std::size_t>(v)] = true;
                    q.push(v);
                }
            }
        }
    }

    std::vector<int> allowed;
    for (int q = 0; q < cm.qubit_count(); ++q) {
        if (cm.readout_error(q) <= readout_threshold) {
            allowed.push_back(q);
        }
    }
    if (allowed.size() < n_log) {
        allowed.clear();
        for (int q = 0; q < cm.qubit_count(); ++q) {
            allowed.push_back(q);
        }
    }

    Layout l;
    l.physical.assign(n_log, -1);
    std::vector<bool> used(static_cast<std::size_t>(cm.qubit_count()), false);
    for (int u : order) {
        long best_cost = std::numeric_limits<long>::max();
        std::vector<int> best;
        for (int p : allowed) {
            if (used[static_cast<std::size_t>(p)]) {
                continue;
            }
            long cost = 0;
            bool anchored = false;
            for (const auto &[v, w] : ig.weighted[static_cast<std::size_t>(u)]) {
                const int pv = l.physical[static_cast<std::size_t>(v)];
                if (pv >= 0) {
                    cost += static_cast<long>(w) * cm.distance(p, pv);
                    anchored = true;
                }
            }
            if (!anchored) {
                cost = 0;
            }
            if (cost < best_cost) {
                best_cost = cost;
                best.assign(1, p);
            } else if (cost == best_cost) {
                best.push_back(p);
            }
        }
        const int pick = best[uniform_index(rng, best.size())];
        l.physical[static_cast<std::size_t>(u)] = pick;
        used[static_cast<std::size_t>(pick)] = true;
    }
    return l;
}

} // namespace detail

/**
 * Randomized layout search. Each trial draws a greedy placement from stream
 * (rng_seed, trial); placements with a partial-swap pair farther apart than
 * `max_pair_distance` or a qubit whose readout error exceeds
 * `readout_threshold` are rejected. The best survivor by (estimated SWAPs,
 * summed readout error) wins; InfeasibleError if none survive.
 */
inline LayoutResult layout_search(const GateProgram &p, const CouplingMap &cm,
                                  const LayoutOptions &opt = {}) {
    detail::require(p.qubit_count <= cm.qubit_count(),
                    "program needs " + std::to_string(p.qubit_count) +
                        " qubits but the device has " + std::to_string(cm.qubit_count()));
    detail::require(opt.trials >= 1, "layout trials must be >= 1");
    const auto ig = detail::interaction_graph(p);
    LayoutResult best;
    bool found = false;
    for (int t = 0; t < opt.trials; ++t) {
        auto rng = make_stream(opt.rng_seed, static_cast<std::uint64_t>(t));
        auto l = detail::random_greedy_placement(ig, cm, p.qubit_count, opt.readout_threshold, rng);
        int worst = 0;
        for (const auto &[a, b] : ig.swap_pairs) {
            worst = std::max(worst, cm.distance(l[a], l[b]));
        }
        if (worst > opt.max_pair_distance) {
            ++best.rejected_pair_distance;
            continue;
        }
        LayoutScore s;
        bool readout_ok = true;
        for (int q : l.physical) {
            s.readout_sum += cm.readout_error(q);
            readout_ok = readout_ok && cm.readout_error(q) <= opt.readout_threshold;
        }
        if (!readout_ok) {
            ++best.rejected_readout;
            continue;
        }
        ++best.feasible_trials;
        s.swap_estimate = detail::estimate_swaps(p, cm, l);
        if (!found || s < best.score) {
            found = true;
            best.layout = std::move(l);
            best.score = s;
            best.best_trial = t;
            best.worst_pair_distance = worst;
        }
    }
    if (!found) {
        const bool distance_binds = best.rejected_pair_distance >= best.rejected_readout;
        throw InfeasibleError(
            "no feasible layout in " + std::to_string(opt.trials) + " trials; binding constraint: " +
            (distance_binds ? "max_pair_distance=" + std::to_string(opt.max_pair_distance) + " (" +
                                  std::to_string(best.rejected_pair_distance) + " rejections)"
                            : "readout_threshold=" + std::to_string(opt.readout_threshold) +
                                  " (" + std::to_string(best.rejected_readout) + " rejections)"));
    }
    return best;
}

enum class RoutingPolicy {
    Track,   ///< leave moved qubits where they are; track the permutation
    Restore, ///< undo each gate's SWAPs right after it; layout is static
};

struct RoutedProgram {
    GateProgram program; ///< over physical qubits
    int swap_count = 0;
    Layout initial;
    Layout final_layout;
};

namespace detail {

class Router {
  public:
    Router(const CouplingMap &cm, const Layout &layout, int logical_count)
        : cm_(cm), pos_(layout.physical),
          inv_(static_cast<std::size_t>(cm.qubit_count()), -1) {
        for (int l = 0; l < logical_count; ++l) {
            const int p = pos_[static_cast<std::size_t>(l)];
            require(p >= 0 && p < cm.qubit_count(), "layout image out of range");
            require(inv_[static_cast<std::size_t>(p)] < 0, "layout is not injective");
            inv_[static_cast<std::size_t>(p)] = l;
        }
    }

    void swap(int a, int b, std::vector<Gate> &out) {
        out.push_back(Swap{a, b});
        ++swaps_;
        auto &la = inv_[static_cast<std::size_t>(a)];
        auto &lb = inv_[static_cast<std::size_t>(b)];
        std::swap(la, lb);
        if (la >= 0) {
            pos_[static_cast<std::size_t>(la)] = a;
        }
        if (lb >= 0) {
            pos_[static_cast<std::size_t>(lb)] = b;
        }
    }

    /// Inserts SWAPs so the operands of an entangling gate form a connected
    /// set; returns the SWAPs performed as physical pairs.
    std::vector<std::pair<int, int>> gather(const std::vector<Qubit> &ops, std::vector<Gate> &out) {
        std::vector<std::pair<int, int>> done;
        if (ops.size() == 2) {
            const int a = pos(ops[0]);
            const int b = pos(ops[1]);
            if (!cm_.adjacent(a, b)) {
                const auto path = cm_.shortest_path(a, b);
                for (std::size_t i = 0; i + 2 < path.size(); ++i) {
                    swap(path[i], path[i + 1], out);
                    done.emplace_back(path[i], path[i + 1]);
                }
            }
            return done;
        }
        std::set<int> cluster{pos(ops[0])};
        for (std::size_t j = 1; j < ops.size(); ++j) {
            const int start = pos(ops[j]);
            if (touches(cluster, start)) {
                cluster.insert(start);
                continue;
            }
            // BFS outside the cluster to the nearest vertex touching it.
            std::vector<int> parent(static_cast<std::size_t>(cm_.qubit_count()), -2);
            std::queue<int> q;
            parent[static_cast<std::size_t>(start)] = -1;
            q.push(start);
            int goal = -1;
            while (!q.empty() && goal < 0) {
                const int u = q.front();
                q.pop();
                for (int v : cm_.neighbors(u)) {
                    if (parent[static_cast<std::size_t>(v)] != -2 || cluster.count(v)) {
                        continue;
                    }
                    parent[static_cast<std::size_t>(v)] = u;
                    if (touches(cluster, v)) {
                        goal = v;
                        break;
                    }
                    q.push(v);
                }
            }
            if (goal < 0) {
                throw InfeasibleError("cannot gather gate operands: cluster is enclosed");
            }
            std::vector<int> path;
            for (int v = goal; v != -1; v = parent[static_cast<std::size_t>(v)]) {
                path.push_back(v);
            }
            std::reverse(path.begin(), path.end());
            for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                swap(path[i], path[i + 1], out);
                done.emplace_back(path[i], path[i + 1]);
            }
            cluster.insert(goal);
        }
        return done;
    }

    [[nodiscard]] int pos(int logical) const { return pos_[static_cast<std::size_t>(logical)]; }
    [[nodiscard]] int swaps() const { return swaps_; }
    [[nodiscard]] const std::vector<int> &positions() const { return pos_; }

  private:
    [[nodiscard]] bool touches(const std::set<int> &cluster, int v) const {
        return std::any_of(cm_.neighbors(v).begin(), cm_.neighbors(v).end(),
                           [&](int n) { return cluster.count(n) > 0; });
    }

    const CouplingMap &cm_;
    std::vector<int> pos_;
    std::vector<int> inv_;
    int swaps_ = 0;
};

inline Gate relabel(const Gate &g, const Router &r) {
    return std::visit(
        [&r](const auto &x) -> Gate {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, OneQubitGate>) {
                return OneQubitGate{r.pos(x.qubit), x.matrix, x.name};
            } else if constexpr (std::is_same_v<T, Cnot>) {
                return Cnot{r.pos(x.control), r.pos(x.target)};
            } else if constexpr (std::is_same_v<T, PartialSwap>) {
                return PartialSwap{r.pos(x.a), r.pos(x.b), x.alpha};
            } else if constexpr (std::is_same_v<T, Swap>) {
                return Swap{r.pos(x.a), r.pos(x.b)};
            } else if constexpr (std::is_same_v<T, SmallUnitary>) {
                std::vector<Qubit> q;
                for (auto l : x.qubits) {
                    q.push_back(r.pos(l));
                }
                return SmallUnitary{q, x.matrix, x.name};
            } else {
                return MeasureAll{};
            }
        },
        g);
}

} // namespace detail

/**
 * Inserts SWAPs so every entangling gate acts on coupled physical qubits.
 * Two-qubit gates move their first operand along a shortest path until it
 * neighbours the second; wider gates pull operands one at a time next to
 * the growing operand cluster.
 */
inline RoutedProgram route(const GateProgram &p, const Layout &layout, const CouplingMap &cm,
                           RoutingPolicy policy = RoutingPolicy::Track) {
    detail::require(static_cast<int>(layout.physical.size()) == p.qubit_count,
                    "layout size does not match program");
    detail::Router router(cm, layout, p.qubit_count);
    RoutedProgram out;
    out.initial = layout;
    out.program.qubit_count = cm.qubit_count();
    auto &gates = out.program.gates;
    std::vector<std::size_t> new_begin(p.gates.size() + 1, 0);
    for (std::size_t k = 0; k < p.gates.size(); ++k) {
        new_begin[k] = gates.size();
        const auto &g = p.gates[k];
        std::vector<std::pair<int, int>> moved;
        if (is_entangling(g)) {
            moved = router.gather(operands(g, p.qubit_count), gates);
        }
        gates.push_back(detail::relabel(g, router));
        if (policy == RoutingPolicy::Restore) {
            for (auto it = moved.rbegin(); it != moved.rend(); ++it) {
                router.swap(it->first, it->second, gates);
            }
        }
    }
    new_begin[p.gates.size()] = gates.size();
    for (const auto &s : p.segments) {
        out.program.segments.push_back({s.kind, s.step, new_begin[s.begin], new_begin[s.end]});
    }
    out.swap_count = router.swaps();
    out.final_layout.physical = router.positions();
    return out;
}

/// A routed program renumbered onto the physical qubits it touches, so it
/// can be simulated without the idle part of the device.
inline constexpr int kMaxCompactQubits = 64;

struct CompactProgram {
    GateProgram program;
    std::vector<int> physical_of;   ///< compact index -> physical qubit
    std::vector<int> final_compact; ///< logical qubit -> compact index at the end
};

inline CompactProgram compact(const RoutedProgram &rp) {
    const int n_phys = rp.program.qubit_count;
    std::vector<int> local(static_cast<std::size_t>(n_phys), -1);
    CompactProgram out;
    auto touch = [&](int p) {
        auto &l = local[static_cast<std::size_t>(p)];
        if (l < 0) {
            l = static_cast<int>(out.physical_of.size());
            out.physical_of.push_back(p);
        }
        return l;
    };
    for (int p : rp.initial.physical) {
        touch(p);
    }
    for (const auto &g : rp.program.gates) {
        if (!is_measure(g)) {
            for (auto q : operands(g, n_phys)) {
                touch(q);
            }
        }
    }
    if (static_cast<int>(out.physical_of.size()) > kMaxCompactQubits) {
        throw CapabilityError("routed program touches " + std::to_string(out.physical_of.size()) +
                              " qubits; simulation supports at most 64");
    }
    out.program.qubit_count = static_cast<int>(out.physical_of.size());
    out.program.segments = rp.program.segments;
    for (const auto &g : rp.program.gates) {
        out.program.gates.push_back(std::visit(
            [&local](const auto &x) -> Gate {
                using T = std::decay_t<decltype(x)>;
                auto at = [&local](int p) { return local[static_cast<std::size_t>(p)]; };
                if constexpr (std::is_same_v<T, OneQubitGate>) {
                    return OneQubitGate{at(x.qubit), x.matrix, x.name};
                } else if constexpr (std::is_same_v<T, Cnot>) {
                    return Cnot{at(x.control), at(x.target)};
                } else if constexpr (std::is_same_v<T, PartialSwap>) {
                    return PartialSwap{at(x.a), at(x.b), x.alpha};
                } else if constexpr (std::is_same_v<T, Swap>) {
                    return Swap{at(x.a), at(x.b)};
                } else if constexpr (std::is_same_v<T, SmallUnitary>) {
                    std::vector<Qubit> q;
                    for (auto p : x.qubits) {
                        q.push_back(at(p));
                    }
                    return SmallUnitary{q, x.matrix, x.name};
                } else {
                    return MeasureAll{};
                }
            },
            g));
    }
    for (int p : rp.final_layout.physical) {
        out.final_compact.push_back(local[static_cast<std::size_t>(p)]);
    }
    return out;
}

inline int entangling_layer_count(const RoutedProgram &rp) {
    return count_logical_layers(rp.program).entangling;
}

/// Two-qubit native gate count with SWAPs at 3 CZ each.
inline int cz_equivalent_count(const RoutedProgram &rp) {
    return total_native_two_qubit_cost(rp.program);
}

} // namespace qwalk
