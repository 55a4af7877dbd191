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
 * Undirected interaction networks, the directed-edge basis of the walk and
 * constrained subgraph sampling.
 */
#pragma once

#include "qwalk/core.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qwalk {

using NodeIndex = std::size_t;
using EdgeIndex = std::size_t;

/**
 * Simple, connected, undirected graph with opaque string node identifiers.
 *
 * Nodes get dense indices 0..N-1 in first-appearance order. Adjacency lists
 * are sorted by dense index.
 */
class Graph {
  public:
    Graph() = default;

    /// Builds and validates a graph. Throws ValidationError on self-loops,
    /// duplicate edges, isolated nodes or disconnected input.
    Graph(std::vector<std::string> ids,
          std::vector<std::pair<NodeIndex, NodeIndex>> edges,
          std::vector<std::string> labels = {})
        : ids_(std::move(ids)), labels_(std::move(labels)),
          edges_(std::move(edges)) {
        if (labels_.empty()) {
            labels_ = ids_;
        }
        detail::require(labels_.size() == ids_.size(),
                        "label count does not match node count");
        detail::require(!ids_.empty(), "graph has no nodes");
        adjacency_.assign(ids_.size(), {});
        std::set<std::pair<NodeIndex, NodeIndex>> seen;
        for (const auto &[u, v] : edges_) {
            detail::require(u < ids_.size() && v < ids_.size(),
                            "edge endpoint out of range");
            if (u == v) {
                detail::fail_validation("self-loop at node '" + ids_[u] + "'");
            }
            if (!seen.insert(std::minmax(u, v)).second) {
                detail::fail_validation("duplicate edge '" + ids_[u] + "' - '" +
                                        ids_[v] + "'");
            }
            adjacency_[u].push_back(v);
            adjacency_[v].push_back(u);
        }
        for (NodeIndex i = 0; i < ids_.size(); ++i) {
            std::sort(adjacency_[i].begin(), adjacency_[i].end());
            if (adjacency_[i].empty()) {
                detail::fail_validation("node '" + ids_[i] +
                                        "' has no incident edges");
            }
            index_.emplace(ids_[i], i);
        }
        detail::require(index_.size() == ids_.size(),
                        "duplicate node identifier");
        if (!is_connected()) {
            detail::fail_validation("graph is disconnected");
        }
    }

    [[nodiscard]] std::size_t node_count() const { return ids_.size(); }
    [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
    [[nodiscard]] std::size_t degree(NodeIndex i) const {
        return adjacency_.at(i).size();
    }
    [[nodiscard]] std::size_t max_degree() const {
        std::size_t k = 0;
        for (const auto &a : adjacency_) {
            k = std::max(k, a.size());
        }
        return k;
    }
    [[nodiscard]] std::span<const NodeIndex> neighbors(NodeIndex i) const {
        return adjacency_.at(i);
    }
    [[nodiscard]] bool adjacent(NodeIndex u, NodeIndex v) const {
        const auto &a = adjacency_.at(u);
        return std::binary_search(a.begin(), a.end(), v);
    }
    [[nodiscard]] const std::vector<std::pair<NodeIndex, NodeIndex>> &
    edges() const {
        return edges_;
    }
    [[nodiscard]] const std::string &id(NodeIndex i) const {
        return ids_.at(i);
    }
    [[nodiscard]] const std::vector<std::string> &ids() const { return ids_; }
    [[nodiscard]] const std::string &label(NodeIndex i) const {
        return labels_.at(i);
    }
    [[nodiscard]] const std::vector<std::string> &labels() const {
        return labels_;
    }
    void set_label(NodeIndex i, std::string label) {
        labels_.at(i) = std::move(label);
    }

    [[nodiscard]] std::optional<NodeIndex> find(std::string_view id) const {
        auto it = index_.find(std::string(id));
        if (it == index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    /// Dense index of `id`; ValidationError if the node does not exist.
    [[nodiscard]] NodeIndex index_of(std::string_view id) const {
        auto i = find(id);
        if (!i) {
            detail::fail_validation("unknown node '" + std::string(id) + "'");
        }
        return *i;
    }

    /// Hop distances from `source` (BFS).
    [[nodiscard]] std::vector<std::size_t> distances_from(NodeIndex source) const {
        constexpr auto kInf = static_cast<std::size_t>(-1);
        std::vector<std::size_t> dist(node_count(), kInf);
        std::queue<NodeIndex> q;
        dist[source] = 0;
        q.push(source);
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            for (auto v : adjacency_[u]) {
                if (dist[v] == kInf) {
                    dist[v] = dist[u] + 1;
                    q.push(v);
                }
            }
        }
        return dist;
    }

    [[nodiscard]] std::size_t diameter() const {
        std::size_t d = 0;
        for (NodeIndex i = 0; i < node_count(); ++i) {
            auto dist = distances_from(i);
            d = std::max(d, *std::max_element(dist.begin(), dist.end()));
        }
        return d;
    }

    [[nodiscard]] double density() const {
        const double n = static_cast<double>(node_count());
        return n < 2 ? 0.0 : 2.0 * static_cast<double>(edge_count()) / (n * (n - 1));
    }

  private:
    [[nodiscard]] bool is_connected() const {
        auto dist = distances_from(0);
        return std::none_of(dist.begin(), dist.end(), [](std::size_t d) {
            return d == static_cast<std::size_t>(-1);
        });
    }

    std::vector<std::string> ids_;
    std::vector<std::string> labels_;
    std::vector<std::pair<NodeIndex, NodeIndex>> edges_;
    std::vector<std::vector<NodeIndex>> adjacency_;
    std::unordered_map<std::string, NodeIndex> index_;
};

/**
 * Bijection between the 2|E| directed edges (i -> j) and 0..2|E|-1.
 *
 * Edges leaving the same node occupy one contiguous block, ordered by target
 * index. Node 0's block comes first.
 */
class DirectedEdgeIndex {
  public:
    DirectedEdgeIndex() = default;

    explicit DirectedEdgeIndex(const Graph &g) {
        offsets_.reserve(g.node_count() + 1);
        for (NodeIndex i = 0; i < g.node_count(); ++i) {
            offsets_.push_back(source_.size());
            for (auto j : g.neighbors(i)) {
                source_.push_back(i);
                target_.push_back(j);
            }
        }
        offsets_.push_back(source_.size());
        reverse_.resize(source_.size());
        for (EdgeIndex q = 0; q < source_.size(); ++q) {
            reverse_[q] = at(target_[q], source_[q]);
        }
    }

    [[nodiscard]] std::size_t size() const { return source_.size(); }
    [[nodiscard]] std::size_t node_count() const { return offsets_.size() - 1; }
    [[nodiscard]] NodeIndex source(EdgeIndex q) const { return source_.at(q); }
    [[nodiscard]] NodeIndex target(EdgeIndex q) const { return target_.at(q); }
    [[nodiscard]] EdgeIndex reverse(EdgeIndex q) const { return reverse_.at(q); }

    /// First index of the block of edges leaving `i`.
    [[nodiscard]] EdgeIndex block_begin(NodeIndex i) const { return offsets_.at(i); }
    [[nodiscard]] EdgeIndex block_end(NodeIndex i) const { return offsets_.at(i + 1); }
    [[nodiscard]] std::size_t block_size(NodeIndex i) const {
        return block_end(i) - block_begin(i);
    }

    /// Index of (i -> j); ValidationError if the edge does not exist.
    [[nodiscard]] EdgeIndex at(NodeIndex i, NodeIndex j) const {
        auto first = target_.begin() + static_cast<std::ptrdiff_t>(offsets_.at(i));
        auto last = target_.begin() + static_cast<std::ptrdiff_t>(offsets_.at(i + 1));
        auto it = std::lower_bound(first, last, j);
        if (it == last || *it != j) {
            detail::fail_validation("no directed edge " + std::to_string(i) +
                                    " -> " + std::to_string(j));
        }
        return static_cast<EdgeIndex>(it - target_.begin());
    }

  private:
    std::vector<EdgeIndex> offsets_;
    std::vector<NodeIndex> source_;
    std::vector<NodeIndex> target_;
    std::vector<EdgeIndex> reverse_;
};

inline DirectedEdgeIndex index_directed_edges(const Graph &g) {
    return DirectedEdgeIndex(g);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto *ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

/// Splits a data line on tabs, or on commas when no tab is present.
inline std::vector<std::string> split_fields(std::string_view line) {
    const char sep = line.find('\t') != std::string_view::npos ? '\t' : ',';
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.emplace_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline bool is_header(const std::vector<std::string> &f) {
    static const std::set<std::pair<std::string, std::string>> kHeaders = {
        {"source", "target"}, {"u", "v"}, {"from", "to"}, {"node1", "node2"}};
    return f.size() >= 2 && kHeaders.count({lower(f[0]), lower(f[1])}) > 0;
}

} // namespace detail

/**
 * Parses an edge list: one edge per line, tab- or comma-separated, `#`
 * comments and blank lines ignored. An optional first line
 * `source<TAB>target` (or u/v, from/to, node1/node2) is skipped as a header.
 * Columns three and four, when present, label the first and second endpoint.
 */
inline Graph load_edge_list(std::string_view text) {
    std::vector<std::string> ids;
    std::vector<std::string> labels;
    std::unordered_map<std::string, NodeIndex> index;
    std::vector<std::pair<NodeIndex, NodeIndex>> edges;
    std::vector<std::size_t> edge_lines;
    bool any_data = false;

    auto intern = [&](const std::string &id) {
        auto [it, fresh] = index.emplace(id, ids.size());
        if (fresh) {
            ids.push_back(id);
            labels.push_back(id);
        }
        return it->second;
    };
    auto assign_label = [&](NodeIndex i, const std::string &label,
                            std::size_t line_no) {
        if (label.empty()) {
            return;
        }
        if (labels[i] != ids[i] && labels[i] != label) {
            throw ParseError(line_no, "conflicting labels for node '" + ids[i] + "'");
        }
        labels[i] = label;
    };

    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto f = detail::split_fields(line);
        if (!any_data && detail::is_header(f)) {
            any_data = true;
            continue;
        }
        any_data = true;
        if (f.size() < 2 || f[0].empty() || f[1].empty()) {
            throw ParseError(line_no, "expected two node identifiers");
        }
        if (f.size() > 4) {
            throw ParseError(line_no, "too many columns");
        }
        const auto u = intern(f[0]);
        const auto v = intern(f[1]);
        if (f.size() >= 3) {
            assign_label(u, f[2], line_no);
        }
        if (f.size() == 4) {
            assign_label(v, f[3], line_no);
        }
        if (u == v) {
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": self-loop at node '" + f[0] + "'");
        }
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (std::minmax(edges[e].first, edges[e].second) == std::minmax(u, v)) {
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": duplicate edge (first seen at line " +
                                      std::to_string(edge_lines[e]) + ")");
            }
        }
        edges.emplace_back(u, v);
        edge_lines.push_back(line_no);
    }
    if (edges.empty()) {
        throw ParseError(line_no, "edge list contains no edges");
    }
    return Graph(std::move(ids), std::move(edges), std::move(labels));
}

/// Applies a two-column `id<TAB>label` sidecar to `g`. Unknown ids are a
/// validation error.
inline void apply_label_sidecar(Graph &g, std::string_view text) {
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto f = detail::split_fields(line);
        if (f.size() != 2) {
            throw ParseError(line_no, "expected 'id<TAB>label'");
        }
        g.set_label(g.index_of(f[0]), f[1]);
    }
}

/// Edge list text in the format accepted by load_edge_list. Labels that
/// differ from ids are written as columns three and four.
inline std::string to_edge_list(const Graph &g) {
    std::ostringstream out;
    bool labelled = false;
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        labelled = labelled || g.label(i) != g.id(i);
    }
    for (const auto &[u, v] : g.edges()) {
        out << g.id(u) << '\t' << g.id(v);
        if (labelled) {
            out << '\t' << g.label(u) << '\t' << g.label(v);
        }
        out << '\n';
    }
    return out.str();
}

/// Induced subgraph on `nodes` (in the given order).
inline Graph induced_subgraph(const Graph &g, std::span<const NodeIndex> nodes) {
    std::unordered_map<NodeIndex, NodeIndex> local;
    std::vector<std::string> ids;
    std::vector<std::string> labels;
    for (auto v : nodes) {
        local.emplace(v, ids.size());
        ids.push_back(g.id(v));
        labels.push_back(g.label(v));
    }
    std::vector<std::pair<NodeIndex, NodeIndex>> edges;
    for (const auto &[u, v] : g.edges()) {
        auto a = local.find(u);
        auto b = local.find(v);
        if (a != local.end() && b != local.end()) {
            edges.emplace_back(a->second, b->second);
        }
    }
    return Graph(std::move(ids), std::move(edges), std::move(labels));
}

struct SampleOptions {
    std::size_t max_degree = 3;
    std::size_t max_edges = 20;
    std::uint64_t rng_seed = 0;
    std::size_t trial_budget = 10000;
};

struct SampledSubgraph {
    Graph graph;
    std::string seed;           ///< chosen seed node id
    std::uint64_t rng_seed = 0; ///< seed that reproduces this sample
    std::size_t trials = 0;     ///< trials consumed, including the accepted one
};

/**
 * Grows random connected induced subgraphs of `g` until one contains a seed
 * candidate. Each trial starts at a uniformly random node and repeatedly adds
 * a random frontier node whose induced edges keep every degree within
 * `max_degree` and the edge count within `max_edges`; growth stops when no
 * frontier node fits. Throws InfeasibleError after `trial_budget` trials.
 */
inline SampledSubgraph sample_subgraph(const Graph &g,
                                       const std::set<std::string> &seed_candidates,
                                       const SampleOptions &opt) {
    detail::require(!seed_candidates.empty(), "seed candidate set is empty");
    detail::require(opt.max_degree >= 1, "max_degree must be >= 1");
    detail::require(opt.max_edges >= 1, "max_edges must be >= 1");
    std::vector<bool> candidate(g.node_count(), false);
    for (const auto &id : seed_candidates) {
        candidate[g.index_of(id)] = true;
    }

    for (std::size_t trial = 0; trial < opt.trial_budget; ++trial) {
        auto rng = make_stream(opt.rng_seed, trial);
        std::vector<NodeIndex> chosen;
        std::vector<bool> in(g.node_count(), false);
        std::vector<std::size_t> deg(g.node_count(), 0);
        std::size_t edge_count = 0;

        const auto start = uniform_index(rng, g.node_count());
        chosen.push_back(start);
        in[start] = true;

        std::vector<NodeIndex> frontier;
        std::vector<bool> rejected(g.node_count(), false);
        auto refresh_frontier = [&] {
            frontier.clear();
            std::vector<bool> mark(g.node_count(), false);
            for (auto u : chosen) {
                for (auto v : g.neighbors(u)) {
                    if (!in[v] && !rejected[v] && !mark[v]) {
                        mark[v] = true;
                        frontier.push_back(v);
                    }
                }
            }
        };
        refresh_frontier();
        while (!frontier.empty()) {
            const auto v = frontier[uniform_index(rng, frontier.size())];
            std::size_t added = 0;
            bool ok = true;
            for (auto u : g.neighbors(v)) {
                if (in[u]) {
                    ++added;
                    ok = ok && deg[u] + 1 <= opt.max_degree;
                }
            }
            ok = ok && added <= opt.max_degree && edge_count + added <= opt.max_edges;
            if (ok) {
                in[v] = true;
                chosen.push_back(v);
                for (auto u : g.neighbors(v)) {
                    if (in[u] && u != v) {
                        ++deg[u];
                        ++deg[v];
                    }
                }
                edge_count += added;
                // Rejections are relative to the current subgraph; adding a
                // node can only make earlier rejections worse, so they stay.
            } else {
                rejected[v] = true;
            }
            refresh_frontier();
        }

        std::vector<NodeIndex> hits;
        for (auto v : chosen) {
            if (candidate[v]) {
                hits.push_back(v);
            }
        }
        if (hits.empty() || chosen.size() < 2) {
            continue;
        }
        std::sort(chosen.begin(), chosen.end());
        const auto seed = hits[uniform_index(rng, hits.size())];
        return SampledSubgraph{induced_subgraph(g, chosen), g.id(seed),
                               opt.rng_seed, trial + 1};
    }
    throw InfeasibleError("no subgraph satisfying max_degree=" +
                          std::to_string(opt.max_degree) + ", max_edges=" +
                          std::to_string(opt.max_edges) +
                          " and containing a seed candidate within " +
                          std::to_string(opt.trial_budget) + " trials");
}

} // namespace qwalk
