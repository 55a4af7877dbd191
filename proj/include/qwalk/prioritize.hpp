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
 * Interference-based node prioritization.
 *
 *   I_i(t) = |Pq_i(t) - Pcl_i(t)| / sum_j Pq_j(t)^2
 *   S_i    = max_{t in [t_min, t_max]} I_i(t)
 */
#pragma once

#include "qwalk/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace qwalk {

using StepDistributions = std::vector<std::vector<double>>;

struct QiiSeries {
    std::vector<std::vector<double>> index; ///< [step][node]
    std::vector<double> collision;          ///< sum_j Pq_j(t)^2 per step

    [[nodiscard]] std::size_t steps() const { return index.size(); }
    [[nodiscard]] std::size_t nodes() const { return index.empty() ? 0 : index.front().size(); }
};

inline QiiSeries qii(const StepDistributions &quantum, const StepDistributions &classical) {
    detail::require(quantum.size() == classical.size(),
                    "quantum and classical series cover different step ranges");
    QiiSeries out;
    for (std::size_t t = 0; t < quantum.size(); ++t) {
        const auto &pq = quantum[t];
        const auto &pc = classical[t];
        detail::require(pq.size() == pc.size(), "quantum and classical supports differ at step " +
                                                    std::to_string(t));
        double sum = 0.0;
        double collision = 0.0;
        for (auto x : pq) {
            sum += x;
            collision += x * x;
        }
        detail::require(std::abs(sum - 1.0) <= Tolerance::fidelity_input,
                        "quantum distribution at step " + std::to_string(t) + " is not normalised");
        if (collision <= 0.0) {
            throw CapabilityError("zero collision probability at step " + std::to_string(t));
        }
        std::vector<double> row(pq.size());
        for (std::size_t i = 0; i < pq.size(); ++i) {
            row[i] = std::abs(pq[i] - pc[i]) / collision;
        }
        out.index.push_back(std::move(row));
        out.collision.push_back(collision);
    }
    return out;
}

struct ScoreTable {
    std::vector<double> scores;         ///< per node
    std::vector<std::size_t> ranking;   ///< node indices, best first
    std::vector<std::string> labels;    ///< optional, per node
    int t_min = 0;
    int t_max = 0;
};

/// Descending by score, ties broken by node order.
inline std::vector<std::size_t> rank_descending(const std::vector<double> &scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

inline constexpr int kDefaultScoreStart = 2;

/// Maximum interference index over steps [t_min, t_max]. A negative t_max
/// means the last available step.
inline ScoreTable score(const QiiSeries &series, int t_min = kDefaultScoreStart, int t_max = -1) {
    if (t_max < 0) {
        t_max = static_cast<int>(series.steps()) - 1;
    }
    if (t_min < 0 || t_min > t_max || t_max >= static_cast<int>(series.steps())) {
        throw ValidationError("empty or out-of-range score window [" + std::to_string(t_min) +
                              ", " + std::to_string(t_max) + "] for " +
                              std::to_string(series.steps()) + " steps");
    }
    ScoreTable s;
    s.t_min = t_min;
    s.t_max = t_max;
    s.scores.assign(series.nodes(), 0.0);
    for (int t = t_min; t <= t_max; ++t) {
        const auto &row = series.index[static_cast<std::size_t>(t)];
        for (std::size_t i = 0; i < row.size(); ++i) {
            s.scores[i] = std::max(s.scores[i], row[i]);
        }
    }
    s.ranking = rank_descending(s.scores);
    return s;
}

struct RankEntry {
    std::size_t rank = 0; ///< 1-based
    std::size_t node = 0;
    std::string id;
    std::string label;
    double score = 0.0;
    bool is_seed = false;
};

struct RankOptions {
    std::optional<std::size_t> seed;
    bool exclude_seed = false;
};

/// Ranked list with labels; ids default to node indices and labels to ids.
inline std::vector<RankEntry> rank_report(const ScoreTable &s, const std::vector<std::string> &ids,
                                          const std::vector<std::string> &labels,
                                          const RankOptions &opt = {}) {
    std::vector<RankEntry> out;
    std::size_t rank = 0;
    for (auto node : s.ranking) {
        const bool seed = opt.seed && *opt.seed == node;
        if (seed && opt.exclude_seed) {
            continue;
        }
        RankEntry e;
        e.rank = ++rank;
        e.node = node;
        e.id = node < ids.size() ? ids[node] : std::to_string(node);
        e.label = node < labels.size() && !labels[node].empty() ? labels[node] : e.id;
        e.score = s.scores[node];
        e.is_seed = seed;
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace qwalk
