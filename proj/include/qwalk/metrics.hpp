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
 * Probability estimates from measured bitstrings and distribution metrics.
 *
 * Raw estimate: every set bit counts as one observation of the walker on
 * that directed edge, normalised by the total number of set bits.
 * Postselected estimate: only bitstrings of Hamming weight 1 are kept.
 */
#pragma once

#include "qwalk/core.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

namespace qwalk {

enum class EstimateMode { Raw, Postselected };

struct ProbabilityEstimate {
    std::vector<double> edge;  ///< over directed-edge indices
    std::vector<double> node;  ///< marginals over nodes
    double retention = 1.0;    ///< kept shots / all shots (1 for raw)
    std::uint64_t kept_shots = 0;
    std::uint64_t total_shots = 0;
    EstimateMode mode = EstimateMode::Raw;
};

namespace detail {

inline std::vector<double> node_marginals(std::span<const double> edge,
                                          const DirectedEdgeIndex &idx) {
    std::vector<double> node(idx.node_count(), 0.0);
    for (EdgeIndex q = 0; q < idx.size(); ++q) {
        node[idx.source(q)] += edge[q];
    }
    return node;
}

inline void check_width(const ShotTable &st, const DirectedEdgeIndex &idx) {
    detail::require(static_cast<std::size_t>(st.bit_count()) == idx.size(),
                    "bitstring width " + std::to_string(st.bit_count()) +
                        " does not match 2|E| = " + std::to_string(idx.size()));
}

} // namespace detail

/// Set-bit frequency per directed edge; CapabilityError if no bit is set.
inline ProbabilityEstimate raw_probabilities(const ShotTable &st, const DirectedEdgeIndex &idx) {
    detail::check_width(st, idx);
    std::vector<double> ones(idx.size(), 0.0);
    double excitations = 0.0;
    for (const auto &[b, c] : st.counts()) {
        for (std::size_t q = 0; q < idx.size(); ++q) {
            if ((b >> q) & 1U) {
                ones[q] += static_cast<double>(c);
                excitations += static_cast<double>(c);
            }
        }
    }
    if (excitations == 0.0) {
        throw CapabilityError("raw estimate undefined: no set bits in any shot");
    }
    for (auto &x : ones) {
        x /= excitations;
    }
    ProbabilityEstimate e;
    e.node = detail::node_marginals(ones, idx);
    e.edge = std::move(ones);
    e.kept_shots = st.total();
    e.total_shots = st.total();
    e.retention = 1.0;
    e.mode = EstimateMode::Raw;
    return e;
}

/// Frequencies among weight-1 shots; CapabilityError if there are none.
inline ProbabilityEstimate postselected_probabilities(const ShotTable &st,
                                                      const DirectedEdgeIndex &idx) {
    detail::check_width(st, idx);
    std::vector<double> hits(idx.size(), 0.0);
    std::uint64_t kept = 0;
    for (const auto &[b, c] : st.counts()) {
        if (popcount(b) == 1) {
            hits[static_cast<std::size_t>(__builtin_ctzll(b))] += static_cast<double>(c);
            kept += c;
        }
    }
    if (kept == 0) {
        throw CapabilityError("postselection kept no shots (no weight-1 bitstrings among " +
                              std::to_string(st.total()) + ")");
    }
    for (auto &x : hits) {
        x /= static_cast<double>(kept);
    }
    ProbabilityEstimate e;
    e.node = detail::node_marginals(hits, idx);
    e.edge = std::move(hits);
    e.kept_shots = kept;
    e.total_shots = st.total();
    e.retention = static_cast<double>(kept) / static_cast<double>(st.total());
    e.mode = EstimateMode::Postselected;
    return e;
}

namespace detail {

inline void check_distribution(std::span<const double> p, const char *name) {
    double s = 0.0;
    for (auto x : p) {
        detail::require(x >= -Tolerance::fidelity_input,
                        std::string(name) + " has a negative entry");
        s += x;
    }
    detail::require(std::abs(s - 1.0) <= Tolerance::fidelity_input,
                    std::string(name) + " is not normalised (sum " + std::to_string(s) + ")");
}

} // namespace detail

/// (sum_i sqrt(P_i Q_i))^2.
inline double hellinger_fidelity(std::span<const double> p, std::span<const double> q) {
    detail::require(p.size() == q.size(), "distributions have different supports");
    detail::check_distribution(p, "P");
    detail::check_distribution(q, "Q");
    double bc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        bc += std::sqrt(std::max(0.0, p[i]) * std::max(0.0, q[i]));
    }
    return bc * bc;
}

/// Squared Hellinger distance (1/2) sum_i (sqrt(P_i) - sqrt(Q_i))^2.
inline double hellinger_distance_sq(std::span<const double> p, std::span<const double> q) {
    detail::require(p.size() == q.size(), "distributions have different supports");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = std::sqrt(std::max(0.0, p[i])) - std::sqrt(std::max(0.0, q[i]));
        s += d * d;
    }
    return 0.5 * s;
}

/// (F(P,Q) - F(R,Q)) / (1 - F(R,Q)); CapabilityError when F(R,Q) = 1.
inline double baseline_corrected_fidelity(std::span<const double> p, std::span<const double> q,
                                          std::span<const double> r) {
    const double fpq = hellinger_fidelity(p, q);
    const double frq = hellinger_fidelity(r, q);
    if (1.0 - frq <= 1e-15) {
        throw CapabilityError("baseline-corrected fidelity undefined: baseline equals target");
    }
    return (fpq - frq) / (1.0 - frq);
}

struct ErrorStats {
    std::vector<double> errors;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Linear-interpolation quantile of sorted data (the "type 7" rule).
inline double quantile_sorted(std::span<const double> sorted, double level) {
    if (sorted.empty()) {
        return 0.0;
    }
    const double h = level * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Fidelities of one step's shots against the ideal node distribution, with
/// and without postselection. Baseline-corrected values are empty when the
/// baseline coincides with the ideal distribution.
struct StepMetrics {
    int step = 0;
    double fidelity_raw = 0.0;
    double fidelity_post = 0.0;
    std::optional<double> fidelity_bc_raw;
    std::optional<double> fidelity_bc_post;
    double retention = 0.0;
    std::uint64_t kept_shots = 0;
    std::uint64_t total_shots = 0;
};

inline StepMetrics evaluate_step(int step, const ShotTable &st, const DirectedEdgeIndex &idx,
                                 std::span<const double> ideal,
                                 std::span<const double> stationary) {
    const auto raw = raw_probabilities(st, idx);
    const auto post = postselected_probabilities(st, idx);
    StepMetrics m;
    m.step = step;
    m.fidelity_raw = hellinger_fidelity(raw.node, ideal);
    m.fidelity_post = hellinger_fidelity(post.node, ideal);
    if (1.0 - hellinger_fidelity(stationary, ideal) > 1e-15) {
        m.fidelity_bc_raw = baseline_corrected_fidelity(raw.node, ideal, stationary);
        m.fidelity_bc_post = baseline_corrected_fidelity(post.node, ideal, stationary);
    }
    m.retention = post.retention;
    m.kept_shots = post.kept_shots;
    m.total_shots = post.total_shots;
    return m;
}

struct ExponentialFit {
    double amplitude = 0.0; ///< A in A exp(-rate x)
    double rate = 0.0;
    double r_squared = 0.0; ///< of the fitted curve against the raw values
};

/// Least-squares line through (x, log y), scored by R^2 on y itself.
inline ExponentialFit fit_exponential_decay(std::span<const double> x, std::span<const double> y) {
    detail::require(x.size() == y.size() && x.size() >= 2, "need at least two points to fit");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        detail::require(y[i] > 0.0, "exponential fit needs positive values");
        const double ly = std::log(y[i]);
        sx += x[i];
        sy += ly;
        sxx += x[i] * x[i];
        sxy += x[i] * ly;
    }
    const double denom = n * sxx - sx * sx;
    detail::require(denom != 0.0, "exponential fit needs distinct x values");
    const double slope = (n * sxy - sx * sy) / denom;
    const double icept = (sy - slope * sx) / n;
    ExponentialFit f;
    f.amplitude = std::exp(icept);
    f.rate = -slope;
    double mean = 0.0;
    for (auto v : y) {
        mean += v;
    }
    mean /= n;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double fit = f.amplitude * std::exp(-f.rate * x[i]);
        ss_res += (y[i] - fit) * (y[i] - fit);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

/// Per-node |P_exp - P_ideal| with a five-number summary.
inline ErrorStats absolute_error_stats(std::span<const double> measured,
                                       std::span<const double> ideal) {
    detail::require(measured.size() == ideal.size(), "distributions have different supports");
    ErrorStats s;
    for (std::size_t i = 0; i < measured.size(); ++i) {
        s.errors.push_back(std::abs(measured[i] - ideal[i]));
    }
    auto sorted = s.errors;
    std::sort(sorted.begin(), sorted.end());
    if (!sorted.empty()) {
        s.min = sorted.front();
        s.max = sorted.back();
        s.q1 = quantile_sorted(sorted, 0.25);
        s.median = quantile_sorted(sorted, 0.5);
        s.q3 = quantile_sorted(sorted, 0.75);
    }
    return s;
}

} // namespace qwalk
